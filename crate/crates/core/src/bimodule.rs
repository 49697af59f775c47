//! Bimodules as modules over tensor algebras, tagged with their pair of
//! acting algebras: side restrictions, tensor products over the middle
//! algebra (as explicit coequalizers), Hom into the regular module, and
//! Morita rings with zero bimodule maps.

use crate::algebra::{opposite, tensor_algebra, Algebra, AlgebraRef, Provenance, SparseVec};
use crate::error::Error;
use crate::linalg::{quotient_by_span, Matrix, Scalar};
use crate::module::{hom_basis, Module, ModuleMap};
use std::sync::Arc;

/// A (B, A)-bimodule: a module over `B ⊗ A°`, remembering the pair. The
/// underlying module owns the action; this is a view with side bookkeeping.
#[derive(Debug, Clone)]
pub struct Bimodule {
    module: Module,
    left: AlgebraRef,
    right: AlgebraRef,
}

impl Bimodule {
    pub fn new(module: Module, left: AlgebraRef, right: AlgebraRef) -> Result<Self, Error> {
        let expected = tensor_algebra(&left, &opposite(&right))?;
        if !module.algebra().structural_eq(&expected) {
            return Err(Error::TagMismatch(
                "module is not over left ⊗ right°".into(),
            ));
        }
        Ok(Bimodule {
            module,
            left,
            right,
        })
    }

    pub fn new_unchecked(module: Module, left: AlgebraRef, right: AlgebraRef) -> Self {
        debug_assert_eq!(module.algebra().dim(), left.dim() * right.dim());
        Bimodule {
            module,
            left,
            right,
        }
    }

    /// The regular bimodule of `a`, as a module over the supplied enveloping
    /// algebra: (x ⊗ ȳ)·m = x·m·y.
    pub fn regular(a: &AlgebraRef, env: AlgebraRef) -> Self {
        let left_act: Vec<Matrix> = (0..a.dim())
            .map(|i| a.left_mult_matrix(&a.basis_vector(i)))
            .collect();
        let right_act: Vec<Matrix> = (0..a.dim())
            .map(|j| a.right_mult_matrix(&a.basis_vector(j)))
            .collect();
        Bimodule::from_side_actions(a.clone(), a.clone(), env, &left_act, &right_act)
    }

    /// Assembles the tensor-algebra action from commuting one-sided actions:
    /// action of `b_i ⊗ ā_j` is `left[i] · right[j]`.
    pub fn from_side_actions(
        left: AlgebraRef,
        right: AlgebraRef,
        tensor: AlgebraRef,
        left_act: &[Matrix],
        right_act: &[Matrix],
    ) -> Self {
        debug_assert_eq!(left_act.len(), left.dim());
        debug_assert_eq!(right_act.len(), right.dim());
        debug_assert!(left_act
            .iter()
            .all(|l| right_act.iter().all(|r| l.mul(r) == r.mul(l))));
        let mut action = Vec::with_capacity(tensor.dim());
        for i in 0..left.dim() {
            for j in 0..right.dim() {
                action.push(left_act[i].mul(&right_act[j]));
            }
        }
        Bimodule::new_unchecked(Module::new_unchecked(tensor, action), left, right)
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn into_module(self) -> Module {
        self.module
    }

    pub fn left(&self) -> &AlgebraRef {
        &self.left
    }

    pub fn right(&self) -> &AlgebraRef {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Action of `x ⊗ 1` for a left-algebra coordinate vector.
    pub fn act_left(&self, x: &[Scalar]) -> Matrix {
        let f = self.module.field();
        let one = self.right.unit();
        let mut coords = vec![f.zero(); self.module.algebra().dim()];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, oj) in one.iter().enumerate() {
                if !f.is_zero(oj) {
                    coords[i * self.right.dim() + j] = f.mul(xi, oj);
                }
            }
        }
        self.module.act(&coords)
    }

    /// Action of `1 ⊗ ȳ` for a right-algebra coordinate vector.
    pub fn act_right(&self, y: &[Scalar]) -> Matrix {
        let f = self.module.field();
        let one = self.left.unit();
        let mut coords = vec![f.zero(); self.module.algebra().dim()];
        for (i, oi) in one.iter().enumerate() {
            if f.is_zero(oi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !f.is_zero(yj) {
                    coords[i * self.right.dim() + j] = f.mul(oi, yj);
                }
            }
        }
        self.module.act(&coords)
    }

    /// Restriction to the left algebra, through `b ↦ b ⊗ 1`.
    pub fn restrict_left(&self) -> Module {
        let action: Vec<Matrix> = (0..self.left.dim())
            .map(|i| self.act_left(&self.left.basis_vector(i)))
            .collect();
        Module::new_unchecked(self.left.clone(), action)
    }

    /// Restriction to the opposite of the right algebra, through `a ↦ 1 ⊗ ā`.
    pub fn restrict_right(&self) -> Module {
        let op = Arc::new(opposite(&self.right));
        let action: Vec<Matrix> = (0..self.right.dim())
            .map(|j| self.act_right(&self.right.basis_vector(j)))
            .collect();
        Module::new_unchecked(op, action)
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Bimodule {
        Bimodule::new_unchecked(
            self.module.direct_sum(&other.module),
            self.left.clone(),
            self.right.clone(),
        )
    }

    /// Syzygy over the tensor algebra, tags preserved.
    pub fn syzygy(&self, n: usize) -> Bimodule {
        Bimodule::new_unchecked(
            crate::module::syzygy(&self.module, n),
            self.left.clone(),
            self.right.clone(),
        )
    }
}

/// A tensor product over a middle algebra, kept with its coequalizer data so
/// maps can be transported through it.
pub struct TensorProduct {
    /// Quotient of the plain tensor space by the balancing relations.
    pub module: Module,
    pub proj: Matrix,
    pub section: Matrix,
    /// Dimensions of the two factors.
    pub dims: (usize, usize),
}

fn coequalizer(
    f: crate::linalg::FieldSpec,
    dm: usize,
    dx: usize,
    relations: Vec<Matrix>,
) -> (Matrix, Matrix) {
    let total = dm * dx;
    let mut stacked: Option<Matrix> = None;
    for r in relations {
        stacked = Some(match stacked {
            None => r,
            Some(s) => s.hstack(&r),
        });
    }
    let span = match stacked {
        None => Matrix::zeros(f, total, 0),
        Some(s) => s.image_basis(),
    };
    let q = quotient_by_span(&span);
    (q.proj, q.section)
}

/// `m ⊗_A x` for a (B, A)-bimodule m and an A-module x: the quotient of
/// `m ⊗_k x` by `m·a ⊗ ξ − m ⊗ a·ξ` over a generating set of A, with the
/// left B-action descending to the quotient.
pub fn tensor_module(m: &Bimodule, x: &Module) -> Result<TensorProduct, Error> {
    if !m.right().structural_eq(x.algebra()) {
        return Err(Error::TagMismatch(
            "bimodule right tag differs from module algebra".into(),
        ));
    }
    let f = x.field();
    let (dm, dx) = (m.dim(), x.dim());
    let ix = Matrix::identity(f, dx);
    let im = Matrix::identity(f, dm);
    let rels: Vec<Matrix> = m
        .right()
        .generators()
        .iter()
        .map(|g| m.act_right(g).kron(&ix).sub(&im.kron(&x.act(g))))
        .collect();
    let (proj, section) = coequalizer(f, dm, dx, rels);
    let action: Vec<Matrix> = (0..m.left().dim())
        .map(|i| {
            let op = m.act_left(&m.left().basis_vector(i)).kron(&ix);
            proj.mul(&op).mul(&section)
        })
        .collect();
    let module = Module::new_unchecked(m.left().clone(), action);
    Ok(TensorProduct {
        module,
        proj,
        section,
        dims: (dm, dx),
    })
}

/// `x ⊗_Q y` for bimodules x over (P, Q) and y over (Q, R), returned as a
/// (P, R)-bimodule over the supplied tensor algebra `P ⊗ R°`.
pub fn tensor_bimodules(
    x: &Bimodule,
    y: &Bimodule,
    result_alg: AlgebraRef,
) -> Result<(Bimodule, TensorProduct), Error> {
    if !x.right().structural_eq(y.left()) {
        return Err(Error::TagMismatch(
            "middle algebras of the tensor factors differ".into(),
        ));
    }
    let f = x.module().field();
    let (dx, dy) = (x.dim(), y.dim());
    let ix = Matrix::identity(f, dx);
    let iy = Matrix::identity(f, dy);
    let rels: Vec<Matrix> = x
        .right()
        .generators()
        .iter()
        .map(|g| x.act_right(g).kron(&iy).sub(&ix.kron(&y.act_left(g))))
        .collect();
    let (proj, section) = coequalizer(f, dx, dy, rels);
    let mut action = Vec::with_capacity(result_alg.dim());
    for i in 0..x.left().dim() {
        let li = x.act_left(&x.left().basis_vector(i)).kron(&iy);
        for j in 0..y.right().dim() {
            let rj = ix.kron(&y.act_right(&y.right().basis_vector(j)));
            action.push(proj.mul(&li.mul(&rj)).mul(&section));
        }
    }
    let module = Module::new_unchecked(result_alg, action);
    let dims = (dx, dy);
    let tp = TensorProduct {
        module: module.clone(),
        proj,
        section,
        dims,
    };
    Ok((
        Bimodule::new_unchecked(module, x.left().clone(), y.right().clone()),
        tp,
    ))
}

/// Transport of a pair of maps through two tensor-product coequalizers:
/// the induced matrix of `f ⊗ g` from `src` to `tgt`.
pub fn induced_tensor_map(
    src: &TensorProduct,
    tgt: &TensorProduct,
    f_mat: &Matrix,
    g_mat: &Matrix,
) -> Matrix {
    tgt.proj.mul(&f_mat.kron(g_mat)).mul(&src.section)
}

/// `Hom_B(m, n)` for (B, A)- and (B, A')-bimodules: an (A, A')-bimodule via
/// (a·φ·a')(x) = φ(x·a)·a', with the basis of B-linear maps kept so the
/// evaluation and composition pairings can be expressed in coordinates.
pub struct HomBimodule {
    pub bimodule: Bimodule,
    /// Basis maps, each of shape dim n × dim m.
    pub basis: Vec<Matrix>,
}

impl HomBimodule {
    /// Coordinates of a concrete B-linear map in the chosen basis.
    pub fn coords(&self, map: &Matrix) -> Vec<Scalar> {
        if self.basis.is_empty() {
            debug_assert!(map.is_zero(), "only zero fits in an empty hom space");
            return Vec::new();
        }
        let f = self.bimodule.module().field();
        let flat: Vec<Vec<Scalar>> = self.basis.iter().map(crate::module::flatten).collect();
        let rows = self.basis[0].rows() * self.basis[0].cols();
        let span = Matrix::from_columns(f, rows, &flat);
        let col = Matrix::from_columns(f, rows, &[crate::module::flatten(map)]);
        span.solve_unique(&col).column(0)
    }
}

pub fn hom_bimodule(m: &Bimodule, n: &Bimodule, result_alg: AlgebraRef) -> HomBimodule {
    debug_assert!(m.left().structural_eq(n.left()));
    let f = m.module().field();
    let basis = hom_basis(&m.restrict_left(), &n.restrict_left());
    let r = basis.len();
    let flat: Vec<Vec<Scalar>> = basis.iter().map(crate::module::flatten).collect();
    let span = Matrix::from_columns(f, n.dim() * m.dim(), &flat);
    let coords = |mat: &Matrix| -> Vec<Scalar> {
        let col = Matrix::from_columns(f, n.dim() * m.dim(), &[crate::module::flatten(mat)]);
        span.solve_unique(&col).column(0)
    };
    // Action of a_i ⊗ ā'_j on φ: x ↦ φ(x·a_i)·a'_j.
    let mut action = Vec::with_capacity(result_alg.dim());
    for i in 0..m.right().dim() {
        let ra = m.act_right(&m.right().basis_vector(i));
        for j in 0..n.right().dim() {
            let rb = n.act_right(&n.right().basis_vector(j));
            let cols: Vec<Vec<Scalar>> = if r == 0 {
                Vec::new()
            } else {
                (0..r)
                    .map(|k| coords(&rb.mul(&basis[k]).mul(&ra)))
                    .collect()
            };
            action.push(Matrix::from_columns(f, r, &cols));
        }
    }
    let module = Module::new_unchecked(result_alg, action);
    HomBimodule {
        bimodule: Bimodule::new_unchecked(module, m.right().clone(), n.right().clone()),
        basis,
    }
}

/// `Hom_B(m, B)` for a (B, A)-bimodule m: an (A, B)-bimodule.
pub fn hom_into_regular(m: &Bimodule, result_alg: AlgebraRef) -> HomBimodule {
    let b_alg = m.left().clone();
    let env_b = Arc::new(tensor_algebra(&b_alg, &opposite(&b_alg)).expect("same field"));
    let reg = Bimodule::regular(&b_alg, env_b);
    hom_bimodule(m, &reg, result_alg)
}

/// The Morita ring [[A, N], [M, B]] with zero bimodule maps: products of M
/// against N vanish in both orders, so M ⊕ N sits inside the radical.
pub fn morita_ring(
    a: &AlgebraRef,
    b: &AlgebraRef,
    m: &Bimodule,
    n: &Bimodule,
) -> Result<Algebra, Error> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if !m.left().structural_eq(b) || !m.right().structural_eq(a) {
        return Err(Error::TagMismatch("M must be a (B, A)-bimodule".into()));
    }
    if !n.left().structural_eq(a) || !n.right().structural_eq(b) {
        return Err(Error::TagMismatch("N must be an (A, B)-bimodule".into()));
    }
    let f = a.field();
    let (da, db, dm, dn) = (a.dim(), b.dim(), m.dim(), n.dim());
    let dim = da + db + dm + dn;
    let off_b = da;
    let off_m = da + db;
    let off_n = da + db + dm;
    let mut labels = Vec::with_capacity(dim);
    labels.extend(a.labels().iter().map(|l| format!("a.{l}")));
    labels.extend(b.labels().iter().map(|l| format!("b.{l}")));
    labels.extend((0..dm).map(|i| format!("m{i}")));
    labels.extend((0..dn).map(|i| format!("n{i}")));

    let mut mult = vec![SparseVec::new(); dim * dim];
    let f_ref = &f;
    let put = |mult: &mut Vec<SparseVec>, i: usize, j: usize, v: Vec<(usize, Scalar)>| {
        let mut sv: SparseVec = v.into_iter().filter(|(_, c)| !f_ref.is_zero(c)).collect();
        sv.sort_by_key(|(k, _)| *k);
        mult[i * dim + j] = sv;
    };
    // A·A and B·B blocks.
    for i in 0..da {
        for j in 0..da {
            let sv = a.mult_entry(i, j).clone();
            put(&mut mult, i, j, sv);
        }
    }
    for i in 0..db {
        for j in 0..db {
            let sv: Vec<_> = b
                .mult_entry(i, j)
                .iter()
                .map(|(k, c)| (off_b + k, c.clone()))
                .collect();
            put(&mut mult, off_b + i, off_b + j, sv);
        }
    }
    // A acting on N from the left, B on N from the right.
    for i in 0..da {
        let act = n.act_left(&a.basis_vector(i));
        for j in 0..dn {
            let col = act.column(j);
            let sv: Vec<_> = col
                .into_iter()
                .enumerate()
                .map(|(k, c)| (off_n + k, c))
                .collect();
            put(&mut mult, i, off_n + j, sv);
        }
    }
    for i in 0..dn {
        for j in 0..db {
            let act = n.act_right(&b.basis_vector(j));
            let col = act.column(i);
            let sv: Vec<_> = col
                .into_iter()
                .enumerate()
                .map(|(k, c)| (off_n + k, c))
                .collect();
            put(&mut mult, off_n + i, off_b + j, sv);
        }
    }
    // B acting on M from the left, A on M from the right.
    for i in 0..db {
        let act = m.act_left(&b.basis_vector(i));
        for j in 0..dm {
            let col = act.column(j);
            let sv: Vec<_> = col
                .into_iter()
                .enumerate()
                .map(|(k, c)| (off_m + k, c))
                .collect();
            put(&mut mult, off_b + i, off_m + j, sv);
        }
    }
    for i in 0..dm {
        for j in 0..da {
            let act = m.act_right(&a.basis_vector(j));
            let col = act.column(i);
            let sv: Vec<_> = col
                .into_iter()
                .enumerate()
                .map(|(k, c)| (off_m + k, c))
                .collect();
            put(&mut mult, off_m + i, j, sv);
        }
    }
    // All other products (including M·N and N·M) are zero.

    let embed = |v: &[Scalar], off: usize| {
        let mut out = vec![f.zero(); dim];
        for (k, c) in v.iter().enumerate() {
            out[off + k] = c.clone();
        }
        out
    };
    let mut unit = embed(a.unit(), 0);
    for (k, c) in b.unit().iter().enumerate() {
        unit[off_b + k] = c.clone();
    }
    let mut idempotents: Vec<Vec<Scalar>> = a.idempotents().iter().map(|e| embed(e, 0)).collect();
    idempotents.extend(b.idempotents().iter().map(|e| embed(e, off_b)));
    let mut radical: Vec<Vec<Scalar>> = a.radical_basis().iter().map(|r| embed(r, 0)).collect();
    radical.extend(b.radical_basis().iter().map(|r| embed(r, off_b)));
    for i in 0..dm {
        let mut v = vec![f.zero(); dim];
        v[off_m + i] = f.one();
        radical.push(v);
    }
    for i in 0..dn {
        let mut v = vec![f.zero(); dim];
        v[off_n + i] = f.one();
        radical.push(v);
    }
    let mut generators: Vec<Vec<Scalar>> = a.generators().iter().map(|g| embed(g, 0)).collect();
    generators.extend(b.generators().iter().map(|g| embed(g, off_b)));
    for i in 0..dm + dn {
        let mut v = vec![f.zero(); dim];
        v[off_m + i] = f.one();
        generators.push(v);
    }
    Ok(Algebra::from_parts(
        f,
        labels,
        mult,
        unit,
        idempotents,
        radical,
        generators,
        Provenance::Morita,
    ))
}

/// The zero bimodule over the given pair.
pub fn zero_bimodule(left: &AlgebraRef, right: &AlgebraRef) -> Result<Bimodule, Error> {
    let t = Arc::new(tensor_algebra(left, &opposite(right))?);
    Ok(Bimodule::new_unchecked(
        Module::zero(t),
        left.clone(),
        right.clone(),
    ))
}

/// Canonical map `A ⊗_A x → x` on the quotient coordinates; an isomorphism
/// whenever the bimodule is the regular one.
pub fn unit_iso_candidate(tp: &TensorProduct, x: &Module) -> ModuleMap {
    let f = x.field();
    let (da, dx) = tp.dims;
    let mut mu = Matrix::zeros(f, x.dim(), da * dx);
    for i in 0..da {
        // basis_vector(i) of the algebra acting on basis e_j of x.
        let act = x.act(&x.algebra().basis_vector(i));
        for j in 0..dx {
            for r in 0..x.dim() {
                mu.set(r, i * dx + j, act.get(r, j).clone());
            }
        }
    }
    let matrix = mu.mul(&tp.section);
    ModuleMap::new_unchecked(tp.module.clone(), x.clone(), matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enveloping, presets};
    use crate::module::{find_iso, is_projective, simples, IsoResult, DEFAULT_ISO_TRIALS};
    use crate::FieldSpec;

    fn a2() -> AlgebraRef {
        Arc::new(presets::a2(FieldSpec::default()))
    }

    fn env(a: &AlgebraRef) -> AlgebraRef {
        Arc::new(enveloping(a))
    }

    #[test]
    fn regular_bimodule_restrictions_are_regular() {
        let a = a2();
        let e = env(&a);
        let bim = Bimodule::regular(&a, e);
        bim.module().validate().unwrap();
        let l = bim.restrict_left();
        assert!(l.equal_action(&Module::regular(a.clone())));
        let r = bim.restrict_right();
        assert_eq!(r.dim(), a.dim());
        assert!(is_projective(&r));
    }

    #[test]
    fn regular_enveloping_restricts_to_free_of_rank_dim() {
        let a = a2();
        let e = env(&a);
        let reg_env = Module::regular(e.clone());
        let bim = Bimodule::new_unchecked(reg_env, a.clone(), a.clone());
        let l = bim.restrict_left();
        assert_eq!(l.dim(), a.dim() * a.dim());
        assert!(is_projective(&l));
        let free2 = Module::regular(a.clone()).direct_sum(&Module::regular(a.clone()));
        assert!(matches!(
            find_iso(&l, &free2, 0, DEFAULT_ISO_TRIALS),
            IsoResult::Found(_)
        ));
    }

    #[test]
    fn bimodule_syzygy_of_a2_is_two_dimensional_and_split_on_each_side() {
        let a = a2();
        let e = env(&a);
        let bim = Bimodule::regular(&a, e);
        let sy = bim.syzygy(1);
        assert_eq!(sy.dim(), 2);
        assert!(is_projective(&sy.restrict_left()));
        assert!(is_projective(&sy.restrict_right()));
    }

    #[test]
    fn tensor_with_regular_bimodule_is_identity() {
        let a = a2();
        let e = env(&a);
        let bim = Bimodule::regular(&a, e);
        for x in [Module::regular(a.clone()), simples(&a).remove(0)] {
            let tp = tensor_module(&bim, &x).unwrap();
            assert_eq!(tp.module.dim(), x.dim());
            let can = unit_iso_candidate(&tp, &x);
            assert!(can.matrix.is_invertible());
        }
    }

    #[test]
    fn tensor_of_syzygy_bimodule_with_simple_has_dim_one() {
        let a = a2();
        let e = env(&a);
        let sy = Bimodule::regular(&a, e).syzygy(1);
        let k = simples(&a).remove(0);
        let tp = tensor_module(&sy, &k).unwrap();
        assert_eq!(tp.module.dim(), 1);
    }

    #[test]
    fn tensor_bimodules_regular_times_regular() {
        let a = a2();
        let e = env(&a);
        let bim = Bimodule::regular(&a, e.clone());
        let (prod, _) = tensor_bimodules(&bim, &bim, e.clone()).unwrap();
        assert_eq!(prod.dim(), a.dim());
        assert!(matches!(
            find_iso(
                prod.module(),
                Bimodule::regular(&a, e).module(),
                0,
                DEFAULT_ISO_TRIALS
            ),
            IsoResult::Found(_)
        ));
    }

    #[test]
    fn hom_into_regular_of_regular_is_regular() {
        let a = a2();
        let e = env(&a);
        let bim = Bimodule::regular(&a, e.clone());
        let h = hom_into_regular(&bim, e.clone());
        assert_eq!(h.bimodule.dim(), a.dim());
        assert!(matches!(
            find_iso(
                h.bimodule.module(),
                Bimodule::regular(&a, e).module(),
                0,
                DEFAULT_ISO_TRIALS
            ),
            IsoResult::Found(_)
        ));
    }

    #[test]
    fn hom_into_regular_additivity_on_free_bimodules() {
        let a = a2();
        let e = env(&a);
        // Free bimodule of rank 1 over the tensor algebra.
        let free = Bimodule::new_unchecked(Module::regular(e.clone()), a.clone(), a.clone());
        let h = hom_into_regular(&free, e.clone());
        // Hom_B(B ⊗ A°, B) has dimension dim(A)·dim(B).
        assert_eq!(h.bimodule.dim(), a.dim() * a.dim());
        assert!(is_projective(&h.bimodule.restrict_right()));
    }

    #[test]
    fn tensor_against_regular_module_recovers_left_restriction() {
        let a = a2();
        let e = env(&a);
        let sy = Bimodule::regular(&a, e).syzygy(1);
        let tp = tensor_module(&sy, &Module::regular(a.clone())).unwrap();
        assert!(matches!(
            find_iso(&tp.module, &sy.restrict_left(), 0, DEFAULT_ISO_TRIALS),
            IsoResult::Found(_)
        ));
    }

    #[test]
    fn unit_isomorphism_is_natural_in_maps() {
        // A ⊗_A (-) ≅ id naturally: for f: x -> y the square through the
        // canonical maps commutes.
        let a = a2();
        let e = env(&a);
        let bim = Bimodule::regular(&a, e);
        let x = simples(&a).remove(0);
        let y = Module::regular(a.clone());
        let f = crate::module::hom_space(&x, &y).unwrap().remove(0);
        let tx = tensor_module(&bim, &x).unwrap();
        let ty = tensor_module(&bim, &y).unwrap();
        let ux = unit_iso_candidate(&tx, &x);
        let uy = unit_iso_candidate(&ty, &y);
        let idm = Matrix::identity(x.field(), bim.dim());
        let tf = induced_tensor_map(&tx, &ty, &idm, &f.matrix);
        assert_eq!(uy.matrix.mul(&tf), f.matrix.mul(&ux.matrix));
    }

    #[test]
    fn double_dual_of_projective_bimodule_over_self_injective() {
        // Over a self-injective pair, applying Hom into the regular module
        // twice returns an isomorphic bimodule.
        let a = a2();
        let e = env(&a);
        let free = Bimodule::new_unchecked(Module::regular(e.clone()), a.clone(), a.clone());
        let once = hom_into_regular(&free, e.clone());
        let twice = hom_into_regular(&once.bimodule, e);
        assert_eq!(twice.bimodule.dim(), free.dim());
        assert!(matches!(
            find_iso(
                twice.bimodule.module(),
                free.module(),
                0,
                DEFAULT_ISO_TRIALS
            ),
            IsoResult::Found(_)
        ));
    }

    #[test]
    fn morita_ring_with_zero_bimodules_is_product() {
        let a = a2();
        let k = Arc::new(Algebra::base_field(FieldSpec::default()));
        let m = zero_bimodule(&k, &a).unwrap();
        let n = zero_bimodule(&a, &k).unwrap();
        let lam = morita_ring(&a, &k, &m, &n).unwrap();
        assert_eq!(lam.dim(), 3);
        assert_eq!(lam.idempotents().len(), 2);
        lam.validate().unwrap();
    }

    #[test]
    fn morita_ring_of_fields_with_one_dim_corner_is_t2_like() {
        let f = FieldSpec::default();
        let k1 = Arc::new(Algebra::base_field(f));
        let k2 = Arc::new(Algebra::base_field(f));
        // M = k as a (k, k)-bimodule, N = 0.
        let t = Arc::new(tensor_algebra(&k2, &opposite(&k1)).unwrap());
        let m = Bimodule::new_unchecked(Module::regular(t), k2.clone(), k1.clone());
        let n = zero_bimodule(&k1, &k2).unwrap();
        let lam = morita_ring(&k1, &k2, &m, &n).unwrap();
        assert_eq!(lam.dim(), 3);
        assert_eq!(lam.idempotents().len(), 2);
        assert_eq!(lam.radical_basis().len(), 1);
        lam.validate().unwrap();
    }

    #[test]
    fn corner_of_morita_ring_recovers_factor() {
        let a = a2();
        let k = Arc::new(Algebra::base_field(FieldSpec::default()));
        let m = zero_bimodule(&k, &a).unwrap();
        let n = zero_bimodule(&a, &k).unwrap();
        let lam = morita_ring(&a, &k, &m, &n).unwrap();
        let f = FieldSpec::default();
        // e = unit of the A-block.
        let mut e = vec![f.zero(); lam.dim()];
        for (i, c) in a.unit().iter().enumerate() {
            e[i] = c.clone();
        }
        let c = crate::algebra::corner(&lam, &e).unwrap();
        assert!(c.algebra.structural_eq(&a));
    }
}
