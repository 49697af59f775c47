//! Finite-dimensional elementary algebras presented by exact structure
//! constants: quiver quotients, opposites, tensor products, enveloping
//! algebras, corners, and raw structure-constant input.
//!
//! Every algebra here is elementary (A/rad is a product of copies of the base
//! field), which keeps the semisimple quotient separable and makes the
//! radical formula for tensor products valid. Construction validates that.

use std::sync::Arc;

use crate::error::Error;
use crate::linalg::{quotient_by_span, FieldSpec, Matrix, Scalar};

pub type AlgebraRef = Arc<Algebra>;

/// Sparse coordinate vector, sorted by index.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Quiver,
    Opposite,
    Tensor,
    Corner,
    Morita,
    Raw,
}

/// Associative unital algebra given by a basis and exact structure constants,
/// together with a complete set of primitive orthogonal idempotents and a
/// basis of the Jacobson radical.
#[derive(Debug, Clone)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    labels: Vec<String>,
    /// `mult[i*dim + j]` holds the coordinates of `b_i · b_j`.
    mult: Vec<SparseVec>,
    unit: Vec<Scalar>,
    idempotents: Vec<Vec<Scalar>>,
    radical: Vec<Vec<Scalar>>,
    /// Elements generating the algebra as a unital algebra. Intertwining
    /// with these suffices to intertwine with everything.
    generators: Vec<Vec<Scalar>>,
    provenance: Provenance,
}

impl Algebra {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn radical_basis(&self) -> &[Vec<Scalar>] {
        &self.radical
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.generators
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn mult_entry(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    /// Product of two coordinate vectors.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, m) in self.mult_entry(i, j) {
                    out[*k] = f.add(&out[*k], &f.mul(&c, m));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x` on the algebra itself.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|j| self.product(x, &self.basis_vector(j)))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Matrix of right multiplication by `x` on the algebra itself.
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|j| self.product(&self.basis_vector(j), x))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols)
    }

    /// Trace of left multiplication by basis element `i` on the algebra.
    fn regular_trace(&self) -> Vec<Scalar> {
        let f = self.field;
        (0..self.dim)
            .map(|i| {
                let mut t = f.zero();
                for j in 0..self.dim {
                    for (k, c) in self.mult_entry(i, j) {
                        if *k == j {
                            t = f.add(&t, c);
                        }
                    }
                }
                t
            })
            .collect()
    }

    /// Same underlying multiplicative structure (labels ignored).
    pub fn structural_eq(&self, other: &Algebra) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && self.mult == other.mult
    }

    /// Assembles an algebra from fully computed parts. Used by builders that
    /// know the structure they produce (Morita rings); invariants are the
    /// caller's responsibility and still checkable via `validate`.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        field: FieldSpec,
        labels: Vec<String>,
        mult: Vec<SparseVec>,
        unit: Vec<Scalar>,
        idempotents: Vec<Vec<Scalar>>,
        radical: Vec<Vec<Scalar>>,
        generators: Vec<Vec<Scalar>>,
        provenance: Provenance,
    ) -> Algebra {
        let dim = labels.len();
        Algebra {
            field,
            dim,
            labels,
            mult,
            unit,
            idempotents,
            radical,
            generators,
            provenance,
        }
    }

    /// The base field as a one-dimensional algebra.
    pub fn base_field(field: FieldSpec) -> Algebra {
        Algebra {
            field,
            dim: 1,
            labels: vec!["1".into()],
            mult: vec![vec![(0, field.one())]],
            unit: vec![field.one()],
            idempotents: vec![vec![field.one()]],
            radical: vec![],
            generators: vec![vec![field.one()]],
            provenance: Provenance::Raw,
        }
    }

    /// Full invariant check: associativity, unit laws, idempotent laws,
    /// radical is a nilpotent ideal, and the quotient is split semisimple
    /// commutative of dimension = number of idempotents.
    pub fn validate(&self) -> Result<(), Error> {
        let f = self.field;
        let eq = |x: &[Scalar], y: &[Scalar]| x == y;
        for j in 0..self.dim {
            let e = self.basis_vector(j);
            if !eq(&self.product(&self.unit, &e), &e) || !eq(&self.product(&e, &self.unit), &e) {
                return Err(Error::InvalidAction(format!(
                    "unit law fails on basis element {}",
                    self.labels[j]
                )));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.product(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..self.dim {
                    let lhs = self.product(&ij, &self.basis_vector(k));
                    let jk = self.product(&self.basis_vector(j), &self.basis_vector(k));
                    let rhs = self.product(&self.basis_vector(i), &jk);
                    if !eq(&lhs, &rhs) {
                        return Err(Error::InvalidAction(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        // Idempotents: orthogonal, idempotent, summing to 1.
        let mut sum = vec![f.zero(); self.dim];
        for (v, e) in self.idempotents.iter().enumerate() {
            for (w, e2) in self.idempotents.iter().enumerate() {
                let p = self.product(e, e2);
                let expect = if v == w {
                    e.clone()
                } else {
                    vec![f.zero(); self.dim]
                };
                if p != expect {
                    return Err(Error::InvalidAction(format!(
                        "idempotents {v} and {w} are not orthogonal idempotents"
                    )));
                }
            }
            for (k, s) in sum.iter_mut().enumerate() {
                *s = f.add(s, &e[k]);
            }
        }
        if sum != self.unit {
            return Err(Error::InvalidAction(
                "idempotents do not sum to the unit".into(),
            ));
        }
        self.validate_radical()?;
        Ok(())
    }

    fn validate_radical(&self) -> Result<(), Error> {
        let f = self.field;
        if self.radical.is_empty() {
            if self.idempotents.len() != self.dim {
                return Err(Error::NotElementary(
                    "zero radical but dim(A) exceeds the idempotent count".into(),
                ));
            }
            return Ok(());
        }
        let rad = Matrix::from_columns(f, self.dim, &self.radical);
        if rad.rank() != self.radical.len() {
            return Err(Error::InvalidAction("radical basis is dependent".into()));
        }
        // Two-sided ideal.
        for r in &self.radical {
            for j in 0..self.dim {
                let b = self.basis_vector(j);
                for prod in [self.product(&b, r), self.product(r, &b)] {
                    let col = Matrix::from_columns(f, self.dim, &[prod]);
                    if rad.solve(&col).expect("shapes agree").is_none() {
                        return Err(Error::InvalidAction("radical is not an ideal".into()));
                    }
                }
            }
        }
        // Nilpotent.
        let mut power: Vec<Vec<Scalar>> = self.radical.clone();
        for _ in 0..self.dim {
            if power.is_empty() {
                break;
            }
            let mut next_cols = Vec::new();
            for x in &power {
                for r in &self.radical {
                    next_cols.push(self.product(x, r));
                }
            }
            let m = Matrix::from_columns(f, self.dim, &next_cols);
            let basis = m.image_basis();
            power = (0..basis.cols()).map(|j| basis.column(j)).collect();
        }
        if !power.is_empty() {
            return Err(Error::InvalidAction("radical is not nilpotent".into()));
        }
        // Elementary: dim(A/rad) = #idempotents and the quotient is split.
        if self.dim - self.radical.len() != self.idempotents.len() {
            return Err(Error::NotElementary(format!(
                "dim(A/rad) = {} but there are {} idempotents",
                self.dim - self.radical.len(),
                self.idempotents.len()
            )));
        }
        let q = quotient_by_span(&rad);
        let imgs: Vec<Vec<Scalar>> = self.idempotents.iter().map(|e| q.proj.apply(e)).collect();
        let img_mat = Matrix::from_columns(f, self.dim - self.radical.len(), &imgs);
        if img_mat.rank() != self.idempotents.len() {
            return Err(Error::NotElementary(
                "idempotent images do not span the semisimple quotient".into(),
            ));
        }
        Ok(())
    }
}

fn outer(f: FieldSpec, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for xi in x {
        for yj in y {
            out.push(f.mul(xi, yj));
        }
    }
    out
}

fn sparse_from_dense(f: FieldSpec, v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// `opposite(a)`: same space, multiplication reversed. An involution.
pub fn opposite(a: &Algebra) -> Algebra {
    let mut mult = Vec::with_capacity(a.dim * a.dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            mult.push(a.mult_entry(j, i).clone());
        }
    }
    Algebra {
        field: a.field,
        dim: a.dim,
        labels: a.labels.clone(),
        mult,
        unit: a.unit.clone(),
        idempotents: a.idempotents.clone(),
        radical: a.radical.clone(),
        generators: a.generators.clone(),
        provenance: Provenance::Opposite,
    }
}

/// Tensor product algebra `a ⊗_k b` with basis pairs ordered a-major.
/// Radical is `rad(a)⊗b + a⊗rad(b)`, valid since both factors are elementary.
pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Result<Algebra, Error> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let f = a.field;
    let (da, db) = (a.dim, b.dim);
    let dim = da * db;
    let mut labels = Vec::with_capacity(dim);
    for la in &a.labels {
        for lb in &b.labels {
            labels.push(format!("{la}@{lb}"));
        }
    }
    let mut mult = vec![SparseVec::new(); dim * dim];
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    let ma = a.mult_entry(i, k);
                    let mb = b.mult_entry(j, l);
                    let mut sv = SparseVec::new();
                    for (m, c1) in ma {
                        for (n, c2) in mb {
                            sv.push((m * db + n, f.mul(c1, c2)));
                        }
                    }
                    sv.sort_by_key(|(k, _)| *k);
                    mult[(i * db + j) * dim + (k * db + l)] = sv;
                }
            }
        }
    }
    let unit = outer(f, &a.unit, &b.unit);
    let mut idempotents = Vec::new();
    for ea in &a.idempotents {
        for eb in &b.idempotents {
            idempotents.push(outer(f, ea, eb));
        }
    }
    // Spanning set for the radical, pruned to a basis.
    let mut rad_cols = Vec::new();
    for r in &a.radical {
        for j in 0..db {
            rad_cols.push(outer(f, r, &b.basis_vector(j)));
        }
    }
    for i in 0..da {
        for r in &b.radical {
            rad_cols.push(outer(f, &a.basis_vector(i), r));
        }
    }
    let rad_mat = Matrix::from_columns(f, dim, &rad_cols).image_basis();
    let radical: Vec<Vec<Scalar>> = (0..rad_mat.cols()).map(|j| rad_mat.column(j)).collect();
    let mut generators = Vec::new();
    for g in &a.generators {
        generators.push(outer(f, g, &b.unit));
    }
    for h in &b.generators {
        generators.push(outer(f, &a.unit, h));
    }
    Ok(Algebra {
        field: f,
        dim,
        labels,
        mult,
        unit,
        idempotents,
        radical,
        generators,
        provenance: Provenance::Tensor,
    })
}

/// Enveloping algebra `a ⊗_k a°`; its left modules are a-a-bimodules.
pub fn enveloping(a: &Algebra) -> Algebra {
    tensor_algebra(a, &opposite(a)).expect("same field")
}

/// Data of a corner `eAe` inside its parent algebra.
pub struct Corner {
    pub algebra: Algebra,
    /// Columns embed corner basis vectors into parent coordinates.
    pub embedding: Matrix,
}

/// Corner algebra `eAe` for an idempotent `e`, with the embedding recorded.
pub fn corner(a: &Algebra, e: &[Scalar]) -> Result<Corner, Error> {
    let f = a.field;
    if a.product(e, e) != e {
        return Err(Error::NotIdempotent);
    }
    let cols: Vec<Vec<Scalar>> = (0..a.dim)
        .map(|j| {
            let ebe = a.product(&a.product(e, &a.basis_vector(j)), e);
            ebe
        })
        .collect();
    let all = Matrix::from_columns(f, a.dim, &cols);
    let pivots = all.pivot_columns();
    let embedding = all.select_columns(&pivots);
    let dim = embedding.cols();
    let labels: Vec<String> = pivots
        .iter()
        .map(|&j| format!("e({})e", a.labels[j]))
        .collect();
    let coords_in_corner = |v: &[Scalar]| -> Result<Vec<Scalar>, Error> {
        let col = Matrix::from_columns(f, a.dim, &[v.to_vec()]);
        let (x, _) = embedding
            .solve(&col)
            .expect("shapes agree")
            .ok_or_else(|| Error::InvalidAction("element not inside the corner".into()))?;
        Ok(x.column(0))
    };
    let mut mult = vec![SparseVec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let p = a.product(&embedding.column(i), &embedding.column(j));
            mult[i * dim + j] = sparse_from_dense(f, &coords_in_corner(&p)?);
        }
    }
    let unit = coords_in_corner(e)?;
    // Radical of eAe is e·rad(A)·e.
    let rad_cols: Vec<Vec<Scalar>> = a
        .radical
        .iter()
        .map(|r| a.product(&a.product(e, r), e))
        .collect();
    let rad_parent = Matrix::from_columns(f, a.dim, &rad_cols).image_basis();
    let mut radical = Vec::new();
    for j in 0..rad_parent.cols() {
        radical.push(coords_in_corner(&rad_parent.column(j))?);
    }
    // Idempotents: if e is a sum of a subset of the parent's primitive
    // idempotents, that subset descends; otherwise infer from scratch.
    let mut subset = Vec::new();
    let mut sum = vec![f.zero(); a.dim];
    for ev in &a.idempotents {
        if &a.product(e, ev) == ev && &a.product(ev, e) == ev {
            subset.push(ev.clone());
            for (k, s) in sum.iter_mut().enumerate() {
                *s = f.add(s, &ev[k]);
            }
        }
    }
    let mut algebra = Algebra {
        field: f,
        dim,
        labels,
        mult,
        unit,
        idempotents: vec![],
        radical,
        generators: (0..dim)
            .map(|i| {
                let mut v = vec![f.zero(); dim];
                v[i] = f.one();
                v
            })
            .collect(),
        provenance: Provenance::Corner,
    };
    if sum == *e {
        algebra.idempotents = subset
            .iter()
            .map(|ev| coords_in_corner(ev))
            .collect::<Result<_, _>>()?;
    } else {
        algebra.idempotents = infer_primitive_idempotents(&algebra)?;
    }
    Ok(Corner { algebra, embedding })
}

/// Raw structure-constant input. Radical defaults to the kernel of the trace
/// form of the regular representation (valid for char 0 or p > dim, guarded);
/// primitive idempotents are inferred by splitting the semisimple quotient
/// and lifting along the nilpotent radical.
pub fn from_structure_constants(
    field: FieldSpec,
    labels: Vec<String>,
    mult_dense: Vec<Vec<Vec<Scalar>>>,
    unit: Option<Vec<Scalar>>,
    idempotents: Option<Vec<Vec<Scalar>>>,
    radical: Option<Vec<Vec<Scalar>>>,
) -> Result<Algebra, Error> {
    let dim = labels.len();
    let mut mult = vec![SparseVec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            mult[i * dim + j] = sparse_from_dense(field, &mult_dense[i][j]);
        }
    }
    let mut alg = Algebra {
        field,
        dim,
        labels,
        mult,
        unit: vec![field.zero(); dim],
        idempotents: vec![],
        radical: vec![],
        generators: (0..dim)
            .map(|i| {
                let mut v = vec![field.zero(); dim];
                v[i] = field.one();
                v
            })
            .collect(),
        provenance: Provenance::Raw,
    };
    alg.unit = match unit {
        Some(u) => u,
        None => solve_for_unit(&alg)?,
    };
    alg.radical = match radical {
        Some(r) => r,
        None => trace_form_radical(&alg)?,
    };
    alg.idempotents = match idempotents {
        Some(e) => e,
        None => infer_primitive_idempotents(&alg)?,
    };
    alg.validate()?;
    Ok(alg)
}

fn solve_for_unit(a: &Algebra) -> Result<Vec<Scalar>, Error> {
    let f = a.field;
    // u with u·b_j = b_j for all j; right unit law follows from validation.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..a.dim {
        for k in 0..a.dim {
            let mut r = Vec::with_capacity(a.dim);
            for i in 0..a.dim {
                let v = a
                    .mult_entry(i, j)
                    .iter()
                    .find(|(kk, _)| *kk == k)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(|| f.zero());
                r.push(v);
            }
            rows.push(r);
            rhs.push(if j == k { f.one() } else { f.zero() });
        }
    }
    let m = Matrix::from_entries(f, rows.len(), a.dim, rows.into_iter().flatten().collect());
    let b = Matrix::from_entries(f, rhs.len(), 1, rhs);
    let (x, _) = m
        .solve(&b)
        .expect("shapes agree")
        .ok_or_else(|| Error::InvalidAction("algebra has no unit".into()))?;
    Ok(x.column(0))
}

/// Kernel of the trace form of the regular representation. Equals the
/// radical when char = 0 or char > dim.
pub fn trace_form_radical(a: &Algebra) -> Result<Vec<Vec<Scalar>>, Error> {
    let f = a.field;
    if let FieldSpec::Prime(p) = f {
        if (p as usize) <= a.dim {
            return Err(Error::RadicalNeedsLargerPrime {
                needed: a.dim,
                prime: p,
            });
        }
    }
    let tr = a.regular_trace();
    let mut g = Matrix::zeros(f, a.dim, a.dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            let mut t = f.zero();
            for (k, c) in a.mult_entry(i, j) {
                t = f.add(&t, &f.mul(c, &tr[*k]));
            }
            g.set(i, j, t);
        }
    }
    // x with tr(x·b_j) = 0 for all j, i.e. Gᵀ·x = 0.
    let k = g.transpose().kernel_basis();
    Ok((0..k.cols()).map(|j| k.column(j)).collect())
}

/// Roots in the field of a monic polynomial with the given coefficients
/// (constant first). Prime mode brute-forces residues; this is only used on
/// desk-scale moduli.
fn field_roots(f: FieldSpec, coeffs: &[Scalar]) -> Result<Vec<Scalar>, Error> {
    let eval = |x: &Scalar| {
        let mut acc = f.zero();
        for c in coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    };
    match f {
        FieldSpec::Prime(p) => {
            if p > 1 << 21 {
                return Err(Error::NotElementary(
                    "idempotent inference needs a prime below 2^21; supply IDEMPOTENTS explicitly"
                        .into(),
                ));
            }
            let mut roots = Vec::new();
            for v in 0..p {
                let x = Scalar::Prime(v);
                if f.is_zero(&eval(&x)) {
                    roots.push(x);
                }
            }
            Ok(roots)
        }
        FieldSpec::Rational => {
            // Eigenvalues at desk scale are small integers; scan a window.
            let mut roots = Vec::new();
            for v in -4096i64..=4096 {
                let x = f.from_i64(v);
                if f.is_zero(&eval(&x)) {
                    roots.push(x);
                }
            }
            Ok(roots)
        }
    }
}

/// Primitive orthogonal idempotents of an elementary algebra whose radical
/// is already known: split the commutative semisimple quotient into
/// one-dimensional eigenspaces, then lift along the nilpotent radical.
pub fn infer_primitive_idempotents(a: &Algebra) -> Result<Vec<Vec<Scalar>>, Error> {
    let f = a.field;
    let rad = Matrix::from_columns(f, a.dim, &a.radical);
    let q = quotient_by_span(&rad);
    let m = a.dim - a.radical.len();
    // Multiplication in the quotient.
    let qprod = |x: &[Scalar], y: &[Scalar]| {
        q.proj
            .apply(&a.product(&q.section.apply(x), &q.section.apply(y)))
    };
    let qunit = q.proj.apply(&a.unit);
    // Commutativity of the quotient is part of being elementary.
    for i in 0..m {
        for j in 0..m {
            let ei: Vec<Scalar> = (0..m)
                .map(|k| if k == i { f.one() } else { f.zero() })
                .collect();
            let ej: Vec<Scalar> = (0..m)
                .map(|k| if k == j { f.one() } else { f.zero() })
                .collect();
            if qprod(&ei, &ej) != qprod(&ej, &ei) {
                return Err(Error::NotElementary(
                    "semisimple quotient is not commutative".into(),
                ));
            }
        }
    }
    // Split k^m: refine subspaces by eigenspaces of left multiplications.
    let mut blocks: Vec<Matrix> = vec![Matrix::identity(f, m)];
    for g in 0..m {
        let gv: Vec<Scalar> = (0..m)
            .map(|k| if k == g { f.one() } else { f.zero() })
            .collect();
        let lg = {
            let cols: Vec<Vec<Scalar>> = (0..m)
                .map(|j| {
                    let ej: Vec<Scalar> = (0..m)
                        .map(|k| if k == j { f.one() } else { f.zero() })
                        .collect();
                    qprod(&gv, &ej)
                })
                .collect();
            Matrix::from_columns(f, m, &cols)
        };
        let mut next = Vec::new();
        for w in blocks {
            if w.cols() <= 1 {
                next.push(w);
                continue;
            }
            // Restriction of lg to the block, in block coordinates.
            let lw = w.solve(&lg.mul(&w)).expect("shapes agree");
            let Some((lw, _)) = lw else {
                return Err(Error::NotElementary(
                    "quotient multiplication does not stabilize a block".into(),
                ));
            };
            // Minimal polynomial by Krylov on the identity coordinates is
            // overkill; the characteristic polynomial splits since the
            // algebra is split. Use eigenvalues of lw found by root scan of
            // its minimal polynomial computed from powers.
            let d = lw.rows();
            let mut pows = vec![Matrix::identity(f, d)];
            for _ in 0..d {
                let last = pows.last().unwrap().mul(&lw);
                pows.push(last);
            }
            // Find the first linear dependency among vec(pows).
            let vecs: Vec<Vec<Scalar>> = pows
                .iter()
                .map(|p| {
                    let mut v = Vec::with_capacity(d * d);
                    for i in 0..d {
                        for j in 0..d {
                            v.push(p.get(i, j).clone());
                        }
                    }
                    v
                })
                .collect();
            let mut deg = 1;
            let mut coeffs = Vec::new();
            while deg <= d {
                let m0 = Matrix::from_columns(f, d * d, &vecs[..deg].to_vec());
                let b = Matrix::from_columns(f, d * d, &[vecs[deg].clone()]);
                if let Some((x, _)) = m0.solve(&b).expect("shapes agree") {
                    // lw^deg = sum c_k lw^k, so minpoly = t^deg - sum c_k t^k.
                    coeffs = (0..deg).map(|k| f.neg(x.get(k, 0))).collect();
                    coeffs.push(f.one());
                    break;
                }
                deg += 1;
            }
            if coeffs.is_empty() {
                return Err(Error::NotElementary("minimal polynomial not found".into()));
            }
            let roots = field_roots(f, &coeffs)?;
            if roots.len() <= 1 {
                next.push(w);
                continue;
            }
            for r in &roots {
                let shifted = lw.sub(&Matrix::identity(f, d).scale(r));
                let ker = shifted.kernel_basis();
                if ker.cols() > 0 {
                    next.push(w.mul(&ker));
                }
            }
        }
        blocks = next;
    }
    if blocks.len() != m || blocks.iter().any(|b| b.cols() != 1) {
        return Err(Error::NotElementary(
            "semisimple quotient did not split into one-dimensional blocks".into(),
        ));
    }
    // Idempotent of each block: the unit's component. Solve sum of block
    // vectors scaled to reproduce the unit.
    let all = blocks
        .iter()
        .fold(None::<Matrix>, |acc, b| match acc {
            None => Some(b.clone()),
            Some(a) => Some(a.hstack(b)),
        })
        .unwrap();
    let unit_col = Matrix::from_columns(f, m, &[qunit.clone()]);
    let (x, _) = all
        .solve(&unit_col)
        .expect("shapes agree")
        .ok_or_else(|| Error::NotElementary("unit not in block span".into()))?;
    let mut quotient_idems: Vec<Vec<Scalar>> = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        let mut v = vec![f.zero(); m];
        for i in 0..m {
            v[i] = f.mul(b.get(i, 0), x.get(bi, 0));
        }
        quotient_idems.push(v);
    }
    // Lift along the radical: Newton iteration x <- 3x^2 - 2x^3, performed
    // inside fAf for f = 1 - (already lifted) to keep orthogonality.
    let mut lifted: Vec<Vec<Scalar>> = Vec::new();
    for qi in &quotient_idems {
        let mut complement = a.unit.clone();
        for l in &lifted {
            for k in 0..a.dim {
                complement[k] = f.sub(&complement[k], &l[k]);
            }
        }
        let mut x = a.product(&a.product(&complement, &q.section.apply(qi)), &complement);
        let mut ok = false;
        for _ in 0..64 {
            let x2 = a.product(&x, &x);
            if x2 == x {
                ok = true;
                break;
            }
            let x3 = a.product(&x2, &x);
            let mut next = vec![f.zero(); a.dim];
            let three = f.from_i64(3);
            let two = f.from_i64(2);
            for k in 0..a.dim {
                next[k] = f.sub(&f.mul(&three, &x2[k]), &f.mul(&two, &x3[k]));
            }
            x = next;
        }
        if !ok {
            return Err(Error::NotElementary("idempotent lifting diverged".into()));
        }
        lifted.push(x);
    }
    Ok(lifted)
}

/// Quiver presentation: vertices, labelled arrows, and admissible relations
/// (linear combinations of parallel paths of length at least two, written in
/// travel order).
#[derive(Debug, Clone)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
    pub nilpotency_bound: usize,
}

#[derive(Debug, Clone)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A linear combination of parallel paths; each path is a sequence of arrow
/// indices in travel order, coefficients as integer fractions.
#[derive(Debug, Clone)]
pub struct Relation {
    pub terms: Vec<(i64, i64, Vec<usize>)>,
}

pub const DEFAULT_NILPOTENCY_BOUND: usize = 30;

/// Guards the path enumeration against explosion on pathological input.
const MAX_PATHS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Path {
    source: usize,
    /// Arrow indices in travel order.
    arrows: Vec<usize>,
    target: usize,
}

impl QuiverPresentation {
    pub fn validate(&self) -> Result<(), Error> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InconsistentRelations(format!(
                    "duplicate vertex name {v}"
                )));
            }
        }
        for a in &self.arrows {
            if !seen.insert(a.label.as_str()) {
                return Err(Error::InconsistentRelations(format!(
                    "duplicate label {}",
                    a.label
                )));
            }
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                return Err(Error::InconsistentRelations(format!(
                    "arrow {} references an unknown vertex",
                    a.label
                )));
            }
        }
        for (ri, rel) in self.relations.iter().enumerate() {
            let mut endpoints = None;
            for (_, den, path) in &rel.terms {
                if *den == 0 {
                    return Err(Error::InconsistentRelations(format!(
                        "relation {ri} has a zero denominator"
                    )));
                }
                if path.len() < 2 {
                    return Err(Error::InconsistentRelations(format!(
                        "relation {ri} contains a path of length {} (< 2)",
                        path.len()
                    )));
                }
                for w in path.windows(2) {
                    if self.arrows[w[0]].target != self.arrows[w[1]].source {
                        return Err(Error::InconsistentRelations(format!(
                            "relation {ri} contains a non-composable path"
                        )));
                    }
                }
                let ep = (
                    self.arrows[path[0]].source,
                    self.arrows[*path.last().unwrap()].target,
                );
                match endpoints {
                    None => endpoints = Some(ep),
                    Some(e) if e != ep => {
                        return Err(Error::InconsistentRelations(format!(
                            "relation {ri} mixes non-parallel paths"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// Builds the quotient path algebra. Basis: residues of paths modulo the
/// relation ideal, found by exact elimination on the truncated path space.
/// The truncation level N is the least one at which every path of length N
/// already lies in the (truncated) ideal; if none exists within the bound
/// the arrow ideal is not nilpotent and construction fails.
pub fn algebra_from_quiver(q: &QuiverPresentation, field: FieldSpec) -> Result<Algebra, Error> {
    q.validate()?;
    field.validate()?;
    let f = field;
    let nv = q.vertices.len();
    if nv == 0 {
        return Err(Error::InconsistentRelations(
            "quiver has no vertices".into(),
        ));
    }
    // paths[l] = all paths of length l, in lexicographic arrow order.
    let mut paths: Vec<Vec<Path>> = vec![(0..nv)
        .map(|v| Path {
            source: v,
            arrows: vec![],
            target: v,
        })
        .collect()];
    let bound = q.nilpotency_bound.max(1);

    let mut chosen: Option<usize> = None;
    for n in 1..=bound {
        // Extend paths to length n.
        let mut level = Vec::new();
        for p in &paths[n - 1] {
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    level.push(Path {
                        source: p.source,
                        arrows,
                        target: a.target,
                    });
                }
            }
        }
        paths.push(level);
        let total: usize = paths.iter().map(|l| l.len()).sum();
        if total > MAX_PATHS {
            return Err(Error::NotNilpotent { bound });
        }
        if paths[n].is_empty() {
            chosen = Some(n);
            break;
        }
        // Test: every path of length n lies in the truncated ideal span.
        let (ideal, index) = padded_relations(q, f, &paths, n)?;
        let red = ideal.row_reduce();
        let all_in = paths[n].iter().all(|p| {
            let gi = index(&p.arrows, p.source);
            let mut v = vec![f.zero(); ideal.cols()];
            v[gi] = f.one();
            reduce_by_rref(f, &red, &mut v);
            v.iter().all(|x| f.is_zero(x))
        });
        if all_in {
            chosen = Some(n);
            break;
        }
    }
    let n = chosen.ok_or(Error::NotNilpotent { bound })?;
    let (ideal, index) = padded_relations(q, f, &paths, n)?;
    let red = ideal.row_reduce();
    let npaths = paths[..=n].iter().map(|l| l.len()).sum::<usize>();

    // Quotient basis: non-pivot path columns, in (length, lex) order.
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; npaths];
        for &c in &red.pivots {
            v[c] = true;
        }
        v
    };
    let basis_cols: Vec<usize> = (0..npaths).filter(|&c| !pivot_set[c]).collect();
    let dim = basis_cols.len();
    let col_to_basis: Vec<Option<usize>> = {
        let mut v = vec![None; npaths];
        for (bi, &c) in basis_cols.iter().enumerate() {
            v[c] = Some(bi);
        }
        v
    };
    // Reduction of any path (global column) to basis coordinates.
    let reduce_col = |c: usize| -> Vec<Scalar> {
        let mut out = vec![f.zero(); dim];
        if let Some(bi) = col_to_basis[c] {
            out[bi] = f.one();
            return out;
        }
        let r = red.pivots.iter().position(|&pc| pc == c).expect("pivot");
        for (bi, &bc) in basis_cols.iter().enumerate() {
            let v = red.rref.get(r, bc);
            if !f.is_zero(v) {
                out[bi] = f.neg(v);
            }
        }
        out
    };

    let flat: Vec<&Path> = paths[..=n].iter().flatten().collect();
    let basis_paths: Vec<&Path> = basis_cols.iter().map(|&c| flat[c]).collect();
    let labels: Vec<String> = basis_paths
        .iter()
        .map(|p| {
            if p.arrows.is_empty() {
                q.vertices[p.source].clone()
            } else {
                p.arrows
                    .iter()
                    .map(|&a| q.arrows[a].label.clone())
                    .collect::<Vec<_>>()
                    .join("*")
            }
        })
        .collect();

    // Multiplication: b_i · b_j = "travel b_j then b_i". Extend the reduced
    // vector one arrow at a time so intermediate paths stay within length n.
    let extend_by_arrow = |v: &[Scalar], ai: usize| -> Vec<Scalar> {
        let mut out = vec![f.zero(); dim];
        for (bi, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let p = basis_paths[bi];
            if q.arrows[ai].source != p.target {
                continue;
            }
            let mut arrows = p.arrows.clone();
            arrows.push(ai);
            let gi = index(&arrows, p.source);
            let r = reduce_col(gi);
            for k in 0..dim {
                if !f.is_zero(&r[k]) {
                    out[k] = f.add(&out[k], &f.mul(c, &r[k]));
                }
            }
        }
        out
    };
    let mut mult = vec![SparseVec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let pi = basis_paths[i];
            let pj = basis_paths[j];
            let mut v;
            if pi.arrows.is_empty() {
                // Vertex path acting on the left: picks out paths ending there.
                v = vec![f.zero(); dim];
                if pj.target == pi.source {
                    v[j] = f.one();
                }
            } else {
                if pj.target != pi.source {
                    mult[i * dim + j] = SparseVec::new();
                    continue;
                }
                v = vec![f.zero(); dim];
                v[j] = f.one();
                for &ai in &pi.arrows {
                    v = extend_by_arrow(&v, ai);
                }
            }
            mult[i * dim + j] = sparse_from_dense(f, &v);
        }
    }

    let vertex_basis_index = |v: usize| -> usize {
        basis_paths
            .iter()
            .position(|p| p.arrows.is_empty() && p.source == v)
            .expect("vertex paths survive in the quotient")
    };
    let mut unit = vec![f.zero(); dim];
    let mut idempotents = Vec::new();
    for v in 0..nv {
        let bi = vertex_basis_index(v);
        unit[bi] = f.one();
        let mut e = vec![f.zero(); dim];
        e[bi] = f.one();
        idempotents.push(e);
    }
    let radical: Vec<Vec<Scalar>> = basis_paths
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.arrows.is_empty())
        .map(|(bi, _)| {
            let mut v = vec![f.zero(); dim];
            v[bi] = f.one();
            v
        })
        .collect();
    let mut generators = idempotents.clone();
    for (bi, p) in basis_paths.iter().enumerate() {
        if p.arrows.len() == 1 {
            let mut v = vec![f.zero(); dim];
            v[bi] = f.one();
            generators.push(v);
        }
    }

    let alg = Algebra {
        field: f,
        dim,
        labels,
        mult,
        unit,
        idempotents,
        radical,
        generators,
        provenance: Provenance::Quiver,
    };
    Ok(alg)
}

/// The truncated ideal span at level `n`: all `u·r·w` paddings of relations,
/// components of length > n dropped, as rows over the path space of length
/// <= n. Also returns the global column index function.
#[allow(clippy::type_complexity)]
fn padded_relations<'a>(
    q: &QuiverPresentation,
    f: FieldSpec,
    paths: &'a [Vec<Path>],
    n: usize,
) -> Result<(Matrix, impl Fn(&[usize], usize) -> usize + 'a), Error> {
    let mut offsets = vec![0usize];
    for l in 0..=n {
        offsets.push(offsets[l] + paths[l].len());
    }
    let npaths = offsets[n + 1];
    let index = move |arrows: &[usize], source: usize| -> usize {
        let l = arrows.len();
        let pos = paths[l]
            .iter()
            .position(|p| p.source == source && p.arrows == arrows)
            .expect("path enumerated");
        offsets[l] + pos
    };
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rel in &q.relations {
        let min_len = rel.terms.iter().map(|(_, _, p)| p.len()).min().unwrap_or(0);
        if min_len == 0 || min_len > n {
            continue;
        }
        let (src, tgt) = {
            let p = &rel.terms[0].2;
            (q.arrows[p[0]].source, q.arrows[*p.last().unwrap()].target)
        };
        // w: path into src (applied first), u: path out of tgt.
        for lw in 0..=(n - min_len) {
            for w in paths[lw].iter().filter(|w| w.target == src) {
                for lu in 0..=(n - min_len - lw) {
                    for u in paths[lu].iter().filter(|u| u.source == tgt) {
                        let mut row = vec![f.zero(); npaths];
                        let mut nonzero = false;
                        for (num, den, term) in &rel.terms {
                            let total = lw + term.len() + lu;
                            if total > n {
                                continue;
                            }
                            let mut arrows = w.arrows.clone();
                            arrows.extend_from_slice(term);
                            arrows.extend_from_slice(&u.arrows);
                            let gi = index(&arrows, w.source);
                            let c = f.from_fraction(*num, *den)?;
                            row[gi] = f.add(&row[gi], &c);
                            nonzero = true;
                        }
                        if nonzero && row.iter().any(|x| !f.is_zero(x)) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let mat = if rows.is_empty() {
        Matrix::zeros(f, 0, npaths)
    } else {
        Matrix::from_entries(f, rows.len(), npaths, rows.into_iter().flatten().collect())
    };
    Ok((mat, index))
}

fn reduce_by_rref(f: FieldSpec, red: &crate::linalg::Reduced, v: &mut [Scalar]) {
    for (r, &pc) in red.pivots.iter().enumerate() {
        if f.is_zero(&v[pc]) {
            continue;
        }
        let c = v[pc].clone();
        for j in 0..v.len() {
            let rv = red.rref.get(r, j);
            if !f.is_zero(rv) {
                v[j] = f.sub(&v[j], &f.mul(&c, rv));
            }
        }
    }
}

/// Unit-preserving multiplicative map between algebras.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    pub source: AlgebraRef,
    pub target: AlgebraRef,
    /// Columns are images of source basis vectors, in target coordinates.
    pub matrix: Matrix,
}

impl AlgebraHom {
    pub fn new(source: AlgebraRef, target: AlgebraRef, matrix: Matrix) -> Result<Self, Error> {
        if source.field != target.field {
            return Err(Error::FieldMismatch);
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(Error::ShapeMismatch {
                expected: target.dim,
                got: matrix.rows(),
            });
        }
        let h = AlgebraHom {
            source,
            target,
            matrix,
        };
        if h.matrix.apply(h.source.unit()) != h.target.unit {
            return Err(Error::InvalidAction(
                "hom does not preserve the unit".into(),
            ));
        }
        for i in 0..h.source.dim {
            for j in 0..h.source.dim {
                let prod = h
                    .source
                    .product(&h.source.basis_vector(i), &h.source.basis_vector(j));
                let lhs = h.matrix.apply(&prod);
                let rhs = h.target.product(
                    &h.matrix.apply(&h.source.basis_vector(i)),
                    &h.matrix.apply(&h.source.basis_vector(j)),
                );
                if lhs != rhs {
                    return Err(Error::InvalidAction(format!(
                        "hom is not multiplicative on basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(h)
    }
}

/// Convenience builders for the small algebras used throughout the tests.
pub mod presets {
    use super::*;

    /// k[x]/(x^2): one vertex, one loop, relation x·x.
    pub fn a2(field: FieldSpec) -> Algebra {
        let q = QuiverPresentation {
            vertices: vec!["v".into()],
            arrows: vec![Arrow {
                label: "x".into(),
                source: 0,
                target: 0,
            }],
            relations: vec![Relation {
                terms: vec![(1, 1, vec![0, 0])],
            }],
            nilpotency_bound: DEFAULT_NILPOTENCY_BOUND,
        };
        algebra_from_quiver(&q, field).expect("valid preset")
    }

    /// Path algebra of 1 -> 2: lower triangular 2x2 matrices.
    pub fn t2(field: FieldSpec) -> Algebra {
        let q = QuiverPresentation {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![Arrow {
                label: "a".into(),
                source: 0,
                target: 1,
            }],
            relations: vec![],
            nilpotency_bound: DEFAULT_NILPOTENCY_BOUND,
        };
        algebra_from_quiver(&q, field).expect("valid preset")
    }

    /// A2 × k: two vertices, loop on the first with square zero.
    pub fn a2_times_k(field: FieldSpec) -> Algebra {
        let q = QuiverPresentation {
            vertices: vec!["v".into(), "w".into()],
            arrows: vec![Arrow {
                label: "x".into(),
                source: 0,
                target: 0,
            }],
            relations: vec![Relation {
                terms: vec![(1, 1, vec![0, 0])],
            }],
            nilpotency_bound: DEFAULT_NILPOTENCY_BOUND,
        };
        algebra_from_quiver(&q, field).expect("valid preset")
    }
}
