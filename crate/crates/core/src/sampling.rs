//! Seeded generators of small modules and complexes, used by the
//! cross-oracle and property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraRef;
use crate::complex::Complex;
use crate::linalg::{Matrix, Scalar};
use crate::module::{hom_basis, Module};

fn random_scalar(f: crate::FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match f {
        crate::FieldSpec::Prime(p) => Scalar::Prime(rng.random_range(0..p)),
        crate::FieldSpec::Rational => f.from_i64(rng.random_range(-4i64..=4)),
    }
}

/// A random module: a submodule or quotient of a small free module, cut out
/// by randomly generated elements.
pub fn random_module(alg: &AlgebraRef, seed: u64) -> Module {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = alg.field();
    let rank = rng.random_range(1..=2usize);
    let mut free = Module::regular(alg.clone());
    for _ in 1..rank {
        free = free.direct_sum(&Module::regular(alg.clone()));
    }
    let gens = rng.random_range(1..=2usize);
    let vectors: Vec<Vec<Scalar>> = (0..gens)
        .map(|_| {
            (0..free.dim())
                .map(|_| random_scalar(f, &mut rng))
                .collect()
        })
        .collect();
    let (sub, incl) = free.submodule_generated(&vectors);
    if rng.random_bool(0.5) {
        sub
    } else {
        free.quotient_by(&incl.matrix).0
    }
}

/// A random bounded complex: a stalk, or a two-term complex whose
/// differential is a random combination of a hom basis.
pub fn random_complex(alg: &AlgebraRef, seed: u64) -> Complex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15));
    let m0 = random_module(alg, seed.wrapping_add(1));
    if rng.random_bool(0.3) {
        return Complex::stalk(m0, 0);
    }
    let m1 = random_module(alg, seed.wrapping_add(2));
    let basis = hom_basis(&m1, &m0);
    let f = alg.field();
    let mut d = Matrix::zeros(f, m0.dim(), m1.dim());
    for b in &basis {
        let c = random_scalar(f, &mut rng);
        d = d.add(&b.scale(&c));
    }
    Complex::new_unchecked(alg.clone(), 0, vec![m0, m1], vec![d])
}
