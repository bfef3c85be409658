//! Deterministic inputs shared by the benchmarks.

use std::sync::Arc;

use fqzeros::bounds::BoundParams;
use fqzeros::constructions::tb_maximal_family;
use fqzeros::poly::monomial_count;
use fqzeros::{Elem, Field, HomPoly, PolyFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::new(q).expect("prime power"))
}

/// A dense form with seeded coefficients.
pub fn dense_form(field: &Arc<Field>, m: usize, d: u32, seed: u64) -> HomPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.q() as u64;
    let coeffs: Vec<Elem> = (0..monomial_count(m, d))
        .map(|_| field.elem(rng.gen_range(0..q)).expect("in range"))
        .collect();
    HomPoly::from_coeffs(field.clone(), m, d, &coeffs).expect("matching length")
}

/// Two dense forms of degree `d` sharing a dense factor of degree `shared`
/// (coprime when `shared = 0`).
pub fn gcd_pair(q: u64, m: usize, d: u32, shared: u32, seed: u64) -> (HomPoly, HomPoly) {
    let f = field(q);
    let a = dense_form(&f, m, d - shared, seed);
    let b = dense_form(&f, m, d - shared, seed + 1);
    if shared == 0 {
        return (a, b);
    }
    let g = dense_form(&f, m, shared, seed + 2);
    (g.mul(&a).expect("same ring"), g.mul(&b).expect("same ring"))
}

pub fn tb_family(q: u64, d: u32, m: usize, r: u64) -> PolyFamily {
    let params = BoundParams::new(q, d, m, r).expect("valid");
    tb_maximal_family(&params, None).expect("constructible").family
}
