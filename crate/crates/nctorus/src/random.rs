//! Seeded generators for randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crossed::{CrossedElement, OrbifoldSpec};
use crate::scalar::{rat, Coefficient, Cyclotomic};
use crate::torus::{LatticePoint, TorusElement};

pub type TestRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const LAMBDA_EXPONENTS: [(i64, i64); 9] = [
    (0, 1),
    (0, 1),
    (1, 1),
    (-1, 1),
    (1, 2),
    (-1, 2),
    (1, 3),
    (-2, 3),
    (1, 6),
];

/// A short sum of terms r z^k lambda^q with small r.
pub fn coefficient(rng: &mut TestRng) -> Coefficient {
    let terms = rng.gen_range(1..=2);
    let mut acc = Coefficient::zero();
    for _ in 0..terms {
        let r = rat(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let (a, b) = *LAMBDA_EXPONENTS.choose(rng).expect("nonempty");
        let c = Cyclotomic::z_pow(rng.gen_range(0..12)).scale(&r);
        acc = &acc + &Coefficient::monomial(c, rat(a, b));
    }
    acc
}

pub fn point(rng: &mut TestRng, radius: i64) -> LatticePoint {
    LatticePoint::new(
        rng.gen_range(-radius..=radius),
        rng.gen_range(-radius..=radius),
    )
}

/// Up to `max_terms` terms with exponents in [-radius, radius].
pub fn torus_element(rng: &mut TestRng, max_terms: usize, radius: i64) -> TorusElement {
    let n = rng.gen_range(1..=max_terms);
    TorusElement::from_terms(
        (0..n)
            .map(|_| (point(rng, radius), coefficient(rng)))
            .collect::<Vec<_>>(),
    )
}

pub fn crossed_element(
    rng: &mut TestRng,
    spec: OrbifoldSpec,
    max_terms: usize,
    radius: i64,
) -> CrossedElement {
    let mut parts = Vec::new();
    for k in 0..spec.order() {
        if rng.gen_bool(0.6) {
            parts.push((k, torus_element(rng, max_terms, radius)));
        }
    }
    CrossedElement::from_parts(spec, parts)
}

/// A sample value of theta away from the rationals of small height.
pub fn theta(rng: &mut TestRng) -> f64 {
    loop {
        let t: f64 = rng.gen_range(0.05..0.95);
        let near_rational = (1..=12).any(|d| {
            let x = t * d as f64;
            (x - x.round()).abs() < 1e-3
        });
        if !near_rational {
            return t;
        }
    }
}
