//! Floating-point image of the exact algebra at a sampled theta.
//!
//! Everything here is recomputed in machine complex numbers from the exact
//! inputs (projection coefficients, cocycle closed forms), then compared
//! against the exact results pushed through the same homomorphism.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::cocycles::ClosedFormCocycle;
use crate::crossed::{self, CrossedElement, Gamma, OrbifoldSpec};
use crate::pairing::{self, ColumnKind};
use crate::random::{self, TestRng};
use crate::scalar::{Coefficient, Rational};
use crate::torus::{GroupMatrix, LatticePoint, TorusElement};

pub type FTorus = BTreeMap<LatticePoint, Complex64>;
pub type FCrossed = BTreeMap<usize, FTorus>;

pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct Homomorphism {
    pub theta: f64,
}

fn accumulate(t: &mut FTorus, p: LatticePoint, v: Complex64) {
    *t.entry(p).or_insert(Complex64::new(0.0, 0.0)) += v;
}

impl Homomorphism {
    pub fn new(theta: f64) -> Self {
        Homomorphism { theta }
    }

    pub fn sample(rng: &mut TestRng) -> Self {
        Homomorphism::new(random::theta(rng))
    }

    pub fn lambda_pow(&self, q: &Rational) -> Complex64 {
        let q = q.to_f64().expect("finite exponent");
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.theta * q)
    }

    pub fn coefficient(&self, c: &Coefficient) -> Complex64 {
        c.to_complex(self.theta)
    }

    pub fn torus(&self, x: &TorusElement) -> FTorus {
        x.terms().map(|(p, c)| (*p, self.coefficient(c))).collect()
    }

    pub fn crossed(&self, e: &CrossedElement) -> FCrossed {
        e.parts().map(|(k, x)| (k, self.torus(x))).collect()
    }

    /// U^{n,m} U^{p,q} = lambda^{mp} U^{n+p,m+q}
    pub fn torus_mul(&self, a: &FTorus, b: &FTorus) -> FTorus {
        let mut out = FTorus::new();
        for (p, x) in a {
            for (q, y) in b {
                let phase = self.lambda_pow(&Rational::from_integer((p.m * q.n).into()));
                accumulate(&mut out, *p + *q, x * y * phase);
            }
        }
        out
    }

    pub fn act(&self, g: &GroupMatrix, x: &FTorus) -> FTorus {
        let mut out = FTorus::new();
        for (p, v) in x {
            let (phase, img) = g.monomial_image(*p);
            accumulate(&mut out, img, v * self.lambda_pow(&phase));
        }
        out
    }

    /// (x t^j)(y t^k) = x sigma^j(y) t^{j+k}
    pub fn cross_mul(&self, spec: OrbifoldSpec, a: &FCrossed, b: &FCrossed) -> FCrossed {
        let n = spec.order();
        let g = spec.conj();
        let mut out = FCrossed::new();
        for (j, x) in a {
            for (k, y) in b {
                let mut s = y.clone();
                for _ in 0..*j {
                    s = self.act(&g, &s);
                }
                let prod = self.torus_mul(x, &s);
                let slot = out.entry((j + k) % n).or_default();
                for (p, v) in prod {
                    accumulate(slot, p, v);
                }
            }
        }
        out
    }

    fn cocycle_value(&self, c: &ClosedFormCocycle, p: LatticePoint) -> Option<Complex64> {
        c.support
            .contains(p)
            .then(|| self.lambda_pow(&c.exponent.eval(p)))
    }

    pub fn eval(&self, c: &ClosedFormCocycle, x: &FTorus) -> Complex64 {
        x.iter()
            .filter_map(|(p, v)| {
                let cv = self.cocycle_value(c, -*p)?;
                Some(cv * self.lambda_pow(&Rational::from_integer((-p.n * p.m).into())) * v)
            })
            .sum()
    }

    pub fn pair2(&self, spec: OrbifoldSpec, e: &FCrossed) -> Complex64 {
        let d = |j: usize| -> FCrossed {
            e.iter()
                .map(|(k, x)| {
                    let y = x
                        .iter()
                        .map(|(p, v)| (*p, v * (if j == 1 { p.n } else { p.m }) as f64))
                        .collect();
                    (*k, y)
                })
                .collect()
        };
        let (d1, d2) = (d(1), d(2));
        let a = self.cross_mul(spec, &d1, &d2);
        let b = self.cross_mul(spec, &d2, &d1);
        let mut comm = a;
        for (k, x) in b {
            let slot = comm.entry(k).or_default();
            for (p, v) in x {
                accumulate(slot, p, -v);
            }
        }
        let top = self.cross_mul(spec, e, &comm);
        top.get(&0)
            .and_then(|x| x.get(&LatticePoint::ORIGIN))
            .copied()
            .unwrap_or_default()
    }
}

/// |a - b| relative to max(|exact|, 1).
pub fn relative_error(exact: Complex64, numeric: Complex64) -> f64 {
    (exact - numeric).norm() / exact.norm().max(1.0)
}

pub fn max_deviation(a: &FCrossed, b: &FCrossed) -> f64 {
    let mut worst: f64 = 0.0;
    let zero = Complex64::new(0.0, 0.0);
    for k in a.keys().chain(b.keys()) {
        let empty = FTorus::new();
        let (x, y) = (a.get(k).unwrap_or(&empty), b.get(k).unwrap_or(&empty));
        for p in x.keys().chain(y.keys()) {
            let d = x.get(p).copied().unwrap_or(zero) - y.get(p).copied().unwrap_or(zero);
            worst = worst.max(d.norm());
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct CellCheck {
    pub row: String,
    pub column: String,
    pub exact: Complex64,
    pub numeric: Complex64,
    pub error: f64,
}

#[derive(Clone, Debug)]
pub struct NumericReport {
    pub gamma: Gamma,
    pub theta: f64,
    pub cells: Vec<CellCheck>,
    /// Worst deviation of phi(a b) from phi(a) phi(b) over sampled pairs.
    pub product_error: f64,
}

impl NumericReport {
    pub fn max_error(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.error)
            .fold(self.product_error, f64::max)
    }

    pub fn ok(&self) -> bool {
        self.max_error() <= TOLERANCE
    }
}

/// Recompute every cell of the pinned table in floating point and compare
/// with the image of the exact cell; also spot-check multiplicativity.
pub fn check_table(gamma: Gamma, seed: u64) -> NumericReport {
    let mut rng = random::rng(seed);
    let h = Homomorphism::sample(&mut rng);
    let spec = OrbifoldSpec::new(gamma);
    let table = pairing::generate_table(gamma);
    let cols = pairing::columns(gamma);
    let mut cells = Vec::new();
    for (r, (name, p)) in crossed::catalog(gamma).iter().enumerate() {
        let fp = h.crossed(p);
        for (c, col) in cols.iter().enumerate() {
            let numeric = match &col.kind {
                ColumnKind::Phi => h.pair2(spec, &fp),
                ColumnKind::Cocycles(terms) => terms
                    .iter()
                    .map(|(s, cc)| {
                        let k = table
                            .map
                            .power(gamma, cc.twist)
                            .expect("column twist in group");
                        let empty = FTorus::new();
                        h.coefficient(s) * h.eval(cc, fp.get(&k).unwrap_or(&empty))
                    })
                    .sum(),
            };
            let exact = h.coefficient(&table.cells[r][c]);
            cells.push(CellCheck {
                row: name.to_string(),
                column: col.header.clone(),
                exact,
                numeric,
                error: relative_error(exact, numeric),
            });
        }
    }
    let mut product_error: f64 = 0.0;
    for _ in 0..20 {
        let a = random::crossed_element(&mut rng, spec, 3, 2);
        let b = random::crossed_element(&mut rng, spec, 3, 2);
        let exact = h.crossed(&crossed::cross_mul(&a, &b).expect("same algebra"));
        let numeric = h.cross_mul(spec, &h.crossed(&a), &h.crossed(&b));
        product_error = product_error.max(max_deviation(&exact, &numeric));
    }
    NumericReport {
        gamma,
        theta: h.theta,
        cells,
        product_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_commute_with_homomorphism() {
        for g in Gamma::CATALOGED {
            let r = check_table(g, 3);
            assert!(r.ok(), "{g}: {}", r.max_error());
        }
    }

    #[test]
    fn lambda_is_unimodular() {
        let h = Homomorphism::new(0.3);
        assert!((h.lambda_pow(&Rational::from_integer(1.into())).norm() - 1.0).abs() < 1e-15);
    }
}
