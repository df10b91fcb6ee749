//! Crossed products of the algebraic torus by Z_N, N in {2,3,4,6}, and the
//! catalog of projections used for the index pairings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::{rat, Coefficient, Cyclotomic};
use crate::torus::{act, GroupMatrix, TorusElement};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Gamma {
    #[serde(rename = "z2")]
    Z2,
    #[serde(rename = "z3")]
    Z3,
    #[serde(rename = "z4")]
    Z4,
    #[serde(rename = "z6")]
    Z6,
}

impl Gamma {
    /// The three groups with a projection catalog.
    pub const CATALOGED: [Gamma; 3] = [Gamma::Z3, Gamma::Z4, Gamma::Z6];

    pub fn order(self) -> usize {
        match self {
            Gamma::Z2 => 2,
            Gamma::Z3 => 3,
            Gamma::Z4 => 4,
            Gamma::Z6 => 6,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Gamma::Z2 => "z2",
            Gamma::Z3 => "z3",
            Gamma::Z4 => "z4",
            Gamma::Z6 => "z6",
        }
    }

    /// Matrix of t(.)t^{-1} on the exponent lattice.
    pub fn conj_matrix(self) -> [[i64; 2]; 2] {
        match self {
            Gamma::Z2 => [[-1, 0], [0, -1]],
            Gamma::Z3 => [[-1, -1], [1, 0]],
            Gamma::Z4 => [[0, -1], [1, 0]],
            Gamma::Z6 => [[0, -1], [1, 1]],
        }
    }

    pub fn projection_names(self) -> &'static [&'static str] {
        match self {
            Gamma::Z2 => &["1"],
            Gamma::Z3 => &["1", "p0", "p1", "q0", "q1", "r0", "r1"],
            Gamma::Z4 => &["1", "p0", "p1", "p2", "q0", "q1", "q2", "r"],
            Gamma::Z6 => &["1", "p0", "p1", "p2", "p3", "p4", "q0", "q1", "r"],
        }
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.order())
    }
}

impl FromStr for Gamma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "z2" | "2" => Ok(Gamma::Z2),
            "z3" | "3" => Ok(Gamma::Z3),
            "z4" | "4" => Ok(Gamma::Z4),
            "z6" | "6" => Ok(Gamma::Z6),
            _ => Err(format!("unknown group {s:?}; expected z2, z3, z4 or z6")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OrbifoldSpec {
    gamma: Gamma,
    conj: GroupMatrix,
}

impl OrbifoldSpec {
    pub fn new(gamma: Gamma) -> Self {
        let conj = GroupMatrix::from_matrix(gamma.conj_matrix())
            .expect("conjugation matrices are labelled");
        OrbifoldSpec { gamma, conj }
    }

    pub fn gamma(&self) -> Gamma {
        self.gamma
    }

    pub fn order(&self) -> usize {
        self.gamma.order()
    }

    pub fn conj(&self) -> GroupMatrix {
        self.conj
    }

    /// sigma^k, k taken mod N.
    pub fn sigma_pow(&self, k: usize, x: &TorusElement) -> TorusElement {
        let mut y = x.clone();
        for _ in 0..(k % self.order()) {
            y = act(&self.conj, &y);
        }
        y
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrossedError {
    #[error("crossed product elements over {0} and {1} cannot be combined")]
    SpecMismatch(Gamma, Gamma),
    #[error("no projection named {name:?} for {gamma}")]
    UnknownProjection { gamma: Gamma, name: String },
    #[error("malformed crossed product JSON: {0}")]
    Json(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossedElement {
    spec: OrbifoldSpec,
    parts: BTreeMap<usize, TorusElement>,
}

impl CrossedElement {
    pub fn zero(spec: OrbifoldSpec) -> Self {
        CrossedElement {
            spec,
            parts: BTreeMap::new(),
        }
    }

    pub fn one(spec: OrbifoldSpec) -> Self {
        Self::from_part(spec, 0, TorusElement::one())
    }

    /// t^k
    pub fn t(spec: OrbifoldSpec, k: usize) -> Self {
        Self::from_part(spec, k, TorusElement::one())
    }

    /// x t^k
    pub fn from_part(spec: OrbifoldSpec, k: usize, x: TorusElement) -> Self {
        let mut e = Self::zero(spec);
        e.add_part(k, x);
        e
    }

    pub fn from_parts(
        spec: OrbifoldSpec,
        parts: impl IntoIterator<Item = (usize, TorusElement)>,
    ) -> Self {
        let mut e = Self::zero(spec);
        for (k, x) in parts {
            e.add_part(k, x);
        }
        e
    }

    fn add_part(&mut self, k: usize, x: TorusElement) {
        let k = k % self.spec.order();
        let s = match self.parts.remove(&k) {
            Some(old) => old.add(&x),
            None => x,
        };
        if !s.is_zero() {
            self.parts.insert(k, s);
        }
    }

    pub fn spec(&self) -> OrbifoldSpec {
        self.spec
    }

    pub fn part(&self, k: usize) -> TorusElement {
        self.parts
            .get(&(k % self.spec.order()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &TorusElement)> {
        self.parts.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    fn check(&self, o: &CrossedElement) -> Result<(), CrossedError> {
        if self.spec != o.spec {
            return Err(CrossedError::SpecMismatch(self.spec.gamma, o.spec.gamma));
        }
        Ok(())
    }

    pub fn add(&self, o: &CrossedElement) -> Result<CrossedElement, CrossedError> {
        self.check(o)?;
        let mut r = self.clone();
        for (k, x) in &o.parts {
            r.add_part(*k, x.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &CrossedElement) -> Result<CrossedElement, CrossedError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CrossedElement {
        CrossedElement {
            spec: self.spec,
            parts: self.parts.iter().map(|(k, x)| (*k, x.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> CrossedElement {
        CrossedElement::from_parts(self.spec, self.parts.iter().map(|(k, x)| (*k, x.scale(c))))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "gamma": self.spec.gamma,
            "parts": self.parts.iter().map(|(k, x)| serde_json::json!({"k": k, "element": x.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CrossedElement, CrossedError> {
        let bad = |m: &str| CrossedError::Json(m.to_string());
        let gamma: Gamma =
            serde_json::from_value(v["gamma"].clone()).map_err(|e| bad(&e.to_string()))?;
        let spec = OrbifoldSpec::new(gamma);
        let mut e = CrossedElement::zero(spec);
        for p in v["parts"]
            .as_array()
            .ok_or_else(|| bad("parts must be a list"))?
        {
            let k = p["k"]
                .as_u64()
                .ok_or_else(|| bad("k must be a nonnegative integer"))?
                as usize;
            let x = TorusElement::from_json(&p["element"]).map_err(|e| bad(&e.to_string()))?;
            e.add_part(k, x);
        }
        Ok(e)
    }
}

impl fmt::Display for CrossedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(k, x)| format!("({x}) t^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// (x t^j)(y t^k) = x sigma^j(y) t^{j+k}
pub fn cross_mul(a: &CrossedElement, b: &CrossedElement) -> Result<CrossedElement, CrossedError> {
    a.check(b)?;
    let spec = a.spec;
    let mut r = CrossedElement::zero(spec);
    for (j, x) in &a.parts {
        for (k, y) in &b.parts {
            r.add_part(j + k, x.mul(&spec.sigma_pow(*j, y)));
        }
    }
    Ok(r)
}

/// (x t^k)* = sigma^{-k}(x*) t^{-k}
pub fn cross_star(a: &CrossedElement) -> CrossedElement {
    let spec = a.spec;
    let n = spec.order();
    CrossedElement::from_parts(
        spec,
        a.parts
            .iter()
            .map(|(k, x)| ((n - k) % n, spec.sigma_pow(n - k, &x.star()))),
    )
}

pub fn cross_pow(a: &CrossedElement, k: usize) -> CrossedElement {
    let mut r = CrossedElement::one(a.spec);
    for _ in 0..k {
        r = cross_mul(&r, a).expect("same algebra");
    }
    r
}

#[derive(Clone, Debug)]
pub struct ProjectionCheck {
    pub idempotent_residual: CrossedElement,
    pub selfadjoint_residual: CrossedElement,
}

impl ProjectionCheck {
    pub fn ok(&self) -> bool {
        self.idempotent_residual.is_zero() && self.selfadjoint_residual.is_zero()
    }
}

/// Residuals p^2 - p and p* - p.
pub fn is_projection(a: &CrossedElement) -> ProjectionCheck {
    let sq = cross_mul(a, a).expect("same algebra");
    ProjectionCheck {
        idempotent_residual: sq.sub(a).expect("same algebra"),
        selfadjoint_residual: cross_star(a).sub(a).expect("same algebra"),
    }
}

fn zeta(k: i64) -> Coefficient {
    Coefficient::from_cyclotomic(Cyclotomic::zeta_pow(k))
}

fn lam(n: i64, d: i64) -> Coefficient {
    Coefficient::lambda(rat(n, d))
}

/// scale * sum_k coefs[k] u^k
fn geometric(u: &CrossedElement, coefs: &[Coefficient], scale: Coefficient) -> CrossedElement {
    let spec = u.spec;
    let mut acc = CrossedElement::zero(spec);
    let mut power = CrossedElement::one(spec);
    for c in coefs {
        acc = acc.add(&power.scale(c)).expect("same algebra");
        power = cross_mul(&power, u).expect("same algebra");
    }
    acc.scale(&scale)
}

fn u1_t(spec: OrbifoldSpec, a: i64, k: usize, c: Coefficient) -> CrossedElement {
    CrossedElement::from_part(spec, k, TorusElement::u(a, 0).scale(&c))
}

fn roots(step: i64, count: usize) -> Vec<Coefficient> {
    (0..count as i64).map(|j| zeta(step * j)).collect()
}

/// e^{2 pi i (2 + theta)/6} = zeta_12^4 lambda^{1/6}
fn q_phase() -> Coefficient {
    &zeta(2) * &lam(1, 6)
}

/// The cataloged projection `name` over `gamma`.
///
/// Three entries differ from their printed formulas, which are not
/// idempotent as printed: the Z3 r-family carries the phase lambda^{2/3}
/// on U1^2 t, and the Z6 p2 coefficient of t^4 is zeta^2 instead of -1.
pub fn build_projection(gamma: Gamma, name: &str) -> Result<CrossedElement, CrossedError> {
    let spec = OrbifoldSpec::new(gamma);
    let unknown = || CrossedError::UnknownProjection {
        gamma,
        name: name.to_string(),
    };
    if !gamma.projection_names().contains(&name) {
        return Err(unknown());
    }
    if name == "1" {
        return Ok(CrossedElement::one(spec));
    }
    let n = gamma.order();
    let t = CrossedElement::t(spec, 1);
    let inv_n = Coefficient::from_rational(rat(1, n as i64));
    let ones = vec![Coefficient::one(); n];
    let p = match (gamma, name) {
        (Gamma::Z3, "p0") => geometric(&t, &ones, inv_n),
        (Gamma::Z3, "p1") => geometric(&t, &roots(2, 3), inv_n),
        (Gamma::Z3, "q0") => geometric(&u1_t(spec, 1, 1, q_phase()), &ones, inv_n),
        (Gamma::Z3, "q1") => geometric(&u1_t(spec, 1, 1, &zeta(2) * &q_phase()), &ones, inv_n),
        (Gamma::Z3, "r0") => geometric(&u1_t(spec, 2, 1, lam(2, 3)), &ones, inv_n),
        (Gamma::Z3, "r1") => geometric(&u1_t(spec, 2, 1, &zeta(2) * &lam(2, 3)), &ones, inv_n),
        (Gamma::Z4, "p0") => geometric(&t, &ones, inv_n),
        (Gamma::Z4, "p1") => geometric(&t, &roots_i(1), inv_n),
        (Gamma::Z4, "p2") => geometric(&t, &roots_i(2), inv_n),
        (Gamma::Z4, "q0") => geometric(&u1_t(spec, 1, 1, lam(1, 4)), &roots_i(1), inv_n),
        (Gamma::Z4, "q1") => geometric(&u1_t(spec, 1, 1, lam(1, 4)), &roots_i(2), inv_n),
        (Gamma::Z4, "q2") => geometric(&u1_t(spec, 1, 1, lam(1, 4)), &roots_i(3), inv_n),
        (Gamma::Z4 | Gamma::Z6, "r") => half_minus_u1(spec, n / 2),
        (Gamma::Z6, "p0") => geometric(&t, &ones, inv_n),
        (Gamma::Z6, "p1") => geometric(&t, &roots(1, 6), inv_n),
        (Gamma::Z6, "p2") => geometric(&t, &roots(2, 6), inv_n),
        (Gamma::Z6, "p3") => geometric(&t, &roots(3, 6), inv_n),
        (Gamma::Z6, "p4") => geometric(&t, &roots(4, 6), inv_n),
        (Gamma::Z6, "q0") => geometric(&u1_t(spec, 1, 2, q_phase()), &roots(0, 3), third()),
        (Gamma::Z6, "q1") => geometric(&u1_t(spec, 1, 2, q_phase()), &roots(2, 3), third()),
        _ => return Err(unknown()),
    };
    Ok(p)
}

fn third() -> Coefficient {
    Coefficient::from_rational(rat(1, 3))
}

/// 1, i^s, i^{2s}, i^{3s}
fn roots_i(s: i64) -> Vec<Coefficient> {
    (0..4)
        .map(|j| Coefficient::from_cyclotomic(Cyclotomic::z_pow(3 * s * j)))
        .collect()
}

/// (1 - U1 t^k)/2
fn half_minus_u1(spec: OrbifoldSpec, k: usize) -> CrossedElement {
    let half = Coefficient::from_rational(rat(1, 2));
    CrossedElement::one(spec)
        .sub(&u1_t(spec, 1, k, Coefficient::one()))
        .expect("same algebra")
        .scale(&half)
}

/// The printed forms of the catalog entries that `build_projection` corrects.
pub fn printed_variant(gamma: Gamma, name: &str) -> Option<CrossedElement> {
    let spec = OrbifoldSpec::new(gamma);
    let ones = vec![Coefficient::one(); 3];
    match (gamma, name) {
        (Gamma::Z3, "r0") => Some(geometric(
            &u1_t(spec, 2, 1, Coefficient::one()),
            &ones,
            third(),
        )),
        (Gamma::Z3, "r1") => Some(geometric(&u1_t(spec, 2, 1, zeta(2)), &ones, third())),
        (Gamma::Z6, "p2") => {
            let coefs = [zeta(0), zeta(2), zeta(4), zeta(0), -zeta(0), zeta(4)];
            let t = CrossedElement::t(spec, 1);
            Some(geometric(&t, &coefs, Coefficient::from_rational(rat(1, 6))))
        }
        _ => None,
    }
}

pub fn catalog(gamma: Gamma) -> Vec<(&'static str, CrossedElement)> {
    gamma
        .projection_names()
        .iter()
        .map(|n| (*n, build_projection(gamma, n).expect("catalog names build")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::LatticePoint;

    fn spec(g: Gamma) -> OrbifoldSpec {
        OrbifoldSpec::new(g)
    }

    #[test]
    fn t_cubed_is_one() {
        let s = spec(Gamma::Z3);
        let r = cross_mul(&CrossedElement::t(s, 1), &CrossedElement::t(s, 2)).unwrap();
        assert_eq!(r, CrossedElement::one(s));
    }

    #[test]
    fn z4_u1t_squared() {
        let s = spec(Gamma::Z4);
        let u = CrossedElement::from_part(s, 1, TorusElement::u1());
        let sq = cross_mul(&u, &u).unwrap();
        assert_eq!(sq, CrossedElement::from_part(s, 2, TorusElement::u(1, 1)));
    }

    #[test]
    fn z3_conjugation_matches_relation() {
        // t U1 t^{-1} = U1^{-1} U2 / sqrt(lambda)
        let s = spec(Gamma::Z3);
        let img = s.sigma_pow(1, &TorusElement::u1());
        let expect =
            TorusElement::monomial(LatticePoint::new(-1, 1), Coefficient::lambda(rat(-1, 2)));
        assert_eq!(img, expect);
    }

    #[test]
    fn star_of_t() {
        for g in [Gamma::Z2, Gamma::Z3, Gamma::Z4, Gamma::Z6] {
            let s = spec(g);
            assert_eq!(
                cross_star(&CrossedElement::t(s, 1)),
                CrossedElement::t(s, g.order() - 1)
            );
        }
    }

    #[test]
    fn catalog_literals() {
        let p0 = build_projection(Gamma::Z3, "p0").unwrap();
        for k in 0..3 {
            assert_eq!(
                p0.part(k),
                TorusElement::scalar(Coefficient::from_rational(rat(1, 3)))
            );
        }
        let r = build_projection(Gamma::Z6, "r").unwrap();
        assert_eq!(
            r.part(0),
            TorusElement::scalar(Coefficient::from_rational(rat(1, 2)))
        );
        assert_eq!(
            r.part(3),
            TorusElement::u1().scale(&Coefficient::from_rational(rat(-1, 2)))
        );
        assert_eq!(r.parts().count(), 2);
        assert_eq!(
            build_projection(Gamma::Z4, "1").unwrap(),
            CrossedElement::one(spec(Gamma::Z4))
        );
        assert!(build_projection(Gamma::Z4, "r1").is_err());
    }

    #[test]
    fn every_catalog_entry_is_a_projection() {
        let mut count = 0;
        for g in Gamma::CATALOGED {
            for (name, p) in catalog(g) {
                let chk = is_projection(&p);
                assert!(chk.ok(), "{g} {name}: {}", chk.idempotent_residual);
                count += 1;
            }
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn printed_variants_fail() {
        for (g, n) in [(Gamma::Z3, "r0"), (Gamma::Z3, "r1"), (Gamma::Z6, "p2")] {
            assert!(!is_projection(&printed_variant(g, n).unwrap()).ok());
        }
    }

    #[test]
    fn non_projection_has_residual() {
        let p = build_projection(Gamma::Z3, "p0").unwrap();
        let q = p.add(&CrossedElement::one(p.spec())).unwrap();
        let chk = is_projection(&q);
        assert!(!chk.ok());
        assert!(!chk.idempotent_residual.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let q = build_projection(Gamma::Z4, "q1").unwrap();
        assert_eq!(CrossedElement::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn spec_mismatch() {
        let a = CrossedElement::one(spec(Gamma::Z3));
        let b = CrossedElement::one(spec(Gamma::Z4));
        assert!(matches!(
            cross_mul(&a, &b),
            Err(CrossedError::SpecMismatch(..))
        ));
    }
}
