//! Closed-form twisted 0-cocycles (twisted traces) and the group action on
//! them.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::complexes::{kernel_relation, TwistSpec};
use crate::crossed::Gamma;
use crate::scalar::{frac_solve, int, Coefficient, CoefficientFraction, Monomial, Rational};
use crate::torus::{GroupMatrix, Label, LatticePoint, TorusElement};

/// c . (n, m) = r (mod k)
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub c: [i64; 2],
    pub r: i64,
    pub k: i64,
}

impl Congruence {
    pub fn new(c: [i64; 2], r: i64, k: i64) -> Self {
        Congruence {
            c,
            r: r.rem_euclid(k),
            k,
        }
    }

    pub fn holds(&self, p: LatticePoint) -> bool {
        (self.c[0] * p.n + self.c[1] * p.m - self.r).rem_euclid(self.k) == 0
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.c;
        let order = if a < 0 && b > 0 {
            [(b, "m"), (a, "n")]
        } else {
            [(a, "n"), (b, "m")]
        };
        let mut s = String::new();
        for (c, v) in order {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                if s.is_empty() {
                    "-"
                } else {
                    " - "
                }
            } else if s.is_empty() {
                ""
            } else {
                " + "
            };
            let mag = if c.abs() == 1 {
                String::new()
            } else {
                c.abs().to_string()
            };
            s.push_str(&format!("{sign}{mag}{v}"));
        }
        write!(f, "{s} ≡ {} (mod {})", self.r, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SupportRule {
    Point(LatticePoint),
    /// All points satisfying every congruence (no congruences: all of Z^2).
    Lattice(Vec<Congruence>),
}

fn sym_mod(x: i64, k: i64) -> i64 {
    let r = x.rem_euclid(k);
    if 2 * r > k {
        r - k
    } else {
        r
    }
}

impl SupportRule {
    pub fn contains(&self, p: LatticePoint) -> bool {
        match self {
            SupportRule::Point(q) => *q == p,
            SupportRule::Lattice(cs) => cs.iter().all(|c| c.holds(p)),
        }
    }

    /// The coset base + L, L spanned by the differences; None when L has
    /// rank one or a quotient not of the forms handled here.
    pub fn from_points(base: LatticePoint, points: &[LatticePoint]) -> Option<SupportRule> {
        // Hermite form rows (a, b), (0, d)
        let (mut a, mut b, mut d) = (0i64, 0i64, 0i64);
        for p in points {
            let (mut x, mut y) = (p.n - base.n, p.m - base.m);
            if x != 0 {
                if a == 0 {
                    if x < 0 {
                        x = -x;
                        y = -y;
                    }
                    a = x;
                    b = y;
                    continue;
                }
                let g = a.extended_gcd(&x);
                let (s, t) = (g.x, g.y);
                let nb = s * b + t * y;
                let rest = (x / g.gcd) * b - (a / g.gcd) * y;
                a = g.gcd;
                b = nb;
                d = d.gcd(&rest);
            } else {
                d = d.gcd(&y);
            }
            if d != 0 {
                b = b.rem_euclid(d);
            }
        }
        if a == 0 && d == 0 {
            return Some(SupportRule::Point(base));
        }
        if a == 0 || d == 0 {
            return None;
        }
        let mut cs = Vec::new();
        if a == 1 {
            if d > 1 {
                let c = [sym_mod(-b, d), 1];
                cs.push(Congruence::new(c, c[0] * base.n + c[1] * base.m, d));
            }
        } else if b % d == 0 {
            if a > 1 {
                cs.push(Congruence::new([1, 0], base.n, a));
            }
            if d > 1 {
                cs.push(Congruence::new([0, 1], base.m, d));
            }
        } else {
            return None;
        }
        Some(SupportRule::Lattice(cs))
    }
}

impl fmt::Display for SupportRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportRule::Point(p) => write!(f, "(n, m) = {p}"),
            SupportRule::Lattice(cs) if cs.is_empty() => write!(f, "all (n, m)"),
            SupportRule::Lattice(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(", "))
            }
        }
    }
}

/// Q(n, m) = (a n^2 + b m^2 + c nm + d n + e m + f) / den
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticRule {
    pub coeffs: [i64; 6],
    pub den: i64,
}

fn monomials(p: LatticePoint) -> [i64; 6] {
    [p.n * p.n, p.m * p.m, p.n * p.m, p.n, p.m, 1]
}

impl QuadraticRule {
    pub const ZERO: QuadraticRule = QuadraticRule {
        coeffs: [0; 6],
        den: 1,
    };

    pub fn new(coeffs: [i64; 6], den: i64) -> Self {
        QuadraticRule { coeffs, den }
    }

    pub fn eval(&self, p: LatticePoint) -> Rational {
        let num: i64 = self
            .coeffs
            .iter()
            .zip(monomials(p))
            .map(|(c, x)| c * x)
            .sum();
        Rational::new(num.into(), self.den.into())
    }

    fn rational_coeffs(&self) -> [Rational; 6] {
        self.coeffs
            .map(|c| Rational::new(c.into(), self.den.into()))
    }

    /// Exact interpolation of the exponents of pure lambda-powers: up to six
    /// points in general position, free parameters set to zero, denominator
    /// a divisor of 12, then checked on every given point.
    pub fn fit(values: &BTreeMap<LatticePoint, Monomial>) -> Option<QuadraticRule> {
        if values.values().any(|v| !v.coef.is_one()) {
            return None;
        }
        let mut pts: Vec<LatticePoint> = values.keys().copied().collect();
        pts.sort_by_key(crate::complexes::representative_key);
        let row = |p: LatticePoint| -> Vec<CoefficientFraction> {
            monomials(p)
                .iter()
                .map(|x| CoefficientFraction::from(Coefficient::from_int(*x)))
                .collect()
        };
        let mut chosen: Vec<LatticePoint> = Vec::new();
        let mut rank = 0;
        for p in &pts {
            if rank == 6 {
                break;
            }
            let mut rows: Vec<Vec<CoefficientFraction>> = chosen.iter().map(|q| row(*q)).collect();
            rows.push(row(*p));
            let zeros = vec![CoefficientFraction::zero(); rows.len()];
            let r = frac_solve(&rows, &zeros).ok()?.pivots.len();
            if r > rank {
                rank = r;
                chosen.push(*p);
            }
        }
        let rows: Vec<Vec<CoefficientFraction>> = chosen.iter().map(|q| row(*q)).collect();
        let rhs: Vec<CoefficientFraction> = chosen
            .iter()
            .map(|q| CoefficientFraction::from(Coefficient::from_rational(values[q].exp.clone())))
            .collect();
        let sol = frac_solve(&rows, &rhs).ok()?;
        let mut coeffs = Vec::new();
        for x in &sol.particular {
            let c = x.to_coefficient()?;
            if c.is_zero() {
                coeffs.push(int(0));
                continue;
            }
            let m = c.as_monomial()?;
            if !m.exp.is_zero() || !m.coef.coords()[1..].iter().all(|v| v.is_zero()) {
                return None;
            }
            coeffs.push(m.coef.coords()[0].clone());
        }
        let den = [1i64, 2, 3, 4, 6, 12]
            .into_iter()
            .find(|d| coeffs.iter().all(|c| (c * int(*d)).is_integer()))?;
        let ints: Vec<i64> = coeffs
            .iter()
            .map(|c| {
                let v = (c * int(den)).to_integer();
                i64::try_from(v).ok()
            })
            .collect::<Option<_>>()?;
        let rule = QuadraticRule {
            coeffs: ints.try_into().ok()?,
            den,
        };
        values
            .iter()
            .all(|(p, v)| rule.eval(*p) == v.exp)
            .then_some(rule)
    }
}

impl fmt::Display for QuadraticRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["n^2", "m^2", "nm", "n", "m", ""];
        let mut s = String::new();
        for (c, v) in self.coeffs.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                if s.is_empty() {
                    "-"
                } else {
                    " - "
                }
            } else if s.is_empty() {
                ""
            } else {
                " + "
            };
            let mag = if c.abs() == 1 && !v.is_empty() {
                String::new()
            } else {
                c.abs().to_string()
            };
            s.push_str(&format!("{sign}{mag}{v}"));
        }
        if s.is_empty() {
            s.push('0');
        }
        if self.den == 1 {
            write!(f, "{s}")
        } else {
            write!(f, "({s})/{}", self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Rule stated in closed form in the source.
    Stated,
    /// Rule produced by the constraint-graph fit and frozen here.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCocycle {
    pub name: String,
    pub twist: Label,
    pub base: LatticePoint,
    pub support: SupportRule,
    pub exponent: QuadraticRule,
    pub provenance: Provenance,
}

impl ClosedFormCocycle {
    /// phi_{n,m}, None off the support.
    pub fn value(&self, p: LatticePoint) -> Option<Coefficient> {
        self.support
            .contains(p)
            .then(|| Coefficient::lambda(self.exponent.eval(p)))
    }

    pub fn value_or_zero(&self, p: LatticePoint) -> Coefficient {
        self.value(p).unwrap_or_default()
    }

    pub fn formula(&self) -> String {
        match &self.support {
            SupportRule::Point(p) => format!("φ_{{{},{}}} = 1, zero elsewhere", p.n, p.m),
            s => format!(
                "φ_{{n,m}} = λ^{{{}}} φ_{{{},{}}} for {}",
                self.exponent, self.base.n, self.base.m, s
            ),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "twist": self.twist.tag(),
            "base": [self.base.n, self.base.m],
            "support": self.support.to_string(),
            "exponent": self.exponent.to_string(),
            "formula": self.formula(),
            "provenance": self.provenance,
        })
    }
}

fn family_name(family: &str, twist: Label, base: LatticePoint) -> String {
    format!("{family}^{}_{{{},{}}}", twist.tag(), base.n, base.m)
}

fn entry(
    name: String,
    twist: Label,
    base: (i64, i64),
    support: SupportRule,
    coeffs: [i64; 6],
    den: i64,
    provenance: Provenance,
) -> ClosedFormCocycle {
    ClosedFormCocycle {
        name,
        twist,
        base: LatticePoint::new(base.0, base.1),
        support,
        exponent: QuadraticRule::new(coeffs, den),
        provenance,
    }
}

fn mod3(r: i64) -> SupportRule {
    SupportRule::Lattice(vec![Congruence::new([-1, 1], r, 3)])
}

fn mod2_sum(r: i64) -> SupportRule {
    SupportRule::Lattice(vec![Congruence::new([1, 1], r, 2)])
}

fn parity(a: i64, b: i64) -> SupportRule {
    SupportRule::Lattice(vec![
        Congruence::new([1, 0], a, 2),
        Congruence::new([0, 1], b, 2),
    ])
}

/// The closed-form generators of the degree-0 kernel for one twist.
pub fn twist_catalog(twist: Label) -> Vec<ClosedFormCocycle> {
    use Provenance::{Derived, Stated};
    let e3 = |sign: i64, prov| {
        // sign = 1: (n^2 + m^2 + 4nm - [base off origin]) / 6; sign = -1: (-(m-n)^2 + [..]) / 6
        let quad = if sign > 0 {
            [1, 1, 4, 0, 0]
        } else {
            [-1, -1, 2, 0, 0]
        };
        [(0, 0, 0), (0, 1, 1), (0, -1, 2)]
            .into_iter()
            .map(|(n, m, r)| {
                let f = if (n, m) == (0, 0) { 0 } else { -sign };
                let [a, b, c, d, e] = quad;
                entry(
                    family_name("E", twist, LatticePoint::new(n, m)),
                    twist,
                    (n, m),
                    mod3(r),
                    [a, b, c, d, e, f],
                    6,
                    prov,
                )
            })
            .collect::<Vec<_>>()
    };
    let f4 = |sign: i64, prov| {
        let quad = if sign > 0 {
            [1, 1, 2, 0, 0]
        } else {
            [-1, -1, 2, 0, 0]
        };
        [(0, 0, 0), (0, 1, 1)]
            .into_iter()
            .map(|(n, m, r)| {
                let f = if (n, m) == (0, 0) { 0 } else { -sign };
                let [a, b, c, d, e] = quad;
                entry(
                    family_name("F", twist, LatticePoint::new(n, m)),
                    twist,
                    (n, m),
                    mod2_sum(r),
                    [a, b, c, d, e, f],
                    4,
                    prov,
                )
            })
            .collect::<Vec<_>>()
    };
    match twist {
        Label::One => vec![entry(
            "tau".into(),
            twist,
            (0, 0),
            SupportRule::Point(LatticePoint::ORIGIN),
            [0; 6],
            1,
            Stated,
        )],
        Label::Omega => e3(1, Stated),
        Label::Omega2 => e3(-1, Derived),
        Label::I => f4(1, Stated),
        Label::NegI => f4(-1, Derived),
        Label::NegOne => [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, -1)]
            .into_iter()
            .map(|(n, m, f)| {
                entry(
                    format!("D_{{{n},{m}}}"),
                    twist,
                    (n, m),
                    parity(n, m),
                    [0, 0, 1, 0, 0, f],
                    2,
                    Stated,
                )
            })
            .collect(),
        Label::NegOmega => vec![entry(
            family_name("G", twist, LatticePoint::ORIGIN),
            twist,
            (0, 0),
            SupportRule::Lattice(vec![]),
            [-1, -1, 0, 0, 0, 0],
            2,
            Stated,
        )],
        Label::NegOmega2 => vec![entry(
            family_name("G", twist, LatticePoint::ORIGIN),
            twist,
            (0, 0),
            SupportRule::Lattice(vec![]),
            [1, 1, 2, 0, 0, 0],
            2,
            Derived,
        )],
    }
}

/// Cocycles for every element of Gamma, identity first.
pub fn catalog(gamma: Gamma) -> Vec<ClosedFormCocycle> {
    crate::complexes::group_twists(gamma)
        .iter()
        .flat_map(|t| twist_catalog(t.label()))
        .collect()
}

pub fn find(gamma: Gamma, name: &str) -> Option<ClosedFormCocycle> {
    catalog(gamma).into_iter().find(|c| c.name == name)
}

/// Window used for pointwise membership checks.
pub const MEMBERSHIP_WINDOW: i64 = 20;

/// Check both degree-0 recurrences of the cocycle's twist, symbolically on
/// the exponent polynomial and pointwise on |n|, |m| <= 20.
pub fn verify_membership(c: &ClosedFormCocycle) -> bool {
    verify_polynomial(c) && verify_pointwise(c, MEMBERSHIP_WINDOW)
}

pub fn verify_pointwise(c: &ClosedFormCocycle, w: i64) -> bool {
    let tw = TwistSpec::new(c.twist);
    for j in 1..=2 {
        for n in -w - 2..=w + 2 {
            for m in -w - 2..=w + 2 {
                let rel = kernel_relation(&tw, j, LatticePoint::new(n, m));
                if rel.terms.iter().any(|(p, _)| p.max_abs() > w) {
                    continue;
                }
                let total = rel.terms.iter().fold(Coefficient::zero(), |acc, (p, wt)| {
                    &acc + &(wt * &c.value_or_zero(*p))
                });
                if !total.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

type Lin = [Rational; 3];
type Quad = [Rational; 6];

fn lin_mul(a: &Lin, b: &Lin) -> Quad {
    [
        &a[1] * &b[1],
        &a[2] * &b[2],
        &a[1] * &b[2] + &a[2] * &b[1],
        &a[0] * &b[1] + &a[1] * &b[0],
        &a[0] * &b[2] + &a[2] * &b[0],
        &a[0] * &b[0],
    ]
}

fn quad_add(a: &mut Quad, b: &Quad, scale: &Rational) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y * scale;
    }
}

/// q(x, y) with x, y affine in the variables (N, M).
fn compose(q: &Quad, x: &Lin, y: &Lin) -> Quad {
    let mut out: Quad = std::array::from_fn(|_| int(0));
    let one: Lin = [int(1), int(0), int(0)];
    quad_add(&mut out, &lin_mul(x, x), &q[0]);
    quad_add(&mut out, &lin_mul(y, y), &q[1]);
    quad_add(&mut out, &lin_mul(x, y), &q[2]);
    quad_add(&mut out, &lin_mul(x, &one), &q[3]);
    quad_add(&mut out, &lin_mul(y, &one), &q[4]);
    quad_add(&mut out, &lin_mul(&one, &one), &q[5]);
    out
}

fn shifted(q: &Quad, v: LatticePoint) -> Quad {
    compose(
        q,
        &[int(-v.n), int(1), int(0)],
        &[int(-v.m), int(0), int(1)],
    )
}

/// For each slot, P - (a,b) and P - e_j lie in the same coset of the support
/// lattice, and Q(P - (a,b)) + exp A(P) - Q(P - e_j) - exp B(P) vanishes
/// identically in (N, M).
pub fn verify_polynomial(c: &ClosedFormCocycle) -> bool {
    let cs = match &c.support {
        SupportRule::Point(_) => return verify_pointwise(c, 2),
        SupportRule::Lattice(cs) => cs,
    };
    let tw = TwistSpec::new(c.twist);
    let q = c.exponent.rational_coeffs();
    for j in 1..=2 {
        let (coef, ab) = tw.image(j);
        let Some(cm) = coef.as_monomial() else {
            return false;
        };
        if !cm.coef.is_one() {
            return false;
        }
        let ej = if j == 1 {
            LatticePoint::new(1, 0)
        } else {
            LatticePoint::new(0, 1)
        };
        let step = ab - ej;
        if !cs
            .iter()
            .all(|k| (k.c[0] * step.n + k.c[1] * step.m).rem_euclid(k.k) == 0)
        {
            return false;
        }
        let mut diff = shifted(&q, ab);
        // exp A = exp c + b (N - a)
        diff[5] += &cm.exp - int(ab.m * ab.n);
        diff[3] += int(ab.m);
        let right = shifted(&q, ej);
        quad_add(&mut diff, &right, &int(-1));
        if j == 1 {
            diff[4] -= int(1);
        }
        if diff.iter().any(|x| !x.is_zero()) {
            return false;
        }
    }
    true
}

/// Generator of Gamma acting on cocycles.
pub fn group_generator(gamma: Gamma) -> GroupMatrix {
    match gamma {
        Gamma::Z2 => GroupMatrix::from_label(Label::NegOne),
        Gamma::Z3 => GroupMatrix::from_label(Label::Omega),
        // U1 -> U2^{-1}, U2 -> U1
        Gamma::Z4 => GroupMatrix::from_label(Label::NegI),
        Gamma::Z6 => GroupMatrix::from_label(Label::NegOmega),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualActionError {
    #[error("{generator} maps {cocycle} outside the given cocycles")]
    NoMatch { generator: String, cocycle: String },
}

/// Window on which pushed-forward cocycles are compared.
pub const DUAL_WINDOW: i64 = 6;

/// Push c forward along g (phi_p U^p -> phi_p g.U^p) and read the result as
/// scalar * target for a target among `candidates`.
pub fn dual_action(
    g: &GroupMatrix,
    c: &ClosedFormCocycle,
    candidates: &[ClosedFormCocycle],
) -> Result<(Coefficient, String), DualActionError> {
    let fail = || DualActionError::NoMatch {
        generator: g.to_string(),
        cocycle: c.name.clone(),
    };
    let push = |p: LatticePoint| -> Option<(LatticePoint, Coefficient)> {
        let v = c.value(p)?;
        let (q, img) = g.monomial_image(p);
        Some((img, &v * &Coefficient::lambda(q)))
    };
    let (gb, vb) = push(c.base).ok_or_else(fail)?;
    let target = candidates
        .iter()
        .find(|t| t.support.contains(gb))
        .ok_or_else(fail)?;
    let s = vb
        .div_exact(&target.value(gb).ok_or_else(fail)?)
        .ok_or_else(fail)?;
    let w = DUAL_WINDOW;
    for n in -w..=w {
        for m in -w..=w {
            let p = LatticePoint::new(n, m);
            let gp = g.apply_point(p);
            match push(p) {
                Some((_, v)) => {
                    if target.value(gp).map(|t| &s * &t) != Some(v) {
                        return Err(fail());
                    }
                }
                None => {
                    if target.support.contains(gp) {
                        return Err(fail());
                    }
                }
            }
        }
    }
    Ok((s, target.name.clone()))
}

/// sum over supp(x) of c_{-a,-b} lambda^{-ab} x_{a,b}: the U^0 coefficient
/// of the formal product c x.
pub fn eval(c: &ClosedFormCocycle, x: &TorusElement) -> Coefficient {
    x.terms()
        .fold(Coefficient::zero(), |acc, (p, v)| match c.value(-*p) {
            Some(cv) => &acc + &(&(&cv * &Coefficient::lambda(int(-p.n * p.m))) * v),
            None => acc,
        })
}

pub fn catalog_json(gamma: Gamma) -> serde_json::Value {
    serde_json::Value::Array(catalog(gamma).iter().map(|c| c.to_json()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn get(label: Label, name: &str) -> ClosedFormCocycle {
        twist_catalog(label)
            .into_iter()
            .find(|c| c.name == name)
            .unwrap()
    }

    #[test]
    fn catalog_sizes() {
        assert_eq!(catalog(Gamma::Z3).len(), 7);
        assert_eq!(catalog(Gamma::Z4).len(), 1 + 2 + 4 + 2);
        assert_eq!(catalog(Gamma::Z6).len(), 1 + 3 + 3 + 4 + 1 + 1);
    }

    #[test]
    fn e_omega_at_3_3() {
        let e = get(Label::Omega, "E^w_{0,0}");
        assert_eq!(
            e.value(LatticePoint::new(3, 3)),
            Some(Coefficient::lambda(int(9)))
        );
        assert_eq!(e.value(LatticePoint::new(1, 0)), None);
    }

    #[test]
    fn tau_is_a_point_mass() {
        let t = get(Label::One, "tau");
        assert_eq!(t.value(LatticePoint::ORIGIN), Some(Coefficient::one()));
        assert_eq!(t.value(LatticePoint::new(0, 1)), None);
    }

    #[test]
    fn all_entries_are_members() {
        for l in Label::ALL {
            for c in twist_catalog(l) {
                assert!(verify_polynomial(&c), "{} polynomial", c.name);
                assert!(verify_pointwise(&c, 8), "{} pointwise", c.name);
            }
        }
    }

    #[test]
    fn perturbed_rule_fails() {
        let mut e = get(Label::Omega, "E^w_{0,0}");
        e.exponent.den = 5;
        assert!(!verify_polynomial(&e));
        assert!(!verify_pointwise(&e, 6));
    }

    #[test]
    fn dual_action_facts() {
        let w = GroupMatrix::from_label(Label::Omega);
        let es = twist_catalog(Label::Omega);
        assert_eq!(
            dual_action(&w, &es[0], &es).unwrap(),
            (Coefficient::one(), "E^w_{0,0}".to_string())
        );
        let g = group_generator(Gamma::Z6);
        let e01 = get(Label::Omega, "E^w_{0,1}");
        assert_eq!(
            dual_action(&g, &e01, &es).unwrap(),
            (Coefficient::one(), "E^w_{0,-1}".to_string())
        );
        let ds = twist_catalog(Label::NegOne);
        let d01 = get(Label::NegOne, "D_{0,1}");
        assert_eq!(
            dual_action(&g, &d01, &ds).unwrap(),
            (Coefficient::lambda(rat(1, 2)), "D_{1,1}".to_string())
        );
    }

    #[test]
    fn eval_examples() {
        let d11 = get(Label::NegOne, "D_{1,1}");
        let x = TorusElement::u(1, 1).scale(&Coefficient::term(rat(-1, 4), 0, rat(1, 2)));
        assert_eq!(eval(&d11, &x), Coefficient::term(rat(-1, 4), 0, rat(-1, 2)));
        let e = get(Label::Omega, "E^w_{0,0}");
        assert_eq!(eval(&e, &TorusElement::one()), Coefficient::one());
        assert!(eval(&e, &TorusElement::zero()).is_zero());
    }

    #[test]
    fn support_from_points() {
        let pts: Vec<LatticePoint> = (-3..=3)
            .flat_map(|n| (-3..=3).map(move |m| LatticePoint::new(n, m)))
            .filter(|p| (p.m - p.n).rem_euclid(3) == 1)
            .collect();
        let s = SupportRule::from_points(LatticePoint::new(0, 1), &pts).unwrap();
        assert_eq!(s, mod3(1));
        assert_eq!(s.to_string(), "m - n ≡ 1 (mod 3)");
    }

    #[test]
    fn rule_display() {
        let e = get(Label::Omega, "E^w_{0,1}");
        assert_eq!(e.exponent.to_string(), "(n^2 + m^2 + 4nm - 1)/6");
    }
}
