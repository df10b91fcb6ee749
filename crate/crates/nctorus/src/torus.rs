//! The algebraic noncommutative torus: finitely supported Laurent sums in
//! U1, U2 with U2 U1 = lambda U1 U2, and the SL(2,Z) action on it.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{int, rat, Coefficient, ParseError, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct LatticePoint {
    pub n: i64,
    pub m: i64,
}

impl std::ops::Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.n + o.n, self.m + o.m)
    }
}

impl std::ops::Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.n - o.n, self.m - o.m)
    }
}

impl std::ops::Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.n, -self.m)
    }
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { n: 0, m: 0 };

    pub fn new(n: i64, m: i64) -> Self {
        LatticePoint { n, m }
    }

    pub fn scale(self, k: i64) -> Self {
        LatticePoint::new(k * self.n, k * self.m)
    }

    pub fn max_abs(self) -> i64 {
        self.n.abs().max(self.m.abs())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// Phase exponent in (U1^n U2^m)(U1^p U2^q) = lambda^{mp} U1^{n+p} U2^{m+q}.
pub fn commutation_exponent(a: LatticePoint, b: LatticePoint) -> i64 {
    a.m * b.n
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TorusElement {
    terms: BTreeMap<LatticePoint, Coefficient>,
}

impl TorusElement {
    pub fn zero() -> Self {
        TorusElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(LatticePoint::ORIGIN, Coefficient::one())
    }

    pub fn scalar(c: Coefficient) -> Self {
        Self::monomial(LatticePoint::ORIGIN, c)
    }

    pub fn monomial(p: LatticePoint, c: Coefficient) -> Self {
        let mut t = Self::zero();
        t.add_term(p, c);
        t
    }

    /// U1^n U2^m
    pub fn u(n: i64, m: i64) -> Self {
        Self::monomial(LatticePoint::new(n, m), Coefficient::one())
    }

    pub fn u1() -> Self {
        Self::u(1, 0)
    }

    pub fn u2() -> Self {
        Self::u(0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LatticePoint, Coefficient)>) -> Self {
        let mut t = Self::zero();
        for (p, c) in terms {
            t.add_term(p, c);
        }
        t
    }

    pub fn add_term(&mut self, p: LatticePoint, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&p) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(p, s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Coefficient)> {
        self.terms.iter()
    }

    pub fn get(&self, p: LatticePoint) -> Coefficient {
        self.terms.get(&p).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, p: LatticePoint) -> Option<&Coefficient> {
        self.terms.get(&p)
    }

    pub fn support(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &TorusElement) -> TorusElement {
        let mut r = self.clone();
        for (p, c) in &o.terms {
            r.add_term(*p, c.clone());
        }
        r
    }

    pub fn neg(&self) -> TorusElement {
        TorusElement {
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }

    pub fn sub(&self, o: &TorusElement) -> TorusElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coefficient) -> TorusElement {
        TorusElement::from_terms(self.terms.iter().map(|(p, x)| (*p, x * c)))
    }

    pub fn mul(&self, o: &TorusElement) -> TorusElement {
        let mut r = TorusElement::zero();
        for (p, a) in &self.terms {
            for (q, b) in &o.terms {
                let phase = Coefficient::lambda(int(commutation_exponent(*p, *q)));
                r.add_term(*p + *q, &(a * b) * &phase);
            }
        }
        r
    }

    /// (c U1^n U2^m)* = conj(c) lambda^{nm} U1^{-n} U2^{-m}
    pub fn star(&self) -> TorusElement {
        TorusElement::from_terms(
            self.terms
                .iter()
                .map(|(p, c)| (-*p, &c.conj() * &Coefficient::lambda(int(p.n * p.m)))),
        )
    }

    /// Multiply each term by a function of its exponent.
    pub fn map_terms(&self, f: impl Fn(LatticePoint, &Coefficient) -> Coefficient) -> TorusElement {
        TorusElement::from_terms(self.terms.iter().map(|(p, c)| (*p, f(*p, c))))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(
            self.terms
                .iter()
                .map(|(p, c)| JsonTerm {
                    n: p.n,
                    m: p.m,
                    coef: c.to_string(),
                })
                .collect::<Vec<_>>(),
        )
        .expect("plain data serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TorusElement, TorusJsonError> {
        let terms: Vec<JsonTerm> = serde_json::from_value(v.clone())?;
        let mut t = TorusElement::zero();
        for j in terms {
            t.add_term(LatticePoint::new(j.n, j.m), Coefficient::parse(&j.coef)?);
        }
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    n: i64,
    m: i64,
    coef: String,
}

#[derive(Debug, thiserror::Error)]
pub enum TorusJsonError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Coefficient(#[from] ParseError),
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                if p.n == 0 && p.m == 0 {
                    format!("[{}]", c)
                } else {
                    format!("[{}]U{}", c, p)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "-1")]
    NegOne,
    #[serde(rename = "w")]
    Omega,
    #[serde(rename = "w2")]
    Omega2,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "-i")]
    NegI,
    #[serde(rename = "-w")]
    NegOmega,
    #[serde(rename = "-w2")]
    NegOmega2,
}

impl Label {
    pub const ALL: [Label; 8] = [
        Label::One,
        Label::Omega,
        Label::Omega2,
        Label::I,
        Label::NegI,
        Label::NegOne,
        Label::NegOmega,
        Label::NegOmega2,
    ];

    /// Short ASCII tag used on the command line and in file names.
    pub fn tag(self) -> &'static str {
        match self {
            Label::One => "1",
            Label::NegOne => "-1",
            Label::Omega => "w",
            Label::Omega2 => "w2",
            Label::I => "i",
            Label::NegI => "-i",
            Label::NegOmega => "-w",
            Label::NegOmega2 => "-w2",
        }
    }

    pub fn from_tag(s: &str) -> Option<Label> {
        Label::ALL.into_iter().find(|l| l.tag() == s)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::One => "1",
            Label::NegOne => "-1",
            Label::Omega => "ω",
            Label::Omega2 => "ω²",
            Label::I => "i",
            Label::NegI => "-i",
            Label::NegOmega => "-ω",
            Label::NegOmega2 => "-ω²",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

pub type Mat2 = [[i64; 2]; 2];

pub fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

const IDENTITY: Mat2 = [[1, 0], [0, 1]];
const OMEGA: Mat2 = [[0, 1], [-1, -1]];
const MAT_I: Mat2 = [[0, -1], [1, 0]];
const NEG_OMEGA: Mat2 = [[0, -1], [1, 1]];

fn negate(a: Mat2) -> Mat2 {
    [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]]
}

/// One of the eight labelled elements of SL(2,Z) of finite order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupMatrix {
    entries: Mat2,
    label: Label,
}

impl GroupMatrix {
    pub fn from_label(label: Label) -> Self {
        let entries = match label {
            Label::One => IDENTITY,
            Label::NegOne => negate(IDENTITY),
            Label::Omega => OMEGA,
            Label::Omega2 => mat_mul(OMEGA, OMEGA),
            Label::I => MAT_I,
            Label::NegI => negate(MAT_I),
            Label::NegOmega => NEG_OMEGA,
            Label::NegOmega2 => negate(mat_mul(OMEGA, OMEGA)),
        };
        GroupMatrix { entries, label }
    }

    pub fn from_matrix(entries: Mat2) -> Option<Self> {
        Label::ALL
            .into_iter()
            .map(Self::from_label)
            .find(|g| g.entries == entries)
    }

    pub fn all() -> Vec<GroupMatrix> {
        Label::ALL.into_iter().map(Self::from_label).collect()
    }

    pub fn entries(&self) -> Mat2 {
        self.entries
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn det(&self) -> i64 {
        let e = self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn compose(&self, o: &GroupMatrix) -> GroupMatrix {
        GroupMatrix::from_matrix(mat_mul(self.entries, o.entries))
            .expect("the eight labels form a group")
    }

    pub fn inverse(&self) -> GroupMatrix {
        let e = self.entries;
        GroupMatrix::from_matrix([[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]])
            .expect("closed under inverse")
    }

    pub fn order(&self) -> usize {
        let mut g = *self;
        let mut k = 1;
        while g.entries != IDENTITY {
            g = g.compose(self);
            k += 1;
        }
        k
    }

    /// Image of the exponent vector (n, m) of U1^n U2^m.
    pub fn apply_point(&self, p: LatticePoint) -> LatticePoint {
        let e = self.entries;
        LatticePoint::new(e[0][0] * p.n + e[0][1] * p.m, e[1][0] * p.n + e[1][1] * p.m)
    }

    /// g . U1^n U2^m = lambda^{phase} U1^{n'} U2^{m'}: returns the phase
    /// exponent and the image point. Built from g.U1 = lambda^{g11 g21/2}
    /// U1^{g11} U2^{g21}, g.U2 = lambda^{g12 g22/2} U1^{g12} U2^{g22} and the
    /// normal-ordered power rule.
    pub fn monomial_image(&self, p: LatticePoint) -> (Rational, LatticePoint) {
        let [[a, c], [b, d]] = self.entries;
        let n = p.n;
        let m = p.m;
        let first = rat(a * b * n * n, 2);
        let second = rat(c * d * m * m, 2);
        let cross = int(b * n * c * m);
        (first + second + cross, self.apply_point(p))
    }

    pub fn image_of_generator(&self, j: usize) -> TorusElement {
        let e = self.entries;
        let (x, y) = if j == 1 {
            (e[0][0], e[1][0])
        } else {
            (e[0][1], e[1][1])
        };
        TorusElement::monomial(LatticePoint::new(x, y), Coefficient::lambda(rat(x * y, 2)))
    }
}

impl fmt::Display for GroupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.entries;
        write!(
            f,
            "{} = [[{},{}],[{},{}]]",
            self.label, e[0][0], e[0][1], e[1][0], e[1][1]
        )
    }
}

/// The automorphism of the torus algebra induced by g.
pub fn act(g: &GroupMatrix, x: &TorusElement) -> TorusElement {
    TorusElement::from_terms(x.terms().map(|(p, c)| {
        let (q, img) = g.monomial_image(*p);
        (img, c * &Coefficient::lambda(q))
    }))
}

/// (c U1^a U2^b)^n for any integer n.
pub fn monomial_power(c: &Coefficient, a: i64, b: i64, n: i64) -> TorusElement {
    let cn = if n >= 0 {
        c.pow(n as u32)
    } else {
        c.inv()
            .expect("negative powers need an invertible coefficient")
            .pow((-n) as u32)
    };
    TorusElement::monomial(
        LatticePoint::new(n * a, n * b),
        &cn * &Coefficient::lambda(rat(a * b * n * (n - 1), 2)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_relation() {
        let lhs = TorusElement::u2().mul(&TorusElement::u1());
        let rhs = TorusElement::u(1, 1).scale(&Coefficient::lambda(int(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn labels_match_matrices() {
        assert_eq!(
            GroupMatrix::from_label(Label::Omega).entries(),
            [[0, 1], [-1, -1]]
        );
        assert_eq!(
            GroupMatrix::from_label(Label::I).entries(),
            [[0, -1], [1, 0]]
        );
        assert_eq!(
            GroupMatrix::from_label(Label::NegOmega).entries(),
            [[0, -1], [1, 1]]
        );
        for g in GroupMatrix::all() {
            assert_eq!(g.det(), 1);
            assert_eq!(
                GroupMatrix::from_matrix(g.entries()).unwrap().label(),
                g.label()
            );
        }
        let orders: Vec<usize> = GroupMatrix::all().iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![1, 3, 3, 4, 4, 2, 6, 6]);
    }

    #[test]
    fn omega_sends_u1_to_u2_inverse() {
        let g = GroupMatrix::from_label(Label::Omega);
        assert_eq!(act(&g, &TorusElement::u1()), TorusElement::u(0, -1));
    }

    #[test]
    fn minus_omega_on_u2() {
        let g = GroupMatrix::from_label(Label::NegOmega);
        let expect =
            TorusElement::monomial(LatticePoint::new(-1, 1), Coefficient::lambda(rat(-1, 2)));
        assert_eq!(act(&g, &TorusElement::u2()), expect);
    }

    #[test]
    fn matrix_i_is_the_inverse_of_the_prose_rotation() {
        // the matrix formula for [[0,-1],[1,0]] gives U1 -> U2, U2 -> U1^{-1}
        let g = GroupMatrix::from_label(Label::I);
        assert_eq!(act(&g, &TorusElement::u1()), TorusElement::u2());
        assert_eq!(act(&g, &TorusElement::u2()), TorusElement::u(-1, 0));
    }

    #[test]
    fn star_of_u1u2() {
        let x = TorusElement::u(1, 1);
        assert_eq!(
            x.star(),
            TorusElement::u(-1, -1).scale(&Coefficient::lambda(int(1)))
        );
        assert_eq!(TorusElement::u1().star(), TorusElement::u(-1, 0));
    }

    #[test]
    fn json_round_trip() {
        let x = TorusElement::from_terms([
            (
                LatticePoint::new(1, -2),
                Coefficient::term(rat(-1, 4), 3, rat(-1, 2)),
            ),
            (LatticePoint::new(0, 0), Coefficient::one()),
        ]);
        let v = x.to_json();
        assert_eq!(TorusElement::from_json(&v).unwrap(), x);
    }

    #[test]
    fn monomial_power_negative() {
        let c = Coefficient::lambda(rat(1, 2));
        let p = monomial_power(&c, 1, -1, -2);
        let base_inv = TorusElement::monomial(LatticePoint::new(1, -1), c.clone()).star();
        // for a unitary monomial the inverse is its adjoint
        assert_eq!(p, base_inv.mul(&base_inv));
    }
}
