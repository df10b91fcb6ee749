//! Exact scalars: the cyclotomic field Q(z) with z = e^{2 pi i/12}, and
//! finite sums of cyclotomic numbers times rational powers of the formal
//! unit lambda.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// An element of Q(z), z a primitive 12th root of unity, stored in the
/// basis 1, z, z^2, z^3 and reduced with z^4 = z^2 - 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cyclotomic {
    c: [Rational; 4],
}

impl Cyclotomic {
    pub fn new(c: [Rational; 4]) -> Self {
        Cyclotomic { c }
    }

    pub fn zero() -> Self {
        Cyclotomic {
            c: [int(0), int(0), int(0), int(0)],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(int(1))
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic {
            c: [r, int(0), int(0), int(0)],
        }
    }

    /// z^k for any integer k; z^12 = 1.
    pub fn z_pow(k: i64) -> Self {
        let k = k.rem_euclid(12);
        let z = Cyclotomic {
            c: [int(0), int(1), int(0), int(0)],
        };
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * &z;
        }
        acc
    }

    /// zeta^k where zeta = e^{2 pi i/6} = z^2.
    pub fn zeta_pow(k: i64) -> Self {
        Self::z_pow(2 * k)
    }

    /// i = z^3.
    pub fn i() -> Self {
        Self::z_pow(3)
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            c: [
                &self.c[0] * r,
                &self.c[1] * r,
                &self.c[2] * r,
                &self.c[3] * r,
            ],
        }
    }

    /// The Galois automorphism z -> z^k, k a unit mod 12.
    pub fn galois(&self, k: i64) -> Self {
        let mut acc = Self::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if !cj.is_zero() {
                acc = &acc + &Self::z_pow(j as i64 * k).scale(cj);
            }
        }
        acc
    }

    /// Complex conjugation: z -> z^{-1} = z^3 - z.
    pub fn conj(&self) -> Self {
        self.galois(11)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        let p = &(&(self * &self.galois(5)) * &self.galois(7)) * &self.galois(11);
        debug_assert!(p.c[1].is_zero() && p.c[2].is_zero() && p.c[3].is_zero());
        p.c[0].clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let rest = &(&self.galois(5) * &self.galois(7)) * &self.galois(11);
        let n = self.norm();
        Some(rest.scale(&(int(1) / n)))
    }

    /// If this is r * z^k for a rational r, return (r, k) with 0 <= k < 6
    /// (z^6 = -1 is folded into the sign of r).
    pub fn as_scaled_root(&self) -> Option<(Rational, i64)> {
        if self.is_zero() {
            return None;
        }
        for k in 0..6 {
            let q = self * &Self::z_pow(-k);
            if q.c[1].is_zero() && q.c[2].is_zero() && q.c[3].is_zero() {
                return Some((q.c[0].clone(), k));
            }
        }
        None
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for cj in &self.c {
            acc += p * rat_to_f64(cj);
            p *= z;
        }
        acc
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        Cyclotomic {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self + &(-o)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        let mut r: [Rational; 7] = std::array::from_fn(|_| int(0));
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if !o.c[j].is_zero() {
                    r[i + j] += &self.c[i] * &o.c[j];
                }
            }
        }
        // z^k = z^{k-2} - z^{k-4}
        for k in (4..7).rev() {
            let v = std::mem::replace(&mut r[k], int(0));
            if !v.is_zero() {
                r[k - 2] += &v;
                r[k - 4] -= &v;
            }
        }
        let [a, b, c, d, ..] = r;
        Cyclotomic { c: [a, b, c, d] }
    }
}

/// A single term c * lambda^q with c a nonzero cyclotomic number.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub coef: Cyclotomic,
    pub exp: Rational,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            coef: Cyclotomic::one(),
            exp: int(0),
        }
    }

    pub fn lambda(q: Rational) -> Self {
        Monomial {
            coef: Cyclotomic::one(),
            exp: q,
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            coef: &self.coef * &o.coef,
            exp: &self.exp + &o.exp,
        }
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            coef: self.coef.inv().expect("monomial coefficient is nonzero"),
            exp: -&self.exp,
        }
    }

    pub fn neg(&self) -> Monomial {
        Monomial {
            coef: -&self.coef,
            exp: self.exp.clone(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coef.is_one() && self.exp.is_zero()
    }

    pub fn to_coefficient(&self) -> Coefficient {
        Coefficient::monomial(self.coef.clone(), self.exp.clone())
    }
}

/// Finite sum of cyclotomic numbers times rational powers of lambda.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Coefficient {
    terms: BTreeMap<Rational, Cyclotomic>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(int(1))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::monomial(Cyclotomic::from_rational(r), int(0))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_cyclotomic(c: Cyclotomic) -> Self {
        Self::monomial(c, int(0))
    }

    /// lambda^q
    pub fn lambda(q: Rational) -> Self {
        Self::monomial(Cyclotomic::one(), q)
    }

    pub fn monomial(c: Cyclotomic, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(q, c);
        }
        Coefficient { terms }
    }

    /// r * z^k * lambda^q, the common shape of every constant in the tables.
    pub fn term(r: Rational, k: i64, q: Rational) -> Self {
        Self::monomial(Cyclotomic::z_pow(k).scale(&r), q)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Coefficient {
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q.clone(), c.scale(r)))
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            terms: self.terms.iter().map(|(q, c)| (-q, c.conj())).collect(),
        }
    }

    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (q, c) = self.terms.iter().next()?;
        Some(Monomial {
            coef: c.clone(),
            exp: q.clone(),
        })
    }

    /// Inverse, available only for single-term values.
    pub fn inv(&self) -> Option<Self> {
        self.as_monomial().map(|m| m.inv().to_coefficient())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in the Laurent ring; None when the divisor does not
    /// divide.
    pub fn div_exact(&self, d: &Coefficient) -> Option<Coefficient> {
        if d.is_zero() {
            return None;
        }
        if let Some(m) = d.as_monomial() {
            return Some(self * &m.inv().to_coefficient());
        }
        // clear denominators: exponents become integers in mu = lambda^{1/den}
        let mut den = BigInt::one();
        for q in self.terms.keys().chain(d.terms.keys()) {
            den = num_integer::lcm(den, q.denom().clone());
        }
        let to_int =
            |q: &Rational| -> BigInt { (q * BigRational::from_integer(den.clone())).to_integer() };
        let mut rem: BTreeMap<BigInt, Cyclotomic> = self
            .terms
            .iter()
            .map(|(q, c)| (to_int(q), c.clone()))
            .collect();
        let div: Vec<(BigInt, Cyclotomic)> = d
            .terms
            .iter()
            .map(|(q, c)| (to_int(q), c.clone()))
            .collect();
        let (dlead_e, dlead_c) = div.last().cloned().expect("nonzero divisor");
        let (dlow_e, _) = div.first().cloned().expect("nonzero divisor");
        let dlead_inv = dlead_c.inv().expect("nonzero");
        let floor = match rem.keys().next() {
            Some(low) => low - &dlow_e,
            None => return Some(Coefficient::zero()),
        };
        let mut quot: BTreeMap<BigInt, Cyclotomic> = BTreeMap::new();
        while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if &e - &dlead_e < floor {
                return None;
            }
            let qe = &e - &dlead_e;
            let qc = &c * &dlead_inv;
            for (de, dc) in &div {
                let k = &qe + de;
                let v = rem.remove(&k).unwrap_or_else(Cyclotomic::zero);
                let v = &v - &(&qc * dc);
                if !v.is_zero() {
                    rem.insert(k, v);
                }
            }
            quot.insert(qe, qc);
        }
        let denr = BigRational::from_integer(den);
        Some(Coefficient {
            terms: quot
                .into_iter()
                .map(|(e, c)| (BigRational::from_integer(e) / &denr, c))
                .collect(),
        })
    }

    /// Image under lambda -> e^{2 pi i theta}, z -> e^{pi i/6}.
    pub fn to_complex(&self, theta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (q, c) in &self.terms {
            let phase =
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta * rat_to_f64(q));
            acc += c.to_complex() * phase;
        }
        acc
    }

    fn insert_add(&mut self, q: Rational, c: Cyclotomic) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(q) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<Coefficient, ParseError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut acc = Self::zero();
        for term in s.split(" + ") {
            let mut r = int(1);
            let mut k = 0i64;
            let mut q = int(0);
            for f in term.split('*') {
                let f = f.trim();
                if let Some(e) = f.strip_prefix("z") {
                    k += if e.is_empty() {
                        1
                    } else {
                        parse_int(e.strip_prefix('^').ok_or_else(|| bad(f))?)?
                    };
                } else if let Some(e) = f.strip_prefix("L") {
                    q += if e.is_empty() {
                        int(1)
                    } else {
                        let e = e.strip_prefix('^').ok_or_else(|| bad(f))?;
                        parse_rational(e.trim_start_matches('(').trim_end_matches(')'))?
                    };
                } else {
                    r *= parse_rational(f.trim_start_matches('(').trim_end_matches(')'))?;
                }
            }
            acc = &acc + &Self::term(r, k, q);
        }
        Ok(acc)
    }
}

fn bad(s: &str) -> ParseError {
    ParseError(s.to_string())
}

fn parse_int(s: &str) -> Result<i64, ParseError> {
    s.parse().map_err(|_| bad(s))
}

fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse_int(b)?;
            if d == 0 {
                return Err(bad(s));
            }
            Ok(rat(parse_int(a)?, d))
        }
        None => Ok(int(parse_int(s)?)),
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("cannot parse coefficient fragment `{0}`")]
pub struct ParseError(pub String);

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, o: &Coefficient) -> Coefficient {
        let mut r = self.clone();
        for (q, c) in &o.terms {
            r.insert_add(q.clone(), c.clone());
        }
        r
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &Coefficient) -> Coefficient {
        self + &(-o)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &Coefficient) -> Coefficient {
        let mut r = Coefficient::zero();
        for (q1, c1) in &self.terms {
            for (q2, c2) in &o.terms {
                r.insert_add(q1 + q2, c1 * c2);
            }
        }
        r
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Cyclotomic);
owned_ops!(Coefficient);

fn fmt_rational_factor(r: &Rational) -> String {
    if r.is_integer() && !r.is_negative() {
        r.to_string()
    } else {
        format!("({})", r)
    }
}

impl fmt::Display for Coefficient {
    /// Canonical text: terms like `(-1/4)*z^3*L^(-1/2)` joined by ` + `,
    /// sorted by lambda exponent and then by power of z.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (q, c) in &self.terms {
            for (j, r) in c.coords().iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                let mut fs = Vec::new();
                if !(r.is_one() && (j > 0 || !q.is_zero())) {
                    fs.push(fmt_rational_factor(r));
                }
                match j {
                    0 => {}
                    1 => fs.push("z".to_string()),
                    _ => fs.push(format!("z^{}", j)),
                }
                if q.is_one() {
                    fs.push("L".to_string());
                } else if !q.is_zero() {
                    if q.is_integer() && q.is_positive() {
                        fs.push(format!("L^{}", q));
                    } else {
                        fs.push(format!("L^({})", q));
                    }
                }
                parts.push(fs.join("*"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Coefficient::from_cyclotomic(self.clone()).fmt(f)
    }
}

/// A quotient of coefficients, reduced only when the denominator is a single
/// term; equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct CoefficientFraction {
    num: Coefficient,
    den: Coefficient,
}

impl CoefficientFraction {
    pub fn new(num: Coefficient, den: Coefficient) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalized(num, den)
    }

    fn normalized(num: Coefficient, den: Coefficient) -> Self {
        if num.is_zero() {
            return CoefficientFraction {
                num,
                den: Coefficient::one(),
            };
        }
        match den.inv() {
            Some(di) => CoefficientFraction {
                num: &num * &di,
                den: Coefficient::one(),
            },
            None => CoefficientFraction { num, den },
        }
    }

    pub fn zero() -> Self {
        Self::from(Coefficient::zero())
    }

    pub fn one() -> Self {
        Self::from(Coefficient::one())
    }

    pub fn num(&self) -> &Coefficient {
        &self.num
    }

    pub fn den(&self) -> &Coefficient {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a plain coefficient when the division is exact.
    pub fn to_coefficient(&self) -> Option<Coefficient> {
        self.num.div_exact(&self.den)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn neg(&self) -> Self {
        CoefficientFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        Some(Self::normalized(&self.num * &o.den, &self.den * &o.num))
    }
}

impl From<Coefficient> for CoefficientFraction {
    fn from(c: Coefficient) -> Self {
        CoefficientFraction {
            num: c,
            den: Coefficient::one(),
        }
    }
}

impl PartialEq for CoefficientFraction {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for CoefficientFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

pub const MAX_SOLVE_DIM: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("system is inconsistent")]
    Inconsistent,
    #[error("system of size {rows}x{cols} exceeds the {max}x{max} limit")]
    TooLarge {
        rows: usize,
        cols: usize,
        max: usize,
    },
    #[error("right-hand side has length {rhs}, expected {rows}")]
    Shape { rows: usize, rhs: usize },
}

#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub particular: Vec<CoefficientFraction>,
    /// Kernel basis in reduced echelon form: one vector per free column,
    /// with a 1 in that column.
    pub kernel: Vec<Vec<CoefficientFraction>>,
    pub pivots: Vec<usize>,
}

impl SolutionSpace {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Exact Gaussian elimination over the fraction field of the coefficient
/// ring.
pub fn frac_solve(
    matrix: &[Vec<CoefficientFraction>],
    rhs: &[CoefficientFraction],
) -> Result<SolutionSpace, SolveError> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if rows > MAX_SOLVE_DIM || cols > MAX_SOLVE_DIM {
        return Err(SolveError::TooLarge {
            rows,
            cols,
            max: MAX_SOLVE_DIM,
        });
    }
    if rhs.len() != rows {
        return Err(SolveError::Shape {
            rows,
            rhs: rhs.len(),
        });
    }
    let mut a: Vec<Vec<CoefficientFraction>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.div(&piv).expect("pivot is nonzero");
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return Err(SolveError::Inconsistent);
    }
    let mut particular = vec![CoefficientFraction::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = a[i][cols].clone();
    }
    let mut kernel = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![CoefficientFraction::zero(); cols];
        v[f] = CoefficientFraction::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = a[i][f].neg();
        }
        kernel.push(v);
    }
    Ok(SolutionSpace {
        particular,
        kernel,
        pivots,
    })
}
