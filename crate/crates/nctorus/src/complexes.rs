//! Twisted two-step Hochschild complexes of the algebraic torus.
//!
//! Cochains are finitely supported functionals, stored as torus elements
//! (the symbol sum_{n,m} phi_{n,m} U1^n U2^m); bimodule actions become
//! left and right products with monomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cocycles::{self, QuadraticRule, SupportRule};
use crate::crossed::Gamma;
use crate::scalar::{
    frac_solve, int, Coefficient, CoefficientFraction, Cyclotomic, Monomial, Rational,
};
use crate::torus::{act, GroupMatrix, Label, LatticePoint, TorusElement};

pub type Functional = TorusElement;

/// A twist g, naming the automorphism used in the left module action.
///
/// The twists i and -i act by U1 -> U2^{-1}, U2 -> U1 and its inverse, as in
/// the displayed cochain maps; these are the matrix formulas of -i and i
/// respectively. All other twists use their own matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TwistSpec {
    label: Label,
    g: GroupMatrix,
}

impl TwistSpec {
    pub fn new(label: Label) -> Self {
        let matrix_label = match label {
            Label::I => Label::NegI,
            Label::NegI => Label::I,
            l => l,
        };
        TwistSpec {
            label,
            g: GroupMatrix::from_label(matrix_label),
        }
    }

    pub fn all() -> Vec<TwistSpec> {
        Label::ALL.into_iter().map(TwistSpec::new).collect()
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn matrix(&self) -> GroupMatrix {
        self.g
    }

    pub fn is_untwisted(&self) -> bool {
        self.label == Label::One
    }

    /// g . U_j = c U1^a U2^b, returned as (c, (a,b)).
    pub fn image(&self, j: usize) -> (Coefficient, LatticePoint) {
        let img = self.g.image_of_generator(j);
        let (p, c) = img.terms().next().expect("generator image is a monomial");
        (c.clone(), *p)
    }

    pub fn act(&self, x: &TorusElement) -> TorusElement {
        act(&self.g, x)
    }
}

impl fmt::Display for TwistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// The twist labels of the elements of Gamma, identity first.
pub fn group_twists(gamma: Gamma) -> Vec<TwistSpec> {
    let labels: &[Label] = match gamma {
        Gamma::Z2 => &[Label::One, Label::NegOne],
        Gamma::Z3 => &[Label::One, Label::Omega, Label::Omega2],
        Gamma::Z4 => &[Label::One, Label::I, Label::NegOne, Label::NegI],
        Gamma::Z6 => &[
            Label::One,
            Label::Omega,
            Label::Omega2,
            Label::NegOne,
            Label::NegOmega,
            Label::NegOmega2,
        ],
    };
    labels.iter().map(|l| TwistSpec::new(*l)).collect()
}

fn e(j: usize) -> LatticePoint {
    if j == 1 {
        LatticePoint::new(1, 0)
    } else {
        LatticePoint::new(0, 1)
    }
}

fn gen_image(tw: &TwistSpec, j: usize) -> TorusElement {
    tw.g.image_of_generator(j)
}

/// ((g.U1) phi - phi U1, (g.U2) phi - phi U2)
pub fn alpha1(tw: &TwistSpec, phi: &Functional) -> (Functional, Functional) {
    let slot = |j: usize| {
        gen_image(tw, j)
            .mul(phi)
            .sub(&phi.mul(&TorusElement::monomial(e(j), Coefficient::one())))
    };
    (slot(1), slot(2))
}

/// (g.U2) phi1 - lambda phi1 U2 - lambda (g.U1) phi2 + phi2 U1
pub fn alpha2(tw: &TwistSpec, phi1: &Functional, phi2: &Functional) -> Functional {
    let lam = Coefficient::lambda(int(1));
    let u1 = TorusElement::u1();
    let u2 = TorusElement::u2();
    gen_image(tw, 2)
        .mul(phi1)
        .sub(&phi1.mul(&u2).scale(&lam))
        .sub(&gen_image(tw, 1).mul(phi2).scale(&lam))
        .add(&phi2.mul(&u1))
}

/// A linear constraint sum_k w_k phi_{p_k} = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(LatticePoint, Coefficient)>,
}

impl Relation {
    fn from_element(x: &TorusElement) -> Self {
        Relation {
            terms: x.terms().map(|(p, c)| (*p, c.clone())).collect(),
        }
    }
}

/// The constraint from the coefficient of U^P in (g.U_j) phi - phi U_j.
pub fn kernel_relation(tw: &TwistSpec, j: usize, p: LatticePoint) -> Relation {
    let (c, ab) = tw.image(j);
    let a_weight = &c * &Coefficient::lambda(int(ab.m * (p.n - ab.n)));
    let q = p - e(j);
    let b_weight = if j == 1 {
        Coefficient::lambda(int(q.m))
    } else {
        Coefficient::one()
    };
    let rel = TorusElement::from_terms([(p - ab, a_weight), (q, -b_weight)]);
    Relation::from_element(&rel)
}

/// phi_{x + lhs} = coef lambda^{alpha . x + beta} phi_{x + rhs}, with
/// x = (n, m); when lhs == rhs it reads (1 - coef lambda^{...}) phi = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaRelation {
    pub lhs: (i64, i64),
    pub rhs: (i64, i64),
    #[serde(serialize_with = "ser_display")]
    pub coef: Cyclotomic,
    #[serde(serialize_with = "ser_pair")]
    pub alpha: (Rational, Rational),
    #[serde(serialize_with = "ser_display")]
    pub beta: Rational,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_pair<S: serde::Serializer>(v: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("({}, {})", v.0, v.1))
}

impl SchemaRelation {
    pub fn new(
        lhs: (i64, i64),
        rhs: (i64, i64),
        alpha: (Rational, Rational),
        beta: Rational,
    ) -> Self {
        SchemaRelation {
            lhs,
            rhs,
            coef: Cyclotomic::one(),
            alpha,
            beta,
        }
    }

    pub fn is_self_constraint(&self) -> bool {
        self.lhs == self.rhs
    }

    /// (difference of offsets, coef, alpha, constant) after shifting x so
    /// that the left index is x itself.
    fn canonical(&self) -> ((i64, i64), Cyclotomic, (Rational, Rational), Rational) {
        let d = (self.rhs.0 - self.lhs.0, self.rhs.1 - self.lhs.1);
        let beta =
            &self.beta - &(&self.alpha.0 * int(self.lhs.0) + &self.alpha.1 * int(self.lhs.1));
        (d, self.coef.clone(), self.alpha.clone(), beta)
    }

    fn swapped(&self) -> SchemaRelation {
        SchemaRelation {
            lhs: self.rhs,
            rhs: self.lhs,
            coef: self.coef.inv().expect("nonzero"),
            alpha: (-&self.alpha.0, -&self.alpha.1),
            beta: -&self.beta,
        }
    }

    /// Same constraint up to reindexing and exchanging the two sides.
    pub fn equivalent(&self, o: &SchemaRelation) -> bool {
        let c = self.canonical();
        c == o.canonical() || c == o.swapped().canonical()
    }
}

fn fmt_index(v: &str, k: i64) -> String {
    match k {
        0 => v.to_string(),
        k if k > 0 => format!("{v}+{k}"),
        k => format!("{v}{k}"),
    }
}

fn fmt_exponent(alpha: &(Rational, Rational), beta: &Rational) -> String {
    let zero = int(0);
    let mut s = String::new();
    for (c, v) in [(&alpha.1, "m"), (&alpha.0, "n")] {
        if c == &zero {
            continue;
        }
        let mag = num_traits::Signed::abs(c);
        let sign = if c < &zero {
            "-"
        } else if s.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = if mag == int(1) {
            String::new()
        } else {
            mag.to_string()
        };
        s.push_str(&format!("{sign}{mag}{v}"));
    }
    if beta != &zero {
        let sign = if beta < &zero {
            "-"
        } else if s.is_empty() {
            ""
        } else {
            "+"
        };
        s.push_str(&format!("{sign}{}", num_traits::Signed::abs(beta)));
    }
    s
}

impl fmt::Display for SchemaRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = |o: (i64, i64)| format!("φ_{{{},{}}}", fmt_index("n", o.0), fmt_index("m", o.1));
        let exp = fmt_exponent(&self.alpha, &self.beta);
        let coef = if self.coef.is_one() {
            String::new()
        } else {
            format!("({}) ", self.coef)
        };
        let lam = if exp.is_empty() {
            String::new()
        } else {
            format!("λ^{{{exp}}} ")
        };
        if self.is_self_constraint() {
            write!(f, "(1 - {coef}{lam}) {} = 0", idx(self.lhs))
        } else {
            write!(f, "{} = {coef}{lam}{}", idx(self.lhs), idx(self.rhs))
        }
    }
}

/// The two parametric recurrences of the degree-0 kernel, one per slot,
/// indexed by the output point (n, m).
pub fn derive_relations(tw: &TwistSpec) -> Vec<SchemaRelation> {
    (1..=2)
        .map(|j| {
            let (c, ab) = tw.image(j);
            let cm = c.as_monomial().expect("generator phase is a monomial");
            // A phi_{P-(a,b)} = B phi_{P-e_j}, A = c lambda^{b(n-a)}, B = lambda^{[j=1] m}
            let alpha = (int(-ab.m), if j == 1 { int(1) } else { int(0) });
            let beta = &int(ab.m * ab.n) - &cm.exp;
            let ej = e(j);
            SchemaRelation {
                lhs: (-ab.n, -ab.m),
                rhs: (-ej.n, -ej.m),
                coef: cm.coef.inv().expect("nonzero"),
                alpha,
                beta,
            }
        })
        .collect()
}

/// Recurrences as displayed for the twists that have them.
pub fn displayed_relations(label: Label) -> Option<Vec<SchemaRelation>> {
    let r = |n, d| crate::scalar::rat(n, d);
    let z = || int(0);
    let one = || int(1);
    match label {
        // phi_{n,m+1} = lambda^{m+n} phi_{n-1,m};  phi_{n-1,m+1} = lambda^{n-1/2} phi_{n,m-1}
        Label::Omega => Some(vec![
            SchemaRelation::new((0, 1), (-1, 0), (one(), one()), z()),
            SchemaRelation::new((-1, 1), (0, -1), (one(), z()), r(-1, 2)),
        ]),
        // phi_{n,m+1} = lambda^{m+n} phi_{n-1,m};  phi_{n-1,m} = phi_{n,m-1}
        Label::I => Some(vec![
            SchemaRelation::new((0, 1), (-1, 0), (one(), one()), z()),
            SchemaRelation::new((-1, 0), (0, -1), (z(), z()), z()),
        ]),
        // phi_{n-1,m} lambda^m = lambda^n phi_{n,m-1};  phi_{n,m-1} = lambda^{n+1/2} phi_{n+1,m-1}
        Label::NegOmega => Some(vec![
            SchemaRelation::new((-1, 0), (0, -1), (one(), -one()), z()),
            SchemaRelation::new((0, -1), (1, -1), (one(), z()), r(1, 2)),
        ]),
        _ => None,
    }
}

/// Weighted union-find over a square window: x_p = weight[p] * x_parent[p].
#[derive(Clone, Debug)]
pub struct ConstraintGraph {
    radius: i64,
    parent: Vec<usize>,
    weight: Vec<Monomial>,
    size: Vec<usize>,
    forced: Vec<bool>,
    inconsistent: Vec<bool>,
    rim: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub base: LatticePoint,
    pub points: Vec<LatticePoint>,
    /// x_p = values[p] * x_base
    pub values: BTreeMap<LatticePoint, Monomial>,
    pub forced_zero: bool,
    pub inconsistent: bool,
    pub touches_rim: bool,
    pub rim_only: bool,
}

impl Component {
    pub fn is_live(&self) -> bool {
        !self.forced_zero && !self.inconsistent
    }
}

/// Order used to pick representatives: closest to the origin first.
pub fn representative_key(p: &LatticePoint) -> (i64, i64, i64, i64) {
    (p.n.abs() + p.m.abs(), p.n.abs(), -p.n, -p.m)
}

impl ConstraintGraph {
    pub fn new(radius: i64) -> Self {
        let side = (2 * radius + 1) as usize;
        let count = side * side;
        ConstraintGraph {
            radius,
            parent: (0..count).collect(),
            weight: vec![Monomial::one(); count],
            size: vec![1; count],
            forced: vec![false; count],
            inconsistent: vec![false; count],
            rim: vec![false; count],
        }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        p.max_abs() <= self.radius
    }

    fn index(&self, p: LatticePoint) -> usize {
        let side = 2 * self.radius + 1;
        ((p.n + self.radius) * side + (p.m + self.radius)) as usize
    }

    fn point(&self, i: usize) -> LatticePoint {
        let side = (2 * self.radius + 1) as usize;
        LatticePoint::new(
            (i / side) as i64 - self.radius,
            (i % side) as i64 - self.radius,
        )
    }

    /// Root of i and w with x_i = w x_root.
    fn find(&mut self, i: usize) -> (usize, Monomial) {
        let mut path = Vec::new();
        let mut r = i;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // compress from the top down so each weight becomes relative to r
        for &v in path.iter().rev() {
            let p = self.parent[v];
            if p != r {
                self.weight[v] = self.weight[v].mul(&self.weight[p]);
            }
            self.parent[v] = r;
        }
        let w = if i == r {
            Monomial::one()
        } else {
            self.weight[i].clone()
        };
        (r, w)
    }

    /// Instantiate a relation; ones reaching outside the window are dropped
    /// and their inside points marked as rim-affected.
    pub fn add_relation(&mut self, rel: &Relation) {
        if rel.terms.iter().any(|(p, _)| !self.contains(*p)) {
            for (p, _) in &rel.terms {
                if self.contains(*p) {
                    let i = self.index(*p);
                    self.rim[i] = true;
                }
            }
            return;
        }
        match rel.terms.as_slice() {
            [] => {}
            [(p, _)] => {
                let i = self.index(*p);
                self.forced[i] = true;
            }
            [(p, wp), (q, wq)] => {
                let wp = wp.as_monomial().expect("relation weights are monomials");
                let wq = wq.as_monomial().expect("relation weights are monomials");
                // x_p = w x_q
                let w = wq.mul(&wp.inv()).neg();
                let (ip, iq) = (self.index(*p), self.index(*q));
                self.union(ip, iq, w);
            }
            _ => panic!("relations have at most two terms"),
        }
    }

    fn union(&mut self, p: usize, q: usize, w: Monomial) {
        let (rp, ap) = self.find(p);
        let (rq, aq) = self.find(q);
        if rp == rq {
            if ap != w.mul(&aq) {
                self.inconsistent[rp] = true;
            }
            return;
        }
        // ap x_rp = w aq x_rq
        let bad = self.inconsistent[rp] || self.inconsistent[rq];
        if self.size[rp] <= self.size[rq] {
            self.parent[rp] = rq;
            self.weight[rp] = w.mul(&aq).mul(&ap.inv());
            self.size[rq] += self.size[rp];
            self.inconsistent[rq] = bad;
        } else {
            self.parent[rq] = rp;
            self.weight[rq] = ap.mul(&w.mul(&aq).inv());
            self.size[rp] += self.size[rq];
            self.inconsistent[rp] = bad;
        }
    }

    pub fn components(&mut self) -> Vec<Component> {
        let n = self.parent.len();
        let mut groups: BTreeMap<usize, Vec<(usize, Monomial)>> = BTreeMap::new();
        for i in 0..n {
            let (r, w) = self.find(i);
            groups.entry(r).or_default().push((i, w));
        }
        let mut out: Vec<Component> = groups
            .into_iter()
            .map(|(r, members)| {
                let mut points: Vec<LatticePoint> =
                    members.iter().map(|(i, _)| self.point(*i)).collect();
                points.sort_by_key(representative_key);
                let base = points[0];
                let base_w = members
                    .iter()
                    .find(|(i, _)| self.point(*i) == base)
                    .map(|(_, w)| w.clone())
                    .expect("base is a member");
                let inv_base = base_w.inv();
                let values = members
                    .iter()
                    .map(|(i, w)| (self.point(*i), w.mul(&inv_base)))
                    .collect();
                Component {
                    base,
                    forced_zero: members.iter().any(|(i, _)| self.forced[*i]),
                    inconsistent: self.inconsistent[r],
                    touches_rim: members.iter().any(|(i, _)| self.rim[*i]),
                    rim_only: members.iter().all(|(i, _)| self.rim[*i]),
                    points,
                    values,
                }
            })
            .collect();
        out.sort_by_key(|c| representative_key(&c.base));
        out
    }
}

#[derive(Clone, Debug)]
pub struct H0Component {
    pub base: LatticePoint,
    pub size: usize,
    pub values: BTreeMap<LatticePoint, Monomial>,
    pub support: Option<SupportRule>,
    pub fit: Option<QuadraticRule>,
}

#[derive(Clone, Debug)]
pub struct H0Report {
    pub twist: TwistSpec,
    pub radius: i64,
    pub components: Vec<H0Component>,
    /// Bases of components whose cycle weights disagree.
    pub inconsistent: Vec<LatticePoint>,
}

impl H0Report {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

pub fn kernel_graph(tw: &TwistSpec, radius: i64) -> ConstraintGraph {
    let mut g = ConstraintGraph::new(radius);
    let reach = radius + 3;
    for j in 1..=2 {
        for n in -reach..=reach {
            for m in -reach..=reach {
                g.add_relation(&kernel_relation(tw, j, LatticePoint::new(n, m)));
            }
        }
    }
    g
}

/// Degree-0 twisted cocycles on the window: live components of the
/// constraint graph, each with its support lattice and exponent fit.
pub fn h0_components(tw: &TwistSpec, radius: i64) -> H0Report {
    assert!(radius >= 3, "window radius must be at least 3");
    let mut g = kernel_graph(tw, radius);
    let comps = g.components();
    let inconsistent = comps
        .iter()
        .filter(|c| c.inconsistent)
        .map(|c| c.base)
        .collect();
    let components = comps
        .into_iter()
        .filter(|c| c.is_live())
        .map(|c| {
            let support = SupportRule::from_points(c.base, &c.points);
            let fit = QuadraticRule::fit(&c.values);
            H0Component {
                base: c.base,
                size: c.points.len(),
                values: c.values,
                support,
                fit,
            }
        })
        .collect();
    H0Report {
        twist: *tw,
        radius,
        components,
        inconsistent,
    }
}

#[derive(Clone, Debug)]
pub struct H2Report {
    pub twist: TwistSpec,
    pub radius: i64,
    /// Symbol points of the surviving classes; the class of delta at P is
    /// written phi_{-P} in the dual-coordinate notation.
    pub representatives: Vec<LatticePoint>,
    pub rim_excluded: usize,
}

impl H2Report {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    /// Classes in dual coordinates, phi_{-p}.
    pub fn class_labels(&self) -> Vec<LatticePoint> {
        self.representatives.iter().map(|p| -*p).collect()
    }
}

pub fn cokernel_graph(tw: &TwistSpec, radius: i64) -> ConstraintGraph {
    let mut g = ConstraintGraph::new(radius);
    let reach = radius + 4;
    let zero = TorusElement::zero();
    for n in -reach..=reach {
        for m in -reach..=reach {
            let d = TorusElement::u(n, m);
            for img in [alpha2(tw, &d, &zero), alpha2(tw, &zero, &d)] {
                if !img.is_zero() {
                    g.add_relation(&Relation::from_element(&img));
                }
            }
        }
    }
    g
}

/// Degree-2 classes: the cokernel of alpha2, read off as live components of
/// the identification graph that contain a point untouched by the rim.
pub fn h2_components(tw: &TwistSpec, radius: i64) -> H2Report {
    assert!(radius >= 3, "window radius must be at least 3");
    let mut g = cokernel_graph(tw, radius);
    let live: Vec<Component> = g.components().into_iter().filter(|c| c.is_live()).collect();
    let mut representatives = Vec::new();
    let mut rim_excluded = 0;
    for c in live {
        if c.rim_only {
            rim_excluded += 1;
        } else {
            let rep = c
                .points
                .iter()
                .copied()
                .find(|p| !g.rim[g.index(*p)])
                .expect("not rim-only");
            representatives.push(rep);
        }
    }
    representatives.sort_by_key(representative_key);
    H2Report {
        twist: *tw,
        radius,
        representatives,
        rim_excluded,
    }
}

/// An H1 class that blocks the coboundary construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub slot: usize,
    /// Symbol point of the offending coefficient.
    pub point: LatticePoint,
    /// The same class in dual coordinates, phi^slot_{-point}.
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum H1Error {
    #[error("input is not a 1-cocycle")]
    NotCocycle,
    #[error("no finitely supported primitive: {0:?}")]
    Obstructed(Vec<Obstruction>),
}

fn obstruction(slot: usize, p: LatticePoint) -> Obstruction {
    let q = -p;
    Obstruction {
        slot,
        point: p,
        label: format!("φ^{}_{{{},{}}}", slot, q.n, q.m),
    }
}

/// Find gamma with alpha1(gamma) = sigma, or name the obstruction.
pub fn solve_h1_coboundary(
    tw: &TwistSpec,
    sigma: &(Functional, Functional),
) -> Result<Functional, H1Error> {
    if !alpha2(tw, &sigma.0, &sigma.1).is_zero() {
        return Err(H1Error::NotCocycle);
    }
    let gamma = if tw.is_untwisted() {
        solve_untwisted(sigma)?
    } else {
        solve_twisted(tw, sigma)?
    };
    if alpha1(tw, &gamma) != *sigma {
        return Err(H1Error::Obstructed(residual_obstructions(
            tw, &gamma, sigma,
        )));
    }
    Ok(gamma)
}

fn residual_obstructions(
    tw: &TwistSpec,
    gamma: &Functional,
    sigma: &(Functional, Functional),
) -> Vec<Obstruction> {
    let (a, b) = alpha1(tw, gamma);
    let mut out = Vec::new();
    for (slot, r) in [(1, sigma.0.sub(&a)), (2, sigma.1.sub(&b))] {
        out.extend(r.support().map(|p| obstruction(slot, p)));
    }
    out
}

fn solve_untwisted(sigma: &(Functional, Functional)) -> Result<Functional, H1Error> {
    // slot 1: sigma1_P = (1 - lambda^{P_m}) gamma_{P-e1}; slot 2: (lambda^{P_n} - 1) gamma_{P-e2}
    let mut obstructions: Vec<Obstruction> = sigma
        .0
        .support()
        .filter(|p| p.m == 0)
        .map(|p| obstruction(1, p))
        .collect();
    obstructions.extend(
        sigma
            .1
            .support()
            .filter(|p| p.n == 0)
            .map(|p| obstruction(2, p)),
    );
    if !obstructions.is_empty() {
        return Err(H1Error::Obstructed(obstructions));
    }
    let one = Coefficient::one();
    let targets: BTreeSet<LatticePoint> = sigma
        .0
        .support()
        .map(|p| p - e(1))
        .chain(sigma.1.support().map(|p| p - e(2)))
        .collect();
    let mut gamma = TorusElement::zero();
    for q in targets {
        let (slot, value, d) = if q.m != 0 {
            (
                1,
                sigma.0.get(q + e(1)),
                &one - &Coefficient::lambda(int(q.m)),
            )
        } else if q.n != 0 {
            (
                2,
                sigma.1.get(q + e(2)),
                &Coefficient::lambda(int(q.n)) - &one,
            )
        } else {
            continue;
        };
        let v = value
            .div_exact(&d)
            .ok_or_else(|| H1Error::Obstructed(vec![obstruction(slot, q + e(slot))]))?;
        gamma.add_term(q, v);
    }
    Ok(gamma)
}

/// Slot used for the line sweep and its step d = (a,b) - e_j.
fn sweep_slot(tw: &TwistSpec) -> (usize, LatticePoint) {
    let preferred = if matches!(tw.label, Label::NegOmega) {
        [2, 1]
    } else {
        [1, 2]
    };
    for j in preferred {
        let d = tw.image(j).1 - e(j);
        if d != LatticePoint::ORIGIN {
            return (j, d);
        }
    }
    unreachable!("a nontrivial twist moves some generator")
}

fn line_position(q: LatticePoint, d: LatticePoint) -> (LatticePoint, i64) {
    let k = if d.n != 0 {
        q.n.div_euclid(d.n)
    } else {
        q.m.div_euclid(d.m)
    };
    (q - d.scale(k), k)
}

fn solve_twisted(tw: &TwistSpec, sigma: &(Functional, Functional)) -> Result<Functional, H1Error> {
    let (j, d) = sweep_slot(tw);
    let s = if j == 1 { &sigma.0 } else { &sigma.1 };
    let (c, ab) = tw.image(j);
    // lines through Q = P - e_j, stepping by d
    let mut lines: BTreeMap<LatticePoint, BTreeSet<i64>> = BTreeMap::new();
    for p in s.support() {
        let (start, k) = line_position(p - e(j), d);
        lines.entry(start).or_default().insert(k);
    }
    let mut gamma = TorusElement::zero();
    for (start, ks) in lines {
        let (kmin, kmax) = (
            *ks.first().expect("nonempty"),
            *ks.last().expect("nonempty"),
        );
        let mut prev = Coefficient::zero();
        for k in kmin..=kmax {
            let q = start + d.scale(k);
            let p = q + e(j);
            // sigma_j(P) = A gamma_{Q-d} - B gamma_Q
            let a = &c * &Coefficient::lambda(int(ab.m * (p.n - ab.n)));
            let b = if j == 1 {
                Coefficient::lambda(int(q.m))
            } else {
                Coefficient::one()
            };
            let num = &(&a * &prev) - &s.get(p);
            let g = num.div_exact(&b).expect("B is a monomial");
            if k == kmax && !g.is_zero() {
                return Err(H1Error::Obstructed(vec![obstruction(j, p)]));
            }
            gamma.add_term(q, g.clone());
            prev = g;
        }
    }
    Ok(gamma)
}

/// Fixed subspace of the generator action on the cocycle catalog of a twist.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub gamma: Gamma,
    pub twist: TwistSpec,
    pub generators: Vec<String>,
    /// Images under the group generator: (scalar, target name) per generator.
    pub action: Vec<(Coefficient, String)>,
    /// Basis of invariant combinations, each normalized so that its first
    /// nonzero coefficient is 1.
    pub basis: Vec<Vec<(String, Coefficient)>>,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("dual action of {generator} on {cocycle} does not land on a catalog cocycle")]
    NotClosed { generator: String, cocycle: String },
    #[error("linear algebra failed: {0}")]
    Solve(String),
}

pub fn invariant_dim(gamma: Gamma, tw: &TwistSpec) -> Result<InvariantSpace, InvariantError> {
    let entries = cocycles::twist_catalog(tw.label());
    let g = cocycles::group_generator(gamma);
    let names: Vec<String> = entries.iter().map(|c| c.name.clone()).collect();
    let mut action = Vec::new();
    for c in &entries {
        let (s, target) =
            cocycles::dual_action(&g, c, &entries).map_err(|_| InvariantError::NotClosed {
                generator: g.label().to_string(),
                cocycle: c.name.clone(),
            })?;
        action.push((s, target));
    }
    let k = entries.len();
    // (M - I) x = 0, M[i][j] = scalar sending generator j to generator i
    let mut m = vec![vec![CoefficientFraction::zero(); k]; k];
    for (j, (s, target)) in action.iter().enumerate() {
        let i = names
            .iter()
            .position(|n| n == target)
            .expect("target in catalog");
        m[i][j] = m[i][j].add(&CoefficientFraction::from(s.clone()));
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = row[i].sub(&CoefficientFraction::one());
    }
    let sol = frac_solve(&m, &vec![CoefficientFraction::zero(); k])
        .map_err(|e| InvariantError::Solve(e.to_string()))?;
    let mut basis = Vec::new();
    for v in sol.kernel {
        let coeffs: Vec<Coefficient> = v
            .iter()
            .map(|x| {
                x.to_coefficient()
                    .ok_or_else(|| InvariantError::Solve("non-polynomial kernel entry".into()))
            })
            .collect::<Result<_, _>>()?;
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("kernel vectors are nonzero")
            .clone();
        let combo = names
            .iter()
            .zip(&coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| {
                let v = c
                    .div_exact(&lead)
                    .ok_or_else(|| InvariantError::Solve("normalization".into()))?;
                Ok((n.clone(), v))
            })
            .collect::<Result<Vec<_>, InvariantError>>()?;
        basis.push(combo);
    }
    Ok(InvariantSpace {
        gamma,
        twist: *tw,
        generators: names,
        action,
        basis,
    })
}

/// Dimension of the fixed space of the generator on the untwisted H1 classes
/// phi^1_{-1,0}, phi^2_{0,-1}; the two classes transform as the coordinates
/// of Z^2 under the generator matrix.
pub fn untwisted_h1_invariant_dim(gamma: Gamma) -> usize {
    let g = cocycles::group_generator(gamma).entries();
    let m: Vec<Vec<CoefficientFraction>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| {
                    let v = g[i][j] - if i == j { 1 } else { 0 };
                    CoefficientFraction::from(Coefficient::from_int(v))
                })
                .collect()
        })
        .collect();
    frac_solve(
        &m,
        &[CoefficientFraction::zero(), CoefficientFraction::zero()],
    )
    .map(|s| s.kernel_dim())
    .unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsReport {
    pub gamma: String,
    pub h0_by_twist: Vec<(String, usize)>,
    pub h0: usize,
    /// None when the coboundary battery failed for some twist.
    pub h1: Option<usize>,
    pub h2: usize,
    pub hc0: usize,
    pub hc1: Option<usize>,
    pub hc2: usize,
    pub hp_even: usize,
    pub hp_odd: Option<usize>,
}

impl DimsReport {
    /// Values stated for the three groups: (H0, HC2, HP_even).
    pub fn claimed(gamma: Gamma) -> Option<(usize, usize, usize)> {
        match gamma {
            Gamma::Z3 => Some((7, 8, 8)),
            Gamma::Z4 => Some((8, 9, 9)),
            Gamma::Z6 => Some((9, 10, 10)),
            Gamma::Z2 => None,
        }
    }
}

/// Sum invariant dimensions over the group and assemble the cyclic and
/// periodic groups: HC0 = H0, HC1 = H1, HC2 = HC0 + H2, HP_even = HC2,
/// HP_odd = HC1.
///
/// `h1_twisted_ok` reports whether the coboundary solver succeeded on the
/// randomized battery for every nontrivial twist of the group; H2 counts the
/// invariant untwisted class, the twisted classes being non-invariant.
pub fn assemble_dims(gamma: Gamma, h1_twisted_ok: bool) -> Result<DimsReport, InvariantError> {
    let mut h0_by_twist = Vec::new();
    for tw in group_twists(gamma) {
        h0_by_twist.push((
            tw.label().tag().to_string(),
            invariant_dim(gamma, &tw)?.dim(),
        ));
    }
    let h0 = h0_by_twist.iter().map(|(_, d)| d).sum();
    let h1 = h1_twisted_ok.then(|| untwisted_h1_invariant_dim(gamma));
    let det = cocycles::group_generator(gamma).det();
    let h2 = usize::from(det == 1);
    Ok(DimsReport {
        gamma: gamma.tag().to_string(),
        h0_by_twist,
        h0,
        h1,
        h2,
        hc0: h0,
        hc1: h1,
        hc2: h0 + h2,
        hp_even: h0 + h2,
        hp_odd: h1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn tw(l: Label) -> TwistSpec {
        TwistSpec::new(l)
    }

    #[test]
    fn twist_i_matches_displayed_action() {
        let t = tw(Label::I);
        assert_eq!(t.act(&TorusElement::u1()), TorusElement::u(0, -1));
        assert_eq!(t.act(&TorusElement::u2()), TorusElement::u1());
    }

    #[test]
    fn untwisted_alpha1_kills_trace() {
        let (a, b) = alpha1(&tw(Label::One), &TorusElement::one());
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn omega_alpha1_on_delta() {
        let (a, b) = alpha1(&tw(Label::Omega), &TorusElement::one());
        let sa: Vec<_> = a.support().collect();
        let sb: Vec<_> = b.support().collect();
        assert_eq!(sa, vec![LatticePoint::new(0, -1), LatticePoint::new(1, 0)]);
        assert_eq!(sb, vec![LatticePoint::new(0, 1), LatticePoint::new(1, -1)]);
    }

    #[test]
    fn alpha2_untwisted_on_delta() {
        let r = alpha2(&tw(Label::One), &TorusElement::zero(), &TorusElement::one());
        let s: Vec<_> = r.support().collect();
        assert_eq!(s, vec![LatticePoint::new(1, 0)]);
        let r = alpha2(&tw(Label::One), &TorusElement::one(), &TorusElement::zero());
        let s: Vec<_> = r.support().collect();
        assert_eq!(s, vec![LatticePoint::new(0, 1)]);
    }

    #[test]
    fn alpha2_minus_omega_matches_display() {
        // (U1^{-1} U2 / sqrt(lambda)) phi1 - lambda phi1 U2
        let t = tw(Label::NegOmega);
        let phi = TorusElement::u(2, -1);
        let left =
            TorusElement::monomial(LatticePoint::new(-1, 1), Coefficient::lambda(rat(-1, 2)))
                .mul(&phi);
        let right = phi
            .mul(&TorusElement::u2())
            .scale(&Coefficient::lambda(int(1)));
        assert_eq!(alpha2(&t, &phi, &TorusElement::zero()), left.sub(&right));
    }

    #[test]
    fn schemas_match_displays() {
        for l in [Label::Omega, Label::I, Label::NegOmega] {
            let ours = derive_relations(&tw(l));
            let shown = displayed_relations(l).unwrap();
            for s in &shown {
                assert!(
                    ours.iter().any(|o| o.equivalent(s)),
                    "{l}: {s} not among {ours:?}"
                );
            }
        }
    }

    #[test]
    fn schema_minus_one_and_untwisted() {
        let ours = derive_relations(&tw(Label::NegOne));
        // phi_{N+1,M} = lambda^M phi_{N-1,M}
        let a = SchemaRelation::new((1, 0), (-1, 0), (int(0), int(1)), int(0));
        // lambda^{-N} phi_{N,M+1} = phi_{N,M-1}
        let b = SchemaRelation::new((0, 1), (0, -1), (int(1), int(0)), int(0));
        assert!(ours.iter().any(|o| o.equivalent(&a)));
        assert!(ours.iter().any(|o| o.equivalent(&b)));
        let un = derive_relations(&tw(Label::One));
        assert!(un.iter().all(|r| r.is_self_constraint()));
    }

    #[test]
    fn schema_display() {
        let s = &derive_relations(&tw(Label::Omega))[0];
        assert_eq!(s.to_string(), "φ_{n,m+1} = λ^{m+n} φ_{n-1,m}");
    }

    #[test]
    fn h0_counts_small() {
        assert_eq!(h0_components(&tw(Label::Omega), 4).count(), 3);
        assert_eq!(h0_components(&tw(Label::NegOmega), 4).count(), 1);
        let un = h0_components(&tw(Label::One), 4);
        assert_eq!(un.count(), 1);
        assert_eq!(un.components[0].size, 1);
        assert_eq!(un.components[0].base, LatticePoint::ORIGIN);
    }

    #[test]
    fn h2_untwisted_representative() {
        let r = h2_components(&tw(Label::One), 5);
        assert_eq!(r.class_labels(), vec![LatticePoint::new(-1, -1)]);
    }

    #[test]
    fn untwisted_h1_certificates() {
        let t = tw(Label::One);
        let s1 = (TorusElement::u1(), TorusElement::zero());
        match solve_h1_coboundary(&t, &s1) {
            Err(H1Error::Obstructed(o)) => assert_eq!(o[0].label, "φ^1_{-1,0}"),
            other => panic!("{other:?}"),
        }
        let s2 = (TorusElement::zero(), TorusElement::u2());
        match solve_h1_coboundary(&t, &s2) {
            Err(H1Error::Obstructed(o)) => assert_eq!(o[0].label, "φ^2_{0,-1}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_solves_to_zero() {
        for t in TwistSpec::all() {
            let g = solve_h1_coboundary(&t, &(TorusElement::zero(), TorusElement::zero())).unwrap();
            assert!(g.is_zero());
        }
    }

    #[test]
    fn not_a_cocycle() {
        let t = tw(Label::Omega);
        let s = (TorusElement::u1(), TorusElement::zero());
        assert_eq!(solve_h1_coboundary(&t, &s), Err(H1Error::NotCocycle));
    }

    #[test]
    fn untwisted_h1_has_no_invariants() {
        for g in Gamma::CATALOGED {
            assert_eq!(untwisted_h1_invariant_dim(g), 0);
        }
    }
}
