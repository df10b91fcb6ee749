//! Index pairings of the cataloged projections with suspended degree-0
//! cocycles, the three index tables, and their comparison with the printed
//! tables and proof lists.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::cocycles::{self, ClosedFormCocycle};
use crate::complexes::{invariant_dim, TwistSpec};
use crate::crossed::{self, cross_mul, is_projection, CrossedElement, Gamma};
use crate::scalar::{int, Coefficient, Rational};
use crate::torus::{GroupMatrix, Label, LatticePoint};

/// Which twist the t^k component of a projection is paired against.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentMap {
    /// t^k <-> label of (conjugation matrix)^k.
    ConjLabel,
    /// t^k <-> label of (conjugation matrix)^{-k}.
    Inverse,
}

impl ComponentMap {
    pub const ALL: [ComponentMap; 2] = [ComponentMap::ConjLabel, ComponentMap::Inverse];

    pub fn name(self) -> &'static str {
        match self {
            ComponentMap::ConjLabel => "conj-label",
            ComponentMap::Inverse => "inverse",
        }
    }

    pub fn twist(self, gamma: Gamma, k: usize) -> Label {
        let g = GroupMatrix::from_matrix(gamma.conj_matrix())
            .expect("conjugation matrices are labelled");
        let g = match self {
            ComponentMap::ConjLabel => g,
            ComponentMap::Inverse => g.inverse(),
        };
        (0..k)
            .fold(GroupMatrix::from_label(Label::One), |acc, _| {
                acc.compose(&g)
            })
            .label()
    }

    /// The power k with t^k paired against `twist`, if the twist lies in Gamma.
    pub fn power(self, gamma: Gamma, twist: Label) -> Option<usize> {
        (0..gamma.order()).find(|k| self.twist(gamma, *k) == twist)
    }

    pub fn describe(self, gamma: Gamma) -> String {
        (0..gamma.order())
            .map(|k| format!("t^{k} <-> {}", self.twist(gamma, k).tag()))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for ComponentMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The component map used for the published tables. `pin_component_map`
/// recomputes the choice from the strict cells; the two must agree.
pub fn pinned_map(_gamma: Gamma) -> ComponentMap {
    ComponentMap::ConjLabel
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairingError {
    #[error("twist {twist} is not an element of {gamma}")]
    TwistNotInGroup { twist: String, gamma: Gamma },
    #[error("not a projection: {0}")]
    NotProjection(String),
}

fn component(
    e: &CrossedElement,
    c: &ClosedFormCocycle,
    map: ComponentMap,
) -> Result<usize, PairingError> {
    let gamma = e.spec().gamma();
    map.power(gamma, c.twist)
        .ok_or_else(|| PairingError::TwistNotInGroup {
            twist: c.twist.tag().to_string(),
            gamma,
        })
}

fn pair0_unchecked(
    e: &CrossedElement,
    c: &ClosedFormCocycle,
    map: ComponentMap,
) -> Result<Coefficient, PairingError> {
    let k = component(e, c, map)?;
    Ok(cocycles::eval(c, &e.part(k)))
}

/// <[e], [S c]> = eval(c, e_k) for the component t^k matched to c's twist.
pub fn pair0(e: &CrossedElement, c: &ClosedFormCocycle) -> Result<Coefficient, PairingError> {
    pair0_with(e, c, pinned_map(e.spec().gamma()))
}

pub fn pair0_with(
    e: &CrossedElement,
    c: &ClosedFormCocycle,
    map: ComponentMap,
) -> Result<Coefficient, PairingError> {
    if !is_projection(e).ok() {
        return Err(PairingError::NotProjection(e.to_string()));
    }
    pair0_unchecked(e, c, map)
}

/// delta_j: U1^n U2^m t^k -> (n or m) U1^n U2^m t^k
fn derivation(e: &CrossedElement, j: usize) -> CrossedElement {
    CrossedElement::from_parts(
        e.spec(),
        e.parts().map(|(k, x)| {
            (
                k,
                x.map_terms(|p, c| c.scale(&int(if j == 1 { p.n } else { p.m }))),
            )
        }),
    )
}

/// tau#(e (d1 e d2 e - d2 e d1 e)), no 2 pi i prefactor.
pub fn pair2(e: &CrossedElement) -> Coefficient {
    let d1 = derivation(e, 1);
    let d2 = derivation(e, 2);
    let comm = cross_mul(&d1, &d2)
        .and_then(|a| a.sub(&cross_mul(&d2, &d1)?))
        .expect("same algebra");
    cross_mul(e, &comm)
        .expect("same algebra")
        .part(0)
        .get(LatticePoint::ORIGIN)
}

#[derive(Clone, Debug)]
pub enum ColumnKind {
    /// Linear combination of degree-0 cocycles, paired by linearity.
    Cocycles(Vec<(Coefficient, ClosedFormCocycle)>),
    /// The suspended 2-cocycle phi.
    Phi,
}

#[derive(Clone, Debug)]
pub struct Column {
    pub header: String,
    pub kind: ColumnKind,
}

fn single(gamma: Gamma, name: &str) -> Column {
    let c = cocycles::find(gamma, name).unwrap_or_else(|| panic!("{name} cataloged for {gamma}"));
    let header = if name == "tau" {
        "Sτ".to_string()
    } else {
        format!("S{name}")
    };
    Column {
        header,
        kind: ColumnKind::Cocycles(vec![(Coefficient::one(), c)]),
    }
}

fn combination(gamma: Gamma, terms: Vec<(Coefficient, String)>) -> Column {
    let parts: Vec<String> = terms
        .iter()
        .map(|(c, n)| {
            if c.is_one() {
                n.clone()
            } else {
                format!("{} {n}", pretty(c))
            }
        })
        .collect();
    let header = format!("S({})", parts.join(" + "));
    let kind = ColumnKind::Cocycles(
        terms
            .into_iter()
            .map(|(c, n)| {
                (
                    c,
                    cocycles::find(gamma, &n)
                        .unwrap_or_else(|| panic!("{n} cataloged for {gamma}")),
                )
            })
            .collect(),
    );
    Column { header, kind }
}

fn unit_sum(gamma: Gamma, names: &[&str]) -> Column {
    combination(
        gamma,
        names
            .iter()
            .map(|n| (Coefficient::one(), n.to_string()))
            .collect(),
    )
}

/// The Z6-invariant combination of D_{0,1}, D_{1,0}, D_{1,1}, as computed
/// from the dual action.
fn z6_d_combination() -> Vec<(Coefficient, String)> {
    let space =
        invariant_dim(Gamma::Z6, &TwistSpec::new(Label::NegOne)).expect("D family closes under Z6");
    space
        .basis
        .into_iter()
        .find(|v| v.len() > 1)
        .expect("a mixed invariant combination exists")
        .into_iter()
        .map(|(n, c)| (c, n))
        .collect()
}

fn phi() -> Column {
    Column {
        header: "Sφ".to_string(),
        kind: ColumnKind::Phi,
    }
}

/// Columns in the printed order, ending with the 2-cocycle.
pub fn columns(gamma: Gamma) -> Vec<Column> {
    match gamma {
        Gamma::Z2 => vec![single(gamma, "tau"), phi()],
        Gamma::Z3 => vec![
            single(gamma, "tau"),
            single(gamma, "E^w_{0,0}"),
            single(gamma, "E^w2_{0,0}"),
            single(gamma, "E^w_{0,1}"),
            single(gamma, "E^w2_{0,1}"),
            single(gamma, "E^w_{0,-1}"),
            single(gamma, "E^w2_{0,-1}"),
            phi(),
        ],
        Gamma::Z4 => vec![
            single(gamma, "tau"),
            single(gamma, "D_{1,1}"),
            single(gamma, "D_{0,0}"),
            unit_sum(gamma, &["D_{0,1}", "D_{1,0}"]),
            single(gamma, "F^i_{0,0}"),
            single(gamma, "F^i_{0,1}"),
            single(gamma, "F^-i_{0,0}"),
            single(gamma, "F^-i_{0,1}"),
            phi(),
        ],
        Gamma::Z6 => vec![
            single(gamma, "tau"),
            single(gamma, "D_{0,0}"),
            combination(gamma, z6_d_combination()),
            unit_sum(gamma, &["E^w_{0,1}", "E^w_{0,-1}"]),
            single(gamma, "E^w_{0,0}"),
            unit_sum(gamma, &["E^w2_{0,1}", "E^w2_{0,-1}"]),
            single(gamma, "E^w2_{0,0}"),
            single(gamma, "G^-w_{0,0}"),
            single(gamma, "G^-w2_{0,0}"),
            phi(),
        ],
    }
}

fn cell(e: &CrossedElement, col: &Column, map: ComponentMap) -> Coefficient {
    match &col.kind {
        ColumnKind::Phi => pair2(e),
        ColumnKind::Cocycles(terms) => terms.iter().fold(Coefficient::zero(), |acc, (s, c)| {
            &acc + &(s * &pair0_unchecked(e, c, map).expect("column cocycles belong to the group"))
        }),
    }
}

/// True when every cocycle of the column vanishes on the (negated) support
/// of the paired component, so the cell is zero for any coefficients.
fn structurally_zero(e: &CrossedElement, col: &Column, map: ComponentMap) -> bool {
    match &col.kind {
        ColumnKind::Phi => false,
        ColumnKind::Cocycles(terms) => terms.iter().all(|(_, c)| {
            let k = component(e, c, map).expect("column cocycles belong to the group");
            e.part(k).support().all(|p| !c.support.contains(-p))
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingTable {
    pub gamma: Gamma,
    pub map: ComponentMap,
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: Vec<Vec<Coefficient>>,
}

/// The table under the pinned component map.
pub fn generate_table(gamma: Gamma) -> PairingTable {
    generate_table_with(gamma, pinned_map(gamma))
}

pub fn generate_table_with(gamma: Gamma, map: ComponentMap) -> PairingTable {
    let projections = crossed::catalog(gamma);
    for (name, p) in &projections {
        assert!(
            is_projection(p).ok(),
            "cataloged {name} over {gamma} is not a projection"
        );
    }
    let cols = columns(gamma);
    PairingTable {
        gamma,
        map,
        rows: projections.iter().map(|(n, _)| n.to_string()).collect(),
        columns: cols.iter().map(|c| c.header.clone()).collect(),
        cells: projections
            .iter()
            .map(|(_, p)| cols.iter().map(|c| cell(p, c, map)).collect())
            .collect(),
    }
}

pub fn convention_lines(gamma: Gamma, map: ComponentMap) -> Vec<String> {
    vec![
        format!("group: {gamma}"),
        format!("component map: {} ({})", map, map.describe(gamma)),
        "evaluation: <S c, e> = sum_(a,b) c_(-a,-b) λ^(-ab) e_k(a,b), the U^0 coefficient of c·e_k"
            .to_string(),
        "Sφ: τ#(e(δ1e·δ2e - δ2e·δ1e)), no 2πi prefactor".to_string(),
        "ζ = e^(2πi/6), λ = e^(2πiθ)".to_string(),
    ]
}

fn conventions_json(gamma: Gamma, map: ComponentMap) -> serde_json::Value {
    json!({
        "component_map": map.name(),
        "component_assignment": (0..gamma.order()).map(|k| map.twist(gamma, k).tag()).collect::<Vec<_>>(),
        "evaluation": "U^0 coefficient of c * e_k: sum c_{-a,-b} lambda^{-ab} e_k(a,b)",
        "phi": "tau#(e(d1e d2e - d2e d1e)), no 2 pi i prefactor",
        "zeta": "e^{2 pi i/6}",
        "coefficient_syntax": "terms r*z^k*L^q joined by ' + ', z = e^{2 pi i/12}, L = lambda",
    })
}

impl PairingTable {
    pub fn get(&self, row: &str, column: &str) -> Option<&Coefficient> {
        let r = self.rows.iter().position(|x| x == row)?;
        let c = self.columns.iter().position(|x| x == column)?;
        Some(&self.cells[r][c])
    }

    pub fn column(&self, column: &str) -> Option<Vec<&Coefficient>> {
        let c = self.columns.iter().position(|x| x == column)?;
        Some(self.cells.iter().map(|r| &r[c]).collect())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for l in convention_lines(self.gamma, self.map) {
            out.push_str(&format!("> {l}\n"));
        }
        out.push('\n');
        out.push_str(&format!("| | {} |\n", self.columns.join(" | ")));
        out.push_str(&format!("|---|{}\n", "---|".repeat(self.columns.len())));
        for (r, row) in self.rows.iter().zip(&self.cells) {
            let cells: Vec<String> = row.iter().map(pretty).collect();
            out.push_str(&format!("| {} | {} |\n", row_label(r), cells.join(" | ")));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for l in convention_lines(self.gamma, self.map) {
            out.push_str(&format!("# {l}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["projection".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (r, row) in self.rows.iter().zip(&self.cells) {
            let mut rec = vec![r.clone()];
            rec.extend(row.iter().map(|c| c.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "gamma": self.gamma.tag(),
            "conventions": conventions_json(self.gamma, self.map),
            "rows": self.rows,
            "columns": self.columns,
            "cells": self.cells.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn row_label(r: &str) -> String {
    match r.split_at(1) {
        ("1", _) => "1".to_string(),
        (f, idx) => format!("{f}{}", idx.chars().map(subscript).collect::<String>()),
    }
}

fn subscript(c: char) -> char {
    c.to_digit(10)
        .and_then(|d| char::from_u32(0x2080 + d))
        .unwrap_or(c)
}

fn pretty_rational(r: &Rational) -> String {
    r.to_string()
}

fn pretty_exponent(q: &Rational) -> String {
    if q.is_integer() {
        format!("λ^{q}")
    } else {
        format!("λ^({q})")
    }
}

/// Rendering in the printed notation: products r·ζ^k·λ^q where possible, with
/// zeta = e^{2 pi i/6}; falls back to the canonical form.
pub fn pretty(c: &Coefficient) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (q, cyc) in c.terms() {
        let Some((r, k)) = cyc.as_scaled_root() else {
            return c.to_string();
        };
        // even k: r z^k = |r| zeta^j with 0 <= j < 6
        let (r, root) = if k % 2 == 0 {
            let j = k / 2 + if r < int(0) { 3 } else { 0 };
            let r = if r < int(0) { -r } else { r };
            match j {
                0 => (r, None),
                3 => (-r, None),
                j => (
                    r,
                    Some(format!("ζ{}", ["", "", "²", "", "⁴", "⁵"][j as usize])),
                ),
            }
        } else if k == 3 {
            (r, Some("i".to_string()))
        } else {
            (r, Some(format!("ζ₁₂^{k}")))
        };
        let lam = (!q.is_zero()).then(|| pretty_exponent(q));
        let factors: Vec<String> = root.into_iter().chain(lam).collect();
        let s = if factors.is_empty() {
            pretty_rational(&r)
        } else if r == int(1) {
            factors.join("·")
        } else if r == int(-1) {
            format!("-{}", factors.join("·"))
        } else {
            format!("{}·{}", pretty_rational(&r), factors.join("·"))
        };
        parts.push(s);
    }
    parts.join(" + ")
}

/// Values printed in the tables and in the proof lists, indexed [row][column].
#[derive(Clone, Debug)]
pub struct PrintedValues {
    pub table: Vec<Vec<Option<Coefficient>>>,
    pub proof: Vec<Vec<Option<Coefficient>>>,
}

fn parse_cells(s: &str) -> Vec<Option<Coefficient>> {
    s.split('|')
        .map(|x| {
            let x = x.trim();
            (x != "-")
                .then(|| Coefficient::parse(x).unwrap_or_else(|e| panic!("printed value {x}: {e}")))
        })
        .collect()
}

// Coefficient syntax: z = zeta_12, so zeta = z^2, zeta^2 = z^4, i = z^3; L = lambda.
const Z3_TABLE: [&str; 7] = [
    "1 | 0 | 0 | 0 | 0 | 0 | 0 | 0",
    "1/3 | 1/3 | 1/3 | 0 | 0 | 0 | 0 | 0",
    "1/3 | (1/3)*z^4 | (1/3)*z^8 | 0 | 0 | 0 | 0 | 0",
    "1/3 | 0 | 0 | 0 | (1/3)*z^4*L^(-2/3) | 0 | 0 | 0",
    "1/3 | 0 | 0 | 0 | (1/3)*L^(-2/3) | 0 | 0 | 0",
    "1/3 | 0 | 0 | 0 | 0 | (1/3)*z^4*L^(1/6) | 0 | 0",
    "1/3 | 0 | 0 | 0 | 0 | (1/3)*z^8*L^(1/6) | 0 | 0",
];

// Proof lists, one string per column, one item per row.
const Z3_PROOF: [&str; 8] = [
    "1 | 1/3 | 1/3 | 1/3 | 1/3 | 1/3 | 1/3",
    "0 | 1/3 | (1/3)*z^4 | 0 | 0 | 0 | 0",
    "0 | 1/3 | (1/3)*z^8 | 0 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0",
    "0 | 0 | 0 | (1/3)*z^4*L^(-2/3) | (1/3)*L^(-2/3) | 0 | 0",
    "0 | 0 | 0 | (1/3)*z^2*L^(1/6) | (-1/3)*L^(1/6) | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0",
];

const Z4_TABLE: [&str; 8] = [
    "1 | 0 | 0 | 0 | 0 | 0 | 0 | 0 | 0",
    "1/4 | 0 | 1/4 | 0 | 1/4 | 0 | 1/4 | 0 | 0",
    "1/4 | 0 | -1/4 | 0 | (1/4)*z^3 | 0 | (-1/4)*z^3 | 0 | 0",
    "1/4 | 0 | -1/4 | 0 | -1/4 | 0 | -1/4 | 0 | 0",
    "1/4 | (-1/4)*L^(-1/2) | 0 | 0 | 0 | (1/4)*z^3*L^(1/4) | 0 | (-1/4)*z^3*L^(-1/4) | 0",
    "1/4 | (1/4)*L^(-1/2) | 0 | 0 | 0 | (-1/4)*L^(1/4) | 0 | (-1/4)*L^(-1/4) | 0",
    "1/4 | (-1/4)*L^(-1/2) | 0 | 0 | 0 | (-1/4)*z^3*L^(1/4) | 0 | (1/4)*z^3*L^(-1/4) | 0",
    "1/2 | 0 | 0 | -1/2 | 0 | 0 | 0 | 0 | 0",
];

const Z4_PROOF: [&str; 9] = [
    "1 | 1/4 | 1/4 | 1/4 | 1/4 | 1/4 | 1/4 | 1/2",
    "0 | 0 | 0 | 0 | (-1/4)*L^(-1/2) | (1/4)*L^(-1/2) | (-1/4)*L^(-1/2) | 0",
    "0 | 1/4 | -1/4 | 1/4 | 0 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0 | -1/2",
    "0 | 1/4 | (1/4)*z^3 | -1/4 | 0 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | (1/4)*z^3*L^(1/4) | (-1/4)*L^(1/4) | (-1/4)*z^3*L^(1/4) | 0",
    "0 | 1/4 | (-1/4)*z^3 | -1/4 | 0 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | (-1/4)*z^3*L^(-1/4) | (-1/4)*L^(-1/4) | (1/4)*z^3*L^(-1/4) | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0 | 0",
];

const Z6_TABLE: [&str; 9] = [
    "1 | 0 | 0 | 0 | 0 | 0 | 0 | 0 | 0 | 0",
    "1/6 | 1/6 | 0 | 0 | 1/6 | 0 | 1/6 | 1/6 | 1/6 | 0",
    "1/6 | 1/6 | 0 | 0 | (1/3)*z^4 | 0 | (-1/6)*z^2 | (1/6)*z^2 | (-1/6)*z^4 | 0",
    "1/6 | -1/6 | 0 | 0 | (-1/3)*z^2 | 0 | -1/6 | (1/6)*z^4 | (-1/6)*z^2 | 0",
    "1/6 | 1/6 | 0 | 0 | 1/6 | 0 | 1/6 | -1/6 | -1/6 | 0",
    "1/6 | 0 | 0 | 0 | (1/6)*z^4 | 0 | (-1/6)*z^2 | (-1/6)*z^2 | (1/6)*z^4 | 0",
    "1/3 | 0 | 0 | (1/3)*z^2 | 0 | (1/3)*z^4*L^(-1/6) | 0 | 0 | 0 | 0",
    "1/3 | 0 | 0 | -1/3 | 0 | (-1/3)*z^2*L^(-1/6) | 0 | 0 | 0 | 0",
    "1/2 | 0 | (-1/2)*L^(3/2) | 0 | 0 | 0 | 0 | 0 | 0 | 0",
];

// The Stau list skips p3, p4 and labels its items by projection name; it is
// read by those labels. All other lists are read by position.
const Z6_PROOF: [&str; 10] = [
    "1 | 1/6 | 1/6 | 1/6 | - | - | 1/6 | 1/3 | 1/2",
    "0 | 1/6 | -1/6 | 1/6 | -1/6 | 1/6 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0 | 0 | (-1/2)*L^(3/2)",
    "0 | 0 | 0 | 0 | 0 | 0 | (1/3)*z^2 | -1/3 | 0",
    "0 | 1/6 | (1/3)*z^4 | (-1/3)*z^2 | 1/6 | (1/6)*z^4 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | (1/3)*z^4*L^(-1/6) | (-1/3)*z^2*L^(-1/6) | 0",
    "0 | 1/6 | (-1/6)*z^2 | -1/6 | 1/6 | (-1/6)*z^2 | 0 | 0 | 0",
    "0 | 1/6 | (1/6)*z^2 | (1/6)*z^4 | -1/6 | (-1/6)*z^2 | 0 | 0 | 0",
    "0 | 1/6 | (-1/6)*z^4 | (-1/6)*z^2 | -1/6 | (1/6)*z^4 | 0 | 0 | 0",
    "0 | 0 | 0 | 0 | 0 | 0 | 0 | 0 | 0",
];

fn transpose(cols: Vec<Vec<Option<Coefficient>>>) -> Vec<Vec<Option<Coefficient>>> {
    let rows = cols.first().map_or(0, |c| c.len());
    (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Printed values, or None for groups without a printed table.
pub fn printed_values(gamma: Gamma) -> Option<PrintedValues> {
    let (table, proof): (&[&str], &[&str]) = match gamma {
        Gamma::Z2 => return None,
        Gamma::Z3 => (&Z3_TABLE, &Z3_PROOF),
        Gamma::Z4 => (&Z4_TABLE, &Z4_PROOF),
        Gamma::Z6 => (&Z6_TABLE, &Z6_PROOF),
    };
    Some(PrintedValues {
        table: table.iter().map(|r| parse_cells(r)).collect(),
        proof: transpose(proof.iter().map(|c| parse_cells(c)).collect()),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    InternalConflict,
    DerivedOnly,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::InternalConflict => "paper-internal-conflict",
            Verdict::DerivedOnly => "derived-only",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub row: String,
    pub column: String,
    pub ours: Coefficient,
    pub table: Option<Coefficient>,
    pub proof: Option<Coefficient>,
    pub verdict: Verdict,
    pub strict: bool,
    pub structural_zero: bool,
}

impl CellReport {
    /// A strict cell passes when ours equals the table value, or, where the
    /// two printed sources disagree, the proof-list value.
    pub fn strict_ok(&self) -> bool {
        let eq = |v: &Option<Coefficient>| v.as_ref() == Some(&self.ours);
        match self.verdict {
            Verdict::InternalConflict => eq(&self.table) || eq(&self.proof),
            Verdict::DerivedOnly => true,
            _ => eq(&self.table) || (self.table.is_none() && eq(&self.proof)),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let s = |v: &Option<Coefficient>| v.as_ref().map(|c| c.to_string());
        json!({
            "row": self.row,
            "column": self.column,
            "ours": self.ours.to_string(),
            "printed_table": s(&self.table),
            "printed_proof_list": s(&self.proof),
            "verdict": self.verdict,
            "strict": self.strict,
            "structural_zero": self.structural_zero,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapScore {
    pub map: ComponentMap,
    pub strict_cells: usize,
    pub strict_agree: usize,
}

#[derive(Clone, Debug)]
pub struct ReconciliationReport {
    pub gamma: Gamma,
    pub map: ComponentMap,
    pub cells: Vec<CellReport>,
    /// Strict-cell agreement of every candidate component map.
    pub scores: Vec<MapScore>,
}

fn verdict(
    table: &Option<Coefficient>,
    proof: &Option<Coefficient>,
    ours: &Coefficient,
) -> Verdict {
    match (table, proof) {
        (None, None) => Verdict::DerivedOnly,
        (Some(t), Some(p)) if t != p => Verdict::InternalConflict,
        (Some(v), _) | (None, Some(v)) => {
            if v == ours {
                Verdict::Match
            } else {
                Verdict::Mismatch
            }
        }
    }
}

fn listed_strict(gamma: Gamma, row: &str, column: &str) -> bool {
    match gamma {
        Gamma::Z4 => {
            let p_row = matches!(row, "p0" | "p1" | "p2")
                && matches!(column, "SD_{0,0}" | "SF^i_{0,0}" | "SF^-i_{0,0}");
            p_row || (row == "q0" && column == "SD_{1,1}")
        }
        _ => false,
    }
}

fn cells_for(gamma: Gamma, map: ComponentMap) -> Vec<CellReport> {
    let table = generate_table_with(gamma, map);
    let printed = printed_values(gamma);
    let projections = crossed::catalog(gamma);
    let cols = columns(gamma);
    let mut out = Vec::new();
    for (r, (row, p)) in projections.iter().enumerate() {
        for (c, col) in cols.iter().enumerate() {
            let ours = table.cells[r][c].clone();
            let (t, pr) = match &printed {
                Some(v) => (v.table[r][c].clone(), v.proof[r][c].clone()),
                None => (None, None),
            };
            let structural_zero = structurally_zero(p, col, map);
            let strict =
                c == 0 || *row == "1" || structural_zero || listed_strict(gamma, row, &col.header);
            out.push(CellReport {
                row: row.to_string(),
                column: col.header.clone(),
                verdict: verdict(&t, &pr, &ours),
                ours,
                table: t,
                proof: pr,
                strict,
                structural_zero,
            });
        }
    }
    out
}

fn score(map: ComponentMap, cells: &[CellReport]) -> MapScore {
    MapScore {
        map,
        strict_cells: cells.iter().filter(|c| c.strict).count(),
        strict_agree: cells.iter().filter(|c| c.strict && c.strict_ok()).count(),
    }
}

/// The candidate component map with the most agreeing strict cells; ties
/// go to the conjugation-label map.
pub fn pin_component_map(gamma: Gamma) -> ComponentMap {
    let scores: Vec<MapScore> = ComponentMap::ALL
        .iter()
        .map(|m| score(*m, &cells_for(gamma, *m)))
        .collect();
    best_map(&scores)
}

fn best_map(scores: &[MapScore]) -> ComponentMap {
    let mut best = &scores[0];
    for s in &scores[1..] {
        if s.strict_agree > best.strict_agree {
            best = s;
        }
    }
    best.map
}

pub fn reconcile(gamma: Gamma) -> ReconciliationReport {
    let map = pinned_map(gamma);
    let mut scores = Vec::new();
    let mut cells = Vec::new();
    for m in ComponentMap::ALL {
        let c = cells_for(gamma, m);
        scores.push(score(m, &c));
        if m == map {
            cells = c;
        }
    }
    ReconciliationReport {
        gamma,
        map,
        cells,
        scores,
    }
}

impl ReconciliationReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == v).count()
    }

    pub fn strict_failures(&self) -> Vec<&CellReport> {
        self.cells
            .iter()
            .filter(|c| c.strict && !c.strict_ok())
            .collect()
    }

    pub fn cell(&self, row: &str, column: &str) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.row == row && c.column == column)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "gamma": self.gamma.tag(),
            "conventions": conventions_json(self.gamma, self.map),
            "component_map_scores": self.scores,
            "summary": {
                "cells": self.cells.len(),
                "match": self.count(Verdict::Match),
                "mismatch": self.count(Verdict::Mismatch),
                "paper-internal-conflict": self.count(Verdict::InternalConflict),
                "derived-only": self.count(Verdict::DerivedOnly),
                "strict_cells": self.cells.iter().filter(|c| c.strict).count(),
                "strict_failures": self.strict_failures().len(),
            },
            "cells": self.cells.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    /// Human-readable listing of every cell that is not a plain match.
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for l in convention_lines(self.gamma, self.map) {
            out.push_str(&format!("# {l}\n"));
        }
        for s in &self.scores {
            out.push_str(&format!(
                "# map {}: {}/{} strict cells agree\n",
                s.map, s.strict_agree, s.strict_cells
            ));
        }
        for c in self.cells.iter().filter(|c| c.verdict != Verdict::Match) {
            let show = |v: &Option<Coefficient>| v.as_ref().map_or("-".to_string(), pretty);
            out.push_str(&format!(
                "{:<24} {:<4} {:<44} ours {:<24} table {:<24} proof {}{}\n",
                c.verdict.name(),
                c.row,
                c.column,
                pretty(&c.ours),
                show(&c.table),
                show(&c.proof),
                if c.strict { "  [strict]" } else { "" },
            ));
        }
        out.push_str(&format!(
            "{} cells: {} match, {} mismatch, {} paper-internal-conflict, {} derived-only\n",
            self.cells.len(),
            self.count(Verdict::Match),
            self.count(Verdict::Mismatch),
            self.count(Verdict::InternalConflict),
            self.count(Verdict::DerivedOnly),
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Cyclotomic};

    fn proj(g: Gamma, n: &str) -> CrossedElement {
        crossed::build_projection(g, n).unwrap()
    }

    #[test]
    fn component_maps() {
        assert_eq!(ComponentMap::ConjLabel.twist(Gamma::Z3, 1), Label::Omega2);
        assert_eq!(ComponentMap::Inverse.twist(Gamma::Z3, 1), Label::Omega);
        assert_eq!(ComponentMap::ConjLabel.twist(Gamma::Z4, 2), Label::NegOne);
        assert_eq!(ComponentMap::ConjLabel.twist(Gamma::Z6, 0), Label::One);
        assert_eq!(ComponentMap::ConjLabel.power(Gamma::Z3, Label::I), None);
    }

    #[test]
    fn trace_pairings() {
        let tau = cocycles::find(Gamma::Z6, "tau").unwrap();
        assert_eq!(
            pair0(&proj(Gamma::Z6, "1"), &tau).unwrap(),
            Coefficient::one()
        );
        assert_eq!(
            pair0(&proj(Gamma::Z6, "r"), &tau).unwrap(),
            Coefficient::from_rational(rat(1, 2))
        );
        let tau3 = cocycles::find(Gamma::Z3, "tau").unwrap();
        assert_eq!(
            pair0(&proj(Gamma::Z3, "p0"), &tau3).unwrap(),
            Coefficient::from_rational(rat(1, 3))
        );
        let e = cocycles::find(Gamma::Z6, "E^w_{0,0}").unwrap();
        assert!(pair0(&proj(Gamma::Z6, "1"), &e).unwrap().is_zero());
    }

    #[test]
    fn pair0_rejects_foreign_twist_and_non_projection() {
        let f = cocycles::find(Gamma::Z4, "F^i_{0,0}").unwrap();
        assert!(matches!(
            pair0(&proj(Gamma::Z3, "p0"), &f),
            Err(PairingError::TwistNotInGroup { .. })
        ));
        let tau = cocycles::find(Gamma::Z3, "tau").unwrap();
        let t = CrossedElement::t(crossed::OrbifoldSpec::new(Gamma::Z3), 1);
        assert!(matches!(
            pair0(&t, &tau),
            Err(PairingError::NotProjection(_))
        ));
    }

    #[test]
    fn pair2_vanishes_on_catalog() {
        for g in Gamma::CATALOGED {
            for (n, p) in crossed::catalog(g) {
                assert!(pair2(&p).is_zero(), "{g} {n}");
            }
        }
    }

    #[test]
    fn z4_q0_d11_cell() {
        let t = generate_table(Gamma::Z4);
        let expect = Coefficient::lambda(rat(-1, 2)).scale(&rat(-1, 4));
        assert_eq!(t.get("q0", "SD_{1,1}"), Some(&expect));
        assert_eq!(
            t.get("p1", "SF^i_{0,0}"),
            Some(&Coefficient::from_cyclotomic(Cyclotomic::i()).scale(&rat(1, 4)))
        );
    }

    #[test]
    fn shapes_and_cell_counts() {
        let expect = [
            (Gamma::Z3, (7, 8)),
            (Gamma::Z4, (8, 9)),
            (Gamma::Z6, (9, 10)),
        ];
        for (g, s) in expect {
            assert_eq!(generate_table(g).shape(), s);
            let v = printed_values(g).unwrap();
            assert_eq!((v.table.len(), v.table[0].len()), s);
            assert_eq!((v.proof.len(), v.proof[0].len()), s);
        }
    }

    #[test]
    fn z6_d_column_is_machine_combination() {
        let cols = columns(Gamma::Z6);
        assert_eq!(cols[2].header, "S(D_{0,1} + D_{1,0} + λ^(1/2) D_{1,1})");
    }

    #[test]
    fn pinning_is_reproduced() {
        for g in Gamma::CATALOGED {
            assert_eq!(pin_component_map(g), pinned_map(g), "{g}");
        }
    }

    #[test]
    fn z3_conflict_block() {
        let r = reconcile(Gamma::Z3);
        assert_eq!(r.cell("1", "Sτ").unwrap().verdict, Verdict::Match);
        for row in ["q0", "q1", "r0", "r1"] {
            assert_eq!(
                r.cell(row, "SE^w_{0,-1}").unwrap().verdict,
                Verdict::InternalConflict,
                "{row}"
            );
        }
    }

    #[test]
    fn pretty_rendering() {
        assert_eq!(
            pretty(&Coefficient::parse("(-1/4)*L^(-1/2)").unwrap()),
            "-1/4·λ^(-1/2)"
        );
        assert_eq!(pretty(&Coefficient::parse("(1/3)*z^4").unwrap()), "1/3·ζ²");
        assert_eq!(pretty(&Coefficient::parse("(1/4)*z^3").unwrap()), "1/4·i");
        assert_eq!(pretty(&Coefficient::parse("(-1/3)*z^2").unwrap()), "1/3·ζ⁴");
        assert_eq!(pretty(&Coefficient::parse("(-1/6)*z^4").unwrap()), "1/6·ζ⁵");
        assert_eq!(pretty(&Coefficient::zero()), "0");
    }
}
