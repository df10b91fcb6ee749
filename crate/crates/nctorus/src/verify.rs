//! The exact verification battery shared by the command line and the
//! acceptance target.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cocycles::{self, dual_action, group_generator, verify_membership};
use crate::complexes::{
    alpha1, alpha2, assemble_dims, group_twists, h0_components, h2_components, invariant_dim,
    solve_h1_coboundary, H1Error, TwistSpec,
};
use crate::crossed::{self, cross_mul, is_projection, Gamma, OrbifoldSpec};
use crate::pairing;
use crate::random::{self, TestRng};
use crate::scalar::Coefficient;
use crate::torus::{act, GroupMatrix, Label, TorusElement};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Samples {
    pub ring: usize,
    pub torus: usize,
    pub crossed: usize,
    pub sigma: usize,
    pub complex: usize,
    pub h1: usize,
    pub automorphism: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples {
            ring: 1000,
            torus: 1000,
            crossed: 500,
            sigma: 200,
            complex: 200,
            h1: 100,
            automorphism: 100,
        }
    }
}

impl Samples {
    pub fn quick() -> Self {
        Samples {
            ring: 100,
            torus: 100,
            crossed: 50,
            sigma: 20,
            complex: 20,
            h1: 10,
            automorphism: 10,
        }
    }
}

/// H0 and H2 component counts per twist label.
pub fn expected_count(label: Label) -> usize {
    match label {
        Label::One | Label::NegOmega | Label::NegOmega2 => 1,
        Label::I | Label::NegI => 2,
        Label::Omega | Label::Omega2 => 3,
        Label::NegOne => 4,
    }
}

pub fn expected_invariant_dims(gamma: Gamma) -> Option<Vec<(Label, usize)>> {
    use Label::*;
    match gamma {
        Gamma::Z3 => Some(vec![(One, 1), (Omega, 3), (Omega2, 3)]),
        Gamma::Z4 => Some(vec![(One, 1), (I, 2), (NegOne, 3), (NegI, 2)]),
        Gamma::Z6 => Some(vec![
            (One, 1),
            (Omega, 2),
            (Omega2, 2),
            (NegOne, 2),
            (NegOmega, 1),
            (NegOmega2, 1),
        ]),
        Gamma::Z2 => None,
    }
}

pub fn ring_axioms(rng: &mut TestRng, n: usize) -> Check {
    for i in 0..n {
        let (a, b, c) = (
            random::coefficient(rng),
            random::coefficient(rng),
            random::coefficient(rng),
        );
        let ok = &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a * &b == &b * &a
            && &(&a + &b) + &c == &a + &(&b + &c)
            && &(&a - &b) + &b == a;
        if !ok {
            return check(
                "ring axioms",
                false,
                format!("triple {i}: a = {a}, b = {b}, c = {c}"),
            );
        }
    }
    check("ring axioms", true, format!("{n} triples"))
}

pub fn torus_associativity(rng: &mut TestRng, n: usize) -> Check {
    for i in 0..n {
        let x: Vec<TorusElement> = (0..3).map(|_| random::torus_element(rng, 3, 3)).collect();
        if x[0].mul(&x[1]).mul(&x[2]) != x[0].mul(&x[1].mul(&x[2])) {
            return check("torus associativity", false, format!("triple {i}"));
        }
    }
    check("torus associativity", true, format!("{n} triples"))
}

pub fn act_automorphism(rng: &mut TestRng, n: usize) -> Check {
    for g in GroupMatrix::all() {
        for i in 0..n {
            let x = random::torus_element(rng, 3, 3);
            let y = random::torus_element(rng, 3, 3);
            let mult = act(&g, &x.mul(&y)) == act(&g, &x).mul(&act(&g, &y));
            let star = act(&g, &x.star()) == act(&g, &x).star();
            if !(mult && star) {
                return check("act automorphism", false, format!("{g}, sample {i}"));
            }
        }
    }
    check("act automorphism", true, format!("8 twists x {n} pairs"))
}

pub fn crossed_associativity(rng: &mut TestRng, gamma: Gamma, n: usize) -> Check {
    let spec = OrbifoldSpec::new(gamma);
    let name = format!("crossed associativity {gamma}");
    for i in 0..n {
        let x: Vec<_> = (0..3)
            .map(|_| random::crossed_element(rng, spec, 2, 2))
            .collect();
        let l = cross_mul(&cross_mul(&x[0], &x[1]).expect("same algebra"), &x[2])
            .expect("same algebra");
        let r = cross_mul(&x[0], &cross_mul(&x[1], &x[2]).expect("same algebra"))
            .expect("same algebra");
        if l != r {
            return check(name, false, format!("triple {i}"));
        }
    }
    check(name, true, format!("{n} triples"))
}

pub fn sigma_order(rng: &mut TestRng, gamma: Gamma, n: usize) -> Check {
    let spec = OrbifoldSpec::new(gamma);
    let name = format!("sigma^N = id {gamma}");
    for i in 0..n {
        let x = random::torus_element(rng, 3, 3);
        if spec.sigma_pow(gamma.order(), &x) != x {
            return check(name, false, format!("element {i}: {x}"));
        }
    }
    check(name, true, format!("{n} elements"))
}

pub fn projections(gamma: Gamma) -> Check {
    let cat = crossed::catalog(gamma);
    let bad: Vec<&str> = cat
        .iter()
        .filter(|(_, p)| !is_projection(p).ok())
        .map(|(n, _)| *n)
        .collect();
    check(
        format!("projections {gamma}"),
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} projections verified", cat.len())
        } else {
            format!("not projections: {bad:?}")
        },
    )
}

pub fn complex_identity(rng: &mut TestRng, tw: &TwistSpec, n: usize) -> Check {
    let name = format!("alpha2 alpha1 = 0 twist {}", tw.label().tag());
    for i in 0..n {
        let phi = random::torus_element(rng, 4, 4);
        let (a, b) = alpha1(tw, &phi);
        if !alpha2(tw, &a, &b).is_zero() {
            return check(name, false, format!("functional {i}: {phi}"));
        }
    }
    check(name, true, format!("{n} functionals"))
}

pub fn membership(gamma: Gamma) -> Check {
    let cat = cocycles::catalog(gamma);
    let bad: Vec<String> = cat
        .iter()
        .filter(|c| !verify_membership(c))
        .map(|c| c.name.clone())
        .collect();
    check(
        format!("catalog membership {gamma}"),
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} cocycles", cat.len())
        } else {
            format!("failing: {bad:?}")
        },
    )
}

/// dual_action applied N times returns each cocycle with scalar 1.
pub fn dual_action_order(gamma: Gamma) -> Check {
    let g = group_generator(gamma);
    let name = format!("dual action order {gamma}");
    for tw in group_twists(gamma) {
        let entries = cocycles::twist_catalog(tw.label());
        for c in &entries {
            let mut scalar = Coefficient::one();
            let mut cur = c.clone();
            for _ in 0..gamma.order() {
                match dual_action(&g, &cur, &entries) {
                    Ok((s, target)) => {
                        scalar = &scalar * &s;
                        cur = entries
                            .iter()
                            .find(|e| e.name == target)
                            .expect("target cataloged")
                            .clone();
                    }
                    Err(e) => return check(name, false, e.to_string()),
                }
            }
            if cur.name != c.name || !scalar.is_one() {
                return check(
                    name,
                    false,
                    format!("{} returns as {} {}", c.name, scalar, cur.name),
                );
            }
        }
    }
    check(name, true, "every cocycle returns with scalar 1")
}

pub fn invariant_dims(gamma: Gamma) -> Check {
    let name = format!("invariant dims {gamma}");
    let Some(expected) = expected_invariant_dims(gamma) else {
        return check(name, true, "no stated values");
    };
    let mut got = Vec::new();
    for (label, want) in &expected {
        match invariant_dim(gamma, &TwistSpec::new(*label)) {
            Ok(s) => got.push((label.tag(), s.dim(), *want)),
            Err(e) => return check(name, false, e.to_string()),
        }
    }
    let ok = got.iter().all(|(_, d, w)| d == w);
    let total: usize = got.iter().map(|(_, d, _)| d).sum();
    let detail = got
        .iter()
        .map(|(l, d, _)| format!("{l}:{d}"))
        .collect::<Vec<_>>()
        .join(" ");
    check(name, ok, format!("{detail} total {total}"))
}

pub fn h0_counts(tw: &TwistSpec, radius: i64) -> Check {
    let r = h0_components(tw, radius);
    let want = expected_count(tw.label());
    check(
        format!("H0 components twist {} R={radius}", tw.label().tag()),
        r.count() == want && r.inconsistent.is_empty(),
        format!("{} components, expected {want}", r.count()),
    )
}

pub fn h2_counts(tw: &TwistSpec, radius: i64) -> Check {
    let r = h2_components(tw, radius);
    let want = expected_count(tw.label());
    check(
        format!("H2 components twist {} R={radius}", tw.label().tag()),
        r.count() == want,
        format!(
            "{} components ({} rim-excluded), expected {want}",
            r.count(),
            r.rim_excluded
        ),
    )
}

pub fn h1_round_trip(rng: &mut TestRng, tw: &TwistSpec, n: usize) -> Check {
    let name = format!("H1 coboundary solver twist {}", tw.label().tag());
    if tw.is_untwisted() {
        let cases = [
            ((TorusElement::u1(), TorusElement::zero()), "φ^1_{-1,0}"),
            ((TorusElement::zero(), TorusElement::u2()), "φ^2_{0,-1}"),
        ];
        for (sigma, label) in cases {
            match solve_h1_coboundary(tw, &sigma) {
                Err(H1Error::Obstructed(o)) if o.iter().any(|x| x.label == label) => {}
                other => return check(name, false, format!("{label}: {other:?}")),
            }
        }
        return check(name, true, "certificates φ^1_{-1,0}, φ^2_{0,-1}");
    }
    for i in 0..n {
        let gamma = random::torus_element(rng, 4, 4);
        let sigma = alpha1(tw, &gamma);
        match solve_h1_coboundary(tw, &sigma) {
            Ok(g) if alpha1(tw, &g) == sigma => {}
            Ok(_) => return check(name, false, format!("coboundary {i}: wrong primitive")),
            Err(e) => return check(name, false, format!("coboundary {i}: {e}")),
        }
    }
    check(name, true, format!("{n} coboundaries"))
}

pub fn dims(gamma: Gamma, h1_twisted_ok: bool) -> Check {
    let name = format!("dimension assembly {gamma}");
    match assemble_dims(gamma, h1_twisted_ok) {
        Ok(d) => {
            let claimed = crate::complexes::DimsReport::claimed(gamma);
            let ok = claimed.is_none_or(|c| c == (d.hc0, d.hc2, d.hp_even))
                && d.h2 == 1
                && d.hp_odd == Some(0);
            check(
                name,
                ok,
                format!(
                    "HC0={} HC2={} HP_even={} H2={} HP_odd={}",
                    d.hc0,
                    d.hc2,
                    d.hp_even,
                    d.h2,
                    d.hp_odd.map_or("?".to_string(), |x| x.to_string())
                ),
            )
        }
        Err(e) => check(name, false, e.to_string()),
    }
}

pub fn pairing_strict(gamma: Gamma) -> Check {
    let r = pairing::reconcile(gamma);
    let fails = r.strict_failures();
    let strict = r.cells.iter().filter(|c| c.strict).count();
    check(
        format!("strict pairing cells {gamma}"),
        fails.is_empty(),
        if fails.is_empty() {
            format!("{strict} strict cells")
        } else {
            format!(
                "{}/{strict} fail, first {} {}",
                fails.len(),
                fails[0].row,
                fails[0].column
            )
        },
    )
}

pub fn pair2_zero(gamma: Gamma) -> Check {
    let bad: Vec<&str> = crossed::catalog(gamma)
        .iter()
        .filter(|(_, p)| !pairing::pair2(p).is_zero())
        .map(|(n, _)| *n)
        .collect();
    let detail = if bad.is_empty() {
        "all projections".to_string()
    } else {
        format!("nonzero: {bad:?}")
    };
    check(format!("pair2 = 0 {gamma}"), bad.is_empty(), detail)
}

/// Run the battery over the given groups.
pub fn run(gammas: &[Gamma], window: i64, seed: u64, samples: Samples) -> Vec<Check> {
    let mut rng = random::rng(seed);
    let mut out = vec![
        ring_axioms(&mut rng, samples.ring),
        torus_associativity(&mut rng, samples.torus),
        act_automorphism(&mut rng, samples.automorphism),
    ];
    let mut twists = BTreeSet::new();
    for g in gammas {
        for t in group_twists(*g) {
            twists.insert(t.label());
        }
    }
    let twists: Vec<TwistSpec> = Label::ALL
        .into_iter()
        .filter(|l| twists.contains(l))
        .map(TwistSpec::new)
        .collect();
    let mut h1_ok = true;
    for tw in &twists {
        out.push(complex_identity(&mut rng, tw, samples.complex));
        out.push(h0_counts(tw, window));
        out.push(h2_counts(tw, window));
        let h1 = h1_round_trip(&mut rng, tw, samples.h1);
        h1_ok &= h1.passed;
        out.push(h1);
    }
    for g in gammas {
        out.push(crossed_associativity(&mut rng, *g, samples.crossed));
        out.push(sigma_order(&mut rng, *g, samples.sigma));
        out.push(projections(*g));
        out.push(membership(*g));
        out.push(dual_action_order(*g));
        out.push(invariant_dims(*g));
        out.push(dims(*g, h1_ok));
        out.push(pairing_strict(*g));
        out.push(pair2_zero(*g));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_passes() {
        let checks = run(&[Gamma::Z4], 4, 1, Samples::quick());
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
