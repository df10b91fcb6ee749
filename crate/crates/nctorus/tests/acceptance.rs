//! Acceptance criteria 1-13, one line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;

use nctorus::complexes::{assemble_dims, h0_components, h2_components, invariant_dim, TwistSpec};
use nctorus::crossed::{self, cross_mul, cross_star, Gamma};
use nctorus::numeric;
use nctorus::pairing::{self, ColumnKind, Verdict};
use nctorus::random;
use nctorus::scalar::{rat, Coefficient, Cyclotomic, Rational};
use nctorus::torus::{Label, LatticePoint};
use nctorus::verify::{self, Check};

const SEED: u64 = 20240611;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn all_pass(checks: &[Check]) -> Outcome {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Outcome {
            ok: false,
            detail: format!("{}: {}", c.name, c.detail),
        },
        None => Outcome {
            ok: true,
            detail: format!("{} checks", checks.len()),
        },
    }
}

fn c1_algebra_laws() -> Outcome {
    let mut rng = random::rng(SEED);
    let mut checks = vec![
        verify::ring_axioms(&mut rng, 1000),
        verify::torus_associativity(&mut rng, 1000),
        verify::act_automorphism(&mut rng, 50),
    ];
    for g in Gamma::CATALOGED {
        checks.push(verify::crossed_associativity(&mut rng, g, 500));
        checks.push(verify::sigma_order(&mut rng, g, 200));
    }
    all_pass(&checks)
}

fn c2_projections() -> Outcome {
    let mut n = 0;
    for g in Gamma::CATALOGED {
        for (name, p) in crossed::catalog(g) {
            n += 1;
            let sq = cross_mul(&p, &p).unwrap();
            if sq != p || cross_star(&p) != p {
                return Outcome {
                    ok: false,
                    detail: format!("{g} {name}"),
                };
            }
        }
    }
    Outcome {
        ok: n == 24,
        detail: format!("{n} projections with p^2 = p = p*"),
    }
}

fn c3_complex_identity() -> Outcome {
    let mut rng = random::rng(SEED + 3);
    let checks: Vec<Check> = TwistSpec::all()
        .iter()
        .map(|t| verify::complex_identity(&mut rng, t, 200))
        .collect();
    all_pass(&checks)
}

fn c4_h0_counts() -> Outcome {
    let mut seen = Vec::new();
    for tw in TwistSpec::all() {
        let want = verify::expected_count(tw.label());
        for r in [4, 6] {
            let got = h0_components(&tw, r).count();
            if got != want {
                return Outcome {
                    ok: false,
                    detail: format!("{} R={r}: {got} != {want}", tw.label().tag()),
                };
            }
        }
        seen.push(format!("{}:{want}", tw.label().tag()));
    }
    Outcome {
        ok: true,
        detail: seen.join(" "),
    }
}

/// Exponent of phi_{n,m}/phi_{0,0} stated for the origin component.
fn stated_exponent(label: Label, p: LatticePoint) -> Rational {
    let (n, m) = (p.n, p.m);
    match label {
        Label::Omega => rat(m * m + n * n + 4 * m * n, 6),
        Label::I => rat(m * m + n * n + 2 * m * n, 4),
        // phi_{2n,2m} = lambda^{2nm} phi_{0,0}
        Label::NegOne => rat(2 * (n / 2) * (m / 2), 1),
        Label::NegOmega => rat(-(m * m + n * n), 2),
        _ => unreachable!(),
    }
}

fn c5_closed_forms() -> Outcome {
    let r = 6;
    let mut points = 0;
    for label in [Label::Omega, Label::I, Label::NegOne, Label::NegOmega] {
        let rep = h0_components(&TwistSpec::new(label), r);
        let Some(comp) = rep
            .components
            .iter()
            .find(|c| c.values.contains_key(&LatticePoint::ORIGIN))
        else {
            return Outcome {
                ok: false,
                detail: format!("{}: no origin component", label.tag()),
            };
        };
        let base = &comp.values[&LatticePoint::ORIGIN];
        let fit = comp.fit.as_ref();
        for (p, v) in &comp.values {
            let rel = v.mul(&base.inv());
            let want = stated_exponent(label, *p);
            let fit_ok = fit.is_some_and(|f| f.eval(*p) - f.eval(LatticePoint::ORIGIN) == want);
            if !rel.coef.is_one() || rel.exp != want || !fit_ok {
                return Outcome {
                    ok: false,
                    detail: format!("{} at ({},{})", label.tag(), p.n, p.m),
                };
            }
            points += 1;
        }
    }
    Outcome {
        ok: true,
        detail: format!("{points} window points"),
    }
}

fn c6_invariant_dims() -> Outcome {
    let want = [(Gamma::Z3, 7), (Gamma::Z4, 8), (Gamma::Z6, 9)];
    let mut parts = Vec::new();
    for (g, total) in want {
        let expected = verify::expected_invariant_dims(g).unwrap();
        let mut sum = 0;
        for (label, d) in expected {
            let got = invariant_dim(g, &TwistSpec::new(label)).map(|s| s.dim());
            if got != Ok(d) {
                return Outcome {
                    ok: false,
                    detail: format!("{g} {}: {got:?} != {d}", label.tag()),
                };
            }
            sum += d;
        }
        if sum != total {
            return Outcome {
                ok: false,
                detail: format!("{g}: total {sum}"),
            };
        }
        parts.push(format!("{g}={sum}"));
    }
    Outcome {
        ok: true,
        detail: parts.join(" "),
    }
}

fn c7_h1_solver() -> Outcome {
    let mut rng = random::rng(SEED + 7);
    let checks: Vec<Check> = TwistSpec::all()
        .iter()
        .filter(|t| t.label() != Label::NegOne)
        .map(|t| verify::h1_round_trip(&mut rng, t, 100))
        .collect();
    all_pass(&checks)
}

fn c8_h2() -> Outcome {
    for tw in TwistSpec::all() {
        let got = h2_components(&tw, 5).count();
        let want = verify::expected_count(tw.label());
        if got != want {
            return Outcome {
                ok: false,
                detail: format!("{} R=5: {got} != {want}", tw.label().tag()),
            };
        }
    }
    for g in Gamma::CATALOGED {
        let d = assemble_dims(g, true).unwrap();
        if d.h2 != 1 {
            return Outcome {
                ok: false,
                detail: format!("{g}: H2 = {}", d.h2),
            };
        }
    }
    Outcome {
        ok: true,
        detail: "all twists at R=5; H2 = 1 for Z3, Z4, Z6".into(),
    }
}

fn c9_assembly() -> Outcome {
    let mut rng = random::rng(SEED + 9);
    let h1_ok = TwistSpec::all()
        .iter()
        .filter(|t| !t.is_untwisted())
        .all(|t| verify::h1_round_trip(&mut rng, t, 20).passed);
    let want = [
        (Gamma::Z3, (7, 8, 8)),
        (Gamma::Z4, (8, 9, 9)),
        (Gamma::Z6, (9, 10, 10)),
    ];
    let mut parts = Vec::new();
    for (g, w) in want {
        let d = assemble_dims(g, h1_ok).unwrap();
        if (d.hc0, d.hc2, d.hp_even) != w || d.hp_odd != Some(0) {
            return Outcome {
                ok: false,
                detail: format!("{g}: {d:?}"),
            };
        }
        parts.push(format!("{g}=({},{},{})", d.hc0, d.hc2, d.hp_even));
    }
    Outcome {
        ok: true,
        detail: format!("{} HP_odd=0", parts.join(" ")),
    }
}

fn q(n: i64, d: i64) -> Coefficient {
    Coefficient::from_rational(rat(n, d))
}

fn i_over(n: i64, d: i64) -> Coefficient {
    Coefficient::from_cyclotomic(Cyclotomic::i()).scale(&rat(n, d))
}

/// Independent of the pairing code: recompute which t-power pairs with c
/// and test for support overlap.
fn oracle_structural_zero(
    e: &crossed::CrossedElement,
    col: &pairing::Column,
    map: pairing::ComponentMap,
) -> bool {
    let ColumnKind::Cocycles(terms) = &col.kind else {
        return false;
    };
    let gamma = e.spec().gamma();
    terms.iter().all(|(_, c)| {
        let k = map.power(gamma, c.twist).unwrap();
        e.part(k)
            .support()
            .all(|p| !c.support.contains(LatticePoint::new(-p.n, -p.m)))
    })
}

fn c10_strict_cells() -> Outcome {
    let mut checked = 0;
    let trace = [
        (
            Gamma::Z3,
            vec![
                q(1, 1),
                q(1, 3),
                q(1, 3),
                q(1, 3),
                q(1, 3),
                q(1, 3),
                q(1, 3),
            ],
        ),
        (
            Gamma::Z4,
            vec![
                q(1, 1),
                q(1, 4),
                q(1, 4),
                q(1, 4),
                q(1, 4),
                q(1, 4),
                q(1, 4),
                q(1, 2),
            ],
        ),
        (
            Gamma::Z6,
            vec![
                q(1, 1),
                q(1, 6),
                q(1, 6),
                q(1, 6),
                q(1, 6),
                q(1, 6),
                q(1, 3),
                q(1, 3),
                q(1, 2),
            ],
        ),
    ];
    for (g, col) in trace {
        let t = pairing::generate_table(g);
        let got: Vec<Coefficient> = t.column("Sτ").unwrap().into_iter().cloned().collect();
        if got != col {
            return Outcome {
                ok: false,
                detail: format!("{g} Sτ column"),
            };
        }
        let row1 = &t.cells[0];
        if row1[0] != q(1, 1) || row1[1..].iter().any(|c| !c.is_zero()) {
            return Outcome {
                ok: false,
                detail: format!("{g} row 1"),
            };
        }
        checked += col.len() + row1.len() - 1;

        let report = pairing::reconcile(g);
        let printed = pairing::printed_values(g).unwrap();
        let cols = pairing::columns(g);
        for (r, (name, p)) in crossed::catalog(g).iter().enumerate() {
            for (c, column) in cols.iter().enumerate() {
                if !oracle_structural_zero(p, column, t.map) {
                    continue;
                }
                let printed_zero = [&printed.table[r][c], &printed.proof[r][c]]
                    .iter()
                    .any(|v| v.as_ref().is_some_and(|x| x.is_zero()));
                let flagged = report
                    .cell(name, &column.header)
                    .is_some_and(|x| x.structural_zero && x.strict);
                if !t.cells[r][c].is_zero() || !printed_zero || !flagged {
                    return Outcome {
                        ok: false,
                        detail: format!("{g} structural zero {name} {}", column.header),
                    };
                }
                checked += 1;
            }
        }
    }
    let t4 = pairing::generate_table(Gamma::Z4);
    // p2 under SD_{0,0}: table prints -1/4, the proof list 1/4.
    let explicit = [
        ("p0", "SD_{0,0}", vec![q(1, 4)]),
        ("p1", "SD_{0,0}", vec![q(-1, 4)]),
        ("p2", "SD_{0,0}", vec![q(-1, 4), q(1, 4)]),
        ("p0", "SF^i_{0,0}", vec![q(1, 4)]),
        ("p1", "SF^i_{0,0}", vec![i_over(1, 4)]),
        ("p2", "SF^i_{0,0}", vec![q(-1, 4)]),
        ("p0", "SF^-i_{0,0}", vec![q(1, 4)]),
        ("p1", "SF^-i_{0,0}", vec![i_over(-1, 4)]),
        ("p2", "SF^-i_{0,0}", vec![q(-1, 4)]),
        (
            "q0",
            "SD_{1,1}",
            vec![Coefficient::lambda(rat(-1, 2)).scale(&rat(-1, 4))],
        ),
    ];
    for (row, col, allowed) in explicit {
        let got = t4.get(row, col).unwrap();
        if !allowed.contains(got) {
            return Outcome {
                ok: false,
                detail: format!("Z4 {row} {col} = {got}"),
            };
        }
        checked += 1;
    }
    for g in Gamma::CATALOGED {
        if let Some(f) = pairing::reconcile(g).strict_failures().first() {
            return Outcome {
                ok: false,
                detail: format!("{g} {} {}", f.row, f.column),
            };
        }
    }
    Outcome {
        ok: true,
        detail: format!("{checked} strict cells"),
    }
}

fn c11_pair2() -> Outcome {
    let mut n = 0;
    for g in Gamma::CATALOGED {
        for (name, p) in crossed::catalog(g) {
            if !pairing::pair2(&p).is_zero() {
                return Outcome {
                    ok: false,
                    detail: format!("{g} {name}"),
                };
            }
            n += 1;
        }
    }
    Outcome {
        ok: true,
        detail: format!("{n} projections"),
    }
}

fn c12_reconciliation() -> Outcome {
    let expected_conflicts: BTreeSet<(Gamma, &str, &str)> = [
        (Gamma::Z3, "q0", "SE^w_{0,-1}"),
        (Gamma::Z3, "q1", "SE^w_{0,-1}"),
        (Gamma::Z3, "r0", "SE^w_{0,-1}"),
        (Gamma::Z3, "r1", "SE^w_{0,-1}"),
        (Gamma::Z4, "p2", "SD_{0,0}"),
        (Gamma::Z6, "p1", "SD_{0,0}"),
        (Gamma::Z6, "p2", "SD_{0,0}"),
        (Gamma::Z6, "p3", "SD_{0,0}"),
        (Gamma::Z6, "p4", "SD_{0,0}"),
        (Gamma::Z6, "q0", "Sτ"),
    ]
    .into_iter()
    .collect();
    let mut total = 0;
    let mut conflicts = BTreeSet::new();
    let mut summary = Vec::new();
    for (g, cells) in [(Gamma::Z3, 56), (Gamma::Z4, 72), (Gamma::Z6, 90)] {
        let r = pairing::reconcile(g);
        let (rows, cols) = pairing::generate_table(g).shape();
        let distinct: BTreeSet<(&str, &str)> = r
            .cells
            .iter()
            .map(|c| (c.row.as_str(), c.column.as_str()))
            .collect();
        if r.cells.len() != cells || distinct.len() != rows * cols {
            return Outcome {
                ok: false,
                detail: format!("{g}: {} cells classified", r.cells.len()),
            };
        }
        total += r.cells.len();
        for c in &r.cells {
            if c.verdict == Verdict::InternalConflict {
                conflicts.insert((g, c.row.clone(), c.column.clone()));
            }
        }
        summary.push(format!(
            "{g}: {} match, {} mismatch, {} conflict",
            r.count(Verdict::Match),
            r.count(Verdict::Mismatch),
            r.count(Verdict::InternalConflict)
        ));
    }
    let got: BTreeSet<(Gamma, &str, &str)> = conflicts
        .iter()
        .map(|(g, r, c)| (*g, r.as_str(), c.as_str()))
        .collect();
    if got != expected_conflicts {
        return Outcome {
            ok: false,
            detail: format!("conflict set {got:?}"),
        };
    }
    Outcome {
        ok: true,
        detail: format!("{total} cells; {}", summary.join("; ")),
    }
}

fn c13_numeric() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut thetas = Vec::new();
    for g in Gamma::CATALOGED {
        let r = numeric::check_table(g, SEED);
        worst = worst.max(r.max_error());
        thetas.push(format!("{:.6}", r.theta));
    }
    Outcome {
        ok: worst <= numeric::TOLERANCE,
        detail: format!(
            "max relative error {worst:.2e} at theta {}",
            thetas.join("/")
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("algebra laws", c1_algebra_laws),
        ("projection suite", c2_projections),
        ("complex identity", c3_complex_identity),
        ("H0 component counts", c4_h0_counts),
        ("closed-form fits", c5_closed_forms),
        ("invariant dimensions", c6_invariant_dims),
        ("H1 solver round trip", c7_h1_solver),
        ("H2 counts", c8_h2),
        ("dimension assembly", c9_assembly),
        ("strict pairing cells", c10_strict_cells),
        ("pair2 vanishing", c11_pair2),
        ("reconciliation completeness", c12_reconciliation),
        ("numeric cross-validation", c13_numeric),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name} ({})",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
