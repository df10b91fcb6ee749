use proptest::prelude::*;

use nctorus::crossed::{cross_mul, CrossedElement, Gamma, OrbifoldSpec};
use nctorus::scalar::{rat, Coefficient};
use nctorus::torus::{act, GroupMatrix, LatticePoint, TorusElement};

fn coefficient() -> impl Strategy<Value = Coefficient> {
    let term = (-5i64..=5, 1i64..=4, 0i64..12, -6i64..=6, 1i64..=6)
        .prop_map(|(n, d, k, qa, qb)| Coefficient::term(rat(n, d), k, rat(qa, qb)));
    prop::collection::vec(term, 1..=3)
        .prop_map(|ts| ts.iter().fold(Coefficient::zero(), |acc, t| &acc + t))
}

fn torus_element() -> impl Strategy<Value = TorusElement> {
    let term =
        (-3i64..=3, -3i64..=3, coefficient()).prop_map(|(n, m, c)| (LatticePoint::new(n, m), c));
    prop::collection::vec(term, 1..=3).prop_map(TorusElement::from_terms)
}

fn crossed_element(gamma: Gamma) -> impl Strategy<Value = CrossedElement> {
    let spec = OrbifoldSpec::new(gamma);
    prop::collection::vec(prop::option::of(torus_element()), gamma.order()).prop_map(move |parts| {
        let parts = parts
            .into_iter()
            .enumerate()
            .filter_map(|(k, x)| x.map(|x| (k, x)))
            .collect::<Vec<_>>();
        CrossedElement::from_parts(spec, parts)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_text_round_trips(c in coefficient()) {
        prop_assert_eq!(Coefficient::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn coefficient_inverse(c in coefficient()) {
        if let Some(m) = c.as_monomial() {
            let inv = m.to_coefficient().inv().unwrap();
            prop_assert!((&m.to_coefficient() * &inv).is_one());
        }
    }

    #[test]
    fn torus_distributes(a in torus_element(), b in torus_element(), c in torus_element()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn star_reverses_products(a in torus_element(), b in torus_element()) {
        prop_assert_eq!(a.mul(&b).star(), b.star().mul(&a.star()));
    }

    #[test]
    fn twists_compose_within_cyclic_subgroups(a in torus_element(), i in 0usize..8, j in 1usize..6) {
        let g = GroupMatrix::all()[i];
        let h = (1..j).fold(g, |acc, _| acc.compose(&g));
        prop_assert_eq!(act(&g, &act(&h, &a)), act(&g.compose(&h), &a));
    }

    #[test]
    fn crossed_associative_z6(x in crossed_element(Gamma::Z6), y in crossed_element(Gamma::Z6), z in crossed_element(Gamma::Z6)) {
        let l = cross_mul(&cross_mul(&x, &y).unwrap(), &z).unwrap();
        let r = cross_mul(&x, &cross_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }
}
