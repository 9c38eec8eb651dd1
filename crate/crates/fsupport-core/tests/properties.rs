//! Property tests for the algebra layer: Frobenius twisting is a ring map,
//! bracket powers respect products, printing round-trips, and the basis
//! engine's canonical forms and pullback operations keep their contracts.

use fsupport_core::chains::{run_increasing_chain, ChainConfig, StopRule};
use fsupport_core::groebner::{Engine, Ideal, Submodule};
use fsupport_core::matrix::{bracket_power, PolyMatrix};
use fsupport_core::ring::{
    frobenius_power, parse_poly, Monomial, MonomialOrder, Polynomial, RingSpec,
};
use proptest::prelude::*;

fn ring5() -> RingSpec {
    RingSpec::new(5, &["x", "y"], MonomialOrder::GrevLex).unwrap()
}

fn ring2() -> RingSpec {
    RingSpec::new(2, &["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
}

/// Raw term data: coefficient plus one exponent per variable.
type Terms = Vec<(u32, Vec<u32>)>;

fn terms_strategy(p: u32, nvars: usize, maxdeg: u32, maxlen: usize) -> BoxedStrategy<Terms> {
    prop::collection::vec((1..p, prop::collection::vec(0..=maxdeg, nvars)), 0..=maxlen).boxed()
}

fn build_poly(ring: &RingSpec, terms: &Terms) -> Polynomial {
    let mut acc = Polynomial::zero();
    for (c, exps) in terms {
        let term = ring.monomial_term(Monomial { exps: exps.clone() }, *c);
        acc = ring.add(&acc, &term);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frobenius_is_a_ring_map(
        a in terms_strategy(5, 2, 3, 4),
        b in terms_strategy(5, 2, 3, 4),
        e in 0u32..3,
    ) {
        let r = ring5();
        let (a, b) = (build_poly(&r, &a), build_poly(&r, &b));
        let sum = frobenius_power(&r, &r.add(&a, &b), e).unwrap();
        let parts = r.add(
            &frobenius_power(&r, &a, e).unwrap(),
            &frobenius_power(&r, &b, e).unwrap(),
        );
        prop_assert_eq!(&sum, &parts);
        let prod = frobenius_power(&r, &r.mul(&a, &b).unwrap(), e).unwrap();
        let factors = r
            .mul(
                &frobenius_power(&r, &a, e).unwrap(),
                &frobenius_power(&r, &b, e).unwrap(),
            )
            .unwrap();
        prop_assert_eq!(&prod, &factors);
    }

    #[test]
    fn frobenius_levels_compose(a in terms_strategy(2, 3, 2, 4), e1 in 0u32..3, e2 in 0u32..3) {
        let r = ring2();
        let a = build_poly(&r, &a);
        let twice = frobenius_power(&r, &frobenius_power(&r, &a, e1).unwrap(), e2).unwrap();
        let once = frobenius_power(&r, &a, e1 + e2).unwrap();
        prop_assert_eq!(&twice, &once);
    }

    #[test]
    fn printing_round_trips(a in terms_strategy(5, 2, 3, 4)) {
        let r = ring5();
        let a = build_poly(&r, &a);
        let printed = r.format(&a);
        let reparsed = parse_poly(&printed, &r).unwrap();
        prop_assert_eq!(&reparsed, &a);
    }

    #[test]
    fn bracket_power_respects_products(
        entries_m in prop::collection::vec(terms_strategy(5, 2, 2, 2), 4),
        entries_n in prop::collection::vec(terms_strategy(5, 2, 2, 2), 4),
        e in 0u32..3,
    ) {
        let r = ring5();
        let cell = |data: &[Terms], i: usize, j: usize| build_poly(&r, &data[2 * i + j]);
        let mut m = PolyMatrix::zero(2, 2);
        let mut n = PolyMatrix::zero(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                *m.at_mut(i, j) = cell(&entries_m, i, j);
                *n.at_mut(i, j) = cell(&entries_n, i, j);
            }
        }
        let lhs = bracket_power(&r, &m.mul(&r, &n).unwrap(), e).unwrap();
        let rhs = bracket_power(&r, &m, e)
            .unwrap()
            .mul(&r, &bracket_power(&r, &n, e).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_bases_are_stable_and_preserve_generators(
        gens in prop::collection::vec(
            (terms_strategy(2, 3, 2, 3), terms_strategy(2, 3, 2, 3)),
            1..4,
        ),
    ) {
        let r = ring2();
        let engine = Engine::default();
        let rows: Vec<Vec<Polynomial>> = gens
            .iter()
            .map(|(a, b)| vec![build_poly(&r, a), build_poly(&r, b)])
            .collect();
        let sub = Submodule::from_gens(2, rows.clone()).unwrap();
        let canon = engine.canonicalize(&r, &sub).unwrap();
        let again = engine.canonicalize(&r, &canon).unwrap();
        prop_assert_eq!(canon.gens(), again.gens());
        for row in &rows {
            prop_assert!(engine.contains(&r, &canon, row).unwrap());
        }
    }

    #[test]
    fn preimage_generators_map_into_the_target(
        entries_m in prop::collection::vec(terms_strategy(2, 3, 2, 2), 4),
        target in prop::collection::vec(
            (terms_strategy(2, 3, 2, 2), terms_strategy(2, 3, 2, 2)),
            1..3,
        ),
    ) {
        let r = ring2();
        let engine = Engine::default();
        let mut m = PolyMatrix::zero(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                *m.at_mut(i, j) = build_poly(&r, &entries_m[2 * i + j]);
            }
        }
        let w = Submodule::from_gens(
            2,
            target
                .iter()
                .map(|(a, b)| vec![build_poly(&r, a), build_poly(&r, b)])
                .collect(),
        )
        .unwrap();
        let w = engine.canonicalize(&r, &w).unwrap();
        let pre = engine.preimage(&r, &m, &w).unwrap();
        for v in pre.gens() {
            let image = m.mul_vec(&r, v).unwrap();
            prop_assert!(engine.contains(&r, &w, &image).unwrap());
        }
    }

    #[test]
    fn kernel_generators_are_annihilated(
        entries_m in prop::collection::vec(terms_strategy(2, 3, 2, 2), 4),
    ) {
        let r = ring2();
        let engine = Engine::default();
        let mut m = PolyMatrix::zero(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                *m.at_mut(i, j) = build_poly(&r, &entries_m[2 * i + j]);
            }
        }
        let ker = engine.kernel_of_map(&r, &m).unwrap();
        for v in ker.gens() {
            let image = m.mul_vec(&r, v).unwrap();
            prop_assert!(image.iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn colon_generators_multiply_back_in(
        w_gens in prop::collection::vec(terms_strategy(2, 3, 2, 2), 1..3),
        f in terms_strategy(2, 3, 2, 3),
    ) {
        let r = ring2();
        let engine = Engine::default();
        let f = build_poly(&r, &f);
        prop_assume!(!f.is_zero());
        let w = Submodule::from_gens(
            1,
            w_gens.iter().map(|g| vec![build_poly(&r, g)]).collect(),
        )
        .unwrap();
        let w = engine.canonicalize(&r, &w).unwrap();
        let colon = engine.colon_by_element(&r, &w, &f).unwrap();
        for v in colon.gens() {
            let scaled = vec![r.mul(&v[0], &f).unwrap()];
            prop_assert!(engine.contains(&r, &w, &scaled).unwrap());
        }
    }

    #[test]
    fn ideal_intersection_is_a_lower_bound_containing_products(
        a_gens in prop::collection::vec(terms_strategy(2, 3, 2, 2), 1..3),
        b_gens in prop::collection::vec(terms_strategy(2, 3, 2, 2), 1..3),
    ) {
        let r = ring2();
        let engine = Engine::default();
        let a = Ideal::from_gens(a_gens.iter().map(|g| build_poly(&r, g)).collect());
        let b = Ideal::from_gens(b_gens.iter().map(|g| build_poly(&r, g)).collect());
        let meet = engine.intersect_ideals(&r, &a, &b).unwrap();
        for f in meet.gens() {
            prop_assert!(engine.ideal_contains(&r, &a, f).unwrap());
            prop_assert!(engine.ideal_contains(&r, &b, f).unwrap());
        }
        for fa in a.gens() {
            for fb in b.gens() {
                let prod = r.mul(fa, fb).unwrap();
                prop_assert!(engine.ideal_contains(&r, &meet, &prod).unwrap());
            }
        }
    }

    #[test]
    fn monomial_radical_membership_matches_exponent_supports(
        j_gens in prop::collection::vec(prop::collection::vec(0u32..3, 3), 1..4),
        m_exps in prop::collection::vec(0u32..3, 3),
    ) {
        let r = ring2();
        let engine = Engine::default();
        let gens: Vec<Polynomial> = j_gens
            .iter()
            .map(|e| r.monomial_term(Monomial { exps: e.clone() }, 1))
            .collect();
        prop_assume!(gens.iter().all(|g| !g.is_zero()));
        let j = Ideal::from_gens(gens);
        let m = r.monomial_term(Monomial { exps: m_exps.clone() }, 1);
        // A monomial is in the radical of a monomial ideal exactly when some
        // generator's variable support is contained in the monomial's.
        let expected = j_gens.iter().any(|g| {
            g.iter().zip(&m_exps).all(|(&ge, &me)| ge == 0 || me > 0)
        });
        prop_assert_eq!(engine.radical_membership(&r, &m, &j).unwrap(), expected);
    }

    #[test]
    fn window_rule_stops_eventually_constant_chains(kink in 0usize..5, window in 1usize..4) {
        let r = RingSpec::new(2, &["x"], MonomialOrder::GrevLex).unwrap();
        let engine = Engine::default();
        let cfg = ChainConfig { stab_window: window, hard_cap: kink + 3 * window + 2 };
        let term = |j: usize| -> fsupport_core::Result<Ideal> {
            let exp = 1 + kink.saturating_sub(j) as u32;
            let gen = r.monomial_term(Monomial { exps: vec![exp] }, 1);
            engine.canonicalize_ideal(&r, &Ideal::from_gens(vec![gen]))
        };
        let outcome = run_increasing_chain(
            "synthetic",
            &cfg,
            StopRule::Window,
            term,
            |a: &Ideal, b: &Ideal| {
                Ok(a.gens().iter().all(|f| engine.ideal_contains(&r, b, f).unwrap()))
            },
            |a: &Ideal, b: &Ideal| Ok(a.gens() == b.gens()),
        )
        .unwrap();
        let limit = term(kink).unwrap();
        prop_assert_eq!(outcome.value.gens(), limit.gens());
        let stat = outcome.stat("synthetic");
        prop_assert_eq!(stat.probe_ok, Some(true));
        prop_assert!(!stat.certified);
        prop_assert!(stat.stop_index >= kink);
    }
}
