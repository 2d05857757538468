mod common;

use extremal_moments::measure::{Atom, Interval, IntervalUnion, Measure, SecondMomentParam};
use extremal_moments::Error;
use proptest::prelude::*;
use rand::Rng;

fn seeded_density(seed: u64) -> Measure {
    common::random_symmetric_density(&mut common::rng(seed))
}

/// Density part scaled to `beta`, plus random atoms carrying `1 - beta`.
fn mixed(seed: u64, beta: f64) -> Measure {
    let mut rng = common::rng(seed ^ 0x9e37);
    let dens = seeded_density(seed).scale(beta).unwrap();
    let k = rng.gen_range(1..=4);
    let raw: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(0.1..1.0))).collect();
    let total: f64 = raw.iter().map(|r| r.1).sum();
    let atoms = raw
        .into_iter()
        .map(|(x, m)| Atom { x, mass: (1.0 - beta) * m / total })
        .collect();
    dens.add(&Measure::from_atoms(atoms).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moments_match_adaptive_integration(seed in any::<u64>(), k in 0usize..=12) {
        let mu = seeded_density(seed);
        // Simpson is only trusted between kinks, so integrate knot to knot.
        let mut cuts: Vec<f64> = mu.segments().iter().flat_map(|s| [s.lo, s.hi]).collect();
        cuts.dedup();
        let piecewise: f64 = cuts
            .windows(2)
            .map(|w| common::adaptive_simpson(|x| x.powi(k as i32) * common::density_at(&mu, x), w[0], w[1], 1e-14))
            .sum();
        prop_assert!((mu.moment(k) - piecewise).abs() <= 1e-9, "k={} {} vs {}", k, mu.moment(k), piecewise);
    }

    #[test]
    fn restriction_is_additive(seed in any::<u64>(), c1 in -0.9f64..0.0, c2 in 0.0f64..0.9, k in 0usize..=8) {
        let mu = mixed(seed, 0.7);
        let e1 = IntervalUnion::new(vec![
            Interval { lo: -1.0, hi: c1, lo_closed: true, hi_closed: true },
            Interval { lo: c2, hi: 1.0, lo_closed: false, hi_closed: true },
        ]).unwrap();
        let e2 = IntervalUnion::new(vec![Interval { lo: c1, hi: c2, lo_closed: false, hi_closed: true }]).unwrap();
        prop_assert!(e1.is_disjoint(&e2));
        let both = e1.union(&e2).unwrap();
        let lhs = mu.restrict(&e1).moment(k) + mu.restrict(&e2).moment(k);
        let rhs = mu.restrict(&both).moment(k);
        prop_assert!((lhs - rhs).abs() <= 1e-12);
        prop_assert!((rhs - mu.moment(k)).abs() <= 1e-12);
        let comp = e1.complement();
        prop_assert!((mu.restrict(&comp).moment(k) - mu.restrict(&e2).moment(k)).abs() <= 1e-12);
    }

    #[test]
    fn split_reconstructs(seed in any::<u64>(), beta in 0.05f64..0.95) {
        let sigma = mixed(seed, beta);
        let s = sigma.split_continuous_discrete().unwrap();
        prop_assert!((s.beta - beta).abs() <= 1e-12);
        prop_assert!(s.continuous.is_continuous());
        prop_assert!(s.discrete.segments().is_empty());
        let back = s.continuous.scale(s.beta).unwrap().add(&s.discrete.scale(1.0 - s.beta).unwrap()).unwrap();
        prop_assert!(back.approx_eq(&sigma, 1e-12));
    }

    #[test]
    fn symmetric_restriction_stays_symmetric(seed in any::<u64>(), lo in 0.0f64..0.5, width in 0.01f64..0.5) {
        let mu = seeded_density(seed);
        let e = IntervalUnion::symmetric_pair(lo, lo + width).unwrap();
        prop_assert!(e.is_symmetric());
        prop_assert!(mu.restrict(&e).is_symmetric(1e-12));
        prop_assert!(mu.restrict(&e.complement()).is_symmetric(1e-12));
    }

    #[test]
    fn class_members_charge_both_sides_of_a(seed in any::<u64>()) {
        let mu = seeded_density(seed);
        let a = SecondMomentParam::new(mu.moment(2).sqrt()).unwrap();
        prop_assert!(mu.in_class(a, 1e-12));
        let inner = IntervalUnion::new(vec![Interval::open(-a.value(), a.value())]).unwrap();
        prop_assert!(mu.restrict(&inner).total_mass() > 0.0);
        prop_assert!(mu.restrict(&inner.complement()).total_mass() > 0.0);
        let report = mu.lemma1_predicates(a).unwrap();
        prop_assert!(report.consistent());
    }

    #[test]
    fn json_round_trip_is_bit_exact(seed in any::<u64>(), beta in 0.1f64..0.9) {
        let mu = mixed(seed, beta);
        let back = Measure::from_json(&mu.to_json()).unwrap();
        prop_assert_eq!(back, mu);
    }

    #[test]
    fn lemma_predicates_consistent_on_atoms(xs in prop::collection::vec(0.0f64..=1.0, 1..4), a in 0.05f64..0.95) {
        let mut atoms = Vec::new();
        for &x in &xs {
            atoms.push(Atom { x: -x, mass: 0.5 / xs.len() as f64 });
            atoms.push(Atom { x, mass: 0.5 / xs.len() as f64 });
        }
        let mu = Measure::from_atoms(atoms).unwrap();
        let report = mu.lemma1_predicates(SecondMomentParam::new(a).unwrap()).unwrap();
        prop_assert!(report.consistent(), "{:?}", report);
    }
}

#[test]
fn validation_names_the_field() {
    let bad = r#"{"atoms":[{"x":0.1,"mass":0.5},{"x":0.2,"mass":-0.5}],"segments":[]}"#;
    match Measure::from_json(bad) {
        Err(Error::Validation { field, .. }) => assert_eq!(field, "atoms[1].mass"),
        other => panic!("{other:?}"),
    }
    let bad = r#"{"atoms":[],"segments":[{"lo":0.0,"hi":1.5,"coeffs":[1.0]}]}"#;
    match Measure::from_json(bad) {
        Err(Error::Validation { field, .. }) => assert!(field.starts_with("segments[0]"), "{field}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn negative_density_is_rejected() {
    let bad = r#"{"atoms":[],"segments":[{"lo":-1.0,"hi":1.0,"coeffs":[0.0, 1.0]}]}"#;
    assert!(Measure::from_json(bad).is_err());
}
