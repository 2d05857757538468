mod common;

use extremal_moments::kfamily;
use extremal_moments::measure::SecondMomentParam;
use extremal_moments::represent::{
    mixture_moment, represent, verify_representation, Grid, MixingMeasure, TestBasis, TestFunction,
};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grid_points_represent_themselves(b in 0.1f64..0.9, pick in any::<prop::sample::Index>()) {
        let grid = Grid::new(11, 11).unwrap();
        let pts = grid.points(b);
        let (x, y) = pts[pick.index(pts.len())];
        let sigma = if x == b { kfamily::make(b, b, b) } else { kfamily::make(b, x, y) }.unwrap().to_measure();
        let rep = represent(&sigma, SecondMomentParam::new(b).unwrap(), grid, TestBasis::default()).unwrap();
        prop_assert!(rep.residual <= 1e-10, "residual {}", rep.residual);
        let total: f64 = rep.gamma.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(rep.gamma.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn mixture_moments_exchange_with_integration(
        b in 0.1f64..0.9,
        raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.01f64..1.0), 1..8),
        k in 0usize..=12,
    ) {
        let total: f64 = raw.iter().map(|r| r.2).sum();
        let points: Vec<(f64, f64)> = raw.iter().map(|&(s, t, _)| (b * s * 0.99, b + (1.0 - b) * (0.01 + 0.99 * t))).collect();
        let weights: Vec<f64> = raw.iter().map(|r| r.2 / total).collect();
        let gamma = MixingMeasure::new(b, points, weights).unwrap();
        let direct = gamma.mixture_measure().unwrap().moment(k);
        prop_assert!((mixture_moment(&gamma, k).unwrap() - direct).abs() <= 1e-12);
    }

    #[test]
    fn refining_the_grid_never_hurts(seed in any::<u64>(), n in 3usize..8) {
        let sigma = common::random_symmetric_density(&mut common::rng(seed));
        let b = SecondMomentParam::new(sigma.moment(2).sqrt()).unwrap();
        let basis = TestBasis::new(8).unwrap();
        let coarse = represent(&sigma, b, Grid::new(n, n).unwrap(), basis).unwrap();
        let fine = represent(&sigma, b, Grid::new(2 * n - 1, 2 * n - 1).unwrap(), basis).unwrap();
        prop_assert!(fine.residual <= coarse.residual + 1e-12, "{} > {}", fine.residual, coarse.residual);
    }
}

#[test]
fn grid_refinement_is_nested() {
    for b in [0.2, 0.5, 0.7] {
        let coarse = Grid::new(6, 6).unwrap().points(b);
        let fine = Grid::new(11, 11).unwrap().points(b);
        assert!(coarse.iter().all(|p| fine.contains(p)));
    }
}

#[test]
fn random_mixture_is_recovered_and_verified() {
    let b = 0.55;
    let grid = Grid::new(21, 21).unwrap();
    let pts = grid.points(b);
    let mut rng = common::rng(11);
    let chosen: Vec<(f64, f64)> = (0..10).map(|_| pts[rng.gen_range(0..pts.len())]).collect();
    let raw: Vec<f64> = (0..10).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let target = MixingMeasure::new(b, chosen, raw.iter().map(|w| w / total).collect()).unwrap();
    let sigma = target.mixture_measure().unwrap();
    let basis = TestBasis::default();
    let rep = represent(&sigma, SecondMomentParam::new(b).unwrap(), grid, basis).unwrap();
    assert!(rep.residual <= 1e-8, "{}", rep.residual);
    let report = verify_representation(&sigma, &rep.gamma, &TestFunction::even_monomials(basis), 1e-8).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn off_class_target_is_rejected() {
    let sigma = kfamily::make(0.5, 0.2, 0.8).unwrap().to_measure();
    let b = SecondMomentParam::new(0.4).unwrap();
    assert!(represent(&sigma, b, Grid::new(5, 5).unwrap(), TestBasis::default()).is_err());
}
