mod common;

use extremal_moments::quadrature::{
    self, canonicalize, is_exact, is_extreme, verify_extremality, ConvexTestFunction, MomentVector, Quadrature,
    RadauEnd,
};
use proptest::prelude::*;
use rand::Rng;

fn max_moment_error(q: &Quadrature, degree: usize) -> f64 {
    (0..=degree)
        .map(|k| (q.apply(|x| x.powi(k as i32)) - common::lebesgue(k)).abs())
        .fold(0.0, f64::max)
}

fn mirror_error(q: &Quadrature) -> f64 {
    let (x, w) = (q.nodes(), q.weights());
    (0..q.len())
        .map(|i| (x[i] + x[q.len() - 1 - i]).abs().max((w[i] - w[q.len() - 1 - i]).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn classical_rules_are_exact_positive_and_symmetric() {
    for n in 1..=20 {
        let g = quadrature::gauss(n).unwrap();
        assert!(max_moment_error(&g, 2 * n - 1) <= 1e-11, "gauss({n})");
        assert!(mirror_error(&g) <= 1e-13);

        let l = quadrature::lobatto(n + 1).unwrap();
        assert!(max_moment_error(&l, 2 * n - 1) <= 1e-11, "lobatto({})", n + 1);
        assert!(mirror_error(&l) <= 1e-13);

        for end in [RadauEnd::Left, RadauEnd::Right] {
            let r = quadrature::radau(n, end).unwrap();
            assert_eq!(r.len(), n);
            assert!(max_moment_error(&r, 2 * n - 2) <= 1e-11, "radau({n}, {end:?})");
        }
        for q in [&g, &l] {
            assert!(q.weights().iter().all(|&w| w > 0.0));
        }
    }
}

#[test]
fn degree_limits_are_sharp() {
    // One degree past exactness each rule must fail.
    for n in 1..=8 {
        let g = quadrature::gauss(n).unwrap();
        assert!(max_moment_error(&g, 2 * n) > 1e-6);
        let l = quadrature::lobatto(n + 1).unwrap();
        assert!(max_moment_error(&l, 2 * n) > 1e-6);
        let r = quadrature::radau(n, RadauEnd::Left).unwrap();
        assert!(max_moment_error(&r, 2 * n - 1) > 1e-6);
    }
}

#[test]
fn small_rules_match_solved_moment_equations() {
    let (nodes, w) = common::solve_one_parameter_rule(|t| vec![-t, t], 0.0, 1.0, 2);
    let g = quadrature::gauss(2).unwrap();
    for i in 0..2 {
        assert!((g.nodes()[i] - nodes[i]).abs() <= 1e-13 && (g.weights()[i] - w[i]).abs() <= 1e-13);
    }
    let (nodes, w) = common::solve_one_parameter_rule(|t| vec![-1.0, t, 1.0], -0.9, 0.95, 3);
    let l = quadrature::lobatto(3).unwrap();
    for i in 0..3 {
        assert!((l.nodes()[i] - nodes[i]).abs() <= 1e-13 && (l.weights()[i] - w[i]).abs() <= 1e-13);
    }
    let (nodes, w) = common::solve_one_parameter_rule(|t| vec![-1.0, t], -0.9, 0.95, 2);
    let r = quadrature::radau(2, RadauEnd::Left).unwrap();
    for i in 0..2 {
        assert!((r.nodes()[i] - nodes[i]).abs() <= 1e-13 && (r.weights()[i] - w[i]).abs() <= 1e-13);
    }
}

fn sweep_pool(n: usize) -> Vec<Quadrature> {
    let mut pool: Vec<Quadrature> = (n..=2 * n).map(|p| quadrature::gauss(p).unwrap()).collect();
    pool.extend((n + 1..=2 * n).map(|p| quadrature::lobatto(p).unwrap()));
    pool
}

#[test]
fn extremality_sweep_over_rules_and_mixtures() {
    let catalog = ConvexTestFunction::default_catalog();
    let mut rng = common::rng(7);
    for n in 1..=5 {
        let pool = sweep_pool(n);
        let mut candidates = pool.clone();
        for _ in 0..30 {
            let a = &pool[rng.gen_range(0..pool.len())];
            let b = &pool[rng.gen_range(0..pool.len())];
            candidates.push(a.convex_combination(b, rng.gen()).unwrap());
        }
        for t in &candidates {
            let report = verify_extremality(n, t, &catalog, 1e-10).unwrap();
            assert!(report.pass(), "n={n} failing rows: {:?}", report.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
        }
        // The bounds are attained by the two extreme rules themselves.
        let g = quadrature::gauss(n).unwrap();
        let l = quadrature::lobatto(n + 1).unwrap();
        for t in [&g, &l] {
            assert!(verify_extremality(n, t, &catalog, 0.0).unwrap().pass());
        }
    }
}

#[test]
fn non_convex_function_can_break_the_sandwich() {
    // For n = 1 a concave function reverses the order.
    let g = quadrature::gauss(1).unwrap();
    let l = quadrature::lobatto(2).unwrap();
    let f = |x: f64| -x * x;
    assert!(g.apply(f) > l.apply(f));
}

#[test]
fn candidate_must_be_exact() {
    let q = Quadrature::new(vec![0.5], vec![2.0]).unwrap();
    assert!(verify_extremality(1, &q, &ConvexTestFunction::default_catalog(), 1e-10).is_err());
}

fn distinct_nodes(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..=1.0, 1..=max).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::new();
        for x in v {
            if out.last().map_or(true, |&l| x - l >= 0.05) {
                out.push(x);
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn classifier_agrees_with_rank_oracle(
        nodes in distinct_nodes(8),
        raw_w in prop::collection::vec(0.01f64..1.0, 8),
        order in 0usize..=8,
    ) {
        let weights: Vec<f64> = raw_w[..nodes.len()].to_vec();
        let q = Quadrature::new(nodes.clone(), weights).unwrap();
        let m = q.moment_vector(order);
        let oracle = common::rank(&common::vandermonde(&nodes, order), 1e-10) == nodes.len();
        prop_assert_eq!(is_extreme(&q, &m, 1e-10).unwrap(), oracle);
    }

    #[test]
    fn mixtures_of_exact_rules_stay_exact(n in 1usize..=5, i in 0usize..100, j in 0usize..100, t in 0.0f64..=1.0) {
        let pool = sweep_pool(n);
        let a = &pool[i % pool.len()];
        let b = &pool[j % pool.len()];
        let c = a.convex_combination(b, t).unwrap();
        prop_assert!(is_exact(&c, &MomentVector::lebesgue(2 * n - 1), 1e-10));
    }

    #[test]
    fn canonicalize_is_idempotent(
        nodes in prop::collection::vec(-1.0f64..=1.0, 1..10),
        weights in prop::collection::vec(0.0f64..1.0, 10),
    ) {
        let w = &weights[..nodes.len()];
        match canonicalize(&nodes, w) {
            Ok(q) => {
                prop_assert_eq!(q.canonicalize().unwrap(), q.clone());
                let total: f64 = w.iter().sum();
                prop_assert!((q.weights().iter().sum::<f64>() - total).abs() <= 1e-14 * (1.0 + total));
            }
            Err(_) => prop_assert!(w.iter().all(|&x| x == 0.0)),
        }
    }

    #[test]
    fn json_round_trip(n in 1usize..=12) {
        let q = quadrature::gauss(n).unwrap();
        let back: Quadrature = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q);
    }
}

#[test]
fn json_rejects_bad_weights() {
    let err = serde_json::from_str::<Quadrature>(r#"{"nodes":[0.0,0.5],"weights":[1.0,-1.0]}"#).unwrap_err();
    assert!(err.to_string().contains("weights[1]"), "{err}");
}
