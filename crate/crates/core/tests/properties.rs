use nlsp_core::advantage::{categorize, Category};
use nlsp_core::families::directed::gnp_digraph;
use nlsp_core::families::repair_sources_sinks;
use nlsp_core::fit::{eval_model, fit_series, Model, Quantity};
use nlsp_core::graph::{incidence_matrix, laplacian, Graph};
use nlsp_core::growth::{ratio, GrowthClass};
use nlsp_core::spectral::{extreme_eigs, sparsity, DEFAULT_CUTOFF};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn growth() -> impl Strategy<Value = GrowthClass> {
    (0u8..4, -6i64..7, -6i64..7, -4i64..5, 1i64..4).prop_map(|(e, p, l, ll, d)| {
        GrowthClass::new(e as f64 * 0.5, ratio(p, d), ratio(l, d), ratio(ll, d))
    })
}

fn graph(directed: bool) -> impl Strategy<Value = Graph> {
    (3usize..14, prop::collection::vec((0usize..14, 0usize..14, 1u32..9), 1..40)).prop_map(move |(n, es)| {
        let mut g = Graph::new(n, directed);
        for (u, v, w) in es {
            let (u, v) = (u % n, v % n);
            if u != v && !g.adjacent(u, v) {
                g.add_edge(u, v, w as f64 * 0.5).unwrap();
            }
        }
        g
    })
}

proptest! {
    #[test]
    fn growth_division_undoes_multiplication(a in growth(), b in growth()) {
        prop_assert_eq!(a.mul(&b).div(&b), a);
        prop_assert_eq!(a.div(&a), GrowthClass::constant());
    }

    #[test]
    fn growth_product_commutes(a in growth(), b in growth()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn log_of_polynomials_is_log(p in 1i64..9, d in 1i64..4) {
        prop_assert_eq!(GrowthClass::poly(ratio(p, d)).log_of(), GrowthClass::polylog(ratio(1, 1)));
    }

    #[test]
    fn decaying_ratios_are_bad(a in growth()) {
        let r = a.recip();
        if a.cmp_growth(&GrowthClass::constant()) == std::cmp::Ordering::Greater {
            prop_assert_eq!(categorize(&r), Category::Bad);
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in graph(false)) {
        let l = laplacian(&g).unwrap();
        for i in 0..l.order() {
            let s: f64 = (0..l.order()).map(|j| l.get(i, j)).sum();
            prop_assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn incidence_columns_sum_to_zero(g in graph(true)) {
        prop_assume!(g.n_edges() > 0);
        let b = incidence_matrix(&g).unwrap();
        prop_assert!(b.column_sums().iter().all(|s| *s == 0.0));
    }

    #[test]
    fn uniform_weight_scaling_keeps_kappa_and_s(g in graph(false), c in prop::sample::select(vec![0.5, 3.0])) {
        prop_assume!(g.n_edges() > 0);
        let mut h = g.clone();
        for k in 0..h.n_edges() {
            let w = h.edges()[k].w;
            h.set_weight(k, w * c).unwrap();
        }
        let (l, m) = (laplacian(&g).unwrap(), laplacian(&h).unwrap());
        let (x, y) = (extreme_eigs(&l, DEFAULT_CUTOFF, 512).unwrap(), extreme_eigs(&m, DEFAULT_CUTOFF, 512).unwrap());
        prop_assert!((x.kappa() - y.kappa()).abs() <= 1e-8 * x.kappa());
        prop_assert_eq!(sparsity(&l), sparsity(&m));
    }

    #[test]
    fn repair_leaves_no_sources_or_sinks(n in 3usize..40, p in 0.0f64..0.4, seed in any::<u64>()) {
        let mut g = gnp_digraph(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let pairs_before = g.has_bidirected_pair();
        repair_sources_sinks(&mut g, &mut ChaCha8Rng::seed_from_u64(seed ^ 1)).unwrap();
        prop_assert_eq!(g.n_vertices(), n);
        prop_assert!(g.sources().is_empty() && g.sinks().is_empty());
        prop_assert!(pairs_before || !g.has_bidirected_pair());
        let edges = g.edges().to_vec();
        let again = repair_sources_sinks(&mut g, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(again.added.is_empty() && again.reversed.is_empty());
        prop_assert_eq!(g.edges(), edges.as_slice());
    }

    #[test]
    fn exact_series_recover_their_model(
        which in 0usize..8,
        c0 in 1.0f64..5.0,
        lower in prop::collection::vec(0.0f64..1.0, 2),
        lead in 0.5f64..2.0,
    ) {
        let m = Model::CANDIDATES[which];
        let (xs, c): (Vec<f64>, Vec<f64>) = match m {
            Model::Exponential => ((2..=20).map(|i| i as f64).collect(), vec![c0, 0.25, lead]),
            Model::Constant => ((0..16).map(|i| 4.0 * 2f64.powi(i)).collect(), vec![c0]),
            Model::Polylog(p) | Model::Polynomial(p) => {
                let mut c = vec![c0];
                c.extend(&lower[..p as usize - 1]);
                c.push(lead);
                ((0..16).map(|i| 4.0 * 2f64.powf(i as f64 * 0.5)).collect(), c)
            }
        };
        let ys: Vec<f64> = xs.iter().map(|&x| eval_model(m, &c, x)).collect();
        let f = fit_series(&xs, &ys, Quantity::Kappa).unwrap();
        prop_assert_eq!(f.model, m);
        for (got, want) in f.coeffs.iter().zip(&c) {
            prop_assert!((got - want).abs() <= 1e-6 * want.abs().max(1.0), "{:?} vs {:?}", f.coeffs, c);
        }
        let again = fit_series(&xs, &ys, Quantity::Kappa).unwrap();
        prop_assert_eq!(f, again);
    }
}
