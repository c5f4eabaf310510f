use approx::assert_relative_eq;
use nlsp_core::families::undirected::complete;
use nlsp_core::graph::{hermitian_dilation, incidence_matrix, laplacian, pad_to_power_of_two, Graph, SymmetricMatrix};
use nlsp_core::hhl::{
    clock_histogram, detect_fixed_clock_qubits, effective_resistance, extract_overlap, hhl_solve, predicted_p_success,
    traffic_flow, HhlConfig, SolveMethod,
};
use std::f64::consts::PI;

fn cycle(n: usize, directed: bool) -> Graph {
    let mut g = Graph::new(n, directed);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, 1.0).unwrap();
    }
    g
}

fn c4_error(n_r: u32) -> f64 {
    let l = laplacian(&cycle(4, false)).unwrap();
    let cfg = HhlConfig::with_defaults(n_r, l.gershgorin_bound(), 2.0, false);
    let b = [1.0, -1.0, 0.0, 0.0];
    let x = hhl_solve(&l, &b, &cfg).unwrap().reconstruct();
    // L^+ b for C_4 with b = delta_0 - delta_1
    let oracle = [0.375, -0.375, -0.125, 0.125];
    let err: f64 = x.iter().zip(oracle).map(|(a, o)| (a - o).powi(2)).sum::<f64>().sqrt();
    err / oracle.iter().map(|o| o * o).sum::<f64>().sqrt()
}

#[test]
fn c4_converges_in_clock_size() {
    let errs: Vec<f64> = [4, 6, 8, 10].iter().map(|&n| c4_error(n)).collect();
    println!("C_4 relative errors: {errs:?}");
    assert!(errs.windows(2).all(|w| w[1] <= w[0]));
    assert!(errs[3] < 0.01);
}

#[test]
fn c4_resistances() {
    let g = cycle(4, false);
    assert_relative_eq!(effective_resistance(&g, 0, 1, &SolveMethod::Oracle).unwrap(), 0.75, epsilon = 1e-12);
    assert_relative_eq!(effective_resistance(&g, 0, 2, &SolveMethod::Oracle).unwrap(), 1.0, epsilon = 1e-12);
    let r = effective_resistance(&g, 0, 1, &SolveMethod::Hhl { n_r: 10, config: None }).unwrap();
    assert!((r - 0.75).abs() < 0.0075, "{r}");
}

#[test]
fn representable_spectrum_is_exact() {
    // K_4: eigenvalues 0 and 4; hypercube n = 2 (C_4): 0, 2, 2, 4.
    let k4 = laplacian(&complete(4).unwrap()).unwrap();
    let c4 = laplacian(&cycle(4, false)).unwrap();
    let b = [1.0, 0.5, -0.25, -1.25];
    for (l, pinv) in [(k4, 0.25), (c4, f64::NAN)] {
        let t = 2.0 * PI / 8.0; // lambda~ in {1/4, 1/2}
        let cfg = HhlConfig { n_r: 4, t, c: 0.2, signed: false, shots: None, seed: 0 };
        let out = hhl_solve(&l, &b, &cfg).unwrap();
        let oracle: Vec<f64> = {
            let d = l.to_dense().pseudo_inverse(1e-10).unwrap();
            (d * nalgebra::DVector::from_column_slice(&b)).iter().copied().collect()
        };
        if pinv.is_finite() {
            assert_relative_eq!(oracle[0], b[0] * pinv, epsilon = 1e-12);
        }
        for (x, o) in out.reconstruct().iter().zip(&oracle) {
            assert!((x - o).abs() < 1e-8);
        }
        assert_relative_eq!(out.p_success, predicted_p_success(&l, &b, &cfg).unwrap(), epsilon = 1e-10);
    }
}

#[test]
fn complete_graph_eigenvector_returns_clock_to_zero() {
    for n in [4usize, 6, 8] {
        let l = pad_to_power_of_two(&laplacian(&complete(n).unwrap()).unwrap(), n as f64).unwrap();
        let t = PI / n as f64; // lambda~ = 1/2
        let cfg = HhlConfig { n_r: 3, t, c: 0.5, signed: false, shots: None, seed: 0 };
        let mut b = vec![0.0; l.order()];
        b[0] = 1.0;
        b[1] = -1.0;
        let out = hhl_solve(&l, &b, &cfg).unwrap();
        assert_relative_eq!(out.p_clock_zero, 1.0, epsilon = 1e-12);
        let probe: Vec<f64> = b.iter().map(|x| x / 2f64.sqrt()).collect();
        let ov = extract_overlap(&out, &probe).unwrap();
        assert_relative_eq!(ov.fidelity, 1.0, epsilon = 1e-12);
        assert_relative_eq!(ov.value.unwrap() * 2f64.sqrt(), 2.0 / n as f64, epsilon = 1e-12);
        let fixed = detect_fixed_clock_qubits(&l, &b, &cfg, 0.8).unwrap();
        assert_eq!(fixed, vec![(0, 0), (1, 0), (2, 1)]);
    }
}

#[test]
fn shared_high_bits_are_fixed() {
    let mut a = SymmetricMatrix::new(2);
    a.set(0, 0, 12.0);
    a.set(1, 1, 13.0);
    let cfg = HhlConfig { n_r: 4, t: 2.0 * PI / 16.0, c: 0.5, signed: false, shots: None, seed: 0 };
    let b = [1.0, 1.0];
    // 12 = 1100, 13 = 1101: bits 1..3 shared, bit 0 split evenly.
    assert_eq!(detect_fixed_clock_qubits(&a, &b, &cfg, 0.8).unwrap(), vec![(1, 0), (2, 1), (3, 1)]);
    let hist = clock_histogram(&a, &b, &cfg).unwrap();
    assert_relative_eq!(hist[12], 0.5, epsilon = 1e-12);
    let mut u = SymmetricMatrix::new(4);
    for (i, x) in [1.0, 6.0, 9.0, 14.0].into_iter().enumerate() {
        u.set(i, i, x);
    }
    let cfg = HhlConfig { c: 0.05, ..cfg };
    assert!(detect_fixed_clock_qubits(&u, &[1.0; 4], &cfg, 0.8).unwrap().is_empty());
}

#[test]
fn example_traffic_flow() {
    let g = cycle(4, true);
    let b = incidence_matrix(&g).unwrap();
    assert!(b.column_sums().iter().all(|s| s.abs() < 1e-15));
    let sv = hermitian_dilation(&b).to_dense().symmetric_eigenvalues();
    let mut pos: Vec<f64> = sv.iter().copied().filter(|x| *x > 1e-9).collect();
    pos.sort_by(f64::total_cmp);
    assert_eq!(pos.len(), 3);
    for (x, e) in pos.iter().zip([2f64.sqrt(), 2f64.sqrt(), 2.0]) {
        assert_relative_eq!(*x, e, epsilon = 1e-12);
    }
    let c = [-1.0, 1.0, 0.0, 0.0];
    let r = traffic_flow(&g, &c, &SolveMethod::Oracle).unwrap();
    for (y, e) in r.flow.iter().zip([0.75, -0.25, -0.25, -0.25]) {
        assert_relative_eq!(*y, e, epsilon = 1e-12);
    }
    assert_eq!(r.negative_edges, vec![1, 2, 3]);
    let q = traffic_flow(&g, &c, &SolveMethod::Hhl { n_r: 10, config: None }).unwrap();
    for (y, e) in q.flow.iter().zip(&r.flow) {
        assert!((y - e).abs() < 0.02, "{:?}", q.flow);
    }
    assert!(traffic_flow(&g, &[1.0, 1.0, 0.0, 0.0], &SolveMethod::Oracle).is_err());
    assert_eq!(traffic_flow(&g, &[0.0; 4], &SolveMethod::Oracle).unwrap().flow, vec![0.0; 4]);
}

#[test]
fn shot_mode_estimates_fidelity() {
    let l = laplacian(&cycle(4, false)).unwrap();
    let mut cfg = HhlConfig::with_defaults(8, 4.0, 2.0, false);
    cfg.shots = Some(20000);
    cfg.seed = 7;
    let b = [1.0, -1.0, 0.0, 0.0];
    let out = hhl_solve(&l, &b, &cfg).unwrap();
    let state: Vec<f64> = out.solution_state.iter().map(|a| a.re).collect();
    let ov = extract_overlap(&out, &state).unwrap();
    assert!(ov.value.is_none());
    assert!((ov.fidelity - 1.0).abs() < 0.02);
}
