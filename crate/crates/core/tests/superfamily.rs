use nlsp_core::advantage::{Category, Solver};
use nlsp_core::families::undirected::generalized_hypercube;
use nlsp_core::graph::laplacian;
use nlsp_core::spectral::full_spectrum;
use nlsp_core::superfamily::{build_slice, slice_verdict, tableau, write_tableau_csv, SliceKind};

fn cat(kind: SliceKind, range: std::ops::RangeInclusive<usize>) -> Category {
    slice_verdict(&build_slice(kind, range).unwrap(), Solver::Hhl).unwrap().category
}

#[test]
fn slice_categories() {
    for m in 3..=6 {
        assert_eq!(cat(SliceKind::Row(m), 2..=10), Category::Better, "row {m}");
    }
    // s = a m - m + 1 grows with a, so row m = 2 only reaches a / log^2(a).
    assert_eq!(cat(SliceKind::Row(2), 2..=10), Category::Good);
    assert_eq!(cat(SliceKind::Row(1), 2..=10), Category::Bad);
    for a in 2..=6 {
        assert_eq!(cat(SliceKind::Column(a), 1..=8), Category::Best);
    }
    assert_eq!(cat(SliceKind::MainDiagonal, 2..=8), Category::Best);
    for d in 1..=3 {
        assert_eq!(cat(SliceKind::SuperDiagonal(d), d + 1..=d + 6), Category::Best);
        assert_eq!(cat(SliceKind::SubDiagonal(d), d.max(2)..=d + 6), Category::Best);
    }
    assert_eq!(cat(SliceKind::IsoS(7), 0..=0), Category::Bad);
}

#[test]
fn hypercube_spectrum_is_binomial() {
    for m in 1..=8usize {
        let spec = full_spectrum(&laplacian(&generalized_hypercube(2, m).unwrap()).unwrap());
        let mut counts = vec![0usize; m + 1];
        for x in spec {
            let k = (x / 2.0).round();
            assert!((x - 2.0 * k).abs() < 1e-9);
            counts[k as usize] += 1;
        }
        let mut binom = 1usize;
        for (k, &c) in counts.iter().enumerate() {
            assert_eq!(c, binom, "m={m} k={k}");
            binom = binom * (m - k) / (k + 1);
        }
    }
}

#[test]
fn tableau_csv_has_header_and_rows() {
    let cells = tableau(4, 3, 64, 3000).unwrap();
    assert!(cells.iter().all(|c| c.matches_prediction()));
    let mut buf = Vec::new();
    write_tableau_csv(&cells, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,m,N,kappa_pred,kappa_meas,s_pred,s_meas"));
    assert_eq!(lines.count(), cells.len());
}
