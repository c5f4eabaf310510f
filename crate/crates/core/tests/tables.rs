use nlsp_core::advantage::{crossover_n, reproduce_tables, table2_rows, table3_rows, Classical, Solver};
use nlsp_core::growth::{ratio, GrowthClass};

#[test]
fn every_printed_label_is_reproduced() {
    let (checked, diffs) = reproduce_tables();
    assert_eq!(table2_rows().len(), 30);
    assert_eq!(table3_rows().len(), 20);
    assert_eq!(checked, 200);
    assert!(diffs.is_empty(), "{diffs:#?}");
}

#[test]
fn hypercube_crossovers() {
    let n = GrowthClass::poly(ratio(1, 1));
    let size = GrowthClass::exp_base(2.0);
    assert_eq!(crossover_n(Classical::Cls, Solver::Hhl, &size, &n, &n, 3..=200), Some(24));
    assert_eq!(crossover_n(Classical::Kmp, Solver::Hhl, &size, &n, &n, 3..=200), Some(14));
}
