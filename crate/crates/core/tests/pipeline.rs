use fourlat_core::harness::{run, ExperimentConfig, Report, Verdict};
use fourlat_core::lattice::{ContinuumProxy, LatticeGrid};
use fourlat_core::resolvent::{error_norm_fiber_on_grid, error_norm_power, ErrorOperator, GmresOptions, PowerOptions};
use fourlat_core::riesz::RieszPair;
use fourlat_core::symbols::Symbol;
use num_complex::Complex64;

#[test]
fn json_config_to_csv_and_json_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rate.csv");
    let json = dir.path().join("rate.json");
    let text = format!(
        r#"{{"experiment": "pr", "kind": "rate-free", "symbol": {{"symbol": "pseudorel", "m": 1.0}},
            "h": [0.25, 0.125, 0.0625, 0.03125, 0.015625], "output": {{"csv": {csv:?}, "json": {json:?}}}}}"#
    );
    let report = run(&ExperimentConfig::from_json(&text).unwrap()).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);

    let written = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(written, report.to_csv_string().unwrap());
    assert_eq!(written.lines().count(), 1 + 5 + 1);
    let back = Report::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn power_iteration_agrees_with_fibers_of_the_box() {
    // The proxy on a box of side L sees exactly the fibers t = 2πk/L.
    let (h, n) = (0.125, 256);
    let z = Complex64::new(-1.0, 0.0);
    let pair = RieszPair::standard(1).unwrap();
    let proxy = ContinuumProxy::new(LatticeGrid::new(1, h, n).unwrap(), 4).unwrap();
    for symbol in [Symbol::frac_lap(1, 0.5).unwrap(), Symbol::laplacian(1).unwrap()] {
        let op = ErrorOperator::new(&symbol, &pair, None, &proxy, z, GmresOptions::default()).unwrap();
        let power = error_norm_power(&op, &PowerOptions::default()).unwrap().norm;
        let fiber = error_norm_fiber_on_grid(&symbol, &pair, h, z, n).unwrap();
        assert!((power - fiber).abs() <= 1e-3 * fiber, "{}: {power} vs {fiber}", symbol.tag());
    }
}

#[test]
fn potential_without_window_uses_its_own_shift() {
    let cfg = ExperimentConfig::from_json(
        r#"{"kind": "spectrum-distance", "potential": {"potential": "constant", "value": 0.5},
            "grid": {"refine": 4}, "h": [1.0, 0.5, 0.25, 0.125]}"#,
    )
    .unwrap();
    let report = run(&cfg).unwrap();
    assert!(report.rows.iter().all(|r| r.1.is_finite() && r.1 >= 0.0));
}
