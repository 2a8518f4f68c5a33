use gme_core::experiment::{run_sweep, ExperimentConfig, GammaGrid, StateChoice, SweepRecord};
use gme_core::recovery::SchemeKind;

const X: [f64; 3] = [0.25, 0.5, 1.0];

fn sweep(state: StateChoice) -> Vec<SweepRecord> {
    let grid = GammaGrid::new(0.0, 1.2, 0.05).unwrap();
    let cfg = ExperimentConfig::new(state, SchemeKind::BeforeAndAfter)
        .with_params(&X)
        .with_grid(grid);
    run_sweep(&cfg).unwrap()
}

/// Smaller `x` never yields less genuine negativity at the same `Gamma*t`.
fn assert_dominance(records: &[SweepRecord]) {
    assert!(records.iter().all(|r| r.status.is_ok()));
    let at = |x: f64, gt: f64| {
        records
            .iter()
            .find(|r| r.param == Some(x) && (r.gamma_t - gt).abs() < 1e-12)
            .unwrap()
            .e
    };
    for r in records.iter().filter(|r| r.param == Some(X[0])) {
        for pair in X.windows(2) {
            let (lo, hi) = (at(pair[0], r.gamma_t), at(pair[1], r.gamma_t));
            assert!(lo >= hi - 1e-7, "Gamma*t {}: E(x={}) = {lo} < E(x={}) = {hi}", r.gamma_t, pair[0], pair[1]);
        }
    }
}

#[test]
fn ghz_lifetime_ordering_in_x() {
    assert_dominance(&sweep(StateChoice::Ghz));
}

#[test]
fn w_lifetime_ordering_in_x() {
    assert_dominance(&sweep(StateChoice::W));
}
