//! Statistical sanity of the Monte Carlo harness on EG(255,175).

use fwbf::sim::{CodeSource, Experiment, ExperimentConfig, PointStats, StopRule};
use fwbf::{Algorithm, DecoderConfig};

fn run(alg: Algorithm, lambda: usize, p: usize, grid: &[f64]) -> Vec<PointStats> {
    let mut c = ExperimentConfig::new(
        CodeSource::Eg(4),
        alg,
        DecoderConfig {
            alpha: 0.5,
            lambda,
            block_len_p: p,
            ..DecoderConfig::default()
        },
    );
    c.snr_grid = grid.to_vec();
    c.stop = StopRule {
        target_word_errors: 200,
        max_frames: 40_000,
    };
    c.master_seed = 11;
    Experiment::new(c).unwrap().run().unwrap()
}

#[test]
fn error_rates_fall_with_snr() {
    let pts = run(Algorithm::Fwbf, 1, 15, &[2.5, 3.0, 3.5, 4.0]);
    for w in pts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        assert!(
            b.fer() < a.fer() + 2.0 * (a.fer_stderr() + b.fer_stderr()),
            "{a:?} {b:?}"
        );
        assert!(
            b.ber() < a.ber() + 2.0 * (a.ber_stderr() + b.ber_stderr()),
            "{a:?} {b:?}"
        );
        assert!(b.mean_iters() < a.mean_iters());
    }
}

#[test]
fn fwbf_fer_tracks_mlp_fer() {
    let grid = [3.0, 3.5];
    let f = run(Algorithm::Fwbf, 1, 15, &grid);
    let m = run(Algorithm::MlpWbf, 17, 1, &grid);
    for (a, b) in f.iter().zip(&m) {
        let spread = 3.0 * (a.fer_stderr().powi(2) + b.fer_stderr().powi(2)).sqrt();
        assert!((a.fer() - b.fer()).abs() <= spread, "fwbf {a:?}\nmlp {b:?}");
    }
}
