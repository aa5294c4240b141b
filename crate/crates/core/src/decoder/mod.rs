//! Weighted bit-flipping decoders built on the IMWBF reliability metric
//!
//! ```text
//! E_n = sum_{m in M(n)} (2 s_m - 1) w_{n,m} - alpha |y_n|
//! ```
//!
//! Three selection rules share one decode loop:
//!
//! * IMWBF flips the single bit with the largest metric.
//! * MLP-WBF flips the `lambda` largest metrics of the iteration.
//! * FWBF splits the metric vector into contiguous `p`-length blocks and
//!   flips at most one bit per block, the block maximum, when it is positive.
//!
//! All metrics of an iteration are computed from the syndrome at the start
//! of that iteration; flips are applied as one batch afterwards.

mod select;
mod weights;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::code::ParityCheckMatrix;
pub use select::{argmax, block_argmaxes, padded_len, top_lambda};
pub use weights::WeightTable;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("frame has {found} values but the code length is {expected}")]
    FrameLength { expected: usize, found: usize },
    #[error("check {check} has only {weight} bit(s); weights need at least 2")]
    DegenerateCheck { check: usize, weight: usize },
    #[error("invalid decoder configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Imwbf,
    MlpWbf,
    Fwbf,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Imwbf => "imwbf",
            Algorithm::MlpWbf => "mlp",
            Algorithm::Fwbf => "fwbf",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "imwbf" => Ok(Algorithm::Imwbf),
            "mlp" | "mlp-wbf" => Ok(Algorithm::MlpWbf),
            "fwbf" => Ok(Algorithm::Fwbf),
            _ => Err(format!(
                "unknown decoder {s:?} (expected imwbf, mlp or fwbf)"
            )),
        }
    }
}

/// What to do when an iteration selects no bit while checks remain
/// unsatisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StallPolicy {
    /// Stop and report the current hard decision.
    Terminate,
    /// Flip the global argmax regardless of its sign.
    FlipGlobalMax,
}

impl fmt::Display for StallPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StallPolicy::Terminate => "terminate",
            StallPolicy::FlipGlobalMax => "flipmax",
        })
    }
}

impl FromStr for StallPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "terminate" => Ok(StallPolicy::Terminate),
            "flipmax" | "flip-global-max" => Ok(StallPolicy::FlipGlobalMax),
            _ => Err(format!(
                "unknown stall policy {s:?} (expected terminate or flipmax)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    /// Weight of the channel-magnitude term.
    pub alpha: f64,
    /// Maximum number of flipping iterations.
    pub k_max: usize,
    /// Bits selected per MLP-WBF iteration.
    pub lambda: usize,
    /// FWBF block length; `p >= N` gives a single block.
    pub block_len_p: usize,
    pub stall_policy: StallPolicy,
    /// MLP-WBF only flips selected bits with a positive metric when set;
    /// otherwise all `lambda` selections are flipped.
    pub mlp_threshold: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            k_max: 10,
            lambda: 10,
            block_len_p: 31,
            stall_policy: StallPolicy::FlipGlobalMax,
            mlp_threshold: true,
        }
    }
}

impl DecoderConfig {
    /// Checks the configuration against a code of length `n`.
    pub fn validate(&self, algorithm: Algorithm, n: usize) -> Result<(), DecodeError> {
        let bad = |msg: String| Err(DecodeError::Config(msg));
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if self.k_max < 1 {
            return bad("k_max must be >= 1".into());
        }
        match algorithm {
            Algorithm::MlpWbf if self.lambda < 1 || self.lambda > n => {
                bad(format!("lambda must lie in 1..={n}, got {}", self.lambda))
            }
            Algorithm::Fwbf if self.block_len_p < 1 => bad("block length p must be >= 1".into()),
            _ => Ok(()),
        }
    }
}

/// Maps channel outputs to bits: negative values decide 1, everything else
/// (including zero) decides 0.
pub fn hard_decision(y: &[f64]) -> Vec<u8> {
    y.iter().map(|&v| u8::from(v < 0.0)).collect()
}

/// Current hard decision with an incrementally maintained syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeState {
    z: Vec<u8>,
    syndrome: Vec<u8>,
    syndrome_weight: usize,
    iteration: usize,
}

impl DecodeState {
    pub fn new(h: &ParityCheckMatrix, z: Vec<u8>) -> Self {
        let syndrome = h.syndrome(&z);
        let syndrome_weight = syndrome.iter().map(|&s| s as usize).sum();
        Self {
            z,
            syndrome,
            syndrome_weight,
            iteration: 0,
        }
    }

    pub fn z(&self) -> &[u8] {
        &self.z
    }

    pub fn syndrome(&self) -> &[u8] {
        &self.syndrome
    }

    pub fn syndrome_weight(&self) -> usize {
        self.syndrome_weight
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Flips bit `n` and toggles every check in M(n).
    pub fn flip(&mut self, h: &ParityCheckMatrix, n: usize) {
        self.z[n] ^= 1;
        for &m in h.col(n) {
            self.syndrome[m] ^= 1;
            if self.syndrome[m] == 1 {
                self.syndrome_weight += 1;
            } else {
                self.syndrome_weight -= 1;
            }
        }
    }

    /// Recomputes the syndrome from scratch and compares it with the
    /// maintained one.
    pub fn is_consistent(&self, h: &ParityCheckMatrix) -> bool {
        let fresh = h.syndrome(&self.z);
        fresh == self.syndrome && fresh.iter().filter(|&&s| s == 1).count() == self.syndrome_weight
    }
}

/// Metric of bit `n` against the current syndrome.
pub fn metric(
    h: &ParityCheckMatrix,
    n: usize,
    state: &DecodeState,
    weights: &WeightTable,
    y: &[f64],
    alpha: f64,
) -> f64 {
    let mut e = 0.0;
    for &m in h.col(n) {
        let w = weights.weight(n, m);
        if state.syndrome[m] == 1 {
            e += w;
        } else {
            e -= w;
        }
    }
    e - alpha * y[n].abs()
}

/// Fills `out` with the metric of every bit.
pub fn metrics_into(
    h: &ParityCheckMatrix,
    state: &DecodeState,
    weights: &WeightTable,
    y: &[f64],
    alpha: f64,
    out: &mut [f64],
) {
    for (n, e) in out.iter_mut().enumerate() {
        *e = metric(h, n, state, weights, y, alpha);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub z_final: Vec<u8>,
    /// Number of iterations that flipped at least one bit.
    pub iterations: usize,
    /// Final syndrome weight is zero.
    pub converged: bool,
    /// Bits flipped in each iteration, in selection order.
    pub flip_log: Vec<Vec<usize>>,
    /// At least one iteration selected no bit while checks were unsatisfied.
    pub stalled: bool,
}

impl DecodeOutcome {
    pub fn flips_total(&self) -> usize {
        self.flip_log.iter().map(Vec::len).sum()
    }

    /// Hard decision packed MSB-first into hex nibbles: bit `n` is bit
    /// `3 - n % 4` of nibble `n / 4`; the last nibble is zero-filled.
    pub fn z_hex(&self) -> String {
        self.z_final
            .chunks(4)
            .map(|nib| {
                let v = nib
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | (u32::from(b & 1) << (3 - i)));
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }
}

/// Runs `algorithm` on one frame.
pub fn decode(
    algorithm: Algorithm,
    h: &ParityCheckMatrix,
    y: &[f64],
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    decode_observed(algorithm, h, y, cfg, |_| {})
}

pub fn decode_imwbf(
    h: &ParityCheckMatrix,
    y: &[f64],
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    decode(Algorithm::Imwbf, h, y, cfg)
}

pub fn decode_mlp_wbf(
    h: &ParityCheckMatrix,
    y: &[f64],
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    decode(Algorithm::MlpWbf, h, y, cfg)
}

pub fn decode_fwbf(
    h: &ParityCheckMatrix,
    y: &[f64],
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    decode(Algorithm::Fwbf, h, y, cfg)
}

/// Like [`decode`], calling `observe` with the state after every iteration.
pub fn decode_observed(
    algorithm: Algorithm,
    h: &ParityCheckMatrix,
    y: &[f64],
    cfg: &DecoderConfig,
    mut observe: impl FnMut(&DecodeState),
) -> Result<DecodeOutcome, DecodeError> {
    let n = h.n_cols();
    cfg.validate(algorithm, n)?;
    let weights = WeightTable::compute(h, y)?;
    let mut state = DecodeState::new(h, hard_decision(y));
    let mut metrics = vec![0.0; n];
    let mut flip_log = Vec::new();
    let mut stalled = false;

    while state.syndrome_weight > 0 && state.iteration < cfg.k_max {
        metrics_into(h, &state, &weights, y, cfg.alpha, &mut metrics);
        let mut flips = select_flips(algorithm, &metrics, cfg);
        if flips.is_empty() {
            stalled = true;
            match cfg.stall_policy {
                StallPolicy::Terminate => break,
                StallPolicy::FlipGlobalMax => flips.push(argmax(&metrics).expect("n > 0")),
            }
        }
        for &b in &flips {
            state.flip(h, b);
        }
        state.iteration += 1;
        flip_log.push(flips);
        observe(&state);
    }

    Ok(DecodeOutcome {
        converged: state.syndrome_weight == 0,
        iterations: state.iteration,
        z_final: state.z,
        flip_log,
        stalled,
    })
}

fn select_flips(algorithm: Algorithm, metrics: &[f64], cfg: &DecoderConfig) -> Vec<usize> {
    match algorithm {
        Algorithm::Imwbf => argmax(metrics).into_iter().collect(),
        Algorithm::MlpWbf => {
            let mut chosen = top_lambda(metrics, cfg.lambda);
            if cfg.mlp_threshold {
                chosen.retain(|&i| metrics[i] > 0.0);
            }
            chosen
        }
        Algorithm::Fwbf => {
            let mut chosen = block_argmaxes(metrics, cfg.block_len_p);
            chosen.retain(|&i| metrics[i] > 0.0);
            chosen
        }
    }
}
