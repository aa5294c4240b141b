//! Monte Carlo BER/FER driver.
//!
//! Frames are generated and decoded in fixed-size batches that may run on
//! any number of workers. Results are folded back in frame order and the
//! stopping rule is applied frame by frame, so the aggregates depend only on
//! the configuration and the master seed.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams, NoiseStream, ReceivedFrame};
use crate::code::{
    eg::UnsupportedGeometry, eg_ldpc_construct, read_alist, AlistError, CodeSpec, ParityCheckMatrix,
};
use crate::decoder::{decode, Algorithm, DecodeError, DecoderConfig};

/// Frames decoded between two checks of the stopping rule.
pub const BATCH_FRAMES: u64 = 512;

pub const CSV_HEADER: &str =
    "snr_db,frames,bit_errors,word_errors,ber,fer,ber_stderr,fer_stderr,mean_iters,mean_flips,stalls,capped";

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Alist(#[from] AlistError),
    #[error(transparent)]
    Geometry(#[from] UnsupportedGeometry),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid experiment: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSource {
    /// Cyclic EG-LDPC code from EG(2, 2^s).
    Eg(u32),
    Alist(PathBuf),
}

impl CodeSource {
    pub fn load(&self) -> Result<ParityCheckMatrix, SimError> {
        match self {
            CodeSource::Eg(s) => Ok(eg_ldpc_construct(*s)?),
            CodeSource::Alist(p) => Ok(read_alist(p)?),
        }
    }
}

impl FromStr for CodeSource {
    type Err = String;

    /// `eg:<s>` or `alist:<path>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(v) = s.strip_prefix("eg:") {
            v.parse()
                .map(CodeSource::Eg)
                .map_err(|_| format!("bad EG parameter in {s:?}"))
        } else if let Some(p) = s.strip_prefix("alist:") {
            Ok(CodeSource::Alist(PathBuf::from(p)))
        } else {
            Err(format!("code must be eg:<s> or alist:<path>, got {s:?}"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub target_word_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            target_word_errors: 100,
            max_frames: 10_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub code: CodeSource,
    pub algorithm: Algorithm,
    pub decoder: DecoderConfig,
    /// Eb/N0 grid in dB.
    pub snr_grid: Vec<f64>,
    /// Fixed noise standard deviation; replaces the grid with one point.
    pub sigma_override: Option<f64>,
    pub stop: StopRule,
    pub master_seed: u64,
    /// Transmitted word; all-zero when `None`. Must satisfy every check.
    pub codeword: Option<Vec<u8>>,
    /// Worker threads; `None` uses rayon's default pool.
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(code: CodeSource, algorithm: Algorithm, decoder: DecoderConfig) -> Self {
        Self {
            code,
            algorithm,
            decoder,
            snr_grid: vec![3.0, 3.5, 4.0, 4.5],
            sigma_override: None,
            stop: StopRule::default(),
            master_seed: 1,
            codeword: None,
            threads: None,
            output: None,
        }
    }
}

/// Aggregates for one channel operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub snr_db: f64,
    pub sigma: f64,
    pub n: usize,
    pub frames: u64,
    pub bit_errors: u64,
    pub word_errors: u64,
    pub total_iterations: u64,
    pub total_flips: u64,
    pub stalls: u64,
    /// The frame cap was reached before the word-error target.
    pub capped: bool,
}

impl PointStats {
    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.frames * self.n as u64)
    }

    pub fn fer(&self) -> f64 {
        ratio(self.word_errors, self.frames)
    }

    /// Binomial standard error, treating bits as independent trials.
    pub fn ber_stderr(&self) -> f64 {
        binomial_stderr(self.ber(), self.frames * self.n as u64)
    }

    pub fn fer_stderr(&self) -> f64 {
        binomial_stderr(self.fer(), self.frames)
    }

    pub fn mean_iters(&self) -> f64 {
        ratio(self.total_iterations, self.frames)
    }

    pub fn mean_flips(&self) -> f64 {
        ratio(self.total_flips, self.frames)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:e},{:e},{:e},{:e},{},{},{},{}",
            self.snr_db,
            self.frames,
            self.bit_errors,
            self.word_errors,
            self.ber(),
            self.fer(),
            self.ber_stderr(),
            self.fer_stderr(),
            self.mean_iters(),
            self.mean_flips(),
            self.stalls,
            u8::from(self.capped)
        )
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn binomial_stderr(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        0.0
    } else {
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct FrameResult {
    bit_errors: u64,
    word_error: bool,
    iterations: u64,
    flips: u64,
    stalled: bool,
}

/// A loaded code plus everything needed to run frames against it.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub h: ParityCheckMatrix,
    pub spec: CodeSpec,
    codeword: Vec<u8>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self, SimError> {
        let h = config.code.load()?;
        Self::with_matrix(config, h)
    }

    pub fn with_matrix(config: ExperimentConfig, h: ParityCheckMatrix) -> Result<Self, SimError> {
        if config.stop.target_word_errors < 1 || config.stop.max_frames < 1 {
            return Err(SimError::Config(
                "target word errors and max frames must both be >= 1".into(),
            ));
        }
        if config.snr_grid.is_empty() && config.sigma_override.is_none() {
            return Err(SimError::Config("SNR grid is empty".into()));
        }
        if config.threads == Some(0) {
            return Err(SimError::Config("thread count must be >= 1".into()));
        }
        config.decoder.validate(config.algorithm, h.n_cols())?;
        let codeword = match &config.codeword {
            None => vec![0; h.n_cols()],
            Some(c) if c.len() != h.n_cols() => {
                return Err(SimError::Config(format!(
                    "codeword has {} bits, code length is {}",
                    c.len(),
                    h.n_cols()
                )))
            }
            Some(c) if !h.is_codeword(c) => {
                return Err(SimError::Config("supplied word is not a codeword".into()))
            }
            Some(c) => c.clone(),
        };
        let spec = CodeSpec::of(&h);
        Ok(Self {
            config,
            h,
            spec,
            codeword,
        })
    }

    /// Channel operating points: the Eb/N0 grid, or the single fixed-sigma
    /// point when an override is set.
    pub fn channel_points(&self) -> Result<Vec<ChannelParams>, SimError> {
        match self.config.sigma_override {
            Some(sigma) => Ok(vec![ChannelParams::from_sigma(sigma, self.spec.rate)?]),
            None => self
                .config
                .snr_grid
                .iter()
                .map(|&db| ChannelParams::from_ebn0(db, self.spec.rate).map_err(SimError::from))
                .collect(),
        }
    }

    fn run_frame(&self, sigma: f64, index: u64) -> FrameResult {
        let mut stream = NoiseStream::new(self.config.master_seed, index);
        let frame = ReceivedFrame::transmit(&self.codeword, sigma, &mut stream);
        let out = decode(
            self.config.algorithm,
            &self.h,
            &frame.y,
            &self.config.decoder,
        )
        .expect("configuration validated at construction");
        let bit_errors = out
            .z_final
            .iter()
            .zip(&frame.source_codeword)
            .filter(|(a, b)| a != b)
            .count() as u64;
        FrameResult {
            bit_errors,
            word_error: bit_errors > 0,
            iterations: out.iterations as u64,
            flips: out.flips_total() as u64,
            stalled: out.stalled,
        }
    }

    /// Runs one operating point until the word-error target or the frame
    /// cap is reached.
    pub fn run_point(&self, channel: &ChannelParams) -> PointStats {
        let stop = self.config.stop;
        let mut stats = PointStats {
            snr_db: channel.ebn0_db,
            sigma: channel.sigma,
            n: self.h.n_cols(),
            frames: 0,
            bit_errors: 0,
            word_errors: 0,
            total_iterations: 0,
            total_flips: 0,
            stalls: 0,
            capped: false,
        };
        let run = |range: std::ops::Range<u64>| -> Vec<FrameResult> {
            range
                .into_par_iter()
                .map(|i| self.run_frame(channel.sigma, i))
                .collect()
        };
        'outer: while stats.frames < stop.max_frames {
            let start = stats.frames;
            let end = (start + BATCH_FRAMES).min(stop.max_frames);
            let batch = match self.config.threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .expect("thread pool")
                    .install(|| run(start..end)),
                None => run(start..end),
            };
            for r in batch {
                stats.frames += 1;
                stats.bit_errors += r.bit_errors;
                stats.word_errors += u64::from(r.word_error);
                stats.total_iterations += r.iterations;
                stats.total_flips += r.flips;
                stats.stalls += u64::from(r.stalled);
                if stats.word_errors >= stop.target_word_errors {
                    break 'outer;
                }
            }
        }
        stats.capped = stats.word_errors < stop.target_word_errors;
        stats
    }

    pub fn run(&self) -> Result<Vec<PointStats>, SimError> {
        Ok(self
            .channel_points()?
            .iter()
            .map(|c| self.run_point(c))
            .collect())
    }
}

pub fn to_csv(points: &[PointStats]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&p.csv_row());
        out.push('\n');
    }
    out
}

/// Human-readable table of one experiment.
pub fn format_summary(exp: &Experiment, points: &[PointStats]) -> String {
    let c = &exp.config;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "code ({}, {}) rate {:.4} | decoder {} alpha {} kmax {} lambda {} p {} stall {}",
        exp.spec.n,
        exp.spec.k,
        exp.spec.rate,
        c.algorithm,
        c.decoder.alpha,
        c.decoder.k_max,
        c.decoder.lambda,
        c.decoder.block_len_p,
        c.decoder.stall_policy
    );
    let _ = writeln!(
        s,
        "{:>8} {:>10} {:>12} {:>10} {:>11} {:>11} {:>10} {:>7}",
        "snr_db", "frames", "bit_errors", "word_err", "ber", "fer", "mean_iter", "stalls"
    );
    for p in points {
        let _ = writeln!(
            s,
            "{:>8.2} {:>10} {:>12} {:>10} {:>11.3e} {:>11.3e} {:>10.3} {:>7}{}",
            p.snr_db,
            p.frames,
            p.bit_errors,
            p.word_errors,
            p.ber(),
            p.fer(),
            p.mean_iters(),
            p.stalls,
            if p.capped { "  (capped)" } else { "" }
        );
    }
    s
}

/// Runs every operating point and writes the CSV when an output path is set.
pub fn run_experiment(config: ExperimentConfig) -> Result<(Experiment, Vec<PointStats>), SimError> {
    let exp = Experiment::new(config)?;
    let points = exp.run()?;
    if let Some(path) = &exp.config.output {
        fs::write(path, to_csv(&points)).map_err(|source| SimError::Output {
            path: path.clone(),
            source,
        })?;
    }
    Ok((exp, points))
}

#[derive(Debug, Clone)]
pub struct AlphaSweep {
    pub rows: Vec<(f64, PointStats)>,
    /// Alpha with the lowest FER; ties go to lower BER, then lower mean
    /// iterations, then the earlier grid entry.
    pub best_alpha: f64,
}

/// Runs one operating point per alpha, all with the same seed.
pub fn sweep_alpha(
    base: &Experiment,
    channel: &ChannelParams,
    alpha_grid: &[f64],
) -> Result<AlphaSweep, SimError> {
    if alpha_grid.is_empty() {
        return Err(SimError::Config("alpha grid is empty".into()));
    }
    let mut rows = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let mut config = base.config.clone();
        config.decoder.alpha = alpha;
        let exp = Experiment::with_matrix(config, base.h.clone())?;
        rows.push((alpha, exp.run_point(channel)));
    }
    let best_alpha = rows
        .iter()
        .min_by(|(_, a), (_, b)| {
            a.fer()
                .total_cmp(&b.fer())
                .then(a.ber().total_cmp(&b.ber()))
                .then(a.mean_iters().total_cmp(&b.mean_iters()))
        })
        .map(|(alpha, _)| *alpha)
        .expect("grid is non-empty");
    Ok(AlphaSweep { rows, best_alpha })
}
