//! Clock accounting for a partially parallel bit-flipping decoder.
//!
//! `2q` metric values are produced per clock and streamed, one block of `2q`
//! values per clock, into a pipelined comparator tree of `log2(2q)` stages of
//! two-input max units. A block's maximum leaves the tree `log2(2q)` clocks
//! after the block was produced. Selecting the global maximum additionally
//! reduces the `N/(2q)` block maxima through a `log2(N/(2q))`-level tree.
//!
//! Per iteration of bit selection:
//!
//! ```text
//! MLP-WBF: lambda * (log2(2q) + N/(2q) + log2(N/(2q)))
//! FWBF:             log2(2q) + N/(2q)
//! ```
//!
//! FWBF chooses one bit per hardware block (block length `2q`), so its
//! choose phase runs concurrently with metric computation. MLP-WBF needs
//! all metrics before its first global maximum and re-streams them for each
//! of the `lambda` selections.

use std::fmt;

use thiserror::Error;

use crate::decoder::Algorithm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DelayError {
    #[error("2q = {0} is not a power of two")]
    WidthNotPowerOfTwo(usize),
    #[error("padded length {n_padded} is not a multiple of 2q = {width}")]
    NotMultiple { n_padded: usize, width: usize },
    #[error("block count {0} is not a power of two")]
    BlocksNotPowerOfTwo(usize),
    #[error("metric vector has {found} values, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{0}")]
    InvalidInput(String),
}

/// Geometry of the comparator pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineParams {
    /// Comparators in the first stage.
    pub q: usize,
    /// Metric-vector length after null padding.
    pub n_padded: usize,
    /// `log2(2q)`.
    pub stages: u32,
    /// `n_padded / (2q)`.
    pub blocks: usize,
}

impl PipelineParams {
    pub fn new(q: usize, n_padded: usize) -> Result<Self, DelayError> {
        let width = 2 * q;
        if q == 0 || !width.is_power_of_two() {
            return Err(DelayError::WidthNotPowerOfTwo(width));
        }
        if n_padded == 0 || !n_padded.is_multiple_of(width) {
            return Err(DelayError::NotMultiple { n_padded, width });
        }
        let blocks = n_padded / width;
        if !blocks.is_power_of_two() {
            return Err(DelayError::BlocksNotPowerOfTwo(blocks));
        }
        Ok(Self {
            q,
            n_padded,
            stages: width.trailing_zeros(),
            blocks,
        })
    }

    /// Pads a code length `n` with null metrics to the next multiple of `2q`.
    /// For example `n = 255, q = 8` gives 256.
    pub fn for_code(n: usize, q: usize) -> Result<Self, DelayError> {
        if q == 0 {
            return Err(DelayError::WidthNotPowerOfTwo(0));
        }
        Self::new(q, n.div_ceil(2 * q) * 2 * q)
    }

    pub fn width(&self) -> usize {
        2 * self.q
    }

    fn reduce_levels(&self) -> u32 {
        self.blocks.trailing_zeros()
    }
}

/// Clocks spent choosing `lambda` global maxima one after another.
pub fn mlp_choose_delay(params: &PipelineParams, lambda: usize) -> u64 {
    let per = u64::from(params.stages) + params.blocks as u64 + u64::from(params.reduce_levels());
    lambda as u64 * per
}

/// Clocks until every block maximum is known.
pub fn fwbf_choose_delay(params: &PipelineParams) -> u64 {
    u64::from(params.stages) + params.blocks as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectMode {
    /// `lambda` sequential passes, each extracting the largest remaining value.
    GlobalMax { lambda: usize },
    /// One maximum per `2q` block.
    PerBlockMax,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineRun {
    pub selected: Vec<usize>,
    pub clocks: u64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    index: usize,
}

/// Two-input max unit; the left (lower-index) input wins ties.
fn compare(a: Candidate, b: Candidate) -> Candidate {
    if b.value > a.value {
        b
    } else {
        a
    }
}

fn reduce_pairs(v: &[Candidate]) -> Vec<Candidate> {
    v.chunks(2).map(|p| compare(p[0], p[1])).collect()
}

type Slot = Option<(usize, Vec<Candidate>)>;

/// Streams every block through the comparator stages, one block entering
/// per clock. Returns the block maxima and the clock count at which the
/// last one left the final stage.
fn stream_blocks(params: &PipelineParams, values: &[Candidate]) -> (Vec<Candidate>, u64) {
    let width = params.width();
    let stages = params.stages as usize;
    let mut input: Slot = None;
    let mut regs: Vec<Slot> = vec![None; stages];
    let mut maxima: Vec<Option<Candidate>> = vec![None; params.blocks];
    let mut next_block = 0;
    let mut retired = 0;
    let mut clock = 0u64;

    while retired < params.blocks {
        clock += 1;
        // Walk stages back to front so each consumes last clock's contents.
        for j in (0..stages).rev() {
            let src = if j == 0 {
                input.take()
            } else {
                regs[j - 1].take()
            };
            regs[j] = src.map(|(b, v)| (b, reduce_pairs(&v)));
        }
        if let Some((b, v)) = regs[stages - 1].take() {
            debug_assert_eq!(v.len(), 1);
            maxima[b] = Some(v[0]);
            retired += 1;
        }
        if next_block < params.blocks {
            let lo = next_block * width;
            input = Some((next_block, values[lo..lo + width].to_vec()));
            next_block += 1;
        }
    }
    let maxima = maxima
        .into_iter()
        .map(|m| m.expect("all blocks retired"))
        .collect();
    (maxima, clock)
}

/// Reduces the block maxima to one value, one tree level per clock.
fn reduce_tree(mut level: Vec<Candidate>) -> (Candidate, u64) {
    let mut clocks = 0;
    while level.len() > 1 {
        level = reduce_pairs(&level);
        clocks += 1;
    }
    (level[0], clocks)
}

/// Clock-by-clock simulation of the comparator network on `metrics`.
///
/// Padded positions must hold `f64::NEG_INFINITY`. Selected indices follow
/// the lowest-index tie rule; in global mode each selected value is nulled
/// before the next pass.
pub fn simulate_pipeline(
    params: &PipelineParams,
    metrics: &[f64],
    mode: SelectMode,
) -> Result<PipelineRun, DelayError> {
    if metrics.len() != params.n_padded {
        return Err(DelayError::LengthMismatch {
            expected: params.n_padded,
            found: metrics.len(),
        });
    }
    let mut values: Vec<Candidate> = metrics
        .iter()
        .enumerate()
        .map(|(index, &value)| Candidate { value, index })
        .collect();

    match mode {
        SelectMode::PerBlockMax => {
            let (maxima, clocks) = stream_blocks(params, &values);
            Ok(PipelineRun {
                selected: maxima.iter().map(|c| c.index).collect(),
                clocks,
            })
        }
        SelectMode::GlobalMax { lambda } => {
            let mut selected = Vec::with_capacity(lambda);
            let mut clocks = 0;
            for _ in 0..lambda {
                let (maxima, stream_clocks) = stream_blocks(params, &values);
                let (best, tree_clocks) = reduce_tree(maxima);
                clocks += stream_clocks + tree_clocks;
                selected.push(best.index);
                values[best.index].value = f64::NEG_INFINITY;
            }
            Ok(PipelineRun { selected, clocks })
        }
    }
}

/// Extends a metric vector with null values up to `n_padded`.
pub fn pad_metrics(metrics: &[f64], n_padded: usize) -> Vec<f64> {
    let mut v = metrics.to_vec();
    v.resize(n_padded.max(metrics.len()), f64::NEG_INFINITY);
    v
}

/// Clock budget of one decoding iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayReport {
    pub algorithm: Algorithm,
    pub params: PipelineParams,
    /// Selections per iteration: `lambda` for MLP-WBF, 1 for IMWBF, the
    /// block count for FWBF.
    pub lambda: usize,
    pub metric_clocks: u64,
    pub choose_clocks: u64,
    pub total_per_iteration: u64,
    /// Block length assumed by the hardware figures, always `2q`.
    pub hw_block_len: usize,
}

impl DelayReport {
    pub const CSV_HEADER: &'static str = "algorithm,n_padded,q,stages,blocks,lambda,hw_block_len,metric_clocks,choose_clocks,total_per_iteration";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.params.n_padded,
            self.params.q,
            self.params.stages,
            self.params.blocks,
            self.lambda,
            self.hw_block_len,
            self.metric_clocks,
            self.choose_clocks,
            self.total_per_iteration
        )
    }
}

impl fmt::Display for DelayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: metric {} clk + choose {} clk -> {} clk/iteration",
            self.algorithm, self.metric_clocks, self.choose_clocks, self.total_per_iteration
        )
    }
}

/// Per-iteration clock budget. IMWBF is costed as MLP-WBF with one
/// selection.
pub fn iteration_delay(
    params: &PipelineParams,
    algorithm: Algorithm,
    lambda: usize,
) -> Result<DelayReport, DelayError> {
    let metric_clocks = params.blocks as u64;
    let (lambda, choose_clocks, total) = match algorithm {
        Algorithm::Fwbf => {
            let choose = fwbf_choose_delay(params);
            // Only the last block's trip through the tree extends the metric phase.
            (
                params.blocks,
                choose,
                metric_clocks + u64::from(params.stages),
            )
        }
        Algorithm::MlpWbf | Algorithm::Imwbf => {
            let lambda = if algorithm == Algorithm::Imwbf {
                1
            } else {
                lambda
            };
            if lambda == 0 {
                return Err(DelayError::InvalidInput("lambda must be >= 1".into()));
            }
            let choose = mlp_choose_delay(params, lambda);
            (lambda, choose, metric_clocks + choose)
        }
    };
    Ok(DelayReport {
        algorithm,
        params: *params,
        lambda,
        metric_clocks,
        choose_clocks,
        total_per_iteration: total,
        hw_block_len: params.width(),
    })
}

/// Information bits per second: `k clock_hz / (clocks_per_iteration * avg_iterations)`.
pub fn throughput_estimate(
    report: &DelayReport,
    avg_iterations: f64,
    clock_hz: f64,
    k_info_bits: usize,
) -> Result<f64, DelayError> {
    let denom = report.total_per_iteration as f64 * avg_iterations;
    if !(denom > 0.0 && denom.is_finite()) {
        return Err(DelayError::InvalidInput(format!(
            "clocks per frame must be positive, got {denom}"
        )));
    }
    if !(clock_hz > 0.0 && clock_hz.is_finite()) || k_info_bits == 0 {
        return Err(DelayError::InvalidInput(
            "clock rate and information bits must be positive".into(),
        ));
    }
    Ok(k_info_bits as f64 * clock_hz / denom)
}
