use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fwbf::channel::ChannelParams;
use fwbf::code::{eg_ldpc_construct, validate_rc, write_alist, RcReport};
use fwbf::decoder::{decode, Algorithm, DecoderConfig, StallPolicy};
use fwbf::delay::{iteration_delay, throughput_estimate, DelayReport, PipelineParams};
use fwbf::sim::{
    format_summary, run_experiment, sweep_alpha, to_csv, CodeSource, Experiment, ExperimentConfig,
    StopRule,
};
use fwbf::CodeSpec;

#[derive(Parser)]
#[command(
    name = "fwbf",
    version,
    about = "Weighted bit-flipping LDPC decoding toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an EG-LDPC parity-check matrix in alist format.
    GenCode {
        /// Geometry parameter s (code length 2^(2s) - 1).
        #[arg(long = "eg")]
        s: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print N, K, rate, weights and RC status of a code.
    CodeInfo {
        /// alist path, or eg:<s> / alist:<path>.
        #[arg(long = "in")]
        input: String,
    },
    /// Decode one frame of channel values (one per line) from a file or stdin.
    Decode {
        /// alist path, or eg:<s> / alist:<path>.
        #[arg(long)]
        code: String,
        #[command(flatten)]
        dec: DecoderArgs,
        /// Frame file; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Per-iteration clock budget of the comparator pipeline.
    Delay {
        /// Code length before padding.
        #[arg(long)]
        n: usize,
        /// Comparators in the first stage.
        #[arg(long)]
        q: usize,
        #[arg(long, default_value = "fwbf")]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 10)]
        lambda: usize,
        #[arg(long, requires_all = ["k", "avg_iters"])]
        clock_hz: Option<f64>,
        /// Information bits per frame.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        avg_iters: Option<f64>,
    },
    /// Monte Carlo BER/FER simulation over an Eb/N0 grid.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Eb/N0 grid in dB.
        #[arg(long, value_delimiter = ',', default_value = "3.0,3.5,4.0,4.5")]
        ebn0: Vec<f64>,
        /// Fixed noise standard deviation; replaces the Eb/N0 grid.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// FER at one Eb/N0 for each alpha on a grid, sharing the seed.
    SweepAlpha {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        ebn0: f64,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"
        )]
        alphas: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct DecoderArgs {
    #[arg(long, default_value = "fwbf")]
    decoder: Algorithm,
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long, default_value_t = 10)]
    lambda: usize,
    #[arg(long, default_value_t = 31)]
    p: usize,
    #[arg(long, default_value = "flipmax")]
    stall: StallPolicy,
    /// MLP-WBF flips all lambda selections, including non-positive metrics.
    #[arg(long)]
    mlp_no_threshold: bool,
}

impl DecoderArgs {
    fn config(&self) -> DecoderConfig {
        DecoderConfig {
            alpha: self.alpha,
            k_max: self.kmax,
            lambda: self.lambda,
            block_len_p: self.p,
            stall_policy: self.stall,
            mlp_threshold: !self.mlp_no_threshold,
        }
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    /// eg:<s> or alist:<path>.
    #[arg(long, default_value = "eg:5")]
    code: CodeSource,
    #[command(flatten)]
    dec: DecoderArgs,
    #[arg(long, default_value_t = 100)]
    target_we: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
    /// File holding the transmitted codeword as 0/1 characters.
    #[arg(long)]
    codeword: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut c = ExperimentConfig::new(self.code.clone(), self.dec.decoder, self.dec.config());
        c.stop = StopRule {
            target_word_errors: self.target_we,
            max_frames: self.max_frames,
        };
        c.master_seed = self.seed;
        c.threads = self.threads;
        if let Some(path) = &self.codeword {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading codeword {}", path.display()))?;
            let bits = text
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => bail!("codeword file contains {other:?}"),
                })
                .collect::<Result<Vec<_>>>()?;
            c.codeword = Some(bits);
        }
        Ok(c)
    }
}

fn load_code(arg: &str) -> Result<fwbf::ParityCheckMatrix> {
    let source = arg
        .parse::<CodeSource>()
        .unwrap_or_else(|_| CodeSource::Alist(PathBuf::from(arg)));
    source.load().with_context(|| format!("loading code {arg}"))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenCode { s, out } => {
            let h = eg_ldpc_construct(s)?;
            write_alist(&h, &out).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::CodeInfo { input } => {
            let h = load_code(&input)?;
            let spec = CodeSpec::of(&h);
            println!("N={}", spec.n);
            println!("M={}", h.n_rows());
            println!("K={}", spec.k);
            println!("rate={:.6}", spec.rate);
            println!("row_weight={}", spec.row_weight);
            println!("col_weight={}", spec.col_weight);
            match validate_rc(&h) {
                RcReport::Pass => println!("rc=pass"),
                RcReport::RowViolation { rows, shared } => {
                    println!("rc=fail rows {} {} share {shared}", rows.0, rows.1)
                }
                RcReport::ColumnViolation { cols, shared } => {
                    println!("rc=fail columns {} {} share {shared}", cols.0, cols.1)
                }
            }
        }
        Command::Decode { code, dec, input } => {
            let h = load_code(&code)?;
            let text = match input {
                Some(p) => {
                    fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?
                }
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let y = text
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .with_context(|| format!("bad channel value {t:?}"))
                })
                .collect::<Result<Vec<_>>>()?;
            let out = decode(dec.decoder, &h, &y, &dec.config())?;
            println!(
                "{},{},{},{},{}",
                out.converged,
                out.iterations,
                out.stalled,
                out.flips_total(),
                out.z_hex()
            );
        }
        Command::Delay {
            n,
            q,
            algorithm,
            lambda,
            clock_hz,
            k,
            avg_iters,
        } => {
            let params = PipelineParams::for_code(n, q)?;
            let report = iteration_delay(&params, algorithm, lambda)?;
            match (clock_hz, k, avg_iters) {
                (Some(hz), Some(k), Some(avg)) => {
                    let tput = throughput_estimate(&report, avg, hz, k)?;
                    println!("n,{},throughput_bps", DelayReport::CSV_HEADER);
                    println!("{n},{},{tput}", report.csv_row());
                }
                _ => {
                    println!("n,{}", DelayReport::CSV_HEADER);
                    println!("{n},{}", report.csv_row());
                }
            }
        }
        Command::Simulate {
            run,
            ebn0,
            sigma,
            out,
        } => {
            let mut config = run.config()?;
            config.snr_grid = ebn0;
            config.sigma_override = sigma;
            config.output = out;
            let (exp, points) = run_experiment(config)?;
            print!("{}", format_summary(&exp, &points));
        }
        Command::SweepAlpha {
            run,
            ebn0,
            alphas,
            out,
        } => {
            let exp = Experiment::new(run.config()?)?;
            let channel = ChannelParams::from_ebn0(ebn0, exp.spec.rate)?;
            let sweep = sweep_alpha(&exp, &channel, &alphas)?;
            let mut csv = String::from("alpha,");
            csv.push_str(&to_csv(&[]));
            for (alpha, p) in &sweep.rows {
                csv.push_str(&format!("{alpha},{}\n", p.csv_row()));
            }
            print!("{csv}");
            println!("best_alpha={}", sweep.best_alpha);
            if let Some(path) = out {
                fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}
