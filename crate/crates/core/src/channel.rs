//! BPSK over AWGN with reproducible per-frame noise streams.
//!
//! Every frame draws its noise from its own ChaCha8 stream: the key is
//! derived from the master seed and the stream id is the frame index, so
//! frame `i` sees the same samples no matter which worker generates it or in
//! which order. Gaussian samples come from `rand_distr::StandardNormal`
//! (ziggurat). Crate versions are pinned in `Cargo.toml`; changing any of
//! them may change published numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("code rate must lie in (0, 1), got {0}")]
    InvalidRate(f64),
    #[error("noise standard deviation must be finite and >= 0, got {0}")]
    InvalidSigma(f64),
}

/// `s_n = 1 - 2 c_n`.
pub fn bpsk_modulate(c: &[u8]) -> Vec<f64> {
    c.iter().map(|&b| 1.0 - 2.0 * f64::from(b & 1)).collect()
}

/// Noise standard deviation for unit-energy BPSK at the given Eb/N0 and
/// code rate: `sqrt(1 / (2 R 10^(Eb/N0 / 10)))`.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> Result<f64, ChannelError> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(ChannelError::InvalidRate(rate));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl ChannelParams {
    pub fn from_ebn0(ebn0_db: f64, rate: f64) -> Result<Self, ChannelError> {
        Ok(Self {
            ebn0_db,
            rate,
            sigma: ebn0_to_sigma(ebn0_db, rate)?,
        })
    }

    /// Fixes sigma directly; `ebn0_db` is back-computed for reporting and is
    /// infinite when sigma is zero.
    pub fn from_sigma(sigma: f64, rate: f64) -> Result<Self, ChannelError> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(ChannelError::InvalidRate(rate));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(ChannelError::InvalidSigma(sigma));
        }
        let ebn0_db = 10.0 * (1.0 / (2.0 * rate * sigma * sigma)).log10();
        Ok(Self {
            ebn0_db,
            rate,
            sigma,
        })
    }
}

/// Counter-based noise source for one frame.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(master_seed: u64, frame_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(frame_index);
        Self { rng }
    }

    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }
}

/// `y_n = s_n + sigma g_n` with `g_n` standard normal drawn from `stream`.
pub fn awgn_apply(s: &[f64], sigma: f64, stream: &mut NoiseStream) -> Vec<f64> {
    s.iter().map(|&x| x + sigma * stream.gaussian()).collect()
}

/// Channel output for one frame, together with the word that was sent.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    pub y: Vec<f64>,
    pub source_codeword: Vec<u8>,
}

impl ReceivedFrame {
    pub fn transmit(codeword: &[u8], sigma: f64, stream: &mut NoiseStream) -> Self {
        let y = if sigma == 0.0 {
            bpsk_modulate(codeword)
        } else {
            awgn_apply(&bpsk_modulate(codeword), sigma, stream)
        };
        Self {
            y,
            source_codeword: codeword.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}
