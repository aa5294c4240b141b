//! Weighted bit-flipping decoding of LDPC codes.
//!
//! * [`code`]: sparse parity-check matrices, EG-LDPC construction, alist I/O.
//! * [`channel`]: BPSK/AWGN with per-frame reproducible noise.
//! * [`decoder`]: IMWBF, MLP-WBF and the block-parallel FWBF decoder.
//! * [`delay`]: clock accounting and a cycle-level comparator-tree model.
//! * [`sim`]: Monte Carlo experiment driver and CSV output.

pub mod channel;
pub mod code;
pub mod decoder;
pub mod delay;
pub mod gf;
pub mod sim;

pub use code::{CodeSpec, ParityCheckMatrix};
pub use decoder::{Algorithm, DecodeOutcome, DecoderConfig, StallPolicy};
