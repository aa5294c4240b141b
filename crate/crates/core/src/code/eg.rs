//! Type-I cyclic Euclidean-geometry LDPC codes from EG(2, 2^s).
//!
//! The points of EG(2, 2^s) are the elements of GF(2^(2s)). A line is a set
//! `{a + beta * b : beta in GF(2^s)}` with `b != 0`. Lines that miss the
//! origin, indexed by the nonzero points `alpha^0 .. alpha^(n-1)`, give a
//! circulant `n x n` parity-check matrix with `n = 2^(2s) - 1` whose rows and
//! columns all have weight `2^s`.

use thiserror::Error;

use super::ParityCheckMatrix;
use crate::gf::GaloisField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("EG geometry parameter s = {0} is unsupported (expected 2..=5)")]
pub struct UnsupportedGeometry(pub u32);

/// The base line of the construction, as exponents of `a = alpha^a_exp`,
/// `b = alpha^b_exp`, and its incidence positions among the nonzero points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseLine {
    pub a_exp: usize,
    pub b_exp: usize,
    pub points: Vec<usize>,
}

/// Picks the smallest `(a, b)` in alpha-power order whose line avoids the
/// origin and returns its point set.
///
/// The subfield GF(2^s) sits inside GF(2^(2s)) as `{0} u {gamma^k}` with
/// `gamma = alpha^(2^s + 1)`. The line through `a` with direction `b` hits
/// the origin exactly when `a / b` lies in that subfield.
pub fn base_line(s: u32) -> Result<BaseLine, UnsupportedGeometry> {
    if !(2..=5).contains(&s) {
        return Err(UnsupportedGeometry(s));
    }
    let gf = GaloisField::new(2 * s).expect("degrees 4..=10 are tabulated");
    let n = gf.order();
    let q = 1usize << s;
    let sub_step = q + 1;

    let (a_exp, b_exp) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !((i + n - j) % n).is_multiple_of(sub_step))
        .expect("a non-origin line exists");

    let a = gf.exp(a_exp as u64);
    let b = gf.exp(b_exp as u64);
    let subfield = std::iter::once(0u32).chain((0..q - 1).map(|k| gf.exp((k * sub_step) as u64)));
    let mut points: Vec<usize> = subfield
        .map(|beta| gf.add(a, gf.mul(beta, b)))
        .map(|p| gf.log(p).expect("line avoids the origin") as usize)
        .collect();
    points.sort_unstable();
    Ok(BaseLine {
        a_exp,
        b_exp,
        points,
    })
}

/// Builds the `n x n` circulant EG-LDPC parity-check matrix, `n = 2^(2s) - 1`.
///
/// Row `r` is the incidence vector of `alpha^r * L`, i.e. the base row
/// cyclically shifted right by `r`.
pub fn eg_ldpc_construct(s: u32) -> Result<ParityCheckMatrix, UnsupportedGeometry> {
    let line = base_line(s)?;
    let n = (1usize << (2 * s)) - 1;
    let rows = (0..n)
        .map(|r| line.points.iter().map(|&h| (h + r) % n).collect())
        .collect();
    Ok(ParityCheckMatrix::from_rows(n, rows).expect("shifted line is well formed"))
}
