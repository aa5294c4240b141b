//! Per-check reliability weights `w_{n,m} = min_{i in N(m) \ n} |y_i|`.

use super::DecodeError;
use crate::code::ParityCheckMatrix;

/// Two smallest magnitudes per check plus the position of the smallest.
///
/// The minimum over `N(m) \ n` is `min1` for every bit except the one that
/// attains it, which gets `min2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    min1: Vec<f64>,
    min2: Vec<f64>,
    argmin: Vec<usize>,
}

impl WeightTable {
    pub fn compute(h: &ParityCheckMatrix, y: &[f64]) -> Result<Self, DecodeError> {
        if y.len() != h.n_cols() {
            return Err(DecodeError::FrameLength {
                expected: h.n_cols(),
                found: y.len(),
            });
        }
        let m = h.n_rows();
        let mut table = Self {
            min1: Vec::with_capacity(m),
            min2: Vec::with_capacity(m),
            argmin: Vec::with_capacity(m),
        };
        for (check, bits) in h.rows().iter().enumerate() {
            if bits.len() < 2 {
                return Err(DecodeError::DegenerateCheck {
                    check,
                    weight: bits.len(),
                });
            }
            let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, bits[0]);
            for &n in bits {
                let mag = y[n].abs();
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    arg = n;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            table.min1.push(min1);
            table.min2.push(min2);
            table.argmin.push(arg);
        }
        Ok(table)
    }

    /// `w_{n,m}`; `n` must belong to check `m`.
    #[inline]
    pub fn weight(&self, n: usize, m: usize) -> f64 {
        if n == self.argmin[m] {
            self.min2[m]
        } else {
            self.min1[m]
        }
    }

    pub fn min1(&self, m: usize) -> f64 {
        self.min1[m]
    }

    pub fn min2(&self, m: usize) -> f64 {
        self.min2[m]
    }

    pub fn argmin(&self, m: usize) -> usize {
        self.argmin[m]
    }
}
