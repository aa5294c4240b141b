//! Log/antilog table arithmetic over GF(2^m), 2 <= m <= 16.
//!
//! Elements are represented as `u32` bit vectors of polynomial coefficients
//! over GF(2), reduced modulo a fixed primitive polynomial. The polynomials
//! come from the standard table of minimum-weight primitive polynomials
//! (Lin & Costello, "Error Control Coding", Table 2.7), so every field built
//! here is bit-identical to any other implementation using that table.

use thiserror::Error;

/// Primitive polynomials indexed by degree `m`, including the `x^m` term.
///
/// | m  | polynomial                       | hex      |
/// |----|----------------------------------|----------|
/// | 2  | x^2 + x + 1                      | 0x7      |
/// | 3  | x^3 + x + 1                      | 0xB      |
/// | 4  | x^4 + x + 1                      | 0x13     |
/// | 5  | x^5 + x^2 + 1                    | 0x25     |
/// | 6  | x^6 + x + 1                      | 0x43     |
/// | 7  | x^7 + x^3 + 1                    | 0x89     |
/// | 8  | x^8 + x^4 + x^3 + x^2 + 1        | 0x11D    |
/// | 9  | x^9 + x^4 + 1                    | 0x211    |
/// | 10 | x^10 + x^3 + 1                   | 0x409    |
/// | 11 | x^11 + x^2 + 1                   | 0x805    |
/// | 12 | x^12 + x^6 + x^4 + x + 1         | 0x1053   |
/// | 13 | x^13 + x^4 + x^3 + x + 1         | 0x201B   |
/// | 14 | x^14 + x^10 + x^6 + x + 1        | 0x4443   |
/// | 15 | x^15 + x + 1                     | 0x8003   |
/// | 16 | x^16 + x^12 + x^3 + x + 1        | 0x1100B  |
pub const PRIMITIVE_POLYS: [(u32, u32); 15] = [
    (2, 0x7),
    (3, 0xB),
    (4, 0x13),
    (5, 0x25),
    (6, 0x43),
    (7, 0x89),
    (8, 0x11D),
    (9, 0x211),
    (10, 0x409),
    (11, 0x805),
    (12, 0x1053),
    (13, 0x201B),
    (14, 0x4443),
    (15, 0x8003),
    (16, 0x1100B),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("unsupported extension degree {0} (expected 2..=16)")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#x} is not primitive for degree {m}")]
    NotPrimitive { m: u32, poly: u32 },
}

/// GF(2^m) with exponent and logarithm tables.
#[derive(Debug, Clone)]
pub struct GaloisField {
    m: u32,
    primitive_poly: u32,
    /// `antilog[i] = alpha^i` for `0 <= i < order`.
    antilog: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

impl GaloisField {
    /// Builds GF(2^m) using the tabulated primitive polynomial.
    pub fn new(m: u32) -> Result<Self, GfError> {
        let poly = PRIMITIVE_POLYS
            .iter()
            .find(|(deg, _)| *deg == m)
            .map(|(_, p)| *p)
            .ok_or(GfError::UnsupportedDegree(m))?;
        Self::with_poly(m, poly)
    }

    /// Builds GF(2^m) from an explicit polynomial, rejecting it unless
    /// `alpha = x` generates the full multiplicative group.
    pub fn with_poly(m: u32, poly: u32) -> Result<Self, GfError> {
        if !(2..=16).contains(&m) {
            return Err(GfError::UnsupportedDegree(m));
        }
        let size = 1usize << m;
        let order = size - 1;
        let mut antilog = vec![0u32; order];
        let mut log = vec![0u32; size];
        let mut seen = vec![false; size];
        let mut x: u32 = 1;
        for (i, slot) in antilog.iter_mut().enumerate() {
            if x == 0 || seen[x as usize] {
                return Err(GfError::NotPrimitive { m, poly });
            }
            seen[x as usize] = true;
            *slot = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(GfError::NotPrimitive { m, poly });
        }
        Ok(Self {
            m,
            primitive_poly: poly,
            antilog,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of field elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Order of the multiplicative group, `2^m - 1`.
    pub fn order(&self) -> usize {
        self.antilog.len()
    }

    /// `alpha^e` for any exponent (reduced modulo the group order).
    pub fn exp(&self, e: u64) -> u32 {
        self.antilog[(e % self.order() as u64) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: u32) -> Option<u32> {
        if x == 0 || x as usize >= self.size() {
            None
        } else {
            Some(self.log[x as usize])
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.antilog[e % self.order()]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        let l = self.log(a)? as usize;
        Some(self.antilog[(self.order() - l) % self.order()])
    }
}
