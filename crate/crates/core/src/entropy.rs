//! Von Neumann, Rényi and Tsallis entropies, all in bits.
//!
//! The Tsallis entropy has no logarithm of its own. It is reported in the
//! base-2 normalization (Tr ρ^q − 1)/(2^{1−q} − 1), which assigns one bit to a
//! fair coin for every q and tends to the von Neumann entropy in bits as q → 1.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Eigenvalues below this are set to zero before any power or logarithm.
pub const EIGEN_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "q", rename_all = "snake_case")]
pub enum EntropySpec {
    VonNeumann,
    Renyi(f64),
    Tsallis(f64),
}

impl EntropySpec {
    /// Rényi entropy of order q ∈ [0, 1]; q = 1 gives von Neumann.
    pub fn renyi(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidEntropy(format!("renyi order must lie in [0, 1], got {q}")));
        }
        Ok(if q == 1.0 { Self::VonNeumann } else { Self::Renyi(q) })
    }

    /// Tsallis entropy of order q > 0; q = 1 gives von Neumann.
    pub fn tsallis(q: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidEntropy(format!("tsallis order must be positive, got {q}")));
        }
        Ok(if q == 1.0 { Self::VonNeumann } else { Self::Tsallis(q) })
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            Self::VonNeumann => Ok(self),
            Self::Renyi(q) => Self::renyi(q),
            Self::Tsallis(q) => Self::tsallis(q),
        }
    }

    pub fn order(self) -> Option<f64> {
        match self {
            Self::VonNeumann => None,
            Self::Renyi(q) | Self::Tsallis(q) => Some(q),
        }
    }

    /// Entropy of a probability vector (eigenvalues of a density matrix).
    pub fn of_spectrum(self, eigenvalues: &[f64]) -> f64 {
        match self {
            Self::VonNeumann => eigenvalues
                .iter()
                .map(|&v| clamp(v))
                .filter(|&v| v > 0.0)
                .map(|v| -v * v.log2())
                .sum(),
            Self::Renyi(q) => trace_power(eigenvalues, q).log2() / (1.0 - q),
            Self::Tsallis(q) => (trace_power(eigenvalues, q) - 1.0) / tsallis_unit(q),
        }
    }

    pub fn of_matrix(self, rho: &CMatrix) -> f64 {
        self.of_spectrum(&linalg::hermitian_eigenvalues(rho))
    }
}

impl fmt::Display for EntropySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::VonNeumann => write!(f, "vn"),
            Self::Renyi(q) => write!(f, "renyi:{q}"),
            Self::Tsallis(q) => write!(f, "tsallis:{q}"),
        }
    }
}

impl FromStr for EntropySpec {
    type Err = Error;

    /// Accepts `vn`, `renyi:q` and `tsallis:q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("vn") || s.eq_ignore_ascii_case("von-neumann") {
            return Ok(Self::VonNeumann);
        }
        let (kind, q) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidEntropy(format!("expected vn, renyi:q or tsallis:q, got {s:?}")))?;
        let q: f64 = q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidEntropy(format!("order {q:?} is not a number")))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "renyi" => Self::renyi(q),
            "tsallis" => Self::tsallis(q),
            other => Err(Error::InvalidEntropy(format!("unknown entropy family {other:?}"))),
        }
    }
}

fn clamp(v: f64) -> f64 {
    if v < EIGEN_CLAMP {
        0.0
    } else {
        v
    }
}

/// 2^{1−q} − 1, the Tsallis denominator in bits.
pub(crate) fn tsallis_unit(q: f64) -> f64 {
    (1.0 - q).exp2() - 1.0
}

/// x^q with 0^q = 0 for every q (including q = 0, so S₀ counts the rank).
pub(crate) fn powq(x: f64, q: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(q)
    }
}

/// Σ λ^q over clamped eigenvalues.
pub fn trace_power(eigenvalues: &[f64], q: f64) -> f64 {
    eigenvalues.iter().map(|&v| powq(clamp(v), q)).sum()
}
