//! Parameterisation of a product ensemble.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetry class of the factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Beta {
    /// complex entries, beta = 2
    Complex,
    /// quaternion entries, beta = 4
    Quaternion,
}

impl Beta {
    pub fn value(self) -> u32 {
        match self {
            Beta::Complex => 2,
            Beta::Quaternion => 4,
        }
    }

    pub fn from_value(beta: u32) -> Result<Self> {
        match beta {
            2 => Ok(Beta::Complex),
            4 => Ok(Beta::Quaternion),
            other => Err(Error::InvalidParameter(format!("beta must be 2 or 4, got {other}"))),
        }
    }
}

/// Matrix dimension, or the N -> infinity limit process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixSize {
    Finite(usize),
    Infinite,
}

/// (beta, N, m_1..m_n) of a product of n induced Ginibre factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub beta: Beta,
    pub size: MatrixSize,
    pub m: Vec<f64>,
}

impl EnsembleSpec {
    pub fn new(beta: Beta, size: MatrixSize, m: Vec<f64>) -> Result<Self> {
        let spec = Self { beta, size, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn complex(dim: usize, m: Vec<f64>) -> Result<Self> {
        Self::new(Beta::Complex, MatrixSize::Finite(dim), m)
    }

    pub fn quaternion(dim: usize, m: Vec<f64>) -> Result<Self> {
        Self::new(Beta::Quaternion, MatrixSize::Finite(dim), m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m.is_empty() {
            return Err(Error::InvalidParameter("at least one factor is required".into()));
        }
        if let Some(bad) = self.m.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("induced parameters must be >= 0, got {bad}")));
        }
        if self.size == MatrixSize::Finite(0) {
            return Err(Error::InvalidParameter("matrix size must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of factors.
    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn sum_m(&self) -> f64 {
        self.m.iter().sum()
    }

    pub fn dim(&self) -> Option<usize> {
        match self.size {
            MatrixSize::Finite(n) => Some(n),
            MatrixSize::Infinite => None,
        }
    }

    pub fn finite_dim(&self) -> Result<usize> {
        self.dim()
            .ok_or_else(|| Error::InvalidParameter("operation needs a finite matrix size".into()))
    }

    /// Gamma shapes of the k-th squared modulus (k >= 1): k + m_a, or 2k + m_a for quaternions.
    pub fn shapes(&self, k: usize) -> Vec<f64> {
        let base = match self.beta {
            Beta::Complex => k as f64,
            Beta::Quaternion => 2.0 * k as f64,
        };
        self.m.iter().map(|m| base + m).collect()
    }

    pub fn with_size(&self, size: MatrixSize) -> Self {
        Self { size, ..self.clone() }
    }
}
