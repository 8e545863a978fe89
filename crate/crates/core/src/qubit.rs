//! Single-qubit reduced state: density matrix, purity and coherence factor.
//!
//! The basis is ordered `(|1⟩, |−1⟩)`. Pure dephasing leaves the diagonal
//! alone and multiplies the off-diagonal element by `A(t)`:
//!
//! ```text
//! ρ(t) = [ cos²(θ/2)             ½ A(t) sin θ e^{−iφ} ]
//!        [ ½ A*(t) sin θ e^{iφ}  sin²(θ/2)            ]
//! ```

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::dephasing::DephasingValue;
use crate::error::{Error, Result};
use crate::linalg;

/// Pure initial qubit state `cos(θ/2)|1⟩ + e^{iφ} sin(θ/2)|−1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochState {
    theta: f64,
    phi: f64,
}

impl BlochState {
    /// `theta ∈ [0, π]`; `phi` is reduced into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::param(format!("polar angle must lie in [0, pi], got {theta}")));
        }
        if !phi.is_finite() {
            return Err(Error::param(format!("azimuthal angle must be finite, got {phi}")));
        }
        Ok(BlochState {
            theta,
            phi: phi.rem_euclid(TAU),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Amplitude on `|1⟩`.
    pub fn b_up(&self) -> Complex64 {
        Complex64::new((0.5 * self.theta).cos(), 0.0)
    }

    /// Amplitude on `|−1⟩`.
    pub fn b_down(&self) -> Complex64 {
        Complex64::from_polar((0.5 * self.theta).sin(), self.phi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitDensityMatrix {
    pub entries: [[Complex64; 2]; 2],
}

impl QubitDensityMatrix {
    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.entries)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        linalg::trace(&linalg::matmul(&self.entries, &self.entries)).re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::is_hermitian(&self.entries, tol)
    }

    /// Eigenvalues in ascending order, from the 2×2 closed form.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let b = self.entries[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - radius, mean + radius]
    }
}

impl Serialize for QubitDensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        linalg::complex_rows(&self.entries).serialize(serializer)
    }
}

pub fn density_matrix(state: &BlochState, a: &DephasingValue) -> Result<QubitDensityMatrix> {
    let a = a.checked()?;
    let half_theta = 0.5 * state.theta;
    let off = 0.5 * state.theta.sin() * a * Complex64::from_polar(1.0, -state.phi);
    Ok(QubitDensityMatrix {
        entries: [
            [Complex64::new(half_theta.cos().powi(2), 0.0), off],
            [off.conj(), Complex64::new(half_theta.sin().powi(2), 0.0)],
        ],
    })
}

/// `P = ½(|A|² − 1) sin²θ + 1`.
pub fn purity(state: &BlochState, a: &DephasingValue) -> Result<f64> {
    let m = a.checked()?.norm();
    let s = state.theta.sin();
    Ok(0.5 * (m * m - 1.0) * s * s + 1.0)
}

/// Coherence factor `C = |A|`.
pub fn coherence(a: &DephasingValue) -> f64 {
    a.modulus()
}
