//! Two-qubit entanglement under one-sided dephasing.
//!
//! Qubit `Q` dephases through `A(t)`; qubit `q` only precesses freely. Starting
//! from a depolarised Bell state `(1 − p) ρ_i + p I/4`, the single Bell
//! coherence picks up `A(t)` and a free phase of `q`, and the negativity is
//! `max(0, (1 − p)|A|/2 − p/4)` for all four Bell states.
//!
//! Basis order is `|1,1⟩, |1,−1⟩, |−1,1⟩, |−1,−1⟩` (first label is `Q`).

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::dephasing::DephasingValue;
use crate::error::{Error, Result};
use crate::linalg;

/// Hermiticity and trace checks on incoming density matrices.
pub const MATRIX_TOLERANCE: f64 = 1e-12;

/// Which depolarised Bell state the pair starts in.
///
/// 1, 2: `(|−1,1⟩ ± |1,−1⟩)/√2`; 3, 4: `(|−1,−1⟩ ± |1,1⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellIndex(u8);

impl BellIndex {
    pub fn new(index: u8) -> Result<Self> {
        if (1..=4).contains(&index) {
            Ok(BellIndex(index))
        } else {
            Err(Error::param(format!("Bell index must be 1..=4, got {index}")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Basis positions `(row, column)` of the Bell coherence.
    fn coherence_position(self) -> (usize, usize) {
        match self.0 {
            1 | 2 => (1, 2),
            _ => (0, 3),
        }
    }

    fn relative_sign(self) -> f64 {
        if self.0 % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Sign of the free phase `e^{±2iϵt}` picked up by the coherence.
    fn free_phase_sign(self) -> f64 {
        match self.0 {
            1 | 2 => 1.0,
            _ => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitScenario {
    pub bell_index: BellIndex,
    pub p: f64,
    pub epsilon_q: f64,
}

impl TwoQubitScenario {
    pub fn new(bell_index: u8, p: f64, epsilon_q: f64) -> Result<Self> {
        check_depolarization(p)?;
        if !epsilon_q.is_finite() {
            return Err(Error::param(format!("second-qubit energy must be finite, got {epsilon_q}")));
        }
        Ok(TwoQubitScenario {
            bell_index: BellIndex::new(bell_index)?,
            p,
            epsilon_q,
        })
    }
}

fn check_depolarization(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(format!("depolarization must lie in [0, 1], got {p}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitDensityMatrix {
    pub entries: [[Complex64; 4]; 4],
}

impl TwoQubitDensityMatrix {
    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.entries)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::is_hermitian(&self.entries, tol)
    }

    /// Transpose on the second qubit: `⟨Q q|ρ^{T_q}|Q' q'⟩ = ⟨Q q'|ρ|Q' q⟩`.
    pub fn partial_transpose(&self) -> [[Complex64; 4]; 4] {
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                let (qa, sa) = (i / 2, i % 2);
                let (qb, sb) = (j / 2, j % 2);
                *z = self.entries[2 * qa + sb][2 * qb + sa];
            }
        }
        out
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.entries)
    }
}

impl Serialize for TwoQubitDensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        linalg::complex_rows(&self.entries).serialize(serializer)
    }
}

/// State of the pair at time `t`.
pub fn evolve_bell(
    scenario: &TwoQubitScenario,
    a: &DephasingValue,
    t: f64,
) -> Result<TwoQubitDensityMatrix> {
    check_depolarization(scenario.p)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let a = a.checked()?;
    let p = scenario.p;
    let bell = scenario.bell_index;
    let zero = Complex64::new(0.0, 0.0);
    let mut entries = [[zero; 4]; 4];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = Complex64::new(0.25 * p, 0.0);
    }
    let (r, c) = bell.coherence_position();
    let weight = 0.5 * (1.0 - p);
    entries[r][r] += weight;
    entries[c][c] += weight;
    let free = Complex64::from_polar(1.0, bell.free_phase_sign() * 2.0 * scenario.epsilon_q * t);
    let coherence = weight * bell.relative_sign() * a * free;
    entries[r][c] = coherence;
    entries[c][r] = coherence.conj();
    Ok(TwoQubitDensityMatrix { entries })
}

/// `max(0, (1 − p)|A|/2 − p/4)`.
pub fn negativity_closed(p: f64, a: &DephasingValue) -> Result<f64> {
    check_depolarization(p)?;
    let m = a.checked()?.norm();
    if p == 1.0 {
        return Ok(0.0);
    }
    let threshold = p / (2.0 * (1.0 - p));
    if m <= threshold {
        return Ok(0.0);
    }
    // Same value, factored so that |A| just above the threshold stays positive;
    // the floor catches the one case (p = 0, subnormal |A|) where the product underflows.
    Ok((0.5 * (1.0 - p) * (m - threshold)).max(f64::from_bits(1)))
}

/// Negativity from the spectrum of the partial transpose.
pub fn negativity_eigen(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    if !rho.is_hermitian(MATRIX_TOLERANCE) {
        return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > MATRIX_TOLERANCE {
        return Err(Error::InvalidInput(format!("density matrix has trace {tr}")));
    }
    let eigenvalues = linalg::hermitian_eigenvalues(&rho.partial_transpose())?;
    let negative: f64 = eigenvalues.iter().filter(|&&x| x < 0.0).sum();
    Ok((-negative).max(0.0))
}

/// Smallest `|A|` at which the pair is still entangled: `p / (2(1 − p))`.
pub fn sudden_death_threshold(p: f64) -> Result<f64> {
    check_depolarization(p)?;
    if p == 1.0 {
        return Err(Error::Domain("a fully depolarized pair is never entangled".into()));
    }
    Ok(p / (2.0 * (1.0 - p)))
}
