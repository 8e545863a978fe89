//! The dephasing function `A(t)` and its building blocks.
//!
//! For a bath prepared in the cat state `(|α⟩ + e^{iΦ}|−α⟩)/√N` with real
//! `α(ω)`,
//!
//! ```text
//! A(t) = N⁻¹ A₀(t) e^{−2iεt} [ A₊(t) e^{−iΦ} + A₋(t) e^{iΦ} + 2 cos 4Λ_α(t) ]
//!
//! A₀(t)  = exp{−4 ∫ g² (1 − cos ht)}
//! A±(t)  = exp{−2 ∫ α² ∓ 4 ∫ α g (1 − cos ht)}
//! Λ_α(t) = ∫ α g sin ht
//! N      = 2 + 2 cos Φ · exp{−2 ∫ α²}
//! ```
//!
//! while a coherent bath `|α⟩` gives `A(t) = e^{−2iεt} e^{−4iΛ_α(t)} A₀(t)`.

mod state;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{alpha_norm_sq, CatProfile, CouplingSpectrum, Profile};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Integrand, Kernel, QuadratureTolerance};

pub use state::{BathState, CatState, CoherentState, VacuumState};

/// Exponents beyond this magnitude are reported instead of over/underflowing.
pub const EXPONENT_GUARD: f64 = 700.0;

/// Cat normalisations below this are treated as an ill-defined state.
pub const DEGENERATE_NORM: f64 = 1e-9;

/// Largest `t · v · ω_c` the quadrature is asked to resolve.
pub const MAX_SCALED_TIME: f64 = 1e6;

/// Moduli in `(1, 1 + RENORMALIZE_SLACK]` are pulled back onto the unit circle.
pub const RENORMALIZE_SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitSpec {
    pub epsilon: f64,
}

impl QubitSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::param(format!("qubit energy must be finite, got {epsilon}")));
        }
        Ok(QubitSpec { epsilon })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DephasingParts {
    pub a0: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub lambda_alpha: f64,
    pub norm: f64,
    /// Free qubit phase `−2εt`.
    pub phase: f64,
}

/// How a [`DephasingValue`] was obtained, which fixes how its parts recombine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preparation {
    Cat { phi: f64 },
    /// `a_plus`, `a_minus` and `norm` are unused and set to one.
    Coherent,
    /// Supplied directly; parts are placeholders.
    Prescribed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DephasingValue {
    pub a: Complex64,
    pub parts: DephasingParts,
    pub preparation: Preparation,
}

impl DephasingValue {
    /// Wraps an externally supplied `A`.
    pub fn prescribed(a: Complex64) -> Self {
        DephasingValue {
            a,
            parts: DephasingParts {
                a0: a.norm(),
                a_plus: 1.0,
                a_minus: 1.0,
                lambda_alpha: 0.0,
                norm: 1.0,
                phase: a.arg(),
            },
            preparation: Preparation::Prescribed,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.a.norm()
    }

    /// Rebuilds `A` from its parts.
    pub fn recompose(&self) -> Complex64 {
        let p = &self.parts;
        match self.preparation {
            Preparation::Cat { phi } => {
                let bracket = Complex64::from_polar(p.a_plus, -phi)
                    + Complex64::from_polar(p.a_minus, phi)
                    + 2.0 * (4.0 * p.lambda_alpha).cos();
                bracket * Complex64::from_polar(p.a0 / p.norm, p.phase)
            }
            Preparation::Coherent => Complex64::from_polar(p.a0, p.phase - 4.0 * p.lambda_alpha),
            Preparation::Prescribed => self.a,
        }
    }

    /// `A` with the modulus policy applied: values just above one are pulled
    /// back to the unit circle, larger ones rejected.
    pub fn checked(&self) -> Result<Complex64> {
        let m = self.a.norm();
        if !m.is_finite() {
            return Err(Error::InvalidInput(format!("dephasing value {} is not finite", self.a)));
        }
        if m > 1.0 + RENORMALIZE_SLACK {
            return Err(Error::InvalidInput(format!(
                "|A| = {m} exceeds 1 beyond the tolerated {RENORMALIZE_SLACK:e}"
            )));
        }
        if m > 1.0 {
            Ok(self.a / m)
        } else {
            Ok(self.a)
        }
    }
}

/// Long-time limit of a decaying quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LongTimeLimit {
    Value(f64),
    Vanishes,
}

impl LongTimeLimit {
    pub fn value(self) -> f64 {
        match self {
            LongTimeLimit::Value(v) => v,
            LongTimeLimit::Vanishes => 0.0,
        }
    }
}

fn check_time(spectrum: &CouplingSpectrum, t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("time must be finite and non-negative, got {t}")));
    }
    let scaled = t * spectrum.dispersion().scale() * spectrum.form().frequency_scale();
    if scaled > MAX_SCALED_TIME {
        return Err(Error::Domain(format!(
            "t = {t} is {scaled:.3e} cutoff periods; use the long-time limits beyond {MAX_SCALED_TIME:e}"
        )));
    }
    Ok(())
}

fn guarded_exp(exponent: f64) -> Result<f64> {
    if exponent.abs() > EXPONENT_GUARD {
        Err(Error::Saturation { exponent })
    } else {
        Ok(exponent.exp())
    }
}

/// `∫₀^∞ g²(ω) k(h(ω)t) dω`.
fn coupling_sq_integral(
    spectrum: &CouplingSpectrum,
    kernel: Kernel,
    t: f64,
    tol: &QuadratureTolerance,
) -> Result<f64> {
    if spectrum.form().is_uncoupled() {
        return Ok(0.0);
    }
    let base = |w: f64| {
        let g = spectrum.g(w);
        g * g
    };
    let tail = spectrum.coupling_tail();
    let integrand = Integrand::new(&base, 2.0 * spectrum.coupling_exponent(), tail.product(tail))
        .with_kernel(kernel, spectrum.dispersion().scale() * t);
    Ok(integrate(&integrand, tol)?.value)
}

/// `∫₀^∞ α(ω) g(ω) k(h(ω)t) dω`.
fn overlap_integral(
    alpha: &dyn Profile,
    spectrum: &CouplingSpectrum,
    kernel: Kernel,
    t: f64,
    tol: &QuadratureTolerance,
) -> Result<f64> {
    if alpha.is_zero() || spectrum.form().is_uncoupled() {
        return Ok(0.0);
    }
    let base = |w: f64| alpha.value(w) * spectrum.g(w);
    let integrand = Integrand::new(
        &base,
        alpha.endpoint_exponent() + spectrum.coupling_exponent(),
        alpha.tail().product(spectrum.coupling_tail()),
    )
    .with_kernel(kernel, spectrum.dispersion().scale() * t);
    Ok(integrate(&integrand, tol)?.value)
}

/// `N = 2 + 2 cos Φ · exp(−2∫α²)`.
pub fn norm_constant(cat: &CatProfile, tol: &QuadratureTolerance) -> Result<f64> {
    let n_sq = alpha_norm_sq(cat.alpha(), tol)?;
    let norm = 2.0 + 2.0 * cat.phi().cos() * (-2.0 * n_sq).exp();
    if norm < DEGENERATE_NORM {
        return Err(Error::DegenerateCat { norm });
    }
    Ok(norm)
}

/// `Λ_α(t) = ∫ α g sin(ht)`.
pub fn lambda_alpha(
    alpha: &dyn Profile,
    spectrum: &CouplingSpectrum,
    t: f64,
    tol: &QuadratureTolerance,
) -> Result<f64> {
    check_time(spectrum, t)?;
    overlap_integral(alpha, spectrum, Kernel::Sin, t, tol)
}

/// `A₀(t) = exp{−4 ∫ g² (1 − cos ht)}`.
pub fn a0(spectrum: &CouplingSpectrum, t: f64, tol: &QuadratureTolerance) -> Result<f64> {
    check_time(spectrum, t)?;
    let i = coupling_sq_integral(spectrum, Kernel::OneMinusCos, t, tol)?;
    Ok((-4.0 * i).exp())
}

fn a_pm_from(norm_sq: f64, overlap: f64, sign: Sign) -> Result<f64> {
    guarded_exp(-2.0 * norm_sq - sign.as_f64() * 4.0 * overlap)
}

/// `A±(t) = exp{−2∫α² ∓ 4∫ α g (1 − cos ht)}`.
pub fn a_pm(
    cat: &CatProfile,
    spectrum: &CouplingSpectrum,
    t: f64,
    sign: Sign,
    tol: &QuadratureTolerance,
) -> Result<f64> {
    check_time(spectrum, t)?;
    let norm_sq = alpha_norm_sq(cat.alpha(), tol)?;
    let overlap = overlap_integral(cat.alpha(), spectrum, Kernel::OneMinusCos, t, tol)?;
    a_pm_from(norm_sq, overlap, sign)
}

/// Dephasing function for a cat-state bath.
pub fn dephasing_cat(
    cat: &CatProfile,
    spectrum: &CouplingSpectrum,
    qubit: &QubitSpec,
    t: f64,
    tol: &QuadratureTolerance,
) -> Result<DephasingValue> {
    check_time(spectrum, t)?;
    let norm_sq = alpha_norm_sq(cat.alpha(), tol)?;
    let norm = 2.0 + 2.0 * cat.phi().cos() * (-2.0 * norm_sq).exp();
    if norm < DEGENERATE_NORM {
        return Err(Error::DegenerateCat { norm });
    }
    let a0 = (-4.0 * coupling_sq_integral(spectrum, Kernel::OneMinusCos, t, tol)?).exp();
    let lambda_alpha = overlap_integral(cat.alpha(), spectrum, Kernel::Sin, t, tol)?;
    let overlap = overlap_integral(cat.alpha(), spectrum, Kernel::OneMinusCos, t, tol)?;
    let parts = DephasingParts {
        a0,
        a_plus: a_pm_from(norm_sq, overlap, Sign::Plus)?,
        a_minus: a_pm_from(norm_sq, overlap, Sign::Minus)?,
        lambda_alpha,
        norm,
        phase: -2.0 * qubit.epsilon * t,
    };
    let mut value = DephasingValue {
        a: Complex64::new(0.0, 0.0),
        parts,
        preparation: Preparation::Cat { phi: cat.phi() },
    };
    value.a = value.recompose();
    Ok(value)
}

/// Dephasing function for a coherent bath `|α⟩`; `|A| = A₀` whatever `α` is.
pub fn dephasing_coherent(
    alpha: &dyn Profile,
    spectrum: &CouplingSpectrum,
    qubit: &QubitSpec,
    t: f64,
    tol: &QuadratureTolerance,
) -> Result<DephasingValue> {
    check_time(spectrum, t)?;
    alpha_norm_sq(alpha, tol)?;
    let a0 = (-4.0 * coupling_sq_integral(spectrum, Kernel::OneMinusCos, t, tol)?).exp();
    let lambda_alpha = overlap_integral(alpha, spectrum, Kernel::Sin, t, tol)?;
    let parts = DephasingParts {
        a0,
        a_plus: 1.0,
        a_minus: 1.0,
        lambda_alpha,
        norm: 1.0,
        phase: -2.0 * qubit.epsilon * t,
    };
    let mut value = DephasingValue {
        a: Complex64::new(0.0, 0.0),
        parts,
        preparation: Preparation::Coherent,
    };
    value.a = value.recompose();
    Ok(value)
}

/// `lim A₀(t) = exp{−4 ∫ g²}`; vanishes for sub-Ohmic and Ohmic spectra.
pub fn long_time_a0(spectrum: &CouplingSpectrum) -> Result<LongTimeLimit> {
    match spectrum.form().coupling_sq_integral(spectrum.dispersion())? {
        Some(i) => Ok(LongTimeLimit::Value((-4.0 * i).exp())),
        None => Ok(LongTimeLimit::Vanishes),
    }
}

/// `lim |A(t)|` for a cat bath.
///
/// `Λ_α(t) → 0` and `∫αg(1 − cos ht) → ∫αg` as `t → ∞`, so the bracket
/// settles on `A₊ e^{−iΦ} + A₋ e^{iΦ} + 2` with time-independent `A±`.
pub fn long_time_cat_modulus(
    cat: &CatProfile,
    spectrum: &CouplingSpectrum,
    tol: &QuadratureTolerance,
) -> Result<LongTimeLimit> {
    let a0 = match long_time_a0(spectrum)? {
        LongTimeLimit::Vanishes => return Ok(LongTimeLimit::Vanishes),
        LongTimeLimit::Value(v) => v,
    };
    let norm = norm_constant(cat, tol)?;
    let norm_sq = alpha_norm_sq(cat.alpha(), tol)?;
    let overlap = overlap_integral(cat.alpha(), spectrum, Kernel::One, 0.0, tol)?;
    let phi = cat.phi();
    let bracket = Complex64::from_polar(a_pm_from(norm_sq, overlap, Sign::Plus)?, -phi)
        + Complex64::from_polar(a_pm_from(norm_sq, overlap, Sign::Minus)?, phi)
        + 2.0;
    Ok(LongTimeLimit::Value(a0 / norm * bracket.norm()))
}

/// `Λ±₁(t) = ±εt − ∫ g² (ht − sin ht)`.
pub fn phase_lambda(
    spectrum: &CouplingSpectrum,
    qubit: &QubitSpec,
    t: f64,
    branch: Sign,
    tol: &QuadratureTolerance,
) -> Result<f64> {
    check_time(spectrum, t)?;
    let free = branch.as_f64() * qubit.epsilon * t;
    if t == 0.0 || spectrum.form().is_uncoupled() {
        return Ok(free);
    }
    let linear = t * spectrum.energy_moment()?;
    let oscillating = coupling_sq_integral(spectrum, Kernel::Sin, t, tol)?;
    Ok(free - (linear - oscillating))
}
