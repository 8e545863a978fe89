use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use statrs::function::{erf::erfc, gamma::gamma};

use super::table::Table;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Integrand, QuadratureTolerance, Tail};

/// Real displacement profile `α(ω)` of a coherent bath state.
pub trait Profile: Send + Sync + fmt::Debug {
    fn family(&self) -> &'static str;

    fn value(&self, omega: f64) -> f64;

    /// `s` in `α(ω) ~ c·ω^s` near the origin.
    fn endpoint_exponent(&self) -> f64;

    fn tail(&self) -> Tail;

    /// `∫₀^∞ α²(ω) dω` when the family has a closed form.
    fn closed_norm_sq(&self) -> Option<f64>;

    fn is_zero(&self) -> bool;
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite, got {x}")))
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive, got {x}")))
    }
}

/// `α(ω) = a·e^{−ω/(2w)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponential {
    pub amplitude: f64,
    pub width: f64,
}

impl Exponential {
    pub fn new(amplitude: f64, width: f64) -> Result<Self> {
        check_finite("amplitude", amplitude)?;
        check_positive("width", width)?;
        Ok(Exponential { amplitude, width })
    }
}

impl Profile for Exponential {
    fn family(&self) -> &'static str {
        "exponential"
    }

    fn value(&self, omega: f64) -> f64 {
        self.amplitude * (-0.5 * omega / self.width).exp()
    }

    fn endpoint_exponent(&self) -> f64 {
        0.0
    }

    fn tail(&self) -> Tail {
        Tail::exponential(0.5 / self.width)
    }

    fn closed_norm_sq(&self) -> Option<f64> {
        Some(self.amplitude * self.amplitude * self.width)
    }

    fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// `α(ω) = a·ω^ν·e^{−ω/(2w)}`, square-integrable for `ν > −½`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerExponential {
    pub amplitude: f64,
    pub power: f64,
    pub width: f64,
}

impl PowerExponential {
    pub fn new(amplitude: f64, power: f64, width: f64) -> Result<Self> {
        check_finite("amplitude", amplitude)?;
        check_positive("width", width)?;
        if !power.is_finite() || power <= -0.5 {
            return Err(Error::Integrability(format!(
                "power-exponential profile needs nu > -1/2, got {power}"
            )));
        }
        Ok(PowerExponential {
            amplitude,
            power,
            width,
        })
    }
}

impl Profile for PowerExponential {
    fn family(&self) -> &'static str {
        "power_exponential"
    }

    fn value(&self, omega: f64) -> f64 {
        self.amplitude * omega.powf(self.power) * (-0.5 * omega / self.width).exp()
    }

    fn endpoint_exponent(&self) -> f64 {
        self.power
    }

    fn tail(&self) -> Tail {
        Tail::exponential(0.5 / self.width).with_power(self.power)
    }

    fn closed_norm_sq(&self) -> Option<f64> {
        let n = 2.0 * self.power + 1.0;
        Some(self.amplitude * self.amplitude * gamma(n) * self.width.powf(n))
    }

    fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// `α(ω) = a·exp(−(ω−c)²/(2σ²))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianBump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianBump {
    pub fn new(amplitude: f64, center: f64, width: f64) -> Result<Self> {
        check_finite("amplitude", amplitude)?;
        check_finite("center", center)?;
        check_positive("width", width)?;
        Ok(GaussianBump {
            amplitude,
            center,
            width,
        })
    }
}

impl Profile for GaussianBump {
    fn family(&self) -> &'static str {
        "gaussian"
    }

    fn value(&self, omega: f64) -> f64 {
        let x = (omega - self.center) / self.width;
        self.amplitude * (-0.5 * x * x).exp()
    }

    fn endpoint_exponent(&self) -> f64 {
        0.0
    }

    fn tail(&self) -> Tail {
        // Past c + σ the log-slope is below −1/σ.
        Tail::exponential(1.0 / self.width).with_onset((self.center + self.width).max(0.0))
    }

    fn closed_norm_sq(&self) -> Option<f64> {
        let a2 = self.amplitude * self.amplitude;
        Some(a2 * self.width * PI.sqrt() * 0.5 * erfc(-self.center / self.width))
    }

    fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// Profile sampled on a grid; see [`Table`] for the interpolation rules.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedProfile {
    table: Table,
    low_exponent: f64,
    tail_rate: f64,
}

impl TabulatedProfile {
    pub fn new(table: Table, low_exponent: f64, tail_rate: f64) -> Result<Self> {
        check_positive("tail rate", tail_rate)?;
        if !low_exponent.is_finite() || low_exponent <= -0.5 {
            return Err(Error::Integrability(format!(
                "tabulated profile needs a low-frequency exponent > -1/2, got {low_exponent}"
            )));
        }
        Ok(TabulatedProfile {
            table,
            low_exponent,
            tail_rate,
        })
    }
}

impl Profile for TabulatedProfile {
    fn family(&self) -> &'static str {
        "tabulated"
    }

    fn value(&self, omega: f64) -> f64 {
        self.table.eval(omega, self.low_exponent, self.tail_rate)
    }

    fn endpoint_exponent(&self) -> f64 {
        self.low_exponent
    }

    fn tail(&self) -> Tail {
        Tail::exponential(self.tail_rate).with_onset(self.table.last())
    }

    fn closed_norm_sq(&self) -> Option<f64> {
        None
    }

    fn is_zero(&self) -> bool {
        self.table.samples().all(|(_, v)| v == 0.0)
    }
}

/// Cat state `(|α⟩ + e^{iΦ}|−α⟩)/√N` of the bath.
#[derive(Clone, Debug)]
pub struct CatProfile {
    alpha: Arc<dyn Profile>,
    phi: f64,
}

impl CatProfile {
    /// `phi` is reduced into `[0, 2π)`.
    pub fn new(alpha: Arc<dyn Profile>, phi: f64) -> Result<Self> {
        check_finite("cat phase", phi)?;
        Ok(CatProfile {
            alpha,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// `α ≡ 0`, `Φ = 0`: the bath vacuum.
    pub fn vacuum() -> Self {
        CatProfile {
            alpha: Arc::new(Exponential {
                amplitude: 0.0,
                width: 1.0,
            }),
            phi: 0.0,
        }
    }

    pub fn alpha(&self) -> &dyn Profile {
        self.alpha.as_ref()
    }

    pub fn alpha_arc(&self) -> Arc<dyn Profile> {
        Arc::clone(&self.alpha)
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

fn check_square_integrable(profile: &dyn Profile) -> Result<()> {
    let s = profile.endpoint_exponent();
    // Negated so that a NaN exponent is rejected.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(2.0 * s > -1.0) {
        return Err(Error::Integrability(format!(
            "alpha ~ omega^{s} near 0 is not square-integrable"
        )));
    }
    Ok(())
}

/// `∫₀^∞ α²(ω) dω`, closed form where available.
pub fn alpha_norm_sq(profile: &dyn Profile, tol: &QuadratureTolerance) -> Result<f64> {
    check_square_integrable(profile)?;
    if profile.is_zero() {
        return Ok(0.0);
    }
    match profile.closed_norm_sq() {
        Some(v) => Ok(v),
        None => alpha_norm_sq_quadrature(profile, tol),
    }
}

/// Quadrature route for `∫₀^∞ α²(ω) dω`, ignoring any closed form.
pub fn alpha_norm_sq_quadrature(profile: &dyn Profile, tol: &QuadratureTolerance) -> Result<f64> {
    check_square_integrable(profile)?;
    let base = |w: f64| {
        let a = profile.value(w);
        a * a
    };
    let tail = profile.tail();
    let integrand = Integrand::new(&base, 2.0 * profile.endpoint_exponent(), tail.product(tail));
    Ok(integrate(&integrand, tol)?.value)
}
