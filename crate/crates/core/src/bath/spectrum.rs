use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::table::Table;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Integrand, QuadratureTolerance, Tail};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OhmicityClass {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

impl OhmicityClass {
    pub fn from_exponent(mu: f64) -> Self {
        if mu < 0.0 {
            OhmicityClass::SubOhmic
        } else if mu == 0.0 {
            OhmicityClass::Ohmic
        } else {
            OhmicityClass::SuperOhmic
        }
    }
}

impl fmt::Display for OhmicityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OhmicityClass::SubOhmic => "sub-ohmic",
            OhmicityClass::Ohmic => "ohmic",
            OhmicityClass::SuperOhmic => "super-ohmic",
        })
    }
}

/// Linear bath dispersion `h(ω) = v·ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dispersion {
    scale: f64,
}

impl Default for Dispersion {
    fn default() -> Self {
        Dispersion { scale: 1.0 }
    }
}

impl Dispersion {
    pub fn linear(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::param(format!(
                "dispersion scale must be positive, got {scale}"
            )));
        }
        Ok(Dispersion { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn energy(&self, omega: f64) -> f64 {
        self.scale * omega
    }
}

/// A family of coupling spectra.
///
/// Implementations supply the coupling `g(ω) = √J(ω)/h(ω)` together with its
/// small-ω power and a large-ω decay bound, which is all the quadrature needs.
pub trait SpectralForm: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn coupling(&self, omega: f64, dispersion: Dispersion) -> f64;

    fn spectral_density(&self, omega: f64, dispersion: Dispersion) -> f64;

    /// `s` in `g(ω) ~ c·ω^s` near the origin.
    fn coupling_exponent(&self) -> f64;

    fn coupling_tail(&self) -> Tail;

    fn ohmicity(&self) -> Result<OhmicityClass>;

    /// `∫₀^∞ g²(ω) dω` from the analytic form; `Ok(None)` if it diverges.
    fn coupling_sq_integral(&self, dispersion: Dispersion) -> Result<Option<f64>>;

    /// Cutoff-like frequency used to cap evaluation times.
    fn frequency_scale(&self) -> f64;

    fn is_uncoupled(&self) -> bool;
}

/// `J(ω) = λ ω^{1+μ} e^{−ω/ω_c}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drude {
    pub lambda: f64,
    pub mu: f64,
    pub omega_c: f64,
}

impl Drude {
    pub fn new(lambda: f64, mu: f64, omega_c: f64) -> Result<Self> {
        if !mu.is_finite() || mu <= -1.0 {
            return Err(Error::param(format!("Drude exponent requires mu > -1, got {mu}")));
        }
        if !omega_c.is_finite() || omega_c <= 0.0 {
            return Err(Error::param(format!(
                "Drude cutoff requires omega_c > 0, got {omega_c}"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::param(format!(
                "Drude strength requires lambda >= 0, got {lambda}"
            )));
        }
        Ok(Drude {
            lambda,
            mu,
            omega_c,
        })
    }
}

impl SpectralForm for Drude {
    fn name(&self) -> &'static str {
        "drude"
    }

    fn coupling(&self, omega: f64, dispersion: Dispersion) -> f64 {
        if self.lambda == 0.0 {
            return 0.0;
        }
        self.lambda.sqrt() / dispersion.scale()
            * omega.powf(0.5 * (self.mu - 1.0))
            * (-0.5 * omega / self.omega_c).exp()
    }

    fn spectral_density(&self, omega: f64, _dispersion: Dispersion) -> f64 {
        if self.lambda == 0.0 {
            return 0.0;
        }
        self.lambda * omega.powf(1.0 + self.mu) * (-omega / self.omega_c).exp()
    }

    fn coupling_exponent(&self) -> f64 {
        0.5 * (self.mu - 1.0)
    }

    fn coupling_tail(&self) -> Tail {
        Tail::exponential(0.5 / self.omega_c).with_power(self.coupling_exponent())
    }

    fn ohmicity(&self) -> Result<OhmicityClass> {
        Ok(OhmicityClass::from_exponent(self.mu))
    }

    fn coupling_sq_integral(&self, dispersion: Dispersion) -> Result<Option<f64>> {
        if self.lambda == 0.0 {
            return Ok(Some(0.0));
        }
        if self.mu <= 0.0 {
            return Ok(None);
        }
        let v = dispersion.scale();
        Ok(Some(
            self.lambda * gamma(self.mu) * self.omega_c.powf(self.mu) / (v * v),
        ))
    }

    fn frequency_scale(&self) -> f64 {
        self.omega_c
    }

    fn is_uncoupled(&self) -> bool {
        self.lambda == 0.0
    }
}

/// Coupling `g(ω)` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedSpectrum {
    table: Table,
    low_exponent: f64,
    tail_rate: f64,
    class: Option<OhmicityClass>,
}

impl TabulatedSpectrum {
    /// `low_exponent` continues `g` as a power law below the first sample,
    /// `tail_rate` as `e^{−rate·ω}` beyond the last one.
    pub fn new(
        table: Table,
        low_exponent: f64,
        tail_rate: f64,
        class: Option<OhmicityClass>,
    ) -> Result<Self> {
        if !(tail_rate.is_finite() && tail_rate > 0.0) {
            return Err(Error::param(format!(
                "tabulated spectrum needs a positive exponential tail rate, got {tail_rate}"
            )));
        }
        // Same range as a Drude coupling with mu > -1; keeps ∫g²h finite.
        if !low_exponent.is_finite() || low_exponent <= -1.0 {
            return Err(Error::param(format!(
                "tabulated coupling exponent must exceed -1, got {low_exponent}"
            )));
        }
        Ok(TabulatedSpectrum {
            table,
            low_exponent,
            tail_rate,
            class,
        })
    }

    pub fn table(&self) -> &Table {
        &self.table
    }
}

impl SpectralForm for TabulatedSpectrum {
    fn name(&self) -> &'static str {
        "tabulated"
    }

    fn coupling(&self, omega: f64, _dispersion: Dispersion) -> f64 {
        self.table.eval(omega, self.low_exponent, self.tail_rate)
    }

    fn spectral_density(&self, omega: f64, dispersion: Dispersion) -> f64 {
        let h = dispersion.energy(omega);
        let g = self.coupling(omega, dispersion);
        h * h * g * g
    }

    fn coupling_exponent(&self) -> f64 {
        self.low_exponent
    }

    fn coupling_tail(&self) -> Tail {
        Tail::exponential(self.tail_rate).with_onset(self.table.last())
    }

    fn ohmicity(&self) -> Result<OhmicityClass> {
        self.class.ok_or_else(|| {
            Error::Classification("tabulated spectrum carries no declared ohmicity class".into())
        })
    }

    fn coupling_sq_integral(&self, _dispersion: Dispersion) -> Result<Option<f64>> {
        Err(Error::UnsupportedSpectrum(
            "long-time limits need an analytic spectral form".into(),
        ))
    }

    fn frequency_scale(&self) -> f64 {
        1.0 / self.tail_rate
    }

    fn is_uncoupled(&self) -> bool {
        self.table.samples().all(|(_, g)| g == 0.0)
    }
}

/// Spectral form plus dispersion.
#[derive(Clone, Debug)]
pub struct CouplingSpectrum {
    form: Arc<dyn SpectralForm>,
    dispersion: Dispersion,
    moment: Arc<OnceLock<f64>>,
}

impl CouplingSpectrum {
    pub fn new(form: Arc<dyn SpectralForm>) -> Self {
        CouplingSpectrum {
            form,
            dispersion: Dispersion::default(),
            moment: Arc::new(OnceLock::new()),
        }
    }

    pub fn drude(lambda: f64, mu: f64, omega_c: f64) -> Result<Self> {
        Ok(Self::new(Arc::new(Drude::new(lambda, mu, omega_c)?)))
    }

    pub fn with_dispersion(mut self, dispersion: Dispersion) -> Self {
        self.dispersion = dispersion;
        self.moment = Arc::new(OnceLock::new());
        self
    }

    pub fn form(&self) -> &dyn SpectralForm {
        self.form.as_ref()
    }

    pub fn dispersion(&self) -> Dispersion {
        self.dispersion
    }

    /// `g(ω)` without domain checks, for use inside integrands.
    #[inline]
    pub(crate) fn g(&self, omega: f64) -> f64 {
        self.form.coupling(omega, self.dispersion)
    }

    pub fn spectral_density(&self, omega: f64) -> f64 {
        self.form.spectral_density(omega, self.dispersion)
    }

    pub fn coupling_exponent(&self) -> f64 {
        self.form.coupling_exponent()
    }

    pub fn coupling_tail(&self) -> Tail {
        self.form.coupling_tail()
    }

    /// `∫₀^∞ g²(ω) h(ω) dω`, computed once per spectrum with default tolerances.
    pub fn energy_moment(&self) -> Result<f64> {
        if let Some(&m) = self.moment.get() {
            return Ok(m);
        }
        let base = |w: f64| {
            let g = self.g(w);
            g * g * self.dispersion.energy(w)
        };
        let s = 2.0 * self.coupling_exponent() + 1.0;
        let tail = self.coupling_tail();
        let tail = tail.product(tail);
        let tail = Tail {
            power: tail.power + 1.0,
            ..tail
        };
        let value = integrate(&Integrand::new(&base, s, tail), &QuadratureTolerance::default())?.value;
        // Racing writers compute the same number; the first one wins.
        let _ = self.moment.set(value);
        Ok(*self.moment.get().unwrap_or(&value))
    }
}

pub fn make_drude_spectrum(lambda: f64, mu: f64, omega_c: f64) -> Result<CouplingSpectrum> {
    CouplingSpectrum::drude(lambda, mu, omega_c)
}

/// `g(ω) = √J(ω)/h(ω)` for `ω > 0`.
pub fn coupling_g(spectrum: &CouplingSpectrum, omega: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!(
            "coupling is defined for omega > 0, got {omega}"
        )));
    }
    Ok(spectrum.g(omega))
}

pub fn ohmicity_class(spectrum: &CouplingSpectrum) -> Result<OhmicityClass> {
    spectrum.form().ohmicity()
}
