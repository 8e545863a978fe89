//! Built-in battery of analytic checks, run by `dephase selftest`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use qubit_dephasing::bath::{CatProfile, CouplingSpectrum, Exponential};
use qubit_dephasing::dephasing::{
    a0, dephasing_cat, long_time_a0, DephasingValue, LongTimeLimit, QubitSpec,
};
use qubit_dephasing::entanglement::{evolve_bell, negativity_closed, negativity_eigen, TwoQubitScenario};
use qubit_dephasing::quadrature::{integrate, Integrand, Kernel, QuadratureTolerance, Tail};
use qubit_dephasing::qubit::{density_matrix, purity, BlochState};
use statrs::function::gamma::gamma;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

type Outcome = Result<(), String>;
type NamedCheck = (&'static str, fn() -> Outcome);

fn close(label: &str, got: f64, want: f64, rel: f64) -> Outcome {
    if (got - want).abs() <= rel * want.abs().max(f64::MIN_POSITIVE) {
        Ok(())
    } else {
        Err(format!("{label}: got {got:.15e}, expected {want:.15e}"))
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn gamma_integrals() -> Outcome {
    let tol = QuadratureTolerance::default();
    for s in [0.0, 0.5, 1.0, 2.0] {
        let f = move |w: f64| w.powf(s) * (-w).exp();
        for kernel in [Kernel::One, Kernel::Cos, Kernel::Sin, Kernel::OneMinusCos] {
            for t in [0.1, 2.0, 10.0] {
                let ig = Integrand::new(&f, s, Tail::exponential(1.0).with_power(s))
                    .with_kernel(kernel, t);
                let got = integrate(&ig, &tol).map_err(err)?.value;
                let z = Complex64::new(1.0, t).powf(-s - 1.0) * gamma(s + 1.0);
                let want = match kernel {
                    Kernel::One => gamma(s + 1.0),
                    Kernel::Cos => z.re,
                    Kernel::Sin => -z.im,
                    Kernel::OneMinusCos => gamma(s + 1.0) - z.re,
                };
                close(&format!("s={s} {kernel:?} t={t}"), got, want, 1e-8)?;
            }
        }
    }
    Ok(())
}

fn ohmic_decay() -> Outcome {
    let tol = QuadratureTolerance::default();
    for (lambda, omega_c) in [(0.1, 1.0), (0.5, 2.0)] {
        let s = CouplingSpectrum::drude(lambda, 0.0, omega_c).map_err(err)?;
        for t in [0.01, 1.0, 30.0, 1e3] {
            let got = a0(&s, t, &tol).map_err(err)?;
            let want = (1.0 + omega_c * omega_c * t * t).powf(-2.0 * lambda);
            close(&format!("lambda={lambda} t={t}"), got, want, 1e-6)?;
        }
    }
    Ok(())
}

fn super_ohmic_decay() -> Outcome {
    let tol = QuadratureTolerance::default();
    let (lambda, omega_c) = (0.1, 1.5);
    let s = CouplingSpectrum::drude(lambda, 1.0, omega_c).map_err(err)?;
    for t in [0.1, 1.0, 10.0] {
        let x = omega_c * t;
        let want = (-4.0 * lambda * omega_c * x * x / (1.0 + x * x)).exp();
        close(&format!("t={t}"), a0(&s, t, &tol).map_err(err)?, want, 1e-6)?;
    }
    match long_time_a0(&s).map_err(err)? {
        LongTimeLimit::Value(v) => close("limit", v, (-4.0 * lambda * omega_c).exp(), 1e-15),
        LongTimeLimit::Vanishes => Err("super-ohmic limit reported as vanishing".into()),
    }
}

fn cat_interference() -> Outcome {
    let tol = QuadratureTolerance::default();
    let s = CouplingSpectrum::drude(0.25, 1.0, 1.0).map_err(err)?;
    let alpha = Arc::new(Exponential::new(0.5, 1.0).map_err(err)?);
    let qubit = QubitSpec::new(0.0).map_err(err)?;
    let (a0v, a_p, a_m, lam) = ((-0.5f64).exp(), (-1.0f64).exp(), 1.0f64, 0.125f64);
    for phi in [0.0f64, PI] {
        let cat = CatProfile::new(alpha.clone(), phi).map_err(err)?;
        let a = dephasing_cat(&cat, &s, &qubit, 1.0, &tol).map_err(err)?;
        let norm = 2.0 + 2.0 * phi.cos() * (-0.5f64).exp();
        let want = (a0v / norm * (a_p * (-Complex64::i() * phi).exp()
            + a_m * (Complex64::i() * phi).exp()
            + 2.0 * (4.0 * lam).cos()))
        .norm();
        close(&format!("phi={phi}"), a.modulus(), want, 1e-8)?;
    }
    Ok(())
}

fn negativity_routes() -> Outcome {
    for bell in 1..=4 {
        for p in [0.0, 0.2, 0.5, 0.9] {
            for r in [0.0, 0.3, 0.7, 1.0] {
                let a = DephasingValue::prescribed(Complex64::from_polar(r, 0.4 * bell as f64));
                let s = TwoQubitScenario::new(bell, p, 0.3).map_err(err)?;
                let eig = negativity_eigen(&evolve_bell(&s, &a, 1.7).map_err(err)?).map_err(err)?;
                let closed = negativity_closed(p, &a).map_err(err)?;
                if (eig - closed).abs() > 1e-10 {
                    return Err(format!("bell={bell} p={p} |A|={r}: {eig} vs {closed}"));
                }
            }
        }
    }
    Ok(())
}

fn purity_routes() -> Outcome {
    for theta in [0.0, 0.7, PI / 2.0, 2.5, PI] {
        for r in [0.0, 0.4, 1.0] {
            let s = BlochState::new(theta, 0.9).map_err(err)?;
            let a = DephasingValue::prescribed(Complex64::from_polar(r, 1.1));
            let rho = density_matrix(&s, &a).map_err(err)?;
            let closed = purity(&s, &a).map_err(err)?;
            if (rho.purity() - closed).abs() > 1e-12 {
                return Err(format!("theta={theta} |A|={r}: {} vs {closed}", rho.purity()));
            }
        }
    }
    Ok(())
}

pub fn run_selftest() -> Vec<Check> {
    let checks: [NamedCheck; 6] = [
        ("gamma-function integrals", gamma_integrals),
        ("ohmic decay law", ohmic_decay),
        ("super-ohmic decay and limit", super_ohmic_decay),
        ("cat interference", cat_interference),
        ("negativity: eigen vs closed form", negativity_routes),
        ("purity: trace vs closed form", purity_routes),
    ];
    checks
        .iter()
        .map(|&(name, f)| Check {
            name,
            outcome: f(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for c in super::run_selftest() {
            assert!(c.passed(), "{}: {:?}", c.name, c.outcome);
        }
    }
}
