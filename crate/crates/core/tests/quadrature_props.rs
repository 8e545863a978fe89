use num_complex::Complex64;
use proptest::prelude::*;
use qubit_dephasing::quadrature::{integrate, integrate_to, Integrand, Kernel, QuadratureTolerance, Tail};
use statrs::function::gamma::gamma;

const KERNELS: [Kernel; 4] = [Kernel::One, Kernel::Cos, Kernel::Sin, Kernel::OneMinusCos];

/// ∫₀^∞ ω^s e^{−aω} k(ωt) dω from Γ(s+1)(a + it)^{−s−1}.
fn gamma_oracle(s: f64, a: f64, kernel: Kernel, t: f64) -> f64 {
    let g = gamma(s + 1.0);
    let one = g * a.powf(-s - 1.0);
    let z = Complex64::new(a, t).powf(-s - 1.0) * g;
    match kernel {
        Kernel::One => one,
        Kernel::Cos => z.re,
        // (a + it)^{−s−1} = ∫ω^s e^{−aω}(cos ωt − i sin ωt)/Γ(s+1)
        Kernel::Sin => -z.im,
        Kernel::OneMinusCos => one - z.re,
    }
}

fn power_exp(s: f64, a: f64) -> impl Fn(f64) -> f64 {
    move |w: f64| w.powf(s) * (-a * w).exp()
}

#[test]
fn gamma_battery() {
    let tol = QuadratureTolerance::default();
    for s in [0.0, 0.5, 1.0, 2.0] {
        for a in [1.0, 0.5] {
            let f = power_exp(s, a);
            for kernel in KERNELS {
                for t in [0.1, 1.0, 10.0] {
                    let ig = Integrand::new(&f, s, Tail::exponential(a).with_power(s))
                        .with_kernel(kernel, t);
                    let got = integrate(&ig, &tol).unwrap().value;
                    let want = gamma_oracle(s, a, kernel, t);
                    // Re[(a + it)^{-2}] vanishes at a = t; measure against the integrand mass there.
                    let scale = if want == 0.0 || want.abs() < 1e-12 {
                        gamma_oracle(s, a, Kernel::One, t)
                    } else {
                        want.abs()
                    };
                    assert!(
                        (got - want).abs() <= 1e-8 * scale,
                        "s={s} a={a} {kernel:?} t={t}: {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn singular_endpoint_battery() {
    let tol = QuadratureTolerance::default();
    for s in [-0.5, -0.9] {
        let f = power_exp(s, 1.0);
        for kernel in [Kernel::One, Kernel::Cos] {
            let ig = Integrand::new(&f, s, Tail::exponential(1.0).with_power(s)).with_kernel(kernel, 1.0);
            let got = integrate(&ig, &tol).unwrap().value;
            let want = gamma_oracle(s, 1.0, kernel, 1.0);
            assert!((got - want).abs() <= 1e-8 * want.abs(), "s={s} {kernel:?}: {got} vs {want}");
        }
    }
}

#[test]
fn ohmic_log_integral() {
    // ∫ω⁻¹e^{−ω}(1 − cos ωt) dω = ½ ln(1 + t²)
    let f = |w: f64| (-w).exp() / w;
    let tol = QuadratureTolerance::default();
    for t in [1e-2, 0.3, 1.0, 7.0, 100.0, 1e3] {
        let ig = Integrand::new(&f, -1.0, Tail::exponential(1.0).with_power(-1.0))
            .with_kernel(Kernel::OneMinusCos, t);
        let got = integrate(&ig, &tol).unwrap().value;
        let want = 0.5 * (t * t).ln_1p();
        assert!((got - want).abs() <= 1e-8 * want, "t={t}: {got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearity(c in 0.1f64..10.0, s in 0.0f64..2.0, t in 0.0f64..20.0, k in 0usize..4) {
        // A purely relative target makes every refinement decision scale with c.
        let tol = QuadratureTolerance { abs_tol: 0.0, rel_tol: 1e-12, ..Default::default() };
        let f = power_exp(s, 1.0);
        let cf = |w: f64| c * f(w);
        let tail = Tail::exponential(1.0).with_power(s);
        let base = integrate(&Integrand::new(&f, s, tail).with_kernel(KERNELS[k], t), &tol).unwrap().value;
        let scaled = integrate(&Integrand::new(&cf, s, tail).with_kernel(KERNELS[k], t), &tol).unwrap().value;
        prop_assert!((scaled - c * base).abs() <= 1e-10 * (c * base).abs().max(1e-300) + 1e-15,
            "{scaled} vs {}", c * base);
    }

    #[test]
    fn kernel_identity(t in 0.0f64..100.0, s in 0.0f64..2.0) {
        let tol = QuadratureTolerance::default();
        let f = power_exp(s, 1.0);
        let tail = Tail::exponential(1.0).with_power(s);
        let one = integrate(&Integrand::new(&f, s, tail), &tol).unwrap().value;
        let cos = integrate(&Integrand::new(&f, s, tail).with_kernel(Kernel::Cos, t), &tol).unwrap().value;
        let omc = integrate(&Integrand::new(&f, s, tail).with_kernel(Kernel::OneMinusCos, t), &tol).unwrap().value;
        prop_assert!((one - cos - omc).abs() <= 1e-9, "{} vs {omc}", one - cos);
    }

    #[test]
    fn monotone_truncation(t in 0.0f64..30.0, s in -0.5f64..2.0, a in 0.3f64..3.0, k in 0usize..4) {
        let tol = QuadratureTolerance::default();
        let f = power_exp(s, a);
        let ig = Integrand::new(&f, s, Tail::exponential(a).with_power(s)).with_kernel(KERNELS[k], t);
        let first = integrate(&ig, &tol).unwrap();
        let doubled = integrate_to(&ig, &tol, 2.0 * first.truncation).unwrap();
        prop_assert!(first.error_estimate >= 0.0);
        prop_assert!((doubled.value - first.value).abs() < first.error_estimate,
            "shift {} vs estimate {}", (doubled.value - first.value).abs(), first.error_estimate);
    }
}
