//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::sync::Arc;

use num_complex::Complex64;
use qubit_dephasing::bath::{
    CatProfile, CouplingSpectrum, Exponential, GaussianBump, PowerExponential, Profile,
};
use qubit_dephasing::dephasing::{
    a0, a_pm, dephasing_cat, dephasing_coherent, lambda_alpha, long_time_a0,
    long_time_cat_modulus, norm_constant, DephasingValue, LongTimeLimit, QubitSpec, Sign,
};
use qubit_dephasing::entanglement::{
    evolve_bell, negativity_closed, negativity_eigen, sudden_death_threshold, TwoQubitScenario,
};
use qubit_dephasing::quadrature::{integrate, Integrand, Kernel, QuadratureTolerance, Tail};
use qubit_dephasing::qubit::{coherence, density_matrix, purity, BlochState};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::function::gamma::gamma;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> QuadratureTolerance {
    QuadratureTolerance::default()
}

fn e(x: impl std::fmt::Display) -> String {
    x.to_string()
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Profiles with `∫α²` of order one at most, inside the exponent guard.
fn random_profile(rng: &mut StdRng) -> Arc<dyn Profile> {
    let a = rng.gen_range(0.1..1.0);
    let w = rng.gen_range(0.2..2.0);
    match rng.gen_range(0..3) {
        0 => Arc::new(Exponential::new(a, w).unwrap()),
        1 => Arc::new(PowerExponential::new(a, rng.gen_range(-0.4..1.5), w).unwrap()),
        _ => Arc::new(GaussianBump::new(a, rng.gen_range(-1.0..4.0), w).unwrap()),
    }
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let spectrum = CouplingSpectrum::drude(
            rng.gen_range(0.0..1.0),
            rng.gen_range(-0.95..4.0),
            rng.gen_range(0.1..5.0),
        )
        .map_err(e)?;
        // Amplitudes are bounded below, so odd cats never hit the degenerate norm.
        let cat = CatProfile::new(random_profile(&mut rng), rng.gen_range(0.0..2.0 * PI)).map_err(e)?;
        let qubit = QubitSpec::new(rng.gen_range(-10.0..10.0)).map_err(e)?;
        let a = dephasing_cat(&cat, &spectrum, &qubit, 0.0, &tol()).map_err(e)?;
        worst = worst.max((a.a - 1.0).norm());
    }
    if worst < 1e-10 {
        Ok(format!("max |A(0) - 1| = {worst:.2e} over 100 configurations"))
    } else {
        Err(format!("max |A(0) - 1| = {worst:.2e}"))
    }
}

fn criterion_2() -> Outcome {
    let times = log_grid(1e-2, 1e3, 50);
    let qubit = QubitSpec::new(0.0).map_err(e)?;
    let alpha = Exponential::new(0.8, 1.0).map_err(e)?;
    let mut worst = 0.0f64;
    for lambda in [0.05, 0.1, 0.5] {
        for omega_c in [0.5, 1.0, 2.0] {
            let s = CouplingSpectrum::drude(lambda, 0.0, omega_c).map_err(e)?;
            for &t in &times {
                let want = (1.0 + omega_c * omega_c * t * t).powf(-2.0 * lambda);
                let vac = dephasing_cat(&CatProfile::vacuum(), &s, &qubit, t, &tol()).map_err(e)?;
                let coh = dephasing_coherent(&alpha, &s, &qubit, t, &tol()).map_err(e)?;
                worst = worst.max(rel(vac.modulus(), want)).max(rel(coh.modulus(), want));
            }
        }
    }
    if worst < 1e-6 {
        Ok(format!("max relative error {worst:.2e} over 9 spectra x 50 times, vacuum and coherent"))
    } else {
        Err(format!("max relative error {worst:.2e}"))
    }
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_late = 0.0f64;
    for lambda in [0.05, 0.1, 0.5] {
        for omega_c in [0.5, 1.0, 2.0] {
            let s = CouplingSpectrum::drude(lambda, 1.0, omega_c).map_err(e)?;
            for t in log_grid(1e-2, 1e3, 30) {
                let x = omega_c * t;
                let want = (-4.0 * lambda * omega_c.powi(3) * t * t / (1.0 + x * x)).exp();
                worst = worst.max(rel(a0(&s, t, &tol()).map_err(e)?, want));
            }
            let analytic = (-4.0 * lambda * gamma(1.0) * omega_c.powf(1.0)).exp();
            match long_time_a0(&s).map_err(e)? {
                LongTimeLimit::Value(v) if v.to_bits() == analytic.to_bits() => {}
                other => return Err(format!("long_time_a0 = {other:?}, expected {analytic:e}")),
            }
            let late = a0(&s, 1e3 / omega_c, &tol()).map_err(e)?;
            worst_late = worst_late.max(rel(late, analytic));
        }
    }
    if worst < 1e-6 && worst_late < 1e-4 {
        Ok(format!(
            "A0 relative error {worst:.2e}; limit exact; a0(1e3/omega_c) off by {worst_late:.2e}"
        ))
    } else {
        Err(format!("A0 relative error {worst:.2e}, late-time error {worst_late:.2e}"))
    }
}

/// Each sub-value of the cat example, from a quadrature written out here.
fn cat_sub_values() -> Result<[f64; 4], String> {
    let t = 1.0;
    let g = |w: f64| 0.5 * (-0.5 * w).exp();
    let alpha = |w: f64| 0.5 * (-0.5 * w).exp();
    let g2 = move |w: f64| g(w) * g(w);
    let ag = move |w: f64| alpha(w) * g(w);
    let a2 = move |w: f64| alpha(w) * alpha(w);
    let tail = Tail::exponential(1.0);
    let q = |f: &dyn Fn(f64) -> f64, k: Kernel| {
        integrate(&Integrand::new(f, 0.0, tail).with_kernel(k, t), &tol()).map(|r| r.value)
    };
    let i_g2 = q(&g2, Kernel::OneMinusCos).map_err(e)?;
    let i_sin = q(&ag, Kernel::Sin).map_err(e)?;
    let i_omc = q(&ag, Kernel::OneMinusCos).map_err(e)?;
    let i_a2 = q(&a2, Kernel::One).map_err(e)?;
    let a0 = (-4.0 * i_g2).exp();
    let a_plus = (-2.0 * i_a2 - 4.0 * i_omc).exp();
    let a_minus = (-2.0 * i_a2 + 4.0 * i_omc).exp();
    Ok([a0, i_sin, a_plus, a_minus])
}

fn criterion_4() -> Outcome {
    let s = CouplingSpectrum::drude(0.25, 1.0, 1.0).map_err(e)?;
    let alpha: Arc<dyn Profile> = Arc::new(Exponential::new(0.5, 1.0).map_err(e)?);
    let qubit = QubitSpec::new(0.0).map_err(e)?;
    let closed = [(-0.5f64).exp(), 0.125, (-1.0f64).exp(), 1.0];
    let independent = cat_sub_values()?;
    let even = CatProfile::new(alpha.clone(), 0.0).map_err(e)?;
    let library = [
        a0(&s, 1.0, &tol()).map_err(e)?,
        lambda_alpha(alpha.as_ref(), &s, 1.0, &tol()).map_err(e)?,
        a_pm(&even, &s, 1.0, Sign::Plus, &tol()).map_err(e)?,
        a_pm(&even, &s, 1.0, Sign::Minus, &tol()).map_err(e)?,
    ];
    let names = ["A0", "Lambda_alpha", "A+", "A-"];
    for i in 0..4 {
        if (independent[i] - closed[i]).abs() > 1e-9 || (library[i] - closed[i]).abs() > 1e-9 {
            return Err(format!(
                "{}: closed {} quadrature {} library {}",
                names[i], closed[i], independent[i], library[i]
            ));
        }
    }
    let mut report = Vec::new();
    for (phi, target) in [(0.0f64, 0.589542), (PI, 0.298499)] {
        let cat = CatProfile::new(alpha.clone(), phi).map_err(e)?;
        let n = norm_constant(&cat, &tol()).map_err(e)?;
        let n_closed = 2.0 + 2.0 * phi.cos() * (-0.5f64).exp();
        if (n - n_closed).abs() > 1e-12 {
            return Err(format!("N(phi={phi}) = {n}, expected {n_closed}"));
        }
        let [a0v, lam, ap, am] = independent;
        let i = Complex64::i();
        let chain = (a0v / n_closed
            * (ap * (-i * phi).exp() + am * (i * phi).exp() + 2.0 * (4.0 * lam).cos()))
        .norm();
        let got = dephasing_cat(&cat, &s, &qubit, 1.0, &tol()).map_err(e)?.modulus();
        if (got - target).abs() > 1e-5 || (chain - target).abs() > 1e-5 {
            return Err(format!("phi={phi}: |A| = {got}, chain {chain}, expected {target}"));
        }
        report.push(format!("|A(phi={phi:.4})| = {got:.7}"));
    }
    Ok(report.join(", "))
}

fn criterion_5() -> Outcome {
    let profiles: Vec<Arc<dyn Profile>> = vec![
        Arc::new(Exponential::new(0.1, 0.5).map_err(e)?),
        Arc::new(Exponential::new(1.0, 1.0).map_err(e)?),
        Arc::new(Exponential::new(2.0, 3.0).map_err(e)?),
        Arc::new(PowerExponential::new(0.5, -0.3, 1.0).map_err(e)?),
        Arc::new(PowerExponential::new(1.0, 0.5, 0.7).map_err(e)?),
        Arc::new(PowerExponential::new(0.3, 2.0, 1.5).map_err(e)?),
        Arc::new(GaussianBump::new(0.4, 1.0, 0.3).map_err(e)?),
        Arc::new(GaussianBump::new(1.2, 3.0, 1.0).map_err(e)?),
        Arc::new(GaussianBump::new(0.8, -0.5, 0.8).map_err(e)?),
        Arc::new(Exponential::new(0.0, 1.0).map_err(e)?),
    ];
    let qubit = QubitSpec::new(0.6).map_err(e)?;
    let mut spread = 0.0f64;
    for (lambda, mu, omega_c) in [(0.1, 0.0, 1.0), (0.25, 1.0, 2.0), (0.05, -0.5, 0.5)] {
        let s = CouplingSpectrum::drude(lambda, mu, omega_c).map_err(e)?;
        for t in [0.0, 0.3, 1.0, 4.0, 20.0] {
            let m: Vec<f64> = profiles
                .iter()
                .map(|p| dephasing_coherent(p.as_ref(), &s, &qubit, t, &tol()).map(|a| a.modulus()))
                .collect::<Result<_, _>>()
                .map_err(e)?;
            let hi = m.iter().cloned().fold(f64::MIN, f64::max);
            let lo = m.iter().cloned().fold(f64::MAX, f64::min);
            spread = spread.max(hi - lo);
        }
    }
    if spread < 1e-9 {
        Ok(format!("max pairwise |A| difference {spread:.2e} over 10 profiles"))
    } else {
        Err(format!("max pairwise |A| difference {spread:.2e}"))
    }
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let bell = rng.gen_range(1..=4);
        let p = rng.gen_range(0.0..=1.0);
        let a = DephasingValue::prescribed(Complex64::from_polar(
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..2.0 * PI),
        ));
        let t = rng.gen_range(0.0..100.0);
        let s = TwoQubitScenario::new(bell, p, rng.gen_range(-3.0..3.0)).map_err(e)?;
        let eig = negativity_eigen(&evolve_bell(&s, &a, t).map_err(e)?).map_err(e)?;
        worst = worst.max((eig - negativity_closed(p, &a).map_err(e)?).abs());
    }
    for p in [0.0, 0.1, 0.2, 0.5, 0.6] {
        let thr = sudden_death_threshold(p).map_err(e)?;
        let at = DephasingValue::prescribed(Complex64::new(thr, 0.0));
        let above = DephasingValue::prescribed(Complex64::new(f64::from_bits(thr.to_bits() + 1), 0.0));
        if negativity_closed(p, &at).map_err(e)? != 0.0 || negativity_closed(p, &above).map_err(e)? <= 0.0 {
            return Err(format!("sudden-death boundary not exact at p = {p}"));
        }
    }
    if worst < 1e-10 {
        Ok(format!("max |eigen - closed| = {worst:.2e} over 500 cases; boundary exact"))
    } else {
        Err(format!("max |eigen - closed| = {worst:.2e}"))
    }
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let s = BlochState::new(rng.gen_range(0.0..=PI), rng.gen_range(0.0..2.0 * PI)).map_err(e)?;
        let a = DephasingValue::prescribed(Complex64::from_polar(
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..2.0 * PI),
        ));
        let rho = density_matrix(&s, &a).map_err(e)?;
        worst = worst.max((rho.purity() - purity(&s, &a).map_err(e)?).abs());
    }
    for theta in [0.0, 0.5, PI / 2.0, 2.0, PI] {
        let s = BlochState::new(theta, 1.0).map_err(e)?;
        let one = DephasingValue::prescribed(Complex64::from_polar(1.0, 0.3));
        if purity(&s, &one).map_err(e)? != 1.0 {
            return Err(format!("P != 1 at |A| = 1, theta = {theta}"));
        }
    }
    let s = BlochState::new(PI / 2.0, 0.0).map_err(e)?;
    if purity(&s, &DephasingValue::prescribed(Complex64::new(0.0, 0.0))).map_err(e)? != 0.5 {
        return Err("P != 1/2 at theta = pi/2, A = 0".into());
    }
    if worst < 1e-12 {
        Ok(format!("max |Tr rho^2 - P| = {worst:.2e}; limits exact"))
    } else {
        Err(format!("max |Tr rho^2 - P| = {worst:.2e}"))
    }
}

fn criterion_8() -> Outcome {
    let qubit = QubitSpec::new(0.0).map_err(e)?;
    let mut worst_c = 0.0f64;
    for omega_c in [0.5, 1.0, 2.0] {
        let s = CouplingSpectrum::drude(0.5, 0.0, omega_c).map_err(e)?;
        let a = dephasing_cat(&CatProfile::vacuum(), &s, &qubit, 1e3 / omega_c, &tol()).map_err(e)?;
        let c = coherence(&a);
        let n = negativity_closed(0.1, &a).map_err(e)?;
        if c >= 1e-3 || n != 0.0 {
            return Err(format!("ohmic omega_c={omega_c}: coherence {c:e}, negativity {n}"));
        }
        worst_c = worst_c.max(c);
    }
    let s = CouplingSpectrum::drude(0.25, 1.0, 1.0).map_err(e)?;
    let alpha: Arc<dyn Profile> = Arc::new(Exponential::new(0.5, 1.0).map_err(e)?);
    let mut late = Vec::new();
    for phi in [0.0, PI / 2.0, PI] {
        let cat = CatProfile::new(alpha.clone(), phi).map_err(e)?;
        let at = dephasing_cat(&cat, &s, &qubit, 1e3, &tol()).map_err(e)?.modulus();
        let limit = long_time_cat_modulus(&cat, &s, &tol()).map_err(e)?.value();
        if at <= 1e-2 || (at - limit).abs() > 1e-4 * limit {
            return Err(format!("super-ohmic phi={phi}: |A(1e3)| = {at}, limit {limit}"));
        }
        late.push(at);
    }
    if (late[0] - late[2]).abs() <= 1e-2 {
        return Err(format!("late coherence does not depend on phi: {late:?}"));
    }
    Ok(format!(
        "ohmic coherence <= {worst_c:.2e}, negativity 0; super-ohmic cat |A(1e3)| = {:.4} / {:.4} / {:.4} for phi = 0, pi/2, pi",
        late[0], late[1], late[2]
    ))
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    for a in [0.8, 2.0] {
        for s in [0.0, 0.5, 1.0, 2.0] {
            let f = move |w: f64| w.powf(s) * (-a * w).exp();
            for kernel in [Kernel::One, Kernel::Cos, Kernel::Sin, Kernel::OneMinusCos] {
                for t in [0.1, 1.0, 10.0] {
                    let ig = Integrand::new(&f, s, Tail::exponential(a).with_power(s)).with_kernel(kernel, t);
                    let got = integrate(&ig, &tol()).map_err(e)?.value;
                    let g = gamma(s + 1.0);
                    let z = Complex64::new(a, t).powf(-s - 1.0) * g;
                    let one = g * a.powf(-s - 1.0);
                    let want = match kernel {
                        Kernel::One => one,
                        Kernel::Cos => z.re,
                        Kernel::Sin => -z.im,
                        Kernel::OneMinusCos => one - z.re,
                    };
                    worst = worst.max(rel(got, want));
                }
            }
        }
    }
    if worst < 1e-8 {
        Ok(format!("max relative error {worst:.2e} over 96 integrals"))
    } else {
        Err(format!("max relative error {worst:.2e}"))
    }
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dephase");
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/ohmic.json");
    let out = Command::new(bin).args(["run", "--config", config]).output().map_err(e)?;
    if !out.status.success() {
        return Err(format!("run failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let text = String::from_utf8(out.stdout).map_err(e)?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty output")?.split(',').collect();
    let t_col = header.iter().position(|&c| c == "t").ok_or("no t column")?;
    let a_col = header.iter().position(|&c| c == "abs_a").ok_or("no abs_a column")?;
    let expected_t = log_grid(1e-2, 1e3, 50);
    let mut worst = 0.0f64;
    let mut rows = 0;
    for (line, &t_ref) in lines.zip(&expected_t) {
        let cells: Vec<f64> = line.split(',').map(|x| x.parse().map_err(e)).collect::<Result<_, _>>()?;
        let t = cells[t_col];
        if rel(t, t_ref) > 1e-11 {
            return Err(format!("row {rows}: t = {t}, expected {t_ref}"));
        }
        worst = worst.max(rel(cells[a_col], (1.0 + t * t).powf(-0.2)));
        rows += 1;
    }
    if rows != 50 || text.lines().count() != 51 {
        return Err(format!("expected 50 rows, got {}", text.lines().count() - 1));
    }
    let selftest = Command::new(bin).arg("selftest").output().map_err(e)?;
    if selftest.status.code() != Some(0) {
        return Err(format!("selftest exited with {:?}", selftest.status.code()));
    }
    if worst < 1e-6 {
        Ok(format!("50 rows, max relative |A| error {worst:.2e}; selftest exit 0"))
    } else {
        Err(format!("max relative |A| error {worst:.2e}"))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("normalization at t = 0", criterion_1),
        ("ohmic decay law", criterion_2),
        ("super-ohmic decay and long-time limit", criterion_3),
        ("cat state interference", criterion_4),
        ("coherent-state invariance", criterion_5),
        ("negativity oracle equivalence", criterion_6),
        ("purity consistency", criterion_7),
        ("asymptotic regime", criterion_8),
        ("quadrature battery", criterion_9),
        ("end-to-end run and selftest", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
