//! Acceptance suite. Runs without the libtest harness so that every criterion reports exactly
//! one PASS/FAIL line; the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use resonance::cli::output::{parse_csv_rows, parse_json_rows};
use resonance::complex::ComplexValue;
use resonance::expansion::{
    double_sigma0, double_sigma1, generic_pole_approx, pair_poles, winter_fixed_order_pole, winter_pole_approx,
    winter_sigma0, winter_sigma1, winter_sigma2, winter_sigma_series, Branch,
};
use resonance::models::{effective_coupling, ModelSpec};
use resonance::observables::{
    gamma_leading, gamma_leading_double, momentum_from_w, winter_wavefunction, ResonanceRecord,
};
use resonance::oracle::{exact_pole, newton_solve, ExactPole, NewtonOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const RESIDUAL_MAX: f64 = 1e-12;
const PAIRED: (f64, f64, f64) = (0.1, -0.05, 0.15);

fn c(re: f64, im: f64) -> ComplexValue {
    Complex64::new(re, im)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn branches(model: &ModelSpec) -> &'static [Branch] {
    match model {
        ModelSpec::TripleDelta { .. } => &[Branch::Plus, Branch::Minus],
        _ => &[Branch::None],
    }
}

fn seed_order(model: &ModelSpec) -> usize {
    match model {
        ModelSpec::Winter { .. } => 2,
        _ => 1,
    }
}

fn exact(model: &ModelSpec, n: i64, branch: Branch) -> Result<ExactPole, String> {
    exact_pole(model, n, branch, seed_order(model), &NewtonOptions::default())
        .map_err(|e| format!("{model} n={n} {branch}: {e}"))
}

fn winter_accuracy() -> Outcome {
    let start = Instant::now();
    let model = ModelSpec::winter(-0.1);
    let p1 = exact(&model, 1, Branch::None)?;
    let p5 = exact(&model, 5, Branch::None)?;
    let elapsed = start.elapsed();
    let (e1, e5) = (p1.relative_error(), p5.relative_error());
    let res = p1.root.residual_norm.max(p5.root.residual_norm);
    check(
        (3e-5..=1.2e-4).contains(&e1)
            && (1e-6..=4e-6).contains(&e5)
            && res < RESIDUAL_MAX
            && elapsed < Duration::from_secs(1),
        format!("rel_error n=1 {e1:.3e}, n=5 {e5:.3e}; max residual {res:.2e}; {elapsed:.2?}"),
    )
}

fn coupling_sets() -> Vec<ModelSpec> {
    let mut models: Vec<ModelSpec> = [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2].into_iter().map(ModelSpec::winter).collect();
    models.extend([
        ModelSpec::double_delta(0.1, -0.05),
        ModelSpec::double_delta(-0.1, 0.15),
        ModelSpec::double_delta(0.05, 0.05),
        ModelSpec::triple_delta(PAIRED.0, PAIRED.1, PAIRED.2),
        ModelSpec::triple_delta(0.1, 0.0, 0.15),
        ModelSpec::triple_delta(-0.1, 0.05, 0.2),
    ]);
    models
}

fn oracle_soundness() -> Outcome {
    let opts = NewtonOptions::default();
    let mut count = 0;
    let mut worst = (0.0_f64, String::new());
    let mut max_drift = 0.0_f64;
    for model in coupling_sets() {
        for n in 1..=10 {
            for &b in branches(&model) {
                let p = exact(&model, n, b)?;
                let res = model.residual(p.root.w).norm();
                if res > worst.0 {
                    worst = (res, format!("{model} n={n} {b}"));
                }
                let again = newton_solve(&model, p.root.w, &opts).map_err(err)?;
                max_drift = max_drift.max((again.w - p.root.w).norm());
                if res >= RESIDUAL_MAX {
                    // The derivative-scaled residual shows how far such a root sits from an
                    // exact zero, in units of w.
                    let step = (model.residual(p.root.w) / model.residual_derivative(p.root.w)).norm();
                    eprintln!("    residual {res:.4e} >= {RESIDUAL_MAX:e} at {model} n={n} {b}; |f/f'| = {step:.2e}");
                }
                count += 1;
            }
        }
    }
    check(
        worst.0 < RESIDUAL_MAX && max_drift <= 1e-14,
        format!("{count} poles; max residual {:.4e} ({}); max re-solve drift {max_drift:.1e}", worst.0, worst.1),
    )
}

fn series_engine() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0_f64;
    let mut tested = 0;
    while tested < 100 {
        let zeta = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if zeta.norm() > 5.0 || (zeta + 1.0).norm() <= 0.1 {
            continue;
        }
        let s = winter_sigma_series(1, zeta, 2).map_err(err)?;
        let closed = [winter_sigma0(zeta), winter_sigma1(zeta), winter_sigma2(zeta)];
        for (k, cf) in closed.into_iter().enumerate() {
            worst = worst.max((s.coeff(k) - cf.map_err(err)?).norm());
        }
        tested += 1;
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("{tested} samples; max |series - closed form| {worst:.2e}; {elapsed:.2?}"),
    )
}

fn double_reductions() -> Outcome {
    let zero = c(0.0, 0.0);
    let mut a = 0.0_f64;
    let mut b = 0.0_f64;
    let mut gamma = 0.0_f64;
    for n in 1..=10 {
        for z in [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2] {
            let zeta = effective_coupling(n, c(z, 0.0)).map_err(err)?;
            a = a.max((double_sigma0(zeta, zero).map_err(err)? - winter_sigma0(zeta).map_err(err)?).norm());
            a = a.max((double_sigma1(zeta, zero).map_err(err)? - winter_sigma1(zeta).map_err(err)?).norm());
            for zp in [-0.15, 0.07, 0.12] {
                let zeta_p = effective_coupling(n, c(zp, 0.0)).map_err(err)?;
                let sum = winter_sigma0(zeta).map_err(err)? + winter_sigma0(zeta_p).map_err(err)?;
                b = b.max((double_sigma0(zeta, zeta_p).map_err(err)? - sum).norm());
                let g = gamma_leading_double(n, c(z, 0.0), c(zp, 0.0)).map_err(err)?;
                let parts = gamma_leading(n, c(z, 0.0)).map_err(err)? + gamma_leading(n, c(zp, 0.0)).map_err(err)?;
                gamma = gamma.max((g - parts).abs());
            }
        }
    }
    check(
        a <= 1e-14 && b <= 1e-14 && gamma <= 1e-12,
        format!("(a) {a:.1e}, (b) {b:.1e}, (c) {gamma:.1e}"),
    )
}

fn triple_factorization() -> Outcome {
    let (zm, zp) = (0.1, 0.15);
    let triple = ModelSpec::triple_delta(zm, 0.0, zp);
    let mut t = Vec::new();
    let mut w = Vec::new();
    for n in 1..=10 {
        for b in [Branch::Plus, Branch::Minus] {
            t.push(exact(&triple, n, b)?.root.w);
        }
        for z in [zm, zp] {
            w.push(exact(&ModelSpec::winter(z), n, Branch::None)?.root.w);
        }
    }
    let pairs = pair_poles(&t, &w).ok_or("pole sets differ in size")?;
    let worst = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    check(worst <= 1e-10, format!("{} poles matched; max distance {worst:.2e}", pairs.len()))
}

fn pole_plot_geometry() -> Outcome {
    let model = ModelSpec::triple_delta(PAIRED.0, PAIRED.1, PAIRED.2);
    let mut ks: Vec<[ComplexValue; 2]> = Vec::new();
    let mut errs: Vec<[f64; 2]> = Vec::new();
    let mut worst_res = (0.0_f64, String::new());
    for n in 1..=10 {
        let mut k = [c(0.0, 0.0); 2];
        let mut e = [0.0; 2];
        for (i, b) in [Branch::Plus, Branch::Minus].into_iter().enumerate() {
            let approx = generic_pole_approx(&model, n, b, 1).map_err(err)?;
            k[i] = momentum_from_w(approx.w_approx);
            let p = exact(&model, n, b)?;
            e[i] = p.relative_error();
            if p.root.residual_norm > worst_res.0 {
                worst_res = (p.root.residual_norm, format!("n={n} {b}"));
            }
        }
        ks.push(k);
        errs.push(e);
    }
    let quadrant = ks.iter().flatten().all(|k| k.re > 0.0 && k.im < 0.0);
    let mut min_ratio = f64::INFINITY;
    for (i, pair) in ks.iter().enumerate() {
        let intra = (pair[0] - pair[1]).norm();
        let inter = ks
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, other)| pair.iter().flat_map(move |a| other.iter().map(move |b| (a - b).norm())))
            .fold(f64::INFINITY, f64::min);
        min_ratio = min_ratio.min(inter / intra);
    }
    let improves = (0..2).all(|b| errs[9][b] < errs[0][b]);
    check(
        ks.len() * 2 == 20 && quadrant && min_ratio > 1.0 && improves && worst_res.0 < RESIDUAL_MAX,
        format!(
            "20 poles, fourth quadrant {quadrant}; min inter/intra {min_ratio:.2}; K=1 error n=1 {:.2e}/{:.2e} -> n=10 {:.2e}/{:.2e}; max residual {:.4e} ({})",
            errs[0][0], errs[0][1], errs[9][0], errs[9][1], worst_res.0, worst_res.1
        ),
    )
}

fn gamma_limits() -> Outcome {
    let mut zero_exact = true;
    let mut positive = true;
    for n in 1..=50 {
        zero_exact &= gamma_leading(n, c(0.0, 0.0)).map_err(err)? == 0.0;
        for z in [-0.2, -0.1, -0.05, -1e-4, 1e-4, 0.05, 0.1, 0.2, 0.9] {
            positive &= gamma_leading(n, c(z, 0.0)).map_err(err)? > 0.0;
        }
    }
    let z = 1e-4;
    let ratio = gamma_leading(1, c(z, 0.0)).map_err(err)? / (4.0 * PI * z * z);
    let dev = (ratio - 1.0).abs();
    check(
        zero_exact && positive && dev < 1e-5,
        format!("Γ(n,0)=0 {zero_exact}; Γ>0 {positive}; small-z ratio - 1 = {dev:.2e}"),
    )
}

fn wavefunction() -> Outcome {
    let z = c(-0.1, 0.0);
    let model = ModelSpec::Winter { z };
    let mut worst_jump = 0.0_f64;
    let mut origin_zero = true;
    let mut grows = true;
    for n in 1..=10 {
        let rec = ResonanceRecord::exact_only(&model, &exact(&model, n, Branch::None)?);
        for t in [0.0, 0.5] {
            let inside = winter_wavefunction(PI, t, &rec, z).map_err(err)?;
            let outside = winter_wavefunction(PI * (1.0 + f64::EPSILON), t, &rec, z).map_err(err)?;
            worst_jump = worst_jump.max((inside - outside).norm());
            origin_zero &= winter_wavefunction(0.0, t, &rec, z).map_err(err)? == c(0.0, 0.0);
        }
        let near = winter_wavefunction(2.0 * PI, 0.0, &rec, z).map_err(err)?.norm();
        let far = winter_wavefunction(10.0 * PI, 0.0, &rec, z).map_err(err)?.norm();
        grows &= far > near;
    }
    check(
        worst_jump < 1e-10 && origin_zero && grows,
        format!("max |ψ(π-) - ψ(π+)| {worst_jump:.2e}; ψ(0)=0 {origin_zero}; |ψ(10π)|>|ψ(2π)| {grows}"),
    )
}

fn essential_barrier() -> Outcome {
    let z = -0.1;
    let model = ModelSpec::winter(z);
    let n_max = (2.0 / z.abs()).round() as i64;
    let mut fixed_fails_at = None;
    let mut worst_k2 = 0.0_f64;
    for n in 1..=n_max {
        let root = exact(&model, n, Branch::None)?.root.w;
        let rel = |w: ComplexValue| (w - root).norm() / root.norm();
        let e_fixed = rel(winter_fixed_order_pole(n, c(z, 0.0), 2).map_err(err)?);
        let e_k2 = rel(winter_pole_approx(n, c(z, 0.0), 2).map_err(err)?.w_approx);
        if e_fixed > 0.1 && fixed_fails_at.is_none() {
            fixed_fails_at = Some((n, e_fixed));
        }
        worst_k2 = worst_k2.max(e_k2);
    }
    let detail = match fixed_fails_at {
        Some((n, e)) => format!("fixed order exceeds 10% from n={n} ({e:.3}); K=2 max error {worst_k2:.2e}"),
        None => format!("fixed order stays below 10%; K=2 max error {worst_k2:.2e}"),
    };
    check(fixed_fails_at.is_some() && worst_k2 < 0.01, detail)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let config = dir.path().join("triple.conf");
    fs::write(
        &config,
        "model = triple\nz_minus = 0.1\nz0 = -0.05\nz_plus = 0.15\nn = 1..10\nbranches = plus,minus\nout = csv,json,svg\n",
    )
    .map_err(err)?;
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_resonance"))
            .args(["solve", "--config"])
            .arg(&config)
            .arg("--path")
            .arg(&out)
            .output()
            .map_err(err)?;
        if !status.status.success() {
            return Err(format!("run {run} exited with {}", status.status));
        }
        let read = |name: &str| fs::read(out.join(name)).map_err(err);
        outputs.push([read("resonances.csv")?, read("resonances.json")?, read("poles.svg")?]);
    }
    let identical = outputs[0] == outputs[1];
    let csv = parse_csv_rows(std::str::from_utf8(&outputs[0][0]).map_err(err)?).map_err(err)?;
    let json = parse_json_rows(std::str::from_utf8(&outputs[0][1]).map_err(err)?).map_err(err)?;
    check(
        identical && csv == json && csv.len() == 20,
        format!("byte-identical {identical}; CSV == JSON {} ({} rows)", csv == json, csv.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("winter accuracy", winter_accuracy),
        ("oracle soundness", oracle_soundness),
        ("series engine equivalence", series_engine),
        ("double reductions", double_reductions),
        ("triple factorization", triple_factorization),
        ("pole plot geometry", pole_plot_geometry),
        ("leading rate limits", gamma_limits),
        ("wavefunction matching", wavefunction),
        ("essential barrier", essential_barrier),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
