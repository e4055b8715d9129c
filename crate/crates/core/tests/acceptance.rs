//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use gamma_inequality::estimators::{atkinson_hat, theil_l_hat, theil_t_hat};
use gamma_inequality::mle::{fit_shape, log_moment_gap};
use gamma_inequality::model::{self, sample_gamma};
use gamma_inequality::simulation::{run_cell, run_grid, Estimator, SamplingRate, SimConfig, SimSummary};
use gamma_inequality::special::{digamma, ln_gamma, trigamma};
use gamma_inequality::{GammaParams64 as Params, IndexKind, RngStream, Sample64 as Sample};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ALPHAS: [f64; 7] = [0.1, 0.5, 1.0, 1.5, 2.0, 10.0, 100.0];
const NS: [usize; 4] = [1, 2, 10, 200];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!("{what}: got {got:.17e}, want {want:.17e}, |diff| {:e} > {tol:e}", (got - want).abs())
    })
}

fn budget(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("runtime {elapsed:?} exceeds {limit:?}"))
}

fn p(a: f64) -> Params {
    Params::with_shape(a).unwrap()
}

/// 1. Closed-form identities over the (α, n) grid.
fn identities() -> Check {
    let start = Instant::now();
    let mut checks = 0;
    for a in ALPHAS {
        let pv = model::population_values(&p(a)).map_err(|e| e.to_string())?;
        // Direct formulas as written, independent of the stable evaluation.
        let psi = digamma(a).unwrap();
        within("T_T direct", pv.theil_t, psi + 1.0 / a - a.ln(), 1e-12)?;
        within("A direct", pv.atkinson, 1.0 - psi.exp() / a, 1e-12)?;
        within("T_L = 1/α − T_T", pv.theil_l, 1.0 / a - pv.theil_t, 1e-12)?;
        within("A = 1 − exp(−T_L)", pv.atkinson, 1.0 - (-pv.theil_l).exp(), 1e-12)?;
        checks += 4;
        for n in NS {
            let na = n as f64 * a;
            let bt = model::bias_theil_t(&p(a), n).unwrap();
            let bl = model::bias_theil_l(&p(a), n).unwrap();
            within(&format!("Bias_L identity α={a} n={n}"), bl, -bt - 1.0 / na, 1e-12)?;
            for kind in IndexKind::ALL {
                let e = model::expectation(&p(a), n, kind).unwrap();
                let b = model::bias(&p(a), n, kind).unwrap();
                within(&format!("E − pop = bias ({kind}, α={a}, n={n})"), e - pv.get(kind), b, 1e-12)?;
            }
            checks += 4;
        }
    }
    budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{checks} identities to 1e-12 in {:?}", start.elapsed()))
}

/// 2. Special-function constants and recurrences.
fn special_functions() -> Check {
    let start = Instant::now();
    within("lnΓ(1)", ln_gamma(1.0).unwrap(), 0.0, 1e-12)?;
    within("lnΓ(2)", ln_gamma(2.0).unwrap(), 0.0, 1e-12)?;
    within("lnΓ(1/2)", ln_gamma(0.5).unwrap(), 0.572_364_942_924_700_1, 1e-12)?;
    within("ψ(1)", digamma(1.0).unwrap(), -EULER_GAMMA, 1e-12)?;
    within("ψ(2)", digamma(2.0).unwrap(), 1.0 - EULER_GAMMA, 1e-12)?;
    within("ψ(1/2)", digamma(0.5).unwrap(), -EULER_GAMMA - 2.0 * std::f64::consts::LN_2, 1e-12)?;
    let pi2 = std::f64::consts::PI.powi(2);
    within("ψ'(1)", trigamma(1.0).unwrap(), pi2 / 6.0, 1e-12)?;
    within("ψ'(2)", trigamma(2.0).unwrap(), pi2 / 6.0 - 1.0, 1e-12)?;
    within("ψ'(1/2)", trigamma(0.5).unwrap(), pi2 / 2.0, 1e-12)?;

    let mut worst = 0.0f64;
    for i in 0..1000 {
        let x = 0.01 * 1e4f64.powf(i as f64 / 999.0);
        let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        let l = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap() - x.ln();
        worst = worst.max(d.abs()).max(l.abs());
        ensure(d.abs() <= 1e-12 && l.abs() <= 1e-12, || format!("recurrence at x={x}: ψ {d:e}, lnΓ {l:e}"))?;
        let t = (trigamma(x).unwrap() - trigamma(x + 1.0).unwrap()) * x * x - 1.0;
        ensure(t.abs() <= 1e-10, || format!("trigamma recurrence at x={x}: rel {t:e}"))?;
    }
    budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("constants ok, worst recurrence residual {worst:.1e} over 1000 points"))
}

/// 3. Signs of the biases.
fn signs() -> Check {
    for a in ALPHAS {
        for n in NS {
            let na = n as f64 * a;
            let bt = model::bias_theil_t(&p(a), n).unwrap();
            let bl = model::bias_theil_l(&p(a), n).unwrap();
            let ba = model::bias_atkinson(&p(a), n).unwrap();
            ensure(bt < 0.0, || format!("Bias(T_T) = {bt} at α={a} n={n}"))?;
            ensure(bl < 0.0, || format!("Bias(T_L) = {bl} at α={a} n={n}"))?;
            ensure(ba <= 0.0, || format!("Bias(A) = {ba} at α={a} n={n}"))?;
            ensure(bt > -1.0 / na, || format!("Bias(T_T) = {bt} ≤ −1/(nα) at α={a} n={n}"))?;
        }
    }
    Ok(format!("{} grid points", ALPHAS.len() * NS.len()))
}

/// 4. Monte Carlo check of the three expectation formulas at α = 1, n = 2.
fn monte_carlo_expectations() -> Check {
    let start = Instant::now();
    let reps = 1_000_000;
    let rows = run_cell(1.0, 2, reps, SamplingRate::default(), 20_251_019).map_err(|e| e.to_string())?;
    let targets = [
        (Estimator::TheilT, std::f64::consts::LN_2 - 0.5),
        (Estimator::TheilL, 1.0 - std::f64::consts::LN_2),
        (Estimator::Atkinson, 1.0 - std::f64::consts::FRAC_PI_4),
    ];
    let mut notes = Vec::new();
    for (est, want) in targets {
        let row = rows.iter().find(|r| r.estimator == est).unwrap();
        let z = (row.mean_estimate - want) / row.standard_error();
        ensure(z.abs() <= 4.0, || format!("{est}: mean {} vs {want}, z = {z:.2}", row.mean_estimate))?;
        notes.push(format!("{est} z={z:+.2}"));
    }
    budget(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{} ({:?})", notes.join(", "), start.elapsed()))
}

/// 5. Shape MLE residual, oracle agreement and consistency.
fn mle() -> Check {
    let start = Instant::now();
    let oracle = |gap: f64| {
        let (mut lo, mut hi) = (1e-8f64, 1e8f64);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if mid.ln() - digamma(mid).unwrap() > gap {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo * hi).sqrt()
    };
    let mut worst_rel = 0.0f64;
    let mut max_iter = 0;
    let mut rng = RngStream::from_seed_u64(555);
    for k in 0..1000u64 {
        let shape = 0.1 + (k % 40) as f64 * 0.25;
        let n = 2 + (k % 199) as usize;
        let x = sample_gamma(&Params::new(shape, 1.0).unwrap(), n, &mut rng).unwrap();
        let fit = fit_shape(&x).map_err(|e| format!("sample {k}: {e}"))?;
        let gap = log_moment_gap(&x);
        let residual = (fit.alpha_hat.ln() - digamma(fit.alpha_hat).unwrap() - gap).abs();
        ensure(fit.residual <= 1e-10 && residual <= 1e-10, || {
            format!("sample {k}: residual {} / {residual}", fit.residual)
        })?;
        let o = oracle(gap);
        let rel = ((fit.alpha_hat - o) / o).abs();
        ensure(rel <= 1e-8, || format!("sample {k}: α̂ {} vs oracle {o}", fit.alpha_hat))?;
        worst_rel = worst_rel.max(rel);
        max_iter = max_iter.max(fit.iterations);
    }
    let big = sample_gamma(&Params::new(2.0, 1.0).unwrap(), 100_000, &mut rng).unwrap();
    let a = fit_shape(&big).map_err(|e| e.to_string())?.alpha_hat;
    ensure((1.95..=2.05).contains(&a), || format!("α̂ = {a} for n = 1e5 Gamma(2,1)"))?;
    budget(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("worst oracle rel diff {worst_rel:.1e}, max iterations {max_iter}, α̂(n=1e5) = {a:.4}"))
}

fn default_grid() -> Result<(Vec<SimSummary>, Duration), String> {
    let start = Instant::now();
    let rows = run_grid(&SimConfig::default()).map_err(|e| e.to_string())?;
    Ok((rows, start.elapsed()))
}

/// 6. Directional reproduction of the simulation study.
fn study(rows: &[SimSummary], elapsed: Duration) -> Check {
    ensure(rows.len() == 120, || format!("{} rows", rows.len()))?;
    let mut sum_plain = 0.0;
    let mut sum_corr = 0.0;
    let mut violations = Vec::new();
    for cell in rows.chunks(6) {
        for kind in IndexKind::ALL {
            let plain = cell.iter().find(|r| r.estimator == Estimator::plain(kind)).unwrap();
            let corr = cell.iter().find(|r| r.estimator == Estimator::corrected(kind)).unwrap();
            let se_p = plain.rel_bias_se();
            let se = (se_p.powi(2) + corr.rel_bias_se().powi(2)).sqrt();
            if plain.rel_bias >= 3.0 * se_p {
                violations.push(format!(
                    "{kind} α={} n={}: uncorrected rel_bias {:.5} not negative",
                    plain.alpha, plain.n, plain.rel_bias
                ));
            }
            if corr.rel_bias.abs() > plain.rel_bias.abs() + 3.0 * se {
                violations.push(format!(
                    "{kind} α={} n={}: |corrected| {:.5} > |uncorrected| {:.5} + 3·{:.5}",
                    plain.alpha,
                    plain.n,
                    corr.rel_bias.abs(),
                    plain.rel_bias.abs(),
                    se
                ));
            }
            sum_plain += plain.rel_bias.abs();
            sum_corr += corr.rel_bias.abs();
        }
    }
    let cells = (rows.len() / 6 * 3) as f64;
    let (avg_plain, avg_corr) = (sum_plain / cells, sum_corr / cells);
    ensure(violations.is_empty(), || {
        format!(
            "{}; mean |rel_bias| uncorrected {avg_plain:.4}, corrected {avg_corr:.4}",
            violations.join("; ")
        )
    })?;
    ensure(avg_corr <= 0.5 * avg_plain, || {
        format!("mean |rel_bias| corrected {avg_corr:.4} vs uncorrected {avg_plain:.4}")
    })?;
    budget(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "mean |rel_bias| uncorrected {avg_plain:.4}, corrected {avg_corr:.4} ({elapsed:?})"
    ))
}

fn run_cli_simulate(out: &PathBuf, threads: usize) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_gammaineq"))
        .args(["simulate", "--seed", "42", "--out"])
        .arg(out)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
    std::fs::read(out).map_err(|e| e.to_string())
}

/// 7. Byte-identical CSV across runs and thread counts.
fn determinism(grid_time: Duration) -> Check {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = run_cli_simulate(&dir.path().join("a.csv"), 1)?;
    let b = run_cli_simulate(&dir.path().join("b.csv"), 8)?;
    ensure(a == b, || "CSV differs between 1 and 8 threads".into())?;
    let lines = a.split(|&c| c == b'\n').filter(|l| !l.is_empty()).count();
    ensure(lines == 121, || format!("{lines} CSV lines"))?;
    // Each run must stay within twice the in-process default grid time; the
    // floor covers process start-up on a fast machine.
    let per_run = start.elapsed() / 2;
    budget(per_run, (2 * grid_time).max(Duration::from_secs(2)))?;
    Ok(format!("{} bytes identical across 1 and 8 threads ({per_run:?} per run)", a.len()))
}

/// 8. Scale invariance of estimators, fitted shapes and study statistics.
fn scale_invariance() -> Check {
    let mut rng = RngStream::from_seed_u64(88);
    for k in 0..200 {
        let shape = [0.1, 0.5, 1.5, 2.0][k % 4];
        let x = sample_gamma(&Params::new(shape, 1.0).unwrap(), 5 + k % 100, &mut rng).unwrap();
        let base = (theil_t_hat(&x), theil_l_hat(&x), atkinson_hat(&x), fit_shape(&x).map_err(|e| e.to_string())?.alpha_hat);
        for c in [1e-6, 1.0, 1e6] {
            let y = Sample::new(x.observations().iter().map(|v| v * c).collect()).unwrap();
            within("T̂_T", theil_t_hat(&y), base.0, 1e-10)?;
            within("T̂_L", theil_l_hat(&y), base.1, 1e-10)?;
            within("Â", atkinson_hat(&y), base.2, 1e-10)?;
            within("α̂", fit_shape(&y).unwrap().alpha_hat, base.3, 1e-10 * base.3.max(1.0))?;
        }
    }
    let fixed = SimConfig { n_sim: 300, ..SimConfig::default() };
    let by_shape = SimConfig { rate: SamplingRate::EqualsShape, ..fixed.clone() };
    let a = run_grid(&fixed).map_err(|e| e.to_string())?;
    let b = run_grid(&by_shape).map_err(|e| e.to_string())?;
    for (x, y) in a.iter().zip(&b) {
        let what = format!("{} α={} n={}", x.estimator, x.alpha, x.n);
        within(&format!("{what} mean"), y.mean_estimate, x.mean_estimate, 1e-10)?;
        within(&format!("{what} rel_bias"), y.rel_bias, x.rel_bias, 1e-10)?;
        within(&format!("{what} mse"), y.mse, x.mse, 1e-10)?;
        ensure(x.n_failed == y.n_failed, || format!("{what}: failure counts differ"))?;
    }
    Ok("rescaling by 1e-6, 1, 1e6 and rate = 1 vs rate = α agree to 1e-10".into())
}

fn main() {
    let mut results: Vec<(&str, Check)> = vec![
        ("1 closed-form identities", identities()),
        ("2 special-function accuracy", special_functions()),
        ("3 bias signs", signs()),
        ("4 Monte Carlo expectations", monte_carlo_expectations()),
        ("5 shape MLE", mle()),
    ];
    match default_grid() {
        Ok((rows, elapsed)) => {
            results.push(("6 simulation study", study(&rows, elapsed)));
            results.push(("7 determinism", determinism(elapsed)));
        }
        Err(e) => {
            results.push(("6 simulation study", Err(e.clone())));
            results.push(("7 determinism", Err(e)));
        }
    }
    results.push(("8 scale invariance", scale_invariance()));

    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
