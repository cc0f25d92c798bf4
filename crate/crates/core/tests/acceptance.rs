//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p qgamma-core --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use qgamma_core::cli::{EXIT_CONVERGENCE, EXIT_OK};
use qgamma_core::inequality::{DEFAULT_SEED, DEFAULT_MONOTONE_TOL};
use qgamma_core::report::parse_report;
use qgamma_core::{
    euler_digamma_series, euler_gamma, g_prime, ln_qgamma, qdigamma, qgamma, termwise_gap,
    verify_classical, verify_monotonicity, verify_inequality, GridSpec, QParameter, TruncationPolicy,
    EULER_MASCHERONI,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const QGAMMA_FIXTURE: &str = include_str!("fixtures/qgamma.csv");

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn base(q: f64) -> QParameter {
    QParameter::new(q).expect("valid base")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn inequality_grid() -> GridSpec {
    let qs = (1..=19).map(|k| k as f64 * 0.05).collect();
    GridSpec::new(qs, vec![1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0], 101).unwrap()
}

fn normalization() -> Outcome {
    let mut worst: f64 = 0.0;
    for q in [0.1, 0.3, 0.5, 0.7, 0.9, 2.0, 5.0, 10.0] {
        for x in [1.0, 2.0] {
            let v = qgamma(x, base(q), &policy()).map_err(|e| e.to_string())?.value;
            let err = (v - 1.0).abs();
            ensure(err <= 1e-13, || format!("Γ_{q}({x}) = {v:e}, error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("max |Γ_q(1 or 2) - 1| = {worst:.1e} (tol 1e-13)"))
}

fn inequality_certification() -> Outcome {
    let report = verify_inequality(&inequality_grid(), &policy(), 1e-10);
    ensure(report.is_complete(), || format!("aborted: {:?}", report.aborted))?;
    ensure(report.pass(), || {
        format!(
            "min lower {:e} at {:?}, min upper {:e} at {:?}",
            report.min_lower_margin(),
            report.summary.argmin_lower,
            report.min_upper_margin(),
            report.summary.argmin_upper
        )
    })?;
    ensure(report.lower_bound_attained(), || {
        format!("endpoint gap {:e}", report.summary.max_endpoint_gap)
    })?;
    Ok(format!(
        "{} points, min lower margin {:.2e}, min upper margin {:.2e}, endpoint gap {:.1e} (tol 1e-10)",
        report.points.len(),
        report.min_lower_margin(),
        report.min_upper_margin(),
        report.summary.max_endpoint_gap
    ))
}

fn monotonicity() -> Outcome {
    let mono = verify_monotonicity(&inequality_grid(), &policy(), DEFAULT_MONOTONE_TOL).map_err(|e| e.to_string())?;
    ensure(mono.pass, || format!("first violation {:?}", mono.first_violation))?;

    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..500 {
        let q = rng.gen_range(0.01..0.99);
        let a = rng.gen_range(1.0..=20.0);
        let x = rng.gen_range(0.0..=5.0);
        let gp = g_prime(x, a, base(q), &policy()).map_err(|e| e.to_string())?;
        ensure(gp <= 1e-9, || format!("g'({x}) = {gp:e} at q={q} a={a}"))?;
        worst = worst.max(gp);
    }
    Ok(format!("f nonincreasing on all 133 x-grids (tol 1e-12); max g' over 500 triples = {worst:.2e} (seed {DEFAULT_SEED})"))
}

fn termwise_step() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(0..=50u64);
        let x = rng.gen_range(0.0..=5.0);
        let a = rng.gen_range(1.0..=20.0);
        let q = rng.gen_range(0.01..0.99);
        let gap = termwise_gap(n, x, a, q).map_err(|e| e.to_string())?;
        let t = q.powf(1.0 + x + n as f64);
        let ulp = f64::EPSILON * t / (1.0 - t);
        let ulps = if ulp > 0.0 { gap / ulp } else { gap.signum() };
        ensure(ulps <= 4.0, || format!("gap {gap:e} ({ulps} ulps) at n={n} x={x} a={a} q={q}"))?;
        worst_gap = worst_gap.max(gap);
    }
    let exact = termwise_gap(0, 1.0, 2.0, 0.5).map_err(|e| e.to_string())?;
    let err = (exact + 4.0 / 21.0).abs();
    ensure(err <= 1e-15, || format!("gap(0,1,2,0.5) = {exact}, error {err:e}"))?;
    Ok(format!("all 1000 gaps at most 4 ulps above 0 (largest {worst_gap:.2e}); -4/21 reproduced to {err:.1e}"))
}

fn recurrence() -> Outcome {
    let xs: Vec<f64> = (1..=20).map(|k| k as f64 * 0.25).collect();
    let mut worst: f64 = 0.0;
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for &x in &xs {
            let lo = qgamma(x, base(q), &policy()).map_err(|e| e.to_string())?.value;
            let hi = qgamma(x + 1.0, base(q), &policy()).map_err(|e| e.to_string())?.value;
            let expected = (1.0 - q.powf(x)) / (1.0 - q);
            let rel = (hi / lo / expected - 1.0).abs();
            ensure(rel <= 1e-11, || format!("q={q} x={x}: relative error {rel:e}"))?;
            worst = worst.max(rel);
        }
    }
    for q in [2.0, 5.0, 10.0] {
        for &x in &xs {
            let lo = qgamma(x, base(q), &policy()).map_err(|e| e.to_string())?.value;
            let hi = qgamma(x + 1.0, base(q), &policy()).map_err(|e| e.to_string())?.value;
            let expected = (q.powf(x) - 1.0) / (q - 1.0);
            let rel = (hi / lo / expected - 1.0).abs();
            ensure(rel <= 1e-11, || format!("q={q} x={x}: relative error {rel:e}"))?;
            worst = worst.max(rel);
        }
    }
    let mut worst_fixture: f64 = 0.0;
    for line in QGAMMA_FIXTURE.lines().skip(1) {
        let c: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let v = qgamma(c[1], base(c[0]), &policy()).map_err(|e| e.to_string())?.value;
        let rel = (v / c[2] - 1.0).abs();
        ensure(rel <= 1e-11, || format!("fixture q={} x={}: relative error {rel:e}", c[0], c[1]))?;
        worst_fixture = worst_fixture.max(rel);
    }
    Ok(format!(
        "max recurrence error {worst:.1e}, max error vs 40-digit products {worst_fixture:.1e} (tol 1e-11)"
    ))
}

fn classical_limit() -> Outcome {
    for x in [0.5, 1.5, 2.5, 5.0] {
        let exact = euler_gamma(x).map_err(|e| e.to_string())?;
        let errs: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&q| qgamma(x, base(q), &policy()).map(|r| (r.value - exact).abs()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(errs[0] > errs[1] && errs[1] > errs[2], || format!("x={x}: errors {errs:?}"))?;
    }
    let a_values: Vec<f64> = (1..=6).map(f64::from).collect();
    let report = verify_classical(&a_values, 101, 1e-10).map_err(|e| e.to_string())?;
    let factorial_margin = report.min_factorial_margin.unwrap_or(f64::NEG_INFINITY);
    ensure(report.pass() && factorial_margin >= -1e-10, || {
        format!(
            "classical margins lower {:e} upper {:e} factorial {factorial_margin:e}",
            report.min_lower_margin(),
            report.min_upper_margin()
        )
    })?;
    Ok(format!(
        "|Γ_q - Γ| decreasing along q = 0.9, 0.99, 0.999 at 4 points; [1/n!, 1] holds for n = 1..6, min margin {:.1e}",
        report.min_lower_margin().min(factorial_margin)
    ))
}

fn digamma() -> Outcome {
    let p = TruncationPolicy::digamma_series_default();
    let at1 = euler_digamma_series(1.0, &p).map_err(|e| e.to_string())?;
    let at2 = euler_digamma_series(2.0, &p).map_err(|e| e.to_string())?;
    ensure((at1 + EULER_MASCHERONI).abs() <= 1e-7, || format!("ψ(1) = {at1}"))?;
    ensure((at2 - (1.0 - EULER_MASCHERONI)).abs() <= 1e-7, || format!("ψ(2) = {at2}"))?;

    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for q in [0.2, 0.5, 0.8] {
        for k in 0..=38 {
            let y = 0.5 + 0.25 * k as f64;
            let fd = (ln_qgamma(y + h, base(q), &policy()).map_err(|e| e.to_string())?
                - ln_qgamma(y - h, base(q), &policy()).map_err(|e| e.to_string())?)
                / (2.0 * h);
            let an = qdigamma(y, base(q), &policy()).map_err(|e| e.to_string())?;
            let err = (fd - an).abs();
            ensure(err <= 1e-6, || format!("q={q} y={y}: fd {fd} vs {an}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!(
        "ψ(1)+γ = {:.1e}, ψ(2)-(1-γ) = {:.1e}; q-digamma vs finite difference max {worst:.1e} (tol 1e-6)",
        at1 + EULER_MASCHERONI,
        at2 - (1.0 - EULER_MASCHERONI)
    ))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qgamma");
    let run = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| format!("spawn: {e}"))
    };

    let out = run(&["verify", "--q-list", "0.5", "--a-list", "2", "--x-count", "11", "--tol", "1e-10"])?;
    ensure(out.status.code() == Some(EXIT_OK), || format!("example 1 exit {:?}", out.status.code()))?;
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let parsed = parse_report(&text).map_err(|e| e.to_string())?;
    let footer = parsed.footer.ok_or("missing footer")?;
    let (lo, up) = parsed.recomputed_minima();
    ensure(
        parsed.rows.len() == 11 && lo.to_bits() == footer.min_lower_margin.to_bits() && up.to_bits() == footer.min_upper_margin.to_bits(),
        || format!("round trip mismatch: rows {} recomputed ({lo:e},{up:e}) footer {footer:?}", parsed.rows.len()),
    )?;

    let out = run(&["verify", "--q-list", "0.5", "--a-list", "1", "--x-count", "5"])?;
    ensure(out.status.code() == Some(EXIT_OK), || format!("example 2 exit {:?}", out.status.code()))?;
    let parsed = parse_report(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
    ensure(parsed.rows.len() == 5 && parsed.rows.iter().all(|r| r[3] == 1.0), || "a=1 rows are not all f=1".into())?;

    let out = run(&["verify", "--q-list", "0.99999", "--a-list", "2", "--x-count", "11"])?;
    ensure(out.status.code() == Some(EXIT_CONVERGENCE), || format!("example 3 exit {:?}", out.status.code()))?;
    let parsed = parse_report(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
    ensure(parsed.incomplete, || "q=0.99999 output not flagged incomplete".into())?;

    Ok("verify exits 0, 0, 3 as documented; footer minima reproduced bit-for-bit from rows".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 normalization Γ_q(1) = Γ_q(2) = 1", normalization),
        ("2 q-inequality certified on 19x7x101 grid", inequality_certification),
        ("3 monotonicity of f and sign of g'", monotonicity),
        ("4 termwise proof step", termwise_step),
        ("5 recurrence and extended-precision oracle", recurrence),
        ("6 classical limit and integer bounds", classical_limit),
        ("7 digamma series and q-digamma", digamma),
        ("8 CLI exit statuses and CSV round trip", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} [{secs:.2}s]");
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
