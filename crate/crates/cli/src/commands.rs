use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::json;

use hkcpn::metric::{det_a_closed_form, ode_residual};
use hkcpn::{
    lagrangian_point, metric_matrix, mu_plus, run_suite, symplectic_defect, tau_local, ChartPoint, Error,
    MetricProfile, ModelParams, PerturbedProfile, Profile, SuiteConfig, C64,
};

use crate::{EvalArgs, Failure, Format, PointArgs, ScanArgs, TransitionArgs, VerifyArgs};

/// Bound on `max |residual − 1|` for `ode-check`.
const ODE_THRESHOLD: f64 = 1e-9;

const SCAN_HEADER: &str = "tau,f,fprime,ode_residual,det_closed_form";

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout(text),
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn stdout(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(usage(format!("cannot write output: {e}"))),
        _ => Ok(()),
    }
}

fn pretty(value: &serde_json::Value) -> Result<(), Failure> {
    stdout(&format!("{}\n", serde_json::to_string_pretty(value).expect("serializable")))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let config = SuiteConfig {
        n_values: args.n.clone(),
        s: args.twist.s(),
        a_values: args.a.clone(),
        samples: args.samples,
        seed: args.seed,
        perturbation: args.perturb,
        ..SuiteConfig::default()
    };
    config.validate().map_err(usage)?;
    let report = run_suite(&config).map_err(usage)?;
    let mut text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    emit(args.out.as_deref(), &text)?;
    let s = report.summary();
    eprintln!(
        "{} checks: {} passed, {} failed, {} skipped, {} info",
        s.total, s.passed, s.failed, s.skipped, s.info
    );
    if report.all_passed() {
        Ok(())
    } else {
        let ids: Vec<String> = report.failures().map(|r| format!("{}(n={}, a={})", r.check_id, r.n, r.a)).collect();
        Err(Failure::Check(format!("{} checks failed: {}", s.failed, ids.join(", "))))
    }
}

fn coords(v: &[C64], n: usize, name: &str) -> Result<Vec<C64>, Failure> {
    match v.len() {
        0 => Ok(vec![C64::new(0.0, 0.0); n]),
        k if k == n => Ok(v.to_vec()),
        k => Err(usage(format!("--{name} has {k} entries but n = {n}"))),
    }
}

fn point(args: &PointArgs, lagrangian: bool) -> Result<(ModelParams, ChartPoint), Failure> {
    let params = ModelParams::new(args.n, args.twist.s()).map_err(usage)?;
    let z = coords(&args.z, args.n, "z")?;
    let p = if lagrangian {
        lagrangian_point(&z, args.alpha, &params)
    } else {
        ChartPoint::new(args.alpha, z, coords(&args.xi, args.n, "xi")?, &params)
    }
    .map_err(usage)?;
    Ok((params, p))
}

fn sorted(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

pub fn eval(args: &EvalArgs) -> Result<(), Failure> {
    let (params, p) = point(&args.point, args.lagrangian)?;
    let profile = MetricProfile::for_params(args.a, &params).map_err(usage)?;
    let m = metric_matrix(&p, &profile, &params).map_err(usage)?;
    let mu = mu_plus(&p, &params).eigenvalues().map_err(usage)?;
    let out = json!({
        "n": params.n,
        "s": params.s,
        "a": args.a,
        "alpha": p.alpha,
        "z": p.z,
        "xi": p.xi,
        "tau": tau_local(&p, &params),
        "detA": m.det().map_err(usage)?,
        "minEig": m.min_eigenvalue().map_err(usage)?,
        "defect": symplectic_defect(&m.a).frobenius_norm(),
        "muEigenvalues": sorted(mu),
    });
    pretty(&out)
}

pub fn transition(args: &TransitionArgs) -> Result<(), Failure> {
    let (params, p) = point(&args.point, false)?;
    let (q, t) = match hkcpn::transition(&p, args.to_chart, &params) {
        Ok(r) => r,
        Err(e @ Error::Overlap { .. }) => return Err(Failure::Check(e.to_string())),
        Err(e) => return Err(usage(e)),
    };
    let out = json!({
        "from": p.alpha,
        "to": q.alpha,
        "z": q.z,
        "xi": q.xi,
        "leviDetA": t.a.det().map_err(usage)?,
        "d": t.d,
        "tauSource": tau_local(&p, &params),
        "tauTarget": tau_local(&q, &params),
    });
    pretty(&out)
}

/// One grid row; `None` where the profile is undefined.
struct Row {
    tau: f64,
    values: Option<[f64; 4]>,
}

fn scan_rows(args: &ScanArgs) -> Result<Vec<Row>, Failure> {
    let tau0 = match args.tau0 {
        Some(t) => t,
        None => ModelParams::new(args.n, args.twist.s()).map_err(usage)?.tau0,
    };
    let base = MetricProfile::new(args.a, args.n, tau0).map_err(usage)?;
    if !(args.tau_min.is_finite() && args.tau_max.is_finite() && args.tau_min <= args.tau_max) {
        return Err(usage(format!("invalid grid {}..{}", args.tau_min, args.tau_max)));
    }
    let profile: Box<dyn Profile> = match args.perturb {
        Some(delta) if !(delta.is_finite() && delta > -1.0) => {
            return Err(usage(format!("perturbation {delta} must be finite and > -1")))
        }
        Some(delta) => Box::new(PerturbedProfile { base, delta }),
        None => Box::new(base),
    };
    let grid: Vec<f64> = match args.steps {
        0 => Vec::new(),
        1 => vec![args.tau_min],
        k => (0..k).map(|i| args.tau_min + (args.tau_max - args.tau_min) * i as f64 / (k - 1) as f64).collect(),
    };
    grid.into_iter()
        .map(|tau| {
            let values = match profile.eval(tau) {
                Ok((f, fp)) => {
                    let det = det_a_closed_form(tau, profile.as_ref()).map_err(usage)?;
                    Some([f, fp, ode_residual(f, fp, tau, profile.as_ref()), det])
                }
                Err(Error::Domain { .. }) => None,
                Err(e) => return Err(usage(e)),
            };
            Ok(Row { tau, values })
        })
        .collect()
}

pub fn scan(args: &ScanArgs) -> Result<(), Failure> {
    let rows = scan_rows(args)?;
    let mut text = format!("{SCAN_HEADER}\n");
    for row in &rows {
        let cells: Vec<String> = match row.values {
            Some(v) => v.iter().map(|x| num(*x)).collect(),
            None => vec!["domain_error".into(); 4],
        };
        text.push_str(&format!("{},{}\n", num(row.tau), cells.join(",")));
    }
    emit(args.out.as_deref(), &text)
}

pub fn ode_check(args: &ScanArgs) -> Result<(), Failure> {
    let rows = scan_rows(args)?;
    let outside = rows.iter().filter(|r| r.values.is_none()).count();
    let worst = rows
        .iter()
        .filter_map(|r| r.values.map(|v| (r.tau, (v[2] - 1.0).abs())))
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let Some((tau, dev)) = worst else {
        return Err(usage("grid has no points inside the profile domain"));
    };
    let mut text = format!(
        "points {}\noutside_domain {}\nmax_abs_residual_minus_one {}\nat_tau {}\nthreshold {}\n",
        rows.len() - outside,
        outside,
        num(dev),
        num(tau),
        num(ODE_THRESHOLD)
    );
    let pass = dev < ODE_THRESHOLD;
    text.push_str(if pass { "result pass\n" } else { "result fail\n" });
    emit(args.out.as_deref(), &text)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("ODE residual deviates by {} at tau = {}", num(dev), num(tau))))
    }
}
