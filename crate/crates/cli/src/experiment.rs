//! Runs an [`ExperimentSpec`] and writes its CSV tables. All rows are
//! computed first (in parallel where independent); files are written by a
//! single pass at the end.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use fracblow::{
    alpha_sweep, dichotomy_scan, frac_power_apply, frac_resolvent_apply_block, hille_semigroup_matrix,
    levine_check, make_grid, monotone_time_check, resolvent_dirichlet, resolvent_neumann,
    resolvent_periodic, run_simulation, scalar_frac_power_with_estimate, singular_integral_frac,
    GridFunction, Outcome, PeriodicKernel, ProbeValue, QuadratureSpec, SemigroupGenerator,
    SimulationResult64, SolverConfig64, SweepRow, WholeLine,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentKind, ExperimentSpec};
use crate::error::{CliError, CliResult};

/// Fixed probe time of the `max_at_t0.6` summary column.
pub const PROBE_TIME: f64 = 0.6;
pub const SUMMARY_HEADER: &str = "alpha,outcome,T_num,max_at_t0.6";
pub const TIMESERIES_HEADER: &str = "step,t,tau,max_u,argmax_x";
pub const PROFILE_HEADER: &str = "x,u";

pub const QUADCHECK_TOL: f64 = 1e-8;
const KERNEL_SAMPLES: usize = 20;

/// 17 significant digits; parses back to the same `f64`.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

/// A blow-up before the probe time is written as `inf`.
fn fmt_probe(p: Option<ProbeValue<f64>>) -> String {
    match p {
        Some(ProbeValue::Finite(v)) => fmt(v),
        Some(ProbeValue::BlewUp(_)) => "inf".into(),
        None => String::new(),
    }
}

pub fn profile_name(t: f64) -> String {
    format!("profile_{t}.csv")
}

pub fn alpha_dir(alpha: f64) -> String {
    format!("alpha_{alpha}")
}

#[derive(Debug, Default)]
pub struct ExperimentReport {
    /// Files written, in write order.
    pub files: Vec<PathBuf>,
    /// Human-readable summary lines.
    pub lines: Vec<String>,
}

#[derive(Default)]
struct Pending {
    files: Vec<(PathBuf, String)>,
    lines: Vec<String>,
    failure: Option<String>,
}

impl Pending {
    fn csv(&mut self, path: PathBuf, header: &str, rows: impl IntoIterator<Item = String>) {
        let mut s = String::from(header);
        s.push('\n');
        for r in rows {
            s.push_str(&r);
            s.push('\n');
        }
        self.files.push((path, s));
    }

    fn line(&mut self, l: impl Into<String>) {
        self.lines.push(l.into());
    }

    fn flush(self, root: &Path) -> CliResult<ExperimentReport> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (path, body) in self.files {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        if let Some(msg) = self.failure {
            return Err(CliError::Numerical(msg));
        }
        Ok(ExperimentReport {
            files: written,
            lines: self.lines,
        })
    }
}

/// Adds the probe time to the snapshot list without disturbing the
/// requested ones (snapshots are interpolated and never change the steps).
fn with_probe(config: &SolverConfig64) -> SolverConfig64 {
    let mut c = config.clone();
    if !c.snapshot_times.contains(&PROBE_TIME) {
        c.snapshot_times.push(PROBE_TIME);
        c.snapshot_times.sort_by(f64::total_cmp);
    }
    c
}

fn max_at_probe(res: &SimulationResult64) -> Option<ProbeValue<f64>> {
    if let Some(s) = res.snapshot_at(PROBE_TIME) {
        return Some(ProbeValue::Finite(s.u.max()));
    }
    match res.blowup_time() {
        Some(tb) if tb <= PROBE_TIME => Some(ProbeValue::BlewUp(tb)),
        _ => None,
    }
}

fn profile_rows(u: &GridFunction<f64>) -> Vec<String> {
    u.grid()
        .nodes()
        .iter()
        .zip(u.values())
        .map(|(x, v)| format!("{},{}", fmt(*x), fmt(*v)))
        .collect()
}

/// `timeseries.csv`, one profile per requested snapshot and `profile_final.csv`.
fn run_files(out: &mut Pending, dir: &Path, res: &SimulationResult64, requested: &[f64]) {
    let nodes = res.initial.grid().nodes();
    out.csv(
        dir.join("timeseries.csv"),
        TIMESERIES_HEADER,
        res.records.iter().map(|r| {
            format!("{},{},{},{},{}", r.step, fmt(r.t), fmt(r.tau), fmt(r.max_u), fmt(nodes[r.argmax_index]))
        }),
    );
    for s in res.snapshots.iter().filter(|s| requested.contains(&s.t)) {
        out.csv(dir.join(profile_name(s.t)), PROFILE_HEADER, profile_rows(&s.u));
    }
    out.csv(dir.join("profile_final.csv"), PROFILE_HEADER, profile_rows(&res.final_state));
}

fn summary_row(alpha: f64, outcome: &str, res: Option<&SimulationResult64>) -> String {
    format!(
        "{},{},{},{}",
        fmt(alpha),
        outcome,
        fmt_opt(res.and_then(|r| r.blowup_time())),
        fmt_probe(res.and_then(max_at_probe))
    )
}

fn describe(alpha: f64, res: &SimulationResult64) -> String {
    let mut s = format!("alpha={alpha} outcome={}", res.outcome.label());
    match &res.outcome {
        Outcome::BlewUp { t_num, tail_hint } => s += &format!(" T_num={t_num:.6} tail_hint={tail_hint:.1e}"),
        Outcome::NumericalFailure { t, message } => s += &format!(" at t={t}: {message}"),
        _ => s += &format!(" t={:.6} max_u={:.6e}", res.final_t, res.final_state.max()),
    }
    if let Some(p) = max_at_probe(res) {
        s += &format!(" max_at_t{PROBE_TIME}={p}");
    }
    s
}

/// Executes the experiment and writes its outputs under `spec.output_dir`.
/// `seed` drives only the randomized inputs of `kernelcheck`.
pub fn run_experiment(spec: &ExperimentSpec, seed: u64) -> CliResult<ExperimentReport> {
    let mut out = Pending::default();
    let root = spec.output_dir.as_path();
    match spec.kind {
        ExperimentKind::Run => single_run(spec, root, &mut out)?,
        ExperimentKind::Figure1 | ExperimentKind::Figure2 | ExperimentKind::Sweep => sweep(spec, root, &mut out)?,
        ExperimentKind::Levine => levine(spec, root, &mut out)?,
        ExperimentKind::QuadCheck => quadcheck(spec, root, &mut out)?,
        ExperimentKind::KernelCheck => kernelcheck(spec, root, seed, &mut out)?,
        ExperimentKind::Dichotomy => dichotomy(spec, root, &mut out)?,
    }
    out.flush(root)
}

fn single_run(spec: &ExperimentSpec, root: &Path, out: &mut Pending) -> CliResult<()> {
    let alpha = spec.alphas[0];
    let config = SolverConfig64 {
        alpha,
        ..with_probe(&spec.config)
    };
    let res = run_simulation(&config)?;
    run_files(out, root, &res, &spec.config.snapshot_times);
    out.csv(
        root.join("summary.csv"),
        SUMMARY_HEADER,
        [summary_row(alpha, res.outcome.label(), Some(&res))],
    );
    out.line(describe(alpha, &res));
    if let Outcome::NumericalFailure { t, message } = &res.outcome {
        out.failure = Some(format!("alpha={alpha}: numerical failure at t={t}: {message}"));
    }
    Ok(())
}

fn row_result(row: &SweepRow<f64>) -> Option<&SimulationResult64> {
    row.run.as_ref().ok()
}

fn sweep(spec: &ExperimentSpec, root: &Path, out: &mut Pending) -> CliResult<()> {
    let base = with_probe(&spec.config);
    let result = alpha_sweep(&base, &spec.alphas)?;
    let mut summary = Vec::new();
    for row in &result.rows {
        match &row.run {
            Ok(res) => {
                run_files(out, &root.join(alpha_dir(row.alpha)), res, &spec.config.snapshot_times);
                let cfg = SolverConfig64 {
                    alpha: row.alpha,
                    ..base.clone()
                };
                let mono = monotone_time_check(res, &cfg)?;
                let mut line = format!("{} monotone_in_time={}", describe(row.alpha, res), mono.nondecreasing);
                if let Some((k, j, drop)) = mono.worst_violation {
                    line += &format!(
                        " (largest decrease {drop:.3e} at x={:.4} between t={} and t={})",
                        res.initial.grid().nodes()[j],
                        mono.times[k],
                        mono.times[k + 1]
                    );
                }
                out.line(line);
            }
            Err(e) => {
                log::warn!("alpha={}: {e}", row.alpha);
                out.line(format!("alpha={} error: {e}", row.alpha));
            }
        }
        summary.push(summary_row(row.alpha, row.outcome_label(), row_result(row)));
    }
    out.csv(root.join("summary.csv"), SUMMARY_HEADER, summary);
    out.line(format!(
        "trend in alpha: T_num {:?}, max_at_t{PROBE_TIME} {:?}",
        result.t_num_trend, result.max_trend
    ));

    let times = if spec.config.snapshot_times.is_empty() {
        vec![PROBE_TIME]
    } else {
        spec.config.snapshot_times.clone()
    };
    let mut rows = Vec::new();
    for pair in result.rows.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let (Some(rl), Some(rh)) = (row_result(lo), row_result(hi)) else {
            continue;
        };
        for &t in &times {
            let (pl, ph) = (rl.probe(t, 0), rh.probe(t, 0));
            let ordered = match (pl, ph) {
                (Some(a), Some(b)) => (b < a).to_string(),
                _ => String::new(),
            };
            let crossing = match (rl.snapshot_at(t), rh.snapshot_at(t)) {
                (Some(sl), Some(sh)) => sl
                    .u
                    .values()
                    .iter()
                    .zip(sh.u.values())
                    .position(|(a, b)| b > a)
                    .map(|j| fmt(sl.u.grid().nodes()[j]))
                    .unwrap_or_default(),
                _ => String::new(),
            };
            rows.push(format!(
                "{},{},{},{},{},{},{}",
                fmt(t),
                fmt(lo.alpha),
                fmt(hi.alpha),
                fmt_probe(pl),
                fmt_probe(ph),
                ordered,
                crossing
            ));
        }
    }
    out.csv(
        root.join("ordering.csv"),
        "t,alpha_low,alpha_high,u0_low,u0_high,max_decreasing,crossing_x",
        rows,
    );
    Ok(())
}

fn levine(spec: &ExperimentSpec, root: &Path, out: &mut Pending) -> CliResult<()> {
    let grid = make_grid(spec.config.n)?;
    let u0 = spec.config.initial.sample(&grid)?;
    let sweep = alpha_sweep(&spec.config, &spec.alphas)?;
    let mut rows = Vec::new();
    for row in &sweep.rows {
        let lv = levine_check(&u0, row.alpha, spec.config.p)?;
        let outcome = row.outcome_label();
        if lv.predicts_blowup && outcome != "BlewUp" {
            out.line(format!("alpha={}: predicted blow-up but the run ended with {outcome}", row.alpha));
        }
        out.line(format!(
            "alpha={} G={:.10} quad={:.10} predicts_blowup={} outcome={outcome}",
            row.alpha, lv.g_value, lv.quad_value, lv.predicts_blowup
        ));
        rows.push(format!(
            "{},{},{},{},{},{},{}",
            fmt(row.alpha),
            spec.config.p,
            fmt(lv.g_value),
            fmt(lv.quad_value),
            lv.predicts_blowup,
            outcome,
            fmt_opt(row.t_num)
        ));
    }
    out.csv(root.join("levine.csv"), "alpha,p,G,quad,predicts_blowup,outcome,T_num", rows);
    Ok(())
}

fn quadcheck(spec: &ExperimentSpec, root: &Path, out: &mut Pending) -> CliResult<()> {
    let cells: Vec<(f64, f64)> = spec
        .kappas
        .iter()
        .flat_map(|&k| spec.alphas.iter().map(move |&a| (k, a)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(kappa, alpha)| {
            let q = QuadratureSpec::gauss_jacobi(alpha)?.with_nodes(spec.quad_nodes)?;
            scalar_frac_power_with_estimate(kappa, &q)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst: f64 = 0.0;
    let rows = cells.iter().zip(&values).map(|(&(kappa, alpha), &(v, est))| {
        let exact = kappa.powf(alpha);
        let rel = (v - exact).abs() / exact;
        worst = worst.max(rel);
        format!("{},{},{},{},{},{}", fmt(kappa), fmt(alpha), fmt(v), fmt(exact), fmt(rel), fmt(est))
    });
    let rows: Vec<String> = rows.collect();
    out.csv(
        root.join("quadcheck.csv"),
        "kappa,alpha,value,exact,rel_error,doubling_estimate",
        rows,
    );
    out.line(format!(
        "quadcheck: {} cells, Q={}, worst relative error {worst:.3e} (tolerance {QUADCHECK_TOL:e})",
        cells.len(),
        spec.quad_nodes
    ));
    if worst > QUADCHECK_TOL {
        out.failure = Some(format!("quadcheck: worst relative error {worst:e} exceeds {QUADCHECK_TOL:e}"));
    }
    Ok(())
}

struct Check {
    name: &'static str,
    parameter: f64,
    error: f64,
    tolerance: f64,
}

fn max_diff(a: &[f64], b: impl IntoIterator<Item = f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn unit_nodes(m: usize) -> Vec<f64> {
    (0..=m).map(|j| j as f64 / m as f64).collect()
}

/// Random nonnegative samples on the cosine grid (even on the circle),
/// with about a third of the entries zero.
fn random_even(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..2.0) })
        .collect()
}

fn kernelcheck(spec: &ExperimentSpec, root: &Path, seed: u64, out: &mut Pending) -> CliResult<()> {
    let mut checks = Vec::new();
    let grid = make_grid::<f64>(spec.config.n)?;
    let kernel = PeriodicKernel::new(grid.clone());
    let lambda = 1.0;
    for k in 1..=8usize {
        let v = GridFunction::from_fn(&grid, |x| (k as f64 * x).cos())?;
        let r = resolvent_periodic(lambda, &v)?;
        let d = lambda + kernel.symbol(k);
        checks.push(Check {
            name: "periodic_lattice_mode",
            parameter: k as f64,
            error: max_diff(r.values(), v.values().iter().map(|x| x / d)),
            tolerance: 1e-10,
        });
    }
    let m = 400;
    let xs = unit_nodes(m);
    let sine: Vec<f64> = xs.iter().map(|x| (PI * x).sin()).collect();
    let r = resolvent_dirichlet(lambda, &sine)?;
    checks.push(Check {
        name: "dirichlet_sine",
        parameter: m as f64,
        error: max_diff(&r, sine.iter().map(|s| s / (lambda + PI * PI))),
        tolerance: 1e-6,
    });
    let r = resolvent_neumann(lambda, &vec![1.0; m + 1])?;
    checks.push(Check {
        name: "neumann_constant",
        parameter: m as f64,
        error: max_diff(&r, std::iter::repeat(1.0 / lambda)),
        tolerance: 1e-12,
    });
    let cosine: Vec<f64> = xs.iter().map(|x| (PI * x).cos()).collect();
    let r = resolvent_neumann(lambda, &cosine)?;
    checks.push(Check {
        name: "neumann_cosine",
        parameter: m as f64,
        error: max_diff(&r, cosine.iter().map(|c| c / (lambda + PI * PI))),
        tolerance: 1e-6,
    });

    let line = WholeLine::<f64>::standard();
    let interior: Vec<bool> = line.nodes().iter().map(|x| x.abs() <= 8.0).collect();
    let gauss = line.sample(|x| (-x * x).exp());
    let routes = spec
        .alphas
        .par_iter()
        .map(|&alpha| -> CliResult<f64> {
            let si = singular_integral_frac(&line, &gauss, alpha)?;
            let route = frac_power_apply(&line, &gauss, &QuadratureSpec::gauss_jacobi(alpha)?)?;
            Ok(si
                .iter()
                .zip(&route)
                .zip(&interior)
                .filter(|(_, keep)| **keep)
                .map(|((a, b), _)| (a - b).abs())
                .fold(0.0, f64::max))
        })
        .collect::<CliResult<Vec<_>>>()?;
    for (&alpha, gap) in spec.alphas.iter().zip(routes) {
        checks.push(Check {
            name: "whole_line_route_gap",
            parameter: alpha,
            error: gap,
            tolerance: 1e-3,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Vec<f64>> = (0..KERNEL_SAMPLES).map(|_| random_even(&mut rng, grid.len())).collect();
    let floor = -1e-8;
    for &alpha in &spec.alphas {
        let q = QuadratureSpec::exp_sinh(alpha)?;
        let res_min = frac_resolvent_apply_block(&kernel, 1.0, &samples, &q)?
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min);
        let semigroup = hille_semigroup_matrix(&kernel, &SemigroupGenerator::Fractional(q), 0.5, 256)?;
        let mut semi_min = f64::INFINITY;
        for u in &samples {
            semi_min = semigroup.mul_vec(u)?.into_iter().fold(semi_min, f64::min);
        }
        // reported as the shortfall below zero
        checks.push(Check {
            name: "resolvent_positivity",
            parameter: alpha,
            error: (-res_min).max(0.0),
            tolerance: -floor,
        });
        checks.push(Check {
            name: "semigroup_positivity",
            parameter: alpha,
            error: (-semi_min).max(0.0),
            tolerance: -floor,
        });
    }

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !(c.error <= c.tolerance))
        .map(|c| format!("{}({})", c.name, c.parameter))
        .collect();
    out.csv(
        root.join("kernelcheck.csv"),
        "check,parameter,error,tolerance,pass",
        checks.iter().map(|c| {
            format!(
                "{},{},{},{},{}",
                c.name,
                fmt(c.parameter),
                fmt(c.error),
                fmt(c.tolerance),
                c.error <= c.tolerance
            )
        }),
    );
    out.line(format!(
        "kernelcheck: {} checks, {} failed (seed {seed}, {KERNEL_SAMPLES} random inputs per alpha)",
        checks.len(),
        failed.len()
    ));
    if !failed.is_empty() {
        out.failure = Some(format!("kernelcheck failed: {}", failed.join(" ")));
    }
    Ok(())
}

fn dichotomy(spec: &ExperimentSpec, root: &Path, out: &mut Pending) -> CliResult<()> {
    let config = SolverConfig64 {
        alpha: spec.alphas[0],
        ..spec.config.clone()
    };
    let rep = dichotomy_scan(&config, &spec.amplitudes)?;
    out.csv(
        root.join("dichotomy.csv"),
        "amplitude,outcome,T_num",
        rep.rows
            .iter()
            .map(|r| format!("{},{},{}", fmt(r.amplitude), r.outcome, fmt_opt(r.t_num))),
    );
    for r in &rep.rows {
        out.line(format!("amplitude={} outcome={} T_num={:?}", r.amplitude, r.outcome, r.t_num));
    }
    out.line(match rep.threshold_bracket {
        Some((lo, hi)) => format!("threshold between amplitudes {lo} and {hi}"),
        None => "no threshold bracket in the scanned amplitudes".into(),
    });
    if rep.expects_universal_blowup {
        out.line("p - 1 < 2 alpha: every positive solution is expected to blow up");
    }
    Ok(())
}
