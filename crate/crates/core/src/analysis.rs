//! Blow-up predictors and probes of the monotonicity conjectures.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};
use crate::spectral::{apply_frac_power_spectral, Grid, GridFunction};
use crate::timestepper::{run_simulation, Outcome, ProbeValue, SimulationResult, SolverConfig};

/// `∫_{-π}^{π} u v dx` for even u, v by the trapezoid rule on the full
/// period (interior nodes count twice).
pub fn inner_product<T: Real>(u: &GridFunction<T>, v: &GridFunction<T>) -> Result<T> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch {
            expected: u.grid().n(),
            found: v.grid().n(),
        });
    }
    let g = u.grid();
    let mut acc = CompensatedSum::new();
    for (j, (a, b)) in u.values().iter().zip(v.values()).enumerate() {
        acc.add(g.node_multiplicity(j) * *a * *b);
    }
    Ok(g.h() * acc.value())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevineReport<T> {
    /// `G(u_0) = (u_0^p, u_0)/(p+1)`.
    pub g_value: T,
    /// `(1/2)(u_0, A^α u_0)`.
    pub quad_value: T,
    pub predicts_blowup: bool,
}

/// Blow-up is guaranteed when `G(u_0) > (1/2)(u_0, A^α u_0)`.
pub fn levine_check<T: Real>(u0: &GridFunction<T>, alpha: T, p: u32) -> Result<LevineReport<T>> {
    if p < 2 {
        return Err(Error::invalid("p", format!("need p >= 2, got {p}")));
    }
    let up = u0.map(|v| v.powi(p as i32));
    let g_value = inner_product(&up, u0)? / T::from_u32(p + 1).expect("small integer");
    let au = apply_frac_power_spectral(u0, alpha)?;
    let quad_value = inner_product(u0, &au)? / T::lit(2.0);
    Ok(LevineReport {
        g_value,
        quad_value,
        predicts_blowup: g_value > quad_value,
    })
}

/// Principal eigenpair `A φ_0 = κ_0 φ_0` with `φ_0 > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair<T> {
    pub kappa0: T,
    pub phi0: GridFunction<T>,
}

impl<T: Real> EigenPair<T> {
    /// Validates positivity of φ_0 and the residual `‖Aφ_0 - κ_0 φ_0‖_∞ ≤ 1e-10`.
    pub fn new(kappa0: T, phi0: GridFunction<T>) -> Result<Self> {
        if !(kappa0 >= T::zero()) {
            return Err(Error::invalid("kappa0", format!("must be nonnegative, got {kappa0}")));
        }
        if phi0.values().iter().any(|v| !(*v > T::zero())) {
            return Err(Error::Precondition("eigenfunction must be strictly positive".into()));
        }
        let a_phi = apply_frac_power_spectral(&phi0, T::one())?;
        let resid = a_phi.lin_comb(T::one(), &phi0, -kappa0)?.max_abs();
        if resid > T::lit(1e-10) * (T::one() + kappa0 * phi0.max_abs()) {
            return Err(Error::Precondition(format!("eigen residual {resid:e} too large")));
        }
        Ok(Self { kappa0, phi0 })
    }

    /// κ_0 = 0, φ_0 ≡ 1 on the circle.
    pub fn periodic(grid: &Grid<T>) -> Self {
        Self {
            kappa0: T::zero(),
            phi0: GridFunction::constant(grid, T::one()).expect("finite constant"),
        }
    }

    /// Jensen constant `(1, φ_0)^{1-p}`, giving `(u^p, φ_0) ≥ c_J (u, φ_0)^p`.
    pub fn jensen_constant(&self, p: u32) -> Result<T> {
        let one = GridFunction::constant(self.phi0.grid(), T::one())?;
        let mass = inner_product(&one, &self.phi0)?;
        Ok(mass.powi(1 - p as i32))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JensenReport<T> {
    pub times: Vec<T>,
    /// `φ(t_k) = (u(t_k), φ_0)`.
    pub phi: Vec<T>,
    pub c_j: T,
    pub violations: usize,
    /// `(k, lhs, rhs)` of the first violated interval.
    pub first_violation: Option<(usize, T, T)>,
    /// Largest `(lhs - rhs)/max(1, |rhs|)` over the intervals.
    pub max_relative_slack: T,
    /// Blow-up time of `φ' = -κ_0^α φ + c_J φ^p` from `φ(0)`; `None` if
    /// that ODE does not blow up.
    pub t_bound: Option<T>,
    pub t_num: Option<T>,
}

impl<T: Real> JensenReport<T> {
    /// `T_num ≤ T_bound + slack` (vacuous when either is missing).
    pub fn bound_respected(&self, slack: T) -> bool {
        match (self.t_num, self.t_bound) {
            (Some(tn), Some(tb)) => tn <= tb + slack,
            (Some(_), None) => true,
            (None, _) => true,
        }
    }
}

/// Checks `(φ_{k+1} - φ_k)/Δt ≥ -κ_0^α φ_k + c_J φ_k^p` between
/// consecutive stored profiles (initial state, snapshots, final state);
/// a violation is a shortfall beyond `tol·max(1, |rhs|)`.
pub fn jensen_projection_trace<T: Real>(
    result: &SimulationResult<T>,
    pair: &EigenPair<T>,
    alpha: T,
    p: u32,
    tol: T,
) -> Result<JensenReport<T>> {
    let mut profiles: Vec<(T, &GridFunction<T>)> = vec![(T::zero(), &result.initial)];
    for s in &result.snapshots {
        if s.t > T::zero() && s.t < result.final_t {
            profiles.push((s.t, &s.u));
        }
    }
    if result.final_t > T::zero() {
        profiles.push((result.final_t, &result.final_state));
    }
    let floor = T::lit(-1e-8);
    for (_, u) in &profiles {
        if let Some((j, v)) = u.values().iter().enumerate().find(|(_, v)| **v < floor) {
            return Err(Error::NegativeEntry {
                index: j,
                value: v.to_f64_lossy(),
                floor: floor.to_f64_lossy(),
            });
        }
    }
    let c_j = pair.jensen_constant(p)?;
    let k_alpha = if pair.kappa0 == T::zero() {
        T::zero()
    } else {
        pair.kappa0.powf(alpha)
    };
    let phi: Vec<T> = profiles
        .iter()
        .map(|(_, u)| inner_product(u, &pair.phi0))
        .collect::<Result<_>>()?;
    let mut violations = 0;
    let mut first = None;
    let mut max_slack = T::neg_infinity();
    for k in 0..profiles.len().saturating_sub(1) {
        let dt = profiles[k + 1].0 - profiles[k].0;
        if !(dt > T::zero()) {
            continue;
        }
        let lhs = (phi[k + 1] - phi[k]) / dt;
        let rhs = -k_alpha * phi[k] + c_j * phi[k].powi(p as i32);
        let scale = T::one().max(rhs.abs());
        let slack = (lhs - rhs) / scale;
        max_slack = max_slack.max(slack);
        if slack < -tol {
            violations += 1;
            if first.is_none() {
                first = Some((k, lhs, rhs));
            }
        }
    }
    let pm1 = T::from_u32(p - 1).expect("small integer");
    let psi0 = phi[0].powf(-pm1);
    let t_bound = if !(phi[0] > T::zero()) {
        None
    } else if k_alpha == T::zero() {
        Some(psi0 / (c_j * pm1))
    } else {
        let x = k_alpha * psi0 / c_j;
        (x < T::one()).then(|| -(-x).ln_1p() / (pm1 * k_alpha))
    };
    Ok(JensenReport {
        times: profiles.iter().map(|(t, _)| *t).collect(),
        phi,
        c_j,
        violations,
        first_violation: first,
        max_relative_slack: max_slack,
        t_bound,
        t_num: result.blowup_time(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
    /// Fewer than two rows blew up.
    Insufficient,
}

#[derive(Clone, Debug)]
pub struct SweepRow<T> {
    pub alpha: T,
    /// The run itself, or the error that stopped it.
    pub run: std::result::Result<SimulationResult<T>, Error>,
    pub t_num: Option<T>,
    /// `max_x u` at the probe time.
    pub max_at_probe: Option<ProbeValue<T>>,
}

impl<T: Real> SweepRow<T> {
    pub fn outcome_label(&self) -> &'static str {
        match &self.run {
            Ok(r) => r.outcome.label(),
            Err(Error::NumericalFailure { .. }) => "NumericalFailure",
            Err(_) => "Error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult<T> {
    pub rows: Vec<SweepRow<T>>,
    pub probe_time: Option<T>,
    /// Empirical direction of `T_num(α)` over the rows that blew up.
    pub t_num_trend: Trend,
    /// Direction of the probed maxima over the rows where they exist.
    pub max_trend: Trend,
}

fn trend<T: PartialOrd + Copy>(values: &[T]) -> Trend {
    if values.len() < 2 {
        return Trend::Insufficient;
    }
    let inc = values.windows(2).all(|w| w[0] < w[1]);
    let dec = values.windows(2).all(|w| w[0] > w[1]);
    let eq = values.windows(2).all(|w| w[0] == w[1]);
    match (inc, dec, eq) {
        (true, _, _) => Trend::Increasing,
        (_, true, _) => Trend::Decreasing,
        (_, _, true) => Trend::Constant,
        _ => Trend::Mixed,
    }
}

fn max_probe<T: Real>(res: &SimulationResult<T>, t: T) -> Option<ProbeValue<T>> {
    if let Some(s) = res.snapshot_at(t) {
        return Some(ProbeValue::Finite(s.u.max()));
    }
    match res.blowup_time() {
        Some(tb) if tb <= t => Some(ProbeValue::BlewUp(tb)),
        _ => None,
    }
}

/// One run per α (in parallel), rows in input order. The probe time is the
/// last configured snapshot time. No direction is assumed.
pub fn alpha_sweep<T: Real>(base: &SolverConfig<T>, alphas: &[T]) -> Result<SweepResult<T>> {
    if alphas.is_empty() {
        return Err(Error::invalid("alphas", "need at least one value"));
    }
    if alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("alphas", "must be strictly increasing"));
    }
    let probe_time = base.snapshot_times.last().copied();
    let rows: Vec<SweepRow<T>> = alphas
        .par_iter()
        .map(|&alpha| {
            let cfg = SolverConfig { alpha, ..base.clone() };
            let run = run_simulation(&cfg);
            let (t_num, max_at_probe) = match &run {
                Ok(r) => (r.blowup_time(), probe_time.and_then(|t| max_probe(r, t))),
                Err(_) => (None, None),
            };
            SweepRow {
                alpha,
                run,
                t_num,
                max_at_probe,
            }
        })
        .collect();
    let t_nums: Vec<T> = rows.iter().filter_map(|r| r.t_num).collect();
    let maxima: Vec<ProbeValue<T>> = rows.iter().filter_map(|r| r.max_at_probe).collect();
    Ok(SweepResult {
        t_num_trend: trend(&t_nums),
        max_trend: trend(&maxima),
        rows,
        probe_time,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingReport<T> {
    pub alpha: T,
    pub beta: T,
    pub times: Vec<T>,
    /// `u_α(t, 0)` and `u_β(t, 0)` at each time.
    pub alpha_values: Vec<ProbeValue<T>>,
    pub beta_values: Vec<ProbeValue<T>>,
    /// `u_α(t,0) < u_β(t,0)` at every requested time.
    pub max_ordering_holds: bool,
    /// α = β: identical runs, ordering only non-strict.
    pub equal: bool,
    /// First `(t, j)` where `u_α(t, x_j) > u_β(t, x_j)`.
    pub crossing: Option<(T, usize)>,
}

fn is_unimodal<T: Real>(u: &GridFunction<T>) -> bool {
    let v = u.values();
    v.iter().all(|x| *x >= T::zero()) && v.windows(2).all(|w| w[0] >= w[1])
}

/// Compares `β ≤ α` runs: the conjectured `u_α(t,0) < u_β(t,0)` and
/// whether the full profiles cross.
pub fn max_ordering_check<T: Real>(
    base: &SolverConfig<T>,
    alpha: T,
    beta: T,
    times: &[T],
) -> Result<OrderingReport<T>> {
    if !(beta <= alpha) {
        return Err(Error::invalid("beta", format!("need beta <= alpha, got beta = {beta}, alpha = {alpha}")));
    }
    if times.is_empty() {
        return Err(Error::invalid("times", "need at least one time"));
    }
    let grid = crate::spectral::make_grid(base.n)?;
    if !is_unimodal(&base.initial.sample(&grid)?) {
        return Err(Error::Precondition(
            "initial data must be nonnegative and nonincreasing on [0, π]".into(),
        ));
    }
    let mut snaps: Vec<T> = base.snapshot_times.iter().chain(times).copied().collect();
    snaps.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    snaps.dedup();
    let last = *snaps.last().expect("nonempty");
    let mk = |a: T| SolverConfig {
        alpha: a,
        snapshot_times: snaps.clone(),
        t_end: Some(base.t_end.map_or(last, |te| te.max(last))),
        ..base.clone()
    };
    let (ra, rb) = rayon::join(|| run_simulation(&mk(alpha)), || run_simulation(&mk(beta)));
    let (ra, rb) = (ra?, rb?);
    for r in [&ra, &rb] {
        if matches!(r.outcome, Outcome::NumericalFailure { .. } | Outcome::MaxStepsExceeded) && r.final_t < last {
            return Err(Error::NumericalFailure {
                t: r.final_t.to_f64_lossy(),
                message: format!("run stopped early with outcome {}", r.outcome.label()),
            });
        }
    }
    let mut alpha_values = Vec::new();
    let mut beta_values = Vec::new();
    let mut crossing = None;
    for &t in times {
        let missing = || Error::Precondition(format!("no profile available at t = {t}"));
        alpha_values.push(ra.probe(t, 0).ok_or_else(missing)?);
        beta_values.push(rb.probe(t, 0).ok_or_else(missing)?);
        if crossing.is_none() {
            if let (Some(sa), Some(sb)) = (ra.snapshot_at(t), rb.snapshot_at(t)) {
                crossing = sa
                    .u
                    .values()
                    .iter()
                    .zip(sb.u.values())
                    .position(|(a, b)| a > b)
                    .map(|j| (t, j));
            }
        }
    }
    let holds = alpha_values.iter().zip(&beta_values).all(|(a, b)| a < b);
    Ok(OrderingReport {
        alpha,
        beta,
        times: times.to_vec(),
        alpha_values,
        beta_values,
        max_ordering_holds: holds,
        equal: alpha == beta,
        crossing,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyRow<T> {
    pub amplitude: T,
    pub outcome: &'static str,
    pub t_num: Option<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyReport<T> {
    pub rows: Vec<DichotomyRow<T>>,
    /// `(largest surviving amplitude, smallest blown-up amplitude)` when
    /// the two classes separate.
    pub threshold_bracket: Option<(T, T)>,
    /// `p - 1 < 2α`: every positive solution should blow up.
    pub expects_universal_blowup: bool,
}

/// Runs the base data scaled by each amplitude up to `t_end`.
pub fn dichotomy_scan<T: Real>(base: &SolverConfig<T>, amplitudes: &[T]) -> Result<DichotomyReport<T>> {
    if base.t_end.is_none() {
        return Err(Error::invalid("t_end", "a dichotomy scan needs a final time"));
    }
    let rows: Vec<DichotomyRow<T>> = amplitudes
        .par_iter()
        .map(|&a| {
            let cfg = SolverConfig {
                initial: base.initial.scaled(a),
                ..base.clone()
            };
            match run_simulation(&cfg) {
                Ok(r) => DichotomyRow {
                    amplitude: a,
                    outcome: r.outcome.label(),
                    t_num: r.blowup_time(),
                },
                Err(e) => {
                    log::warn!("amplitude {a}: {e}");
                    DichotomyRow {
                        amplitude: a,
                        outcome: "Error",
                        t_num: None,
                    }
                }
            }
        })
        .collect();
    let survived = rows
        .iter()
        .filter(|r| r.outcome == "ReachedTEnd")
        .map(|r| r.amplitude)
        .fold(None, |m: Option<T>, a| Some(m.map_or(a, |m| m.max(a))));
    let blew = rows
        .iter()
        .filter(|r| r.t_num.is_some())
        .map(|r| r.amplitude)
        .fold(None, |m: Option<T>, a| Some(m.map_or(a, |m| m.min(a))));
    let threshold_bracket = match (survived, blew) {
        (Some(s), Some(b)) if s < b => Some((s, b)),
        _ => None,
    };
    let pm1 = T::from_u32(base.p - 1).expect("small integer");
    Ok(DichotomyReport {
        rows,
        threshold_bracket,
        expects_universal_blowup: pm1 < base.alpha + base.alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use crate::timestepper::InitialData;
    use std::f64::consts::PI;

    #[test]
    fn inner_product_of_trig_polynomials() {
        let g = make_grid::<f64>(32).unwrap();
        let one = GridFunction::constant(&g, 1.0).unwrap();
        assert!((inner_product(&one, &one).unwrap() - 2.0 * PI).abs() < 1e-13);
        let c = GridFunction::from_fn(&g, f64::cos).unwrap();
        assert!((inner_product(&c, &c).unwrap() - PI).abs() < 1e-13);
        assert!(inner_product(&c, &one).unwrap().abs() < 1e-13);
    }

    #[test]
    fn levine_examples() {
        let g = make_grid::<f64>(64).unwrap();
        let b = 1.5;
        let r = levine_check(&GridFunction::constant(&g, b).unwrap(), 0.7, 2).unwrap();
        assert!(r.quad_value.abs() < 1e-13);
        assert!((r.g_value - 2.0 * PI * b.powi(3) / 3.0).abs() < 1e-12);
        assert!(r.predicts_blowup);

        let eps = 0.1;
        let r = levine_check(&GridFunction::from_fn(&g, |x| eps * x.cos()).unwrap(), 0.5, 2).unwrap();
        assert!(r.g_value.abs() < 1e-14);
        assert!((r.quad_value - eps * eps * PI / 2.0).abs() < 1e-13);
        assert!(!r.predicts_blowup);

        for &a in &[0.3, 0.5, 1.2] {
            let r = levine_check(&GridFunction::from_fn(&g, |x| x.cos() + 1.0).unwrap(), a, 2).unwrap();
            assert!((r.g_value - 5.0 * PI / 3.0).abs() < 1e-12);
            assert!((r.quad_value - PI / 2.0).abs() < 1e-12);
            assert!(r.predicts_blowup);
        }
    }

    #[test]
    fn eigen_pair_validation() {
        let g = make_grid::<f64>(16).unwrap();
        let p = EigenPair::periodic(&g);
        assert!((p.jensen_constant(2).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(EigenPair::new(0.0, GridFunction::constant(&g, 2.0).unwrap()).is_ok());
        assert!(EigenPair::new(1.0, GridFunction::constant(&g, 2.0).unwrap()).is_err());
        assert!(EigenPair::new(0.0, GridFunction::from_fn(&g, f64::cos).unwrap()).is_err());
    }

    #[test]
    fn jensen_tight_for_constants() {
        let mut cfg = SolverConfig::new(0.5, InitialData::Constant { b: 0.5 });
        cfg.operator_enabled = false;
        cfg.n = 8;
        cfg.t_end = Some(0.2);
        cfg.snapshot_times = (0..200).map(|k| k as f64 * 1e-3).collect();
        let res = run_simulation(&cfg).unwrap();
        let pair = EigenPair::periodic(&res.initial.grid().clone());
        let rep = jensen_projection_trace(&res, &pair, 0.5, 2, 1e-8).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_relative_slack.abs() < 1e-6, "{}", rep.max_relative_slack);
        // φ(0) = π, c_J = 1/(2π): bound 2, the exact blow-up time 1/0.5
        assert!((rep.t_bound.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jensen_refuses_negative_profiles() {
        let mut cfg = SolverConfig::new(0.5, InitialData::CosPlusConst { a: 1.0, b: 0.0 });
        cfg.n = 8;
        cfg.t_end = Some(0.01);
        let res = run_simulation(&cfg).unwrap();
        let pair = EigenPair::periodic(res.initial.grid());
        assert!(matches!(
            jensen_projection_trace(&res, &pair, 0.5, 2, 1e-8),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn sweep_single_row_matches_direct_run() {
        let mut cfg = SolverConfig::new(0.5, InitialData::CosPlusConst { a: 1.0, b: 1.0 });
        cfg.n = 16;
        cfg.t_end = Some(0.1);
        cfg.snapshot_times = vec![0.1];
        let sweep = alpha_sweep(&cfg, &[0.5]).unwrap();
        let direct = run_simulation(&cfg).unwrap();
        assert_eq!(sweep.rows.len(), 1);
        assert_eq!(sweep.rows[0].run.as_ref().unwrap(), &direct);
        assert!(alpha_sweep(&cfg, &[0.6, 0.5]).is_err());
    }

    #[test]
    fn sweep_without_operator_is_alpha_independent() {
        let mut cfg = SolverConfig::new(0.5f64, InitialData::Constant { b: 2.0 });
        cfg.operator_enabled = false;
        cfg.n = 8;
        let sweep = alpha_sweep(&cfg, &[0.3, 0.5, 0.9]).unwrap();
        let t0 = sweep.rows[0].t_num.unwrap();
        assert!(sweep.rows.iter().all(|r| (r.t_num.unwrap() - t0).abs() <= 1e-12));
        assert_eq!(sweep.t_num_trend, Trend::Constant);
    }

    #[test]
    fn ordering_equal_alphas() {
        let mut cfg = SolverConfig::new(0.5, InitialData::CosPlusConst { a: 1.0, b: 1.0 });
        cfg.n = 16;
        let rep = max_ordering_check(&cfg, 0.6, 0.6, &[0.05]).unwrap();
        assert!(rep.equal);
        assert!(!rep.max_ordering_holds);
        assert!(rep.crossing.is_none());
        assert!(max_ordering_check(&cfg, 0.5, 0.6, &[0.05]).is_err());
    }

    #[test]
    fn dichotomy_zero_amplitude_and_ode() {
        let mut cfg = SolverConfig::new(0.5f64, InitialData::Constant { b: 1.0 });
        cfg.operator_enabled = false;
        cfg.n = 4;
        cfg.t_end = Some(1.0);
        let rep = dichotomy_scan(&cfg, &[0.0, 5.0]).unwrap();
        assert_eq!(rep.rows[0].outcome, "ReachedTEnd");
        assert!((rep.rows[1].t_num.unwrap() - 0.2).abs() < 5e-3);
        assert_eq!(rep.threshold_bracket, Some((0.0, 5.0)));
        cfg.t_end = None;
        assert!(dichotomy_scan(&cfg, &[1.0]).is_err());
    }
}
