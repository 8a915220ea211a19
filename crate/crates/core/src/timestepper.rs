//! Explicit and implicit marching with the adaptive step
//! `τ_m = min(τ_0, c / max|u^m|)`, blow-up detection and snapshotting.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::spectral::{
    apply_frac_power_spectral, apply_implicit_resolvent, apply_operator, assemble_t, make_grid,
    synthesize, CosineSpectrum, FractionalOperator, Grid, GridFunction,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `u^{m+1} = u^m + τ(T u^m + (u^m)^p)`.
    Explicit,
    /// `u^{m+1} = (1 + τA^α)^{-1}(u^m + τ(u^m)^p)`.
    Implicit,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialData<T> {
    /// `a cos x + b`.
    CosPlusConst { a: T, b: T },
    Constant { b: T },
    /// Raw cosine coefficients `γ_0, γ_1, …`.
    Modes(Vec<T>),
}

impl<T: Real> InitialData<T> {
    pub fn sample(&self, grid: &Grid<T>) -> Result<GridFunction<T>> {
        match self {
            Self::CosPlusConst { a, b } => GridFunction::from_fn(grid, |x| *a * x.cos() + *b),
            Self::Constant { b } => GridFunction::constant(grid, *b),
            Self::Modes(g) => {
                if g.is_empty() || g.len() > grid.len() {
                    return Err(Error::invalid(
                        "initial.modes",
                        format!("need between 1 and N+1 = {} coefficients, got {}", grid.len(), g.len()),
                    ));
                }
                let mut coeffs = g.clone();
                coeffs.resize(grid.len(), T::zero());
                Ok(synthesize(&CosineSpectrum::new(grid.clone(), coeffs)?))
            }
        }
    }

    /// The same profile multiplied by `k`.
    pub fn scaled(&self, k: T) -> Self {
        match self {
            Self::CosPlusConst { a, b } => Self::CosPlusConst { a: *a * k, b: *b * k },
            Self::Constant { b } => Self::Constant { b: *b * k },
            Self::Modes(g) => Self::Modes(g.iter().map(|x| *x * k).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub alpha: T,
    pub n: usize,
    pub p: u32,
    pub tau0: T,
    pub c: T,
    pub scheme: Scheme,
    pub initial: InitialData<T>,
    pub u_stop: T,
    pub t_end: Option<T>,
    pub max_steps: usize,
    pub snapshot_times: Vec<T>,
    /// Keep every k-th step record (the last step is always kept).
    pub record_every: usize,
    /// Test hooks: drop the diffusion or the reaction term.
    pub operator_enabled: bool,
    pub reaction_enabled: bool,
}

impl<T: Real> SolverConfig<T> {
    /// Defaults: N = 100, p = 2, τ_0 = 1e-3, c = τ_0, U_stop = 1e8, explicit.
    pub fn new(alpha: T, initial: InitialData<T>) -> Self {
        let tau0 = T::lit(1e-3);
        Self {
            alpha,
            n: 100,
            p: 2,
            tau0,
            c: tau0,
            scheme: Scheme::Explicit,
            initial,
            u_stop: T::lit(1e8),
            t_end: None,
            max_steps: 10_000_000,
            snapshot_times: Vec::new(),
            record_every: 1,
            operator_enabled: true,
            reaction_enabled: true,
        }
    }

    /// Checks the configuration; returns warnings that do not prevent a run.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if self.alpha <= T::lit(0.25) {
            warnings.push(format!(
                "alpha = {} is at or below 1/4, where the local existence theory for this equation is not available",
                self.alpha
            ));
        }
        if self.n < 2 {
            return Err(Error::invalid("N", format!("need N >= 2, got {}", self.n)));
        }
        if self.p < 2 {
            return Err(Error::invalid("p", format!("need p >= 2, got {}", self.p)));
        }
        if !(self.tau0 > T::zero()) || !self.tau0.is_finite() {
            return Err(Error::invalid("tau0", format!("must be positive, got {}", self.tau0)));
        }
        if !(self.c > T::zero()) || !self.c.is_finite() {
            return Err(Error::invalid("c", format!("must be positive, got {}", self.c)));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps", "must be at least 1"));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every", "must be at least 1"));
        }
        if let Some(t) = self.t_end {
            if !(t > T::zero()) || !t.is_finite() {
                return Err(Error::invalid("t_end", format!("must be positive, got {t}")));
            }
        }
        for w in self.snapshot_times.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::invalid("snapshot_times", "must be strictly increasing"));
            }
        }
        if let Some(t) = self.snapshot_times.first() {
            if !(*t >= T::zero()) {
                return Err(Error::invalid("snapshot_times", format!("must be nonnegative, got {t}")));
            }
        }
        let u0 = self.initial.sample(&make_grid(self.n)?)?;
        if !(self.u_stop > u0.max()) || !self.u_stop.is_finite() {
            return Err(Error::invalid(
                "u_stop",
                format!("must exceed the initial maximum {}, got {}", u0.max(), self.u_stop),
            ));
        }
        Ok(warnings)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord<T> {
    pub step: usize,
    /// Time after the step.
    pub t: T,
    /// Step size used to reach `t` (0 for the initial record).
    pub tau: T,
    pub max_u: T,
    pub argmax_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<T> {
    pub t: T,
    pub u: GridFunction<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    /// `max u ≥ U_stop` after the step ending at `t_num = Σ τ_m`.
    /// `tail_hint` is the remaining time the pure ODE `u' = u^p` would
    /// need from `U_stop`, `U_stop^{1-p}/(p-1)`.
    BlewUp { t_num: T, tail_hint: T },
    ReachedTEnd,
    MaxStepsExceeded,
    NumericalFailure { t: T, message: String },
}

impl<T> Outcome<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::BlewUp { .. } => "BlewUp",
            Outcome::ReachedTEnd => "ReachedTEnd",
            Outcome::MaxStepsExceeded => "MaxStepsExceeded",
            Outcome::NumericalFailure { .. } => "NumericalFailure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult<T> {
    pub records: Vec<StepRecord<T>>,
    pub outcome: Outcome<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub initial: GridFunction<T>,
    /// Last finite state and its time.
    pub final_state: GridFunction<T>,
    pub final_t: T,
    pub steps: usize,
}

/// A quantity probed at a fixed time, where the run may already have
/// blown up. Ordered so that any blow-up exceeds every finite value and
/// an earlier blow-up exceeds a later one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbeValue<T> {
    Finite(T),
    BlewUp(T),
}

impl<T: Real> PartialOrd for ProbeValue<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.partial_cmp(b),
            (Self::BlewUp(a), Self::BlewUp(b)) => b.partial_cmp(a),
            (Self::BlewUp(_), Self::Finite(_)) => Some(Ordering::Greater),
            (Self::Finite(_), Self::BlewUp(_)) => Some(Ordering::Less),
        }
    }
}

impl<T: Real> ProbeValue<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            Self::Finite(v) => Some(*v),
            Self::BlewUp(_) => None,
        }
    }

    /// True when `self > other` by more than `margin` (always true
    /// between distinct blow-up/finite kinds or distinct blow-up times).
    pub fn exceeds_by(&self, other: &Self, margin: T) -> bool {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => *a - *b > margin,
            _ => self > other,
        }
    }
}

impl<T: Real> std::fmt::Display for ProbeValue<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::BlewUp(t) => write!(f, "blew up at t = {t}"),
        }
    }
}

impl<T: Real> SimulationResult<T> {
    pub fn blowup_time(&self) -> Option<T> {
        match self.outcome {
            Outcome::BlewUp { t_num, .. } => Some(t_num),
            _ => None,
        }
    }

    pub fn snapshot_at(&self, t: T) -> Option<&Snapshot<T>> {
        let tol = T::lit(1e-12) * (T::one() + t.abs());
        self.snapshots.iter().find(|s| (s.t - t).abs() <= tol)
    }

    /// `u(t, x_j)` from the snapshot at `t`, or the blow-up time if the run
    /// crossed `U_stop` before `t`. `None` if neither applies.
    pub fn probe(&self, t: T, j: usize) -> Option<ProbeValue<T>> {
        if let Some(s) = self.snapshot_at(t) {
            return s.u.values().get(j).map(|v| ProbeValue::Finite(*v));
        }
        match self.blowup_time() {
            Some(tb) if tb <= t => Some(ProbeValue::BlewUp(tb)),
            _ => None,
        }
    }
}

pub fn adaptive_tau<T: Real>(u: &GridFunction<T>, tau0: T, c: T) -> T {
    let m = u.max_abs();
    if m == T::zero() {
        return tau0;
    }
    tau0.min(c / m)
}

fn non_finite(what: &str) -> Error {
    Error::NumericalFailure {
        t: f64::NAN,
        message: format!("{what} produced a non-finite value"),
    }
}

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(Error::invalid("tau", format!("must be positive, got {tau}")));
    }
    Ok(())
}

/// `u + τ(T u + u^p)`; `None` drops the corresponding term.
pub fn step_explicit<T: Real>(
    u: &GridFunction<T>,
    op: Option<&FractionalOperator<T>>,
    p: Option<u32>,
    tau: T,
) -> Result<GridFunction<T>> {
    check_tau(tau)?;
    let mut out = u.values().to_vec();
    if let Some(op) = op {
        let tu = apply_operator(op, u)?;
        for (o, d) in out.iter_mut().zip(tu.values()) {
            *o += tau * *d;
        }
    }
    if let Some(p) = p {
        for (o, v) in out.iter_mut().zip(u.values()) {
            *o += tau * v.powi(p as i32);
        }
    }
    let out = GridFunction::from_raw(u.grid().clone(), out);
    if !out.is_finite() {
        return Err(non_finite("explicit step"));
    }
    Ok(out)
}

/// `(1 + τA^α)^{-1}(u + τu^p)`; `None` drops the corresponding term.
pub fn step_implicit<T: Real>(u: &GridFunction<T>, alpha: Option<T>, p: Option<u32>, tau: T) -> Result<GridFunction<T>> {
    check_tau(tau)?;
    let rhs = match p {
        Some(p) => u.map(|v| v + tau * v.powi(p as i32)),
        None => u.clone(),
    };
    if !rhs.is_finite() {
        return Err(non_finite("implicit step"));
    }
    let out = match alpha {
        Some(a) => apply_implicit_resolvent(&rhs, a, tau)?,
        None => rhs,
    };
    if !out.is_finite() {
        return Err(non_finite("implicit step"));
    }
    Ok(out)
}

/// Runs one configuration to blow-up, `t_end`, or the step cap.
pub fn run_simulation<T: Real>(config: &SolverConfig<T>) -> Result<SimulationResult<T>> {
    for w in config.validate()? {
        log::warn!("{w}");
    }
    let grid = make_grid(config.n)?;
    let op = match (config.scheme, config.operator_enabled) {
        (Scheme::Explicit, true) => {
            let nn = T::from_usize_lossy(config.n);
            let growth = config.tau0 * nn.powf(config.alpha + config.alpha);
            if growth > T::lit(2.0) {
                return Err(Error::NumericalFailure {
                    t: 0.0,
                    message: format!(
                        "explicit scheme unstable: tau0 * N^(2 alpha) = {growth} > 2; use the implicit scheme or a smaller tau0"
                    ),
                });
            }
            Some(assemble_t(&grid, config.alpha)?)
        }
        _ => None,
    };
    let p = config.reaction_enabled.then_some(config.p);
    let alpha = config.operator_enabled.then_some(config.alpha);

    let u0 = config.initial.sample(&grid)?;
    let mut u = u0.clone();
    let mut t = T::zero();
    let mut records = vec![StepRecord {
        step: 0,
        t,
        tau: T::zero(),
        max_u: u.max(),
        argmax_index: u.argmax(),
    }];
    let mut snapshots = Vec::new();
    let mut pending = config.snapshot_times.iter().copied().peekable();
    while let Some(ts) = pending.peek() {
        if *ts == T::zero() {
            snapshots.push(Snapshot { t: *ts, u: u.clone() });
            pending.next();
        } else {
            break;
        }
    }

    let mut step = 0usize;
    let outcome = loop {
        if let Some(te) = config.t_end {
            if t >= te {
                break Outcome::ReachedTEnd;
            }
        }
        if step >= config.max_steps {
            break Outcome::MaxStepsExceeded;
        }
        let tau = adaptive_tau(&u, config.tau0, config.c);
        let next = match config.scheme {
            Scheme::Explicit => step_explicit(&u, op.as_ref(), p, tau),
            Scheme::Implicit => step_implicit(&u, alpha, p, tau),
        };
        let next = match next {
            Ok(v) => v,
            Err(Error::NumericalFailure { message, .. }) => {
                break Outcome::NumericalFailure { t, message };
            }
            Err(e) => return Err(e),
        };
        let t_next = t + tau;
        step += 1;
        while let Some(ts) = pending.peek() {
            if *ts > t_next {
                break;
            }
            let w = (*ts - t) / tau;
            let interp = u.lin_comb(T::one() - w, &next, w)?;
            snapshots.push(Snapshot { t: *ts, u: interp });
            pending.next();
        }
        u = next;
        t = t_next;
        let max_u = u.max();
        let blew_up = max_u >= config.u_stop;
        let at_end = config.t_end.is_some_and(|te| t >= te);
        if step.is_multiple_of(config.record_every) || blew_up || at_end || step >= config.max_steps {
            records.push(StepRecord {
                step,
                t,
                tau,
                max_u,
                argmax_index: u.argmax(),
            });
        }
        if blew_up {
            let pm1 = T::from_u32(config.p - 1).expect("small integer");
            break Outcome::BlewUp {
                t_num: t,
                tail_hint: config.u_stop.powf(-pm1) / pm1,
            };
        }
    };
    Ok(SimulationResult {
        records,
        outcome,
        snapshots,
        initial: u0,
        final_state: u,
        final_t: t,
        steps: step,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneReport<T> {
    /// Profiles compared, in time order: the initial state, the stored
    /// snapshots, then the final state.
    pub times: Vec<T>,
    pub nondecreasing: bool,
    /// `(k, j, u(t_k, x_j) - u(t_{k+1}, x_j))` for the largest decrease.
    pub worst_violation: Option<(usize, usize, T)>,
    /// `min_j (-A^α u_0 + u_0^p)(x_j)`.
    pub initial_residual_min: T,
    pub initial_condition_holds: bool,
}

pub const MONOTONE_TOL: f64 = 1e-9;

/// Checks `u(t_k) ≤ u(t_{k+1}) + 1e-9` along the stored profiles and
/// evaluates the sufficient condition `-A^α u_0 + u_0^p ≥ 0` on the grid.
pub fn monotone_time_check<T: Real>(result: &SimulationResult<T>, config: &SolverConfig<T>) -> Result<MonotoneReport<T>> {
    let mut profiles: Vec<(T, &GridFunction<T>)> = vec![(T::zero(), &result.initial)];
    for s in &result.snapshots {
        if s.t > T::zero() && s.t < result.final_t {
            profiles.push((s.t, &s.u));
        }
    }
    if result.final_t > T::zero() {
        profiles.push((result.final_t, &result.final_state));
    }
    if profiles.len() < 2 {
        return Err(Error::Precondition("need at least two profiles at distinct times".into()));
    }
    let tol = T::lit(MONOTONE_TOL);
    let mut worst: Option<(usize, usize, T)> = None;
    for (k, w) in profiles.windows(2).enumerate() {
        for (j, (a, b)) in w[0].1.values().iter().zip(w[1].1.values()).enumerate() {
            let drop = *a - *b;
            if drop > tol && worst.is_none_or(|(_, _, d)| drop > d) {
                worst = Some((k, j, drop));
            }
        }
    }
    let u0 = &result.initial;
    let a_u0 = if config.operator_enabled {
        apply_frac_power_spectral(u0, config.alpha)?
    } else {
        u0.map(|_| T::zero())
    };
    let residual_min = u0
        .values()
        .iter()
        .zip(a_u0.values())
        .map(|(u, a)| {
            let reaction = if config.reaction_enabled {
                u.powi(config.p as i32)
            } else {
                T::zero()
            };
            reaction - *a
        })
        .fold(T::infinity(), T::min);
    Ok(MonotoneReport {
        times: profiles.iter().map(|(t, _)| *t).collect(),
        nondecreasing: worst.is_none(),
        worst_violation: worst,
        initial_residual_min: residual_min,
        initial_condition_holds: residual_min >= -tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid<f64> {
        make_grid(n).unwrap()
    }

    #[test]
    fn adaptive_tau_examples() {
        let g = grid(8);
        let one = GridFunction::constant(&g, 1.0).unwrap();
        assert_eq!(adaptive_tau(&one, 1e-3, 1e-3), 1e-3);
        let big = GridFunction::constant(&g, 1e6).unwrap();
        assert_eq!(adaptive_tau(&big, 1e-3, 1.0), 1e-6);
        let two = GridFunction::constant(&g, 2.0).unwrap();
        assert_eq!(adaptive_tau(&two, 1e-3, 1e-3), 5e-4);
        let zero = GridFunction::constant(&g, 0.0).unwrap();
        assert_eq!(adaptive_tau(&zero, 1e-3, 1e-3), 1e-3);
    }

    #[test]
    fn explicit_step_examples() {
        let g = grid(16);
        let one = GridFunction::constant(&g, 1.0).unwrap();
        let v = step_explicit(&one, None, Some(2), 0.1).unwrap();
        assert!(v.values().iter().all(|x| (x - 1.1).abs() < 1e-15));

        let op = assemble_t(&g, 1.0).unwrap();
        let c = GridFunction::from_fn(&g, f64::cos).unwrap();
        let v = step_explicit(&c, Some(&op), None, 0.01).unwrap();
        assert!(v.max_abs_diff(&c.map(|y| 0.99 * y)) < 1e-13);

        assert!(step_explicit(&one, None, Some(2), 0.0).is_err());
        let huge = GridFunction::constant(&g, 1e200).unwrap();
        assert!(matches!(step_explicit(&huge, None, Some(2), 1.0), Err(Error::NumericalFailure { .. })));
    }

    #[test]
    fn implicit_step_examples() {
        let g = grid(16);
        let one = GridFunction::constant(&g, 1.0).unwrap();
        let v = step_implicit(&one, Some(0.7), Some(2), 0.1).unwrap();
        assert!(v.values().iter().all(|x| (x - 1.1).abs() < 1e-14));
        for &a in &[0.3, 0.9, 1.3] {
            let c = GridFunction::from_fn(&g, f64::cos).unwrap();
            let v = step_implicit(&c, Some(a), None, 1.0).unwrap();
            assert!(v.max_abs_diff(&c.map(|y| y / 2.0)) < 1e-14);
        }
    }

    #[test]
    fn probe_ordering() {
        let f1 = ProbeValue::Finite(1.0);
        let f2 = ProbeValue::Finite(2.0);
        let b_early = ProbeValue::BlewUp(0.5);
        let b_late = ProbeValue::BlewUp(0.55);
        assert!(f2 > f1);
        assert!(b_late > f2);
        assert!(b_early > b_late);
        assert!(f2.exceeds_by(&f1, 0.5));
        assert!(!f2.exceeds_by(&f1, 1.5));
        assert!(b_late.exceeds_by(&f2, 1e9));
    }

    #[test]
    fn initial_data_descriptors() {
        let g = grid(8);
        let u = InitialData::CosPlusConst { a: 1.0, b: 1.0 }.sample(&g).unwrap();
        assert!((u.values()[0] - 2.0).abs() < 1e-15 && u.values()[8].abs() < 1e-15);
        let u = InitialData::Modes(vec![1.0, 1.0]).sample(&g).unwrap();
        assert!((u.values()[0] - 2.0).abs() < 1e-15);
        assert!(InitialData::Modes(vec![1.0; 10]).sample(&g).is_err());
        assert_eq!(
            InitialData::Constant { b: 2.0 }.scaled(3.0),
            InitialData::Constant { b: 6.0 }
        );
    }

    #[test]
    fn config_validation() {
        let base = SolverConfig::new(0.5, InitialData::Constant { b: 1.0 });
        assert!(base.validate().unwrap().is_empty());
        let mut c = base.clone();
        c.alpha = -1.0;
        assert!(matches!(c.validate(), Err(Error::InvalidParameter { name: "alpha", .. })));
        let mut c = base.clone();
        c.alpha = 0.2;
        assert_eq!(c.validate().unwrap().len(), 1);
        let mut c = base.clone();
        c.u_stop = 0.5;
        assert!(matches!(c.validate(), Err(Error::InvalidParameter { name: "u_stop", .. })));
        let mut c = base.clone();
        c.snapshot_times = vec![0.5, 0.1];
        assert!(c.validate().is_err());
        let mut c = base;
        c.c = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn stability_guard() {
        let mut c = SolverConfig::new(1.3, InitialData::CosPlusConst { a: 1.0, b: 1.0 });
        c.t_end = Some(0.01);
        assert!(matches!(run_simulation(&c), Err(Error::NumericalFailure { .. })));
        c.scheme = Scheme::Implicit;
        assert!(run_simulation(&c).is_ok());
    }

    #[test]
    fn pure_ode_blowup_closed_form() {
        // With τ = c/u the explicit Euler map is u ← u(1 + c) once u ≥ 1,
        // so T_num = τ_0 Σ … has the closed form below.
        let mut cfg = SolverConfig::new(0.5, InitialData::Constant { b: 1.0 });
        cfg.operator_enabled = false;
        cfg.record_every = 1000;
        let res = run_simulation(&cfg).unwrap();
        let c: f64 = 1e-3;
        let steps = ((1e8f64).ln() / (1.0 + c).ln()).ceil() as i32;
        let expect = (1.0 + c) * (1.0 - (1.0 + c).powi(-steps));
        let t = res.blowup_time().unwrap();
        assert_eq!(res.steps, steps as usize);
        assert!((t - expect).abs() < 1e-9, "{t} vs {expect}");
        assert!(res.records.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn snapshots_interpolate_and_step_rule_holds() {
        let mut cfg = SolverConfig::new(0.6, InitialData::CosPlusConst { a: 1.0, b: 1.0 });
        cfg.n = 16;
        cfg.t_end = Some(0.05);
        cfg.snapshot_times = vec![0.0, 0.0105, 0.03];
        let res = run_simulation(&cfg).unwrap();
        assert_eq!(res.outcome, Outcome::ReachedTEnd);
        assert_eq!(res.snapshots.len(), 3);
        let mut prev_max = res.initial.max_abs();
        for r in &res.records[1..] {
            assert_eq!(r.tau, 1e-3f64.min(1e-3 / prev_max));
            prev_max = r.max_u;
        }
        let rep = monotone_time_check(&res, &cfg).unwrap();
        assert!(rep.nondecreasing && rep.initial_condition_holds);
        assert!(rep.initial_residual_min > 0.7);
    }
}
