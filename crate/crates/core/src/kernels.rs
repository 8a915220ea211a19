//! Green's-function resolvents `(λ + A)^{-1}` for `A = -d²/dx²` on the
//! whole line, the 2π-periodic circle and `[0, 1]` with Dirichlet or
//! Neumann conditions, plus the singular-integral form of `A^α` on the line.
//!
//! The kernels are the continuum ones, `e^{-√λ|x-y|}/(2√λ)` and their
//! image sums, with `√λ|x-y|` replaced by `θ|i-j|`, `θ = 2 asinh(√λ h/2)`,
//! and `2√λ` by `2√λ cosh(θ/2)`. The resulting sums are the exact inverses
//! of `λ` plus the three-point difference Laplacian on the sample grid: they
//! keep the continuum kernel's symmetry and positivity, satisfy the
//! resolvent identity to rounding, and behave like `1/λ` for large λ. The
//! price is the O(h²) symbol error `n² - (2 sin(nh/2)/h)²` of the lattice
//! Laplacian.

use crate::error::{Error, Result};
use crate::fracpow::ResolventMap;
use crate::real::{CompensatedSum, Real};
use crate::spectral::{Grid, GridFunction};
use crate::special::{gamma, zeta};

const DECAY_TOL: f64 = 1e-8;

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_len<T>(dim: usize, v: &[T]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(())
}

/// Decay rate θ and normalization `1/(2√λ cosh(θ/2))` for spacing h.
fn lattice_params<T: Real>(lambda: T, h: T) -> (T, T) {
    let z = lambda.sqrt() * h / T::lit(2.0);
    let theta = T::lit(2.0) * z.asinh();
    // cosh(asinh z) = √(1 + z²)
    let norm = T::one() / (T::lit(2.0) * lambda.sqrt() * (T::one() + z * z).sqrt());
    (theta, norm)
}

/// `r^k = e^{-kθ}` for `k = 0..=kmax`.
fn powers<T: Real>(theta: T, kmax: usize) -> Vec<T> {
    (0..=kmax).map(|k| (-theta * T::from_usize_lossy(k)).exp()).collect()
}

/// Truncated line `[-L, L]` split into M intervals, `x_i = -L + i·2L/M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WholeLine<T> {
    half_width: T,
    intervals: usize,
}

impl<T: Real> WholeLine<T> {
    pub fn new(half_width: T, intervals: usize) -> Result<Self> {
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::invalid("L", format!("must be positive, got {half_width}")));
        }
        if intervals < 2 {
            return Err(Error::invalid("M", format!("need at least 2 intervals, got {intervals}")));
        }
        Ok(Self {
            half_width,
            intervals,
        })
    }

    /// L = 10, M = 400.
    pub fn standard() -> Self {
        Self {
            half_width: T::lit(10.0),
            intervals: 400,
        }
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn h(&self) -> T {
        (self.half_width + self.half_width) / T::from_usize_lossy(self.intervals)
    }

    pub fn nodes(&self) -> Vec<T> {
        let h = self.h();
        (0..=self.intervals)
            .map(|i| -self.half_width + h * T::from_usize_lossy(i))
            .collect()
    }

    pub fn sample(&self, f: impl Fn(T) -> T) -> Vec<T> {
        self.nodes().into_iter().map(f).collect()
    }

    /// Kernel value `K(x_i, x_j)`; the resolvent is `Σ_j h K(x_i, x_j) v_j`.
    pub fn kernel(&self, lambda: T, i: usize, j: usize) -> T {
        let (theta, norm) = lattice_params(lambda, self.h());
        norm * (-theta * T::from_usize_lossy(i.abs_diff(j))).exp()
    }

    fn warn_decay(&self, v: &[T], what: &str) {
        let edge = v[0].abs().max(v[v.len() - 1].abs());
        if edge.to_f64_lossy() > DECAY_TOL {
            log::warn!(
                "{what}: |v(±L)| = {edge:e} exceeds {DECAY_TOL:e}; truncation at L = {} is not justified",
                self.half_width
            );
        }
    }

    /// `(λ + A)^{-1} v` in O(M) by forward and backward geometric sweeps.
    pub fn apply(&self, lambda: T, v: &[T]) -> Result<Vec<T>> {
        check_lambda(lambda)?;
        check_len(self.intervals + 1, v)?;
        self.warn_decay(v, "whole-line resolvent");
        let h = self.h();
        let (theta, norm) = lattice_params(lambda, h);
        let r = (-theta).exp();
        let n = v.len();
        let mut fwd = vec![T::zero(); n];
        let mut acc = T::zero();
        for i in 0..n {
            acc = v[i] + r * acc;
            fwd[i] = acc;
        }
        let mut out = vec![T::zero(); n];
        acc = T::zero();
        for i in (0..n).rev() {
            acc = v[i] + r * acc;
            out[i] = h * norm * (fwd[i] + acc - v[i]);
        }
        Ok(out)
    }
}

impl<T: Real> ResolventMap<T> for WholeLine<T> {
    fn dim(&self) -> usize {
        self.intervals + 1
    }

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        self.apply(lambda, u)
    }

    fn positivity_preserving(&self) -> bool {
        true
    }
}

/// Resolvent of the 2π-periodic Laplacian restricted to even functions,
/// sampled on the cosine grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicKernel<T> {
    grid: Grid<T>,
}

impl<T: Real> PeriodicKernel<T> {
    pub fn new(grid: Grid<T>) -> Self {
        Self { grid }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    /// Circular kernel `c_k`, `k = 0..=2N`.
    fn circular(&self, lambda: T) -> Vec<T> {
        let n2 = 2 * self.grid.n();
        let (theta, norm) = lattice_params(lambda, self.grid.h());
        let rk = powers(theta, n2);
        let denom = -(-theta * T::from_usize_lossy(n2)).exp_m1();
        (0..=n2).map(|k| norm * (rk[k] + rk[n2 - k]) / denom).collect()
    }

    /// Periodic kernel `K(x_i, x_j)` between two points of the full period.
    pub fn kernel(&self, lambda: T, i: usize, j: usize) -> T {
        self.circular(lambda)[i.abs_diff(j) % (2 * self.grid.n())]
    }

    /// Folded kernel acting on even samples: `out_i = Σ_j M_ij v_j`.
    pub fn folded_matrix(&self, lambda: T) -> Vec<Vec<T>> {
        let n = self.grid.n();
        let h = self.grid.h();
        let c = self.circular(lambda);
        (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| {
                        let w = if j == 0 || j == n { T::lit(0.5) } else { T::one() };
                        w * h * (c[i.abs_diff(j)] + c[i + j])
                    })
                    .collect()
            })
            .collect()
    }

    pub fn apply(&self, lambda: T, v: &[T]) -> Result<Vec<T>> {
        Ok(self.apply_block(lambda, std::slice::from_ref(&v.to_vec()))?.swap_remove(0))
    }

    /// [`apply`](Self::apply) on several vectors with one kernel build.
    pub fn apply_block(&self, lambda: T, vs: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        check_lambda(lambda)?;
        for v in vs {
            check_len(self.grid.len(), v)?;
        }
        let m = self.folded_matrix(lambda);
        Ok(vs
            .iter()
            .map(|v| {
                m.iter()
                    .map(|row| {
                        let mut acc = CompensatedSum::new();
                        for (a, x) in row.iter().zip(v) {
                            acc.add(*a * *x);
                        }
                        acc.value()
                    })
                    .collect()
            })
            .collect())
    }

    /// Symbol of the lattice Laplacian on `cos(kx)`: `(2 sin(kh/2)/h)²`.
    pub fn symbol(&self, k: usize) -> T {
        let h = self.grid.h();
        let s = T::lit(2.0) * (T::from_usize_lossy(k) * h / T::lit(2.0)).sin() / h;
        s * s
    }
}

impl<T: Real> ResolventMap<T> for PeriodicKernel<T> {
    fn dim(&self) -> usize {
        self.grid.len()
    }

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        self.apply(lambda, u)
    }

    fn resolve_block(&self, lambda: T, us: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        self.apply_block(lambda, us)
    }

    fn positivity_preserving(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Dirichlet,
    Neumann,
}

/// `[0, 1]` with M intervals, `x_i = i/M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitIntervalKernel {
    intervals: usize,
    boundary: Boundary,
}

impl UnitIntervalKernel {
    pub fn new(intervals: usize, boundary: Boundary) -> Result<Self> {
        if intervals < 2 {
            return Err(Error::invalid("M", format!("need at least 2 intervals, got {intervals}")));
        }
        Ok(Self { intervals, boundary })
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn h<T: Real>(&self) -> T {
        T::one() / T::from_usize_lossy(self.intervals)
    }

    pub fn nodes<T: Real>(&self) -> Vec<T> {
        let m = T::from_usize_lossy(self.intervals);
        (0..=self.intervals).map(|i| T::from_usize_lossy(i) / m).collect()
    }

    pub fn sample<T: Real>(&self, f: impl Fn(T) -> T) -> Vec<T> {
        self.nodes().into_iter().map(f).collect()
    }

    fn kernel_with<T: Real>(&self, rk: &[T], norm: T, denom: T, i: usize, j: usize) -> T {
        let m2 = 2 * self.intervals;
        let d = i.abs_diff(j);
        let s = i + j;
        let direct = rk[d] + rk[m2 - d];
        let image = rk[s] + rk[m2 - s];
        let sum = match self.boundary {
            Boundary::Dirichlet => direct - image,
            Boundary::Neumann => direct + image,
        };
        norm * sum / denom
    }

    fn parts<T: Real>(&self, lambda: T) -> (Vec<T>, T, T) {
        let m2 = 2 * self.intervals;
        let (theta, norm) = lattice_params(lambda, self.h::<T>());
        let rk = powers(theta, m2);
        let denom = -(-theta * T::from_usize_lossy(m2)).exp_m1();
        (rk, norm, denom)
    }

    pub fn kernel<T: Real>(&self, lambda: T, i: usize, j: usize) -> T {
        let (rk, norm, denom) = self.parts(lambda);
        self.kernel_with(&rk, norm, denom, i, j)
    }

    pub fn apply<T: Real>(&self, lambda: T, v: &[T]) -> Result<Vec<T>> {
        check_lambda(lambda)?;
        check_len(self.intervals + 1, v)?;
        let (rk, norm, denom) = self.parts(lambda);
        let h: T = self.h();
        let m = self.intervals;
        Ok((0..=m)
            .map(|i| {
                let mut acc = CompensatedSum::new();
                for (j, vj) in v.iter().enumerate() {
                    let w = if j == 0 || j == m { T::lit(0.5) } else { T::one() };
                    acc.add(w * h * self.kernel_with(&rk, norm, denom, i, j) * *vj);
                }
                acc.value()
            })
            .collect())
    }
}

impl<T: Real> ResolventMap<T> for UnitIntervalKernel {
    fn dim(&self) -> usize {
        self.intervals + 1
    }

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        self.apply(lambda, u)
    }

    fn positivity_preserving(&self) -> bool {
        true
    }
}

/// Any of the four kernel domains behind one type.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelDomain<T> {
    WholeLine(WholeLine<T>),
    Periodic(PeriodicKernel<T>),
    UnitIntervalDirichlet(UnitIntervalKernel),
    UnitIntervalNeumann(UnitIntervalKernel),
}

impl<T: Real> KernelDomain<T> {
    pub fn whole_line(half_width: T, intervals: usize) -> Result<Self> {
        Ok(Self::WholeLine(WholeLine::new(half_width, intervals)?))
    }

    pub fn periodic(n: usize) -> Result<Self> {
        Ok(Self::Periodic(PeriodicKernel::new(Grid::new(n)?)))
    }

    pub fn dirichlet(intervals: usize) -> Result<Self> {
        Ok(Self::UnitIntervalDirichlet(UnitIntervalKernel::new(intervals, Boundary::Dirichlet)?))
    }

    pub fn neumann(intervals: usize) -> Result<Self> {
        Ok(Self::UnitIntervalNeumann(UnitIntervalKernel::new(intervals, Boundary::Neumann)?))
    }

    /// Sample points (the half period `[0, π]` for the periodic case).
    pub fn nodes(&self) -> Vec<T> {
        match self {
            Self::WholeLine(w) => w.nodes(),
            Self::Periodic(p) => p.grid().nodes().to_vec(),
            Self::UnitIntervalDirichlet(k) | Self::UnitIntervalNeumann(k) => k.nodes(),
        }
    }

    /// Trapezoidal y-integration weights matching [`KernelDomain::kernel`].
    pub fn weights(&self) -> Vec<T> {
        match self {
            Self::WholeLine(w) => vec![w.h(); w.intervals() + 1],
            Self::Periodic(p) => {
                let g = p.grid();
                (0..g.len()).map(|j| g.h() * g.node_multiplicity(j)).collect()
            }
            Self::UnitIntervalDirichlet(k) | Self::UnitIntervalNeumann(k) => {
                let m = k.intervals();
                (0..=m)
                    .map(|j| {
                        let h: T = k.h();
                        if j == 0 || j == m {
                            h / T::lit(2.0)
                        } else {
                            h
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn kernel(&self, lambda: T, i: usize, j: usize) -> T {
        match self {
            Self::WholeLine(w) => w.kernel(lambda, i, j),
            Self::Periodic(p) => p.kernel(lambda, i, j),
            Self::UnitIntervalDirichlet(k) | Self::UnitIntervalNeumann(k) => k.kernel(lambda, i, j),
        }
    }
}

impl<T: Real> ResolventMap<T> for KernelDomain<T> {
    fn dim(&self) -> usize {
        match self {
            Self::WholeLine(w) => ResolventMap::<T>::dim(w),
            Self::Periodic(p) => ResolventMap::<T>::dim(p),
            Self::UnitIntervalDirichlet(k) | Self::UnitIntervalNeumann(k) => ResolventMap::<T>::dim(k),
        }
    }

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        match self {
            Self::WholeLine(w) => w.apply(lambda, u),
            Self::Periodic(p) => p.apply(lambda, u),
            Self::UnitIntervalDirichlet(k) | Self::UnitIntervalNeumann(k) => k.apply(lambda, u),
        }
    }

    fn resolve_block(&self, lambda: T, us: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        match self {
            Self::Periodic(p) => p.apply_block(lambda, us),
            _ => us.iter().map(|u| self.resolve(lambda, u)).collect(),
        }
    }

    fn positivity_preserving(&self) -> bool {
        true
    }
}

pub fn resolvent_whole_line<T: Real>(lambda: T, line: &WholeLine<T>, v: &[T]) -> Result<Vec<T>> {
    line.apply(lambda, v)
}

pub fn resolvent_periodic<T: Real>(lambda: T, v: &GridFunction<T>) -> Result<GridFunction<T>> {
    let k = PeriodicKernel::new(v.grid().clone());
    GridFunction::new(v.grid().clone(), k.apply(lambda, v.values())?)
}

/// `v` sampled at `i/M`, `i = 0..=M`.
pub fn resolvent_dirichlet<T: Real>(lambda: T, v: &[T]) -> Result<Vec<T>> {
    UnitIntervalKernel::new(v.len().saturating_sub(1), Boundary::Dirichlet)?.apply(lambda, v)
}

/// `v` sampled at `i/M`, `i = 0..=M`.
pub fn resolvent_neumann<T: Real>(lambda: T, v: &[T]) -> Result<Vec<T>> {
    UnitIntervalKernel::new(v.len().saturating_sub(1), Boundary::Neumann)?.apply(lambda, v)
}

/// `A^α v` on the line from the hypersingular integral
/// `C_α ∫ (v(x) - v(y))/|x-y|^{1+2α} dy`, `C_α = sin(πα) Γ(2α+1)/π`.
///
/// The sum over `j ≠ i` is a punctured trapezoid rule; the omitted
/// neighbourhood of the singularity is restored by the zeta-function
/// correction `ζ(2α-1) h^{2-2α} v''(x_i)`, and the part of the line beyond
/// `±L` (where v ≈ 0) contributes `v_i ∫_{|y|>L} |x_i-y|^{-1-2α} dy`
/// exactly. The two endpoints only get the tail of the far side.
pub fn singular_integral_frac<T: Real>(line: &WholeLine<T>, v: &[T], alpha: T) -> Result<Vec<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::invalid("alpha", format!("need 0 < alpha < 1, got {alpha}")));
    }
    let m = line.intervals();
    check_len(m + 1, v)?;
    line.warn_decay(v, "singular integral");
    let h = line.h();
    let two_alpha = alpha + alpha;
    let expo = T::one() + two_alpha;
    let c = (T::PI() * alpha).sin() * gamma(two_alpha + T::one()) / T::PI();
    let zeta_term = zeta(two_alpha - T::one()) * h.powf(T::lit(2.0) - two_alpha);
    // |x_i - x_j|^{-1-2α} depends only on |i-j|
    let dist_pow: Vec<T> = (0..=m)
        .map(|d| (h * T::from_usize_lossy(d)).powf(-expo))
        .collect();
    let l = line.half_width();
    let nodes = line.nodes();
    Ok((0..=m)
        .map(|i| {
            let mut acc = CompensatedSum::new();
            for (j, vj) in v.iter().enumerate() {
                if j == i {
                    continue;
                }
                let w = if j == 0 || j == m { h / T::lit(2.0) } else { h };
                acc.add(w * (v[i] - *vj) * dist_pow[i.abs_diff(j)]);
            }
            let left = if i > 0 { v[i - 1] } else { T::zero() };
            let right = if i < m { v[i + 1] } else { T::zero() };
            let second = (left - v[i] - v[i] + right) / (h * h);
            acc.add(second * zeta_term);
            let mut tails = T::zero();
            for d in [nodes[i] + l, l - nodes[i]] {
                if d > T::zero() {
                    tails += d.powf(-two_alpha);
                }
            }
            acc.add(v[i] * tails / two_alpha);
            c * acc.value()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice_inverse_residual(lambda: f64, out: &[f64], v: &[f64], h: f64) -> f64 {
        (1..out.len() - 1)
            .map(|i| {
                let d2 = (out[i - 1] - 2.0 * out[i] + out[i + 1]) / (h * h);
                (lambda * out[i] - d2 - v[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn whole_line_inverts_difference_operator() {
        let line = WholeLine::<f64>::standard();
        let v = line.sample(|x| (-x * x).exp());
        let out = line.apply(1.0, &v).unwrap();
        assert!(lattice_inverse_residual(1.0, &out, &v, line.h()) < 1e-12);
        assert!(line.apply(1.0, &vec![0.0; 401]).unwrap().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn whole_line_large_lambda() {
        let line = WholeLine::<f64>::standard();
        let v = line.sample(|x| (-x * x).exp());
        let out = line.apply(1e4, &v).unwrap();
        let err = out.iter().zip(&v).map(|(o, v)| (o - v / 1e4).abs()).fold(0.0, f64::max);
        assert!(err * 1e4 < 1e-3);
    }

    #[test]
    fn whole_line_recursion_matches_kernel_sum() {
        let line = WholeLine::new(3.0, 30).unwrap();
        let v = line.sample(|x: f64| (x * 0.7).sin() + 1.1);
        let out = line.apply(2.0, &v).unwrap();
        for (i, o) in out.iter().enumerate() {
            let direct: f64 = (0..=30).map(|j| line.h() * line.kernel(2.0, i, j) * v[j]).sum();
            assert!((o - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn periodic_examples() {
        let g = Grid::<f64>::new(100).unwrap();
        let k = PeriodicKernel::new(g.clone());
        let one = GridFunction::constant(&g, 1.0).unwrap();
        let out = resolvent_periodic(3.0, &one).unwrap();
        assert!(out.values().iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-13));
        for n in [1usize, 2, 7, 50, 100] {
            let c = GridFunction::cosine_mode(&g, n);
            let out = resolvent_periodic(1.0, &c).unwrap();
            let lattice = c.map(|y| y / (1.0 + k.symbol(n)));
            assert!(out.max_abs_diff(&lattice) < 1e-12, "n={n}");
        }
        // second-order agreement with the continuum eigenvalue n² = 1
        let c = GridFunction::cosine_mode(&g, 1);
        let out = resolvent_periodic(1.0, &c).unwrap();
        assert!(out.max_abs_diff(&c.map(|y| y / 2.0)) < 3e-5);
    }

    #[test]
    fn periodic_matches_spectral_oracle() {
        let g = Grid::<f64>::new(32).unwrap();
        let k = PeriodicKernel::new(g.clone());
        let v = GridFunction::from_fn(&g, |x| (x.cos() * 2.0).exp() - x * 0.1).unwrap();
        let out = resolvent_periodic(0.7, &v).unwrap();
        let oracle = crate::spectral::synthesize(&crate::spectral::analyze(&v).scaled(|n| 1.0 / (0.7 + k.symbol(n))));
        assert!(out.max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn periodic_resolvent_identity() {
        let g = Grid::<f64>::new(24).unwrap();
        let k = PeriodicKernel::new(g.clone());
        let v: Vec<f64> = (0..=24).map(|j| ((j * 5 % 7) as f64) - 2.5).collect();
        let (l, m) = (1.0, 2.0);
        let lhs: Vec<f64> = k
            .apply(l, &v)
            .unwrap()
            .iter()
            .zip(k.apply(m, &v).unwrap())
            .map(|(a, b)| a - b)
            .collect();
        let rhs = k.apply(l, &k.apply(m, &v).unwrap()).unwrap();
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - (m - l) * b).abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_examples() {
        let pi = std::f64::consts::PI;
        let kern = UnitIntervalKernel::new(200, Boundary::Dirichlet).unwrap();
        for (freq, lambda) in [(1.0, 2.0), (2.0, 1.0)] {
            let v = kern.sample(|x: f64| (freq * pi * x).sin());
            let out = resolvent_dirichlet(lambda, &v).unwrap();
            assert!(out[0].abs() < 1e-12 && out[200].abs() < 1e-12);
            for (o, x) in out.iter().zip(kern.nodes::<f64>()) {
                let expect = (freq * pi * x).sin() / (lambda + (freq * pi).powi(2));
                assert!((o - expect).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn neumann_examples() {
        let pi = std::f64::consts::PI;
        let out = resolvent_neumann(4.0, &[1.0f64; 101]).unwrap();
        assert!(out.iter().all(|x| (x - 0.25).abs() < 1e-12));
        let kern = UnitIntervalKernel::new(200, Boundary::Neumann).unwrap();
        let v = kern.sample(|x: f64| (pi * x).cos());
        let out = resolvent_neumann(1.0, &v).unwrap();
        for (o, x) in out.iter().zip(kern.nodes::<f64>()) {
            assert!((o - (pi * x).cos() / (1.0 + pi * pi)).abs() < 1e-4);
        }
    }

    #[test]
    fn kernels_symmetric_and_nonnegative() {
        let domains: Vec<KernelDomain<f64>> = vec![
            KernelDomain::whole_line(5.0, 50).unwrap(),
            KernelDomain::periodic(20).unwrap(),
            KernelDomain::dirichlet(20).unwrap(),
            KernelDomain::neumann(20).unwrap(),
        ];
        for d in &domains {
            let n = d.nodes().len();
            for &lam in &[1e-3, 0.5, 10.0, 1e4] {
                for i in 0..n {
                    for j in 0..n {
                        let a = d.kernel(lam, i, j);
                        assert!(a >= 0.0);
                        assert!((a - d.kernel(lam, j, i)).abs() <= 1e-12 * a.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn small_lambda_stays_finite() {
        let g = Grid::<f64>::new(16).unwrap();
        let out = resolvent_periodic(1e-12, &GridFunction::constant(&g, 1.0).unwrap()).unwrap();
        assert!(out.values().iter().all(|x| (x * 1e-12 - 1.0).abs() < 1e-6));
    }

    #[test]
    fn singular_integral_constant_and_validation() {
        // inside the window the difference quotients vanish; what is left
        // is the far field of the zero extension beyond ±L
        let line = WholeLine::new(10.0, 400).unwrap();
        let v = vec![3.0; 401];
        let out = singular_integral_frac(&line, &v, 0.5).unwrap();
        let c = 1.0 / std::f64::consts::PI;
        for (i, x) in line.nodes().iter().enumerate().skip(1).take(399) {
            let tails = 1.0 / (x + 10.0) + 1.0 / (10.0 - x);
            assert!((out[i] - c * 3.0 * tails).abs() < 1e-12, "i={i}");
        }
        assert!(singular_integral_frac(&line, &v, 1.0).is_err());
        assert!(singular_integral_frac(&line, &v[..10], 0.5).is_err());
    }

    #[test]
    fn singular_integral_half_order_gaussian() {
        // A^{1/2} e^{-x²} = (1/π) ∫_0^∞ ξ √π e^{-ξ²/4} cos(ξx) dξ; at x = 0
        // this is 2/√π.
        let line = WholeLine::<f64>::standard();
        let v = line.sample(|x| (-x * x).exp());
        let out = singular_integral_frac(&line, &v, 0.5).unwrap();
        assert!((out[200] - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-3);
    }
}
