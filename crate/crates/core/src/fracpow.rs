//! Fractional powers, fractional resolvents and the Hille semigroup
//! approximation, built from nothing but resolvent solves `(λ + A)^{-1}u`.

use rayon::prelude::*;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::quadrature::{lambda_rule, Integral, QuadratureSpec};
use crate::real::{max_abs_diff, CompensatedSum, Real};

/// A solver for `(λ + A)^{-1}u`, `λ > 0`, for some nonnegative operator A.
pub trait ResolventMap<T: Real>: Sync {
    fn dim(&self) -> usize;

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>>;

    /// `resolve` on every vector of a block; implementors override this to
    /// share per-λ setup between the vectors.
    fn resolve_block(&self, lambda: T, us: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        us.iter().map(|u| self.resolve(lambda, u)).collect()
    }

    /// True when A is known to generate a positivity preserving resolvent,
    /// i.e. `(λ + A)^{-1}` has a nonnegative kernel for every λ > 0.
    fn positivity_preserving(&self) -> bool {
        false
    }
}

impl<T: Real, R: ResolventMap<T> + ?Sized> ResolventMap<T> for &R {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        (**self).resolve(lambda, u)
    }
    fn resolve_block(&self, lambda: T, us: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        (**self).resolve_block(lambda, us)
    }
    fn positivity_preserving(&self) -> bool {
        (**self).positivity_preserving()
    }
}

/// `A = κ I` on a space of dimension `dim`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarResolvent<T> {
    pub kappa: T,
    pub dim: usize,
}

impl<T: Real> ScalarResolvent<T> {
    pub fn identity(dim: usize) -> Self {
        Self { kappa: T::one(), dim }
    }
}

impl<T: Real> ResolventMap<T> for ScalarResolvent<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        check_lambda(lambda)?;
        check_len(self.dim, u)?;
        let d = lambda + self.kappa;
        Ok(u.iter().map(|v| *v / d).collect())
    }

    fn positivity_preserving(&self) -> bool {
        self.kappa >= T::zero()
    }
}

/// Resolvent of an explicit dense matrix by LU of `λI + A` per λ.
#[derive(Clone, Debug)]
pub struct DenseResolvent<T> {
    a: DenseMatrix<T>,
    positive: bool,
}

impl<T: Real> DenseResolvent<T> {
    pub fn new(a: DenseMatrix<T>) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        Ok(Self { a, positive: false })
    }

    /// Declares the resolvent positivity preserving (e.g. an M-matrix).
    pub fn assume_positive(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.a
    }

    fn shifted(&self, lambda: T) -> Result<DenseMatrix<T>> {
        check_lambda(lambda)?;
        let mut m = self.a.clone();
        for i in 0..m.rows() {
            m[(i, i)] += lambda;
        }
        Ok(m)
    }
}

impl<T: Real> ResolventMap<T> for DenseResolvent<T> {
    fn dim(&self) -> usize {
        self.a.rows()
    }

    fn resolve(&self, lambda: T, u: &[T]) -> Result<Vec<T>> {
        check_len(self.dim(), u)?;
        self.shifted(lambda)?.solve(u)
    }

    fn resolve_block(&self, lambda: T, us: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        let lu = self.shifted(lambda)?.lu()?;
        us.iter().map(|u| lu.solve(u)).collect()
    }

    fn positivity_preserving(&self) -> bool {
        self.positive
    }
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_len<T>(dim: usize, u: &[T]) -> Result<()> {
    if u.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.len(),
        });
    }
    Ok(())
}

/// Runs `eval` at Q and, if `quad` asks for it, at 2Q; returns the Q
/// result and the max-norm difference (zero when unchecked).
fn with_estimate<T: Real, V>(
    quad: &QuadratureSpec<T>,
    eval: impl Fn(&QuadratureSpec<T>) -> Result<V>,
    diff: impl Fn(&V, &V) -> T,
) -> Result<(V, Option<T>)> {
    let base = eval(quad)?;
    match quad.convergence_tol {
        None => Ok((base, None)),
        Some(tol) => {
            let fine = eval(&quad.doubled())?;
            let d = diff(&base, &fine);
            if !(d <= tol) {
                return Err(Error::QuadratureNotConverged {
                    difference: d.to_f64_lossy(),
                    tolerance: tol.to_f64_lossy(),
                });
            }
            Ok((base, Some(d)))
        }
    }
}

fn check_kappa<T: Real>(kappa: T) -> Result<()> {
    if !(kappa > T::zero()) || !kappa.is_finite() {
        return Err(Error::invalid("kappa", format!("must be positive, got {kappa}")));
    }
    Ok(())
}

fn scalar_power_once<T: Real>(kappa: T, quad: &QuadratureSpec<T>) -> Result<T> {
    let rule = lambda_rule(quad, Integral::Power)?;
    let mut acc = CompensatedSum::new();
    for (l, c) in rule {
        // 1 - λ/(λ+κ) without the cancellation
        acc.add(c * kappa / (l + kappa));
    }
    Ok(acc.value())
}

/// κ^α by the resolvent integral; the quadrature's own accuracy oracle.
pub fn scalar_frac_power<T: Real>(kappa: T, quad: &QuadratureSpec<T>) -> Result<T> {
    check_kappa(kappa)?;
    let quad = quad.validated()?;
    Ok(with_estimate(&quad, |q| scalar_power_once(kappa, q), |a, b| (*a - *b).abs())?.0)
}

/// κ^α together with `|result(Q) - result(2Q)|`.
pub fn scalar_frac_power_with_estimate<T: Real>(kappa: T, quad: &QuadratureSpec<T>) -> Result<(T, T)> {
    check_kappa(kappa)?;
    let quad = quad.validated()?;
    let v = scalar_power_once(kappa, &quad)?;
    let fine = scalar_power_once(kappa, &quad.doubled())?;
    let est = (v - fine).abs();
    if let Some(tol) = quad.convergence_tol {
        if !(est <= tol) {
            return Err(Error::QuadratureNotConverged {
                difference: est.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
    }
    Ok((v, est))
}

/// `Σ c_i g_i(λ_i)` over the rule for each vector of the block, with the
/// node solves done in parallel and the sums taken in ascending node order.
fn integrate_block<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    us: &[Vec<T>],
    quad: &QuadratureSpec<T>,
    kind: Integral<T>,
) -> Result<Vec<Vec<T>>> {
    for u in us {
        check_len(res.dim(), u)?;
        if let Some(j) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("u", format!("non-finite entry at index {j}")));
        }
    }
    let rule = lambda_rule(quad, kind)?;
    let solves: Vec<Vec<Vec<T>>> = rule
        .par_iter()
        .map(|(l, _)| res.resolve_block(*l, us))
        .collect::<Result<_>>()?;
    Ok(us
        .iter()
        .enumerate()
        .map(|(b, u)| {
            let mut acc = vec![CompensatedSum::new(); u.len()];
            for ((l, c), r) in rule.iter().zip(&solves) {
                for ((a, ui), ri) in acc.iter_mut().zip(u).zip(&r[b]) {
                    let g = match kind {
                        Integral::Power => *ui - *l * *ri,
                        _ => *ri,
                    };
                    a.add(*c * g);
                }
            }
            acc.iter().map(CompensatedSum::value).collect()
        })
        .collect())
}

fn integrate_vector<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    u: &[T],
    quad: &QuadratureSpec<T>,
    kind: Integral<T>,
) -> Result<Vec<T>> {
    Ok(integrate_block(res, &[u.to_vec()], quad, kind)?.swap_remove(0))
}

fn max_abs_diff_block<T: Real>(a: &[Vec<T>], b: &[Vec<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| max_abs_diff(x, y)).fold(T::zero(), T::max)
}

/// `A^α u`.
pub fn frac_power_apply<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    u: &[T],
    quad: &QuadratureSpec<T>,
) -> Result<Vec<T>> {
    let quad = quad.validated()?;
    Ok(with_estimate(&quad, |q| integrate_vector(res, u, q, Integral::Power), |a, b| max_abs_diff(a, b))?.0)
}

/// `A^{-α} u`; A must be invertible.
pub fn neg_frac_power_apply<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    u: &[T],
    quad: &QuadratureSpec<T>,
) -> Result<Vec<T>> {
    let quad = quad.validated()?;
    Ok(with_estimate(
        &quad,
        |q| integrate_vector(res, u, q, Integral::InversePower),
        |a, b| max_abs_diff(a, b),
    )?
    .0)
}

/// `(μ + A^α)^{-1} u`, `μ > 0`. With a positivity preserving resolvent
/// and a rule with positive weights the result is nonnegative for
/// nonnegative `u`.
pub fn frac_resolvent_apply<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    mu: T,
    u: &[T],
    quad: &QuadratureSpec<T>,
) -> Result<Vec<T>> {
    let quad = quad.validated()?;
    Ok(with_estimate(
        &quad,
        |q| integrate_vector(res, u, q, Integral::Resolvent { mu }),
        |a, b| max_abs_diff(a, b),
    )?
    .0)
}

/// [`frac_resolvent_apply`] on several vectors, sharing each node's setup.
pub fn frac_resolvent_apply_block<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    mu: T,
    us: &[Vec<T>],
    quad: &QuadratureSpec<T>,
) -> Result<Vec<Vec<T>>> {
    let quad = quad.validated()?;
    Ok(with_estimate(
        &quad,
        |q| integrate_block(res, us, q, Integral::Resolvent { mu }),
        |a, b| max_abs_diff_block(a, b),
    )?
    .0)
}

/// The operator whose semigroup `hille_semigroup_apply` approximates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SemigroupGenerator<T> {
    /// A itself, one resolvent solve per factor.
    Base,
    /// A^α through `frac_resolvent_apply`.
    Fractional(QuadratureSpec<T>),
}

fn check_hille<T: Real>(t: T, n: usize) -> Result<()> {
    if !(t > T::zero()) || !t.is_finite() {
        return Err(Error::invalid("t", format!("must be positive, got {t}")));
    }
    if n == 0 {
        return Err(Error::invalid("n", "need at least one factor"));
    }
    Ok(())
}

/// `(1 + Op/s)^{-1} v = s (s + Op)^{-1} v`.
fn hille_factor<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    generator: &SemigroupGenerator<T>,
    s: T,
    v: &[T],
) -> Result<Vec<T>> {
    let r = match generator {
        SemigroupGenerator::Base => res.resolve(s, v)?,
        SemigroupGenerator::Fractional(q) => frac_resolvent_apply(res, s, v, q)?,
    };
    Ok(r.into_iter().map(|x| x * s).collect())
}

/// Matrix of `(1 + (t/n) Op)^{-n}`: the one-factor matrix is built column
/// by column and raised to the n-th power by repeated squaring.
pub fn hille_semigroup_matrix<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    generator: &SemigroupGenerator<T>,
    t: T,
    n: usize,
) -> Result<DenseMatrix<T>> {
    check_hille(t, n)?;
    let s = T::from_usize_lossy(n) / t;
    let dim = res.dim();
    let identity: Vec<Vec<T>> = (0..dim)
        .map(|k| (0..dim).map(|i| if i == k { T::one() } else { T::zero() }).collect())
        .collect();
    let mut columns = match generator {
        SemigroupGenerator::Base => res.resolve_block(s, &identity)?,
        SemigroupGenerator::Fractional(q) => frac_resolvent_apply_block(res, s, &identity, q)?,
    };
    for c in &mut columns {
        c.iter_mut().for_each(|x| *x *= s);
    }
    let mut base = DenseMatrix::from_columns(&columns)?;
    let mut acc: Option<DenseMatrix<T>> = None;
    let mut k = n;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.matmul(&base)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = base.matmul(&base)?;
    }
    Ok(acc.expect("n >= 1"))
}

/// `(1 + (t/n) Op)^{-n} u ≈ e^{-t Op} u`. For `n` above the dimension the
/// product is formed as a matrix first (see [`hille_semigroup_matrix`]).
pub fn hille_semigroup_apply<T: Real, R: ResolventMap<T> + ?Sized>(
    res: &R,
    generator: &SemigroupGenerator<T>,
    t: T,
    n: usize,
    u: &[T],
) -> Result<Vec<T>> {
    check_hille(t, n)?;
    check_len(res.dim(), u)?;
    if n > res.dim() {
        return hille_semigroup_matrix(res, generator, t, n)?.mul_vec(u);
    }
    let s = T::from_usize_lossy(n) / t;
    let mut v = u.to_vec();
    for _ in 0..n {
        v = hille_factor(res, generator, s, &v)?;
    }
    Ok(v)
}
