//! Node/weight rules for the three λ-integrals over (0, ∞):
//!
//! * `A^α u    = (sin πα/π) ∫ λ^{α-1} (u - λ(λ+A)^{-1}u) dλ`
//! * `A^{-α} u = (sin πα/π) ∫ λ^{-α} (λ+A)^{-1}u dλ`
//! * `(μ+A^α)^{-1} u = (sin πα/π) ∫ k_μ(λ) (λ+A)^{-1}u dλ`,
//!   `k_μ(λ) = λ^α / (μ² + 2μλ^α cos πα + λ^{2α})`.
//!
//! Every rule reduces an integral to `Σ c_i g(λ_i)` with `g` the vector
//! factor, so callers only ever perform resolvent solves at the nodes.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadratureRule {
    /// `λ = s·t/(1-t)` followed by Gauss–Jacobi in `t`, with the Jacobi
    /// weight matched to the endpoint powers of the integrand.
    GaussJacobi,
    /// Double-exponential `λ = λ_c exp((π/2) sinh τ)` with a uniform grid in τ.
    ExpSinh,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec<T> {
    pub nodes: usize,
    pub rule: QuadratureRule,
    pub alpha: T,
    /// Centre of the λ-substitution, in units of the natural scale.
    pub scale: T,
    /// When set, every evaluation is repeated with `2Q` nodes and fails if
    /// the two results differ by more than this.
    pub convergence_tol: Option<T>,
}

pub const DEFAULT_GAUSS_JACOBI_NODES: usize = 64;
pub const DEFAULT_EXP_SINH_NODES: usize = 384;

impl<T: Real> QuadratureSpec<T> {
    pub fn gauss_jacobi(alpha: T) -> Result<Self> {
        Self {
            nodes: DEFAULT_GAUSS_JACOBI_NODES,
            rule: QuadratureRule::GaussJacobi,
            alpha,
            scale: T::one(),
            convergence_tol: None,
        }
        .validated()
    }

    pub fn exp_sinh(alpha: T) -> Result<Self> {
        Self {
            nodes: DEFAULT_EXP_SINH_NODES,
            rule: QuadratureRule::ExpSinh,
            alpha,
            scale: T::one(),
            convergence_tol: None,
        }
        .validated()
    }

    pub fn with_nodes(mut self, q: usize) -> Result<Self> {
        self.nodes = q;
        self.validated()
    }

    pub fn with_scale(mut self, scale: T) -> Result<Self> {
        self.scale = scale;
        self.validated()
    }

    pub fn with_convergence_check(mut self, tol: T) -> Result<Self> {
        self.convergence_tol = Some(tol);
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.nodes < 4 {
            return Err(Error::invalid("Q", format!("need at least 4 nodes, got {}", self.nodes)));
        }
        if !(self.alpha > T::zero() && self.alpha < T::one()) {
            return Err(Error::invalid(
                "alpha",
                format!("quadrature needs 0 < alpha < 1, got {}", self.alpha),
            ));
        }
        if !(self.scale > T::zero()) || !self.scale.is_finite() {
            return Err(Error::invalid("scale", format!("must be positive, got {}", self.scale)));
        }
        if let Some(tol) = self.convergence_tol {
            if !(tol > T::zero()) {
                return Err(Error::invalid("convergence_tol", format!("must be positive, got {tol}")));
            }
        }
        Ok(self)
    }

    pub(crate) fn doubled(&self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            convergence_tol: None,
            ..*self
        }
    }

    fn prefactor(&self) -> T {
        (T::PI() * self.alpha).sin() / T::PI()
    }
}

/// Which of the three integrals a rule is built for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Integral<T> {
    /// `A^α`; vector factor `u - λR(λ)u`.
    Power,
    /// `A^{-α}`; vector factor `R(λ)u`.
    InversePower,
    /// `(μ + A^α)^{-1}`; vector factor `R(λ)u`.
    Resolvent { mu: T },
}

/// `(λ_i, c_i)` pairs with `∫_0^∞ … dλ ≈ Σ c_i g(λ_i)`, in ascending λ.
pub(crate) fn lambda_rule<T: Real>(spec: &QuadratureSpec<T>, kind: Integral<T>) -> Result<Vec<(T, T)>> {
    if let Integral::Resolvent { mu } = kind {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::invalid("mu", format!("must be positive, got {mu}")));
        }
    }
    match spec.rule {
        QuadratureRule::GaussJacobi => gauss_jacobi_rule(spec, kind),
        QuadratureRule::ExpSinh => exp_sinh_rule(spec, kind),
    }
}

/// `k_μ(λ)` evaluated as `(1/μ) ρ/(1 + 2ρ cos πα + ρ²)`, `ρ = λ^α/μ`, which
/// stays finite for all λ.
pub(crate) fn resolvent_kernel<T: Real>(lambda: T, alpha: T, mu: T) -> T {
    let rho = lambda.powf(alpha) / mu;
    let denom = T::one() + (rho + rho) * (T::PI() * alpha).cos() + rho * rho;
    if denom.is_infinite() {
        return T::zero();
    }
    rho / (mu * denom)
}

fn gauss_jacobi_rule<T: Real>(spec: &QuadratureSpec<T>, kind: Integral<T>) -> Result<Vec<(T, T)>> {
    let alpha = spec.alpha;
    let one = T::one();
    let two = T::lit(2.0);
    let pref = spec.prefactor();
    let (a, b) = match kind {
        Integral::Power => (-alpha, alpha - one),
        Integral::InversePower => (alpha - one, -alpha),
        Integral::Resolvent { .. } => (alpha - one, alpha),
    };
    let s = match kind {
        Integral::Resolvent { mu } => spec.scale * mu.powf(one / alpha),
        _ => spec.scale,
    };
    let (xs, ws) = gauss_jacobi(spec.nodes, a, b)?;
    let mut out = Vec::with_capacity(xs.len());
    for (x, w) in xs.iter().zip(&ws) {
        let t = (one + *x) / two;
        let omt = (one - *x) / two;
        let lambda = s * t / omt;
        let c = match kind {
            // weight·(1/(1-t)) exactly; the Jacobi weight absorbs the rest
            Integral::Power => pref * s.powf(alpha) * *w / omt,
            Integral::InversePower => pref * s.powf(one - alpha) * *w / omt,
            Integral::Resolvent { mu } => {
                // k(λ) dλ/dt divided by the weight 2^{a+b+1} t^b (1-t)^a
                let dl = s / (omt * omt);
                let wt = two.powf(a + b + one) * t.powf(b) * omt.powf(a);
                pref * *w * resolvent_kernel(lambda, alpha, mu) * dl / wt
            }
        };
        out.push((lambda, c));
    }
    Ok(out)
}

fn exp_sinh_rule<T: Real>(spec: &QuadratureSpec<T>, kind: Integral<T>) -> Result<Vec<(T, T)>> {
    let alpha = spec.alpha;
    let one = T::one();
    let half_pi = T::FRAC_PI_2();
    let centre = match kind {
        Integral::Power => {
            return Err(Error::invalid(
                "rule",
                "exp-sinh nodes reach λ where u - λ(λ+A)^{-1}u cancels catastrophically; use Gauss–Jacobi for A^α",
            ))
        }
        Integral::InversePower => spec.scale,
        Integral::Resolvent { mu } => spec.scale * mu.powf(one / alpha),
    };
    // Integrand decays like exp(-min(α,1-α)|g|) in g = ln(λ/λc); truncate
    // where that drops below 1e-17.
    let rate = alpha.min(one - alpha);
    let gmax = T::lit(2.0) * T::lit(1e17).ln() / rate;
    let tmax = (gmax / T::PI()).asinh();
    let q = spec.nodes;
    let h = (tmax + tmax) / T::from_usize_lossy(q - 1);
    let pref = spec.prefactor();
    let mut out = Vec::with_capacity(q);
    for k in 0..q {
        let tau = -tmax + h * T::from_usize_lossy(k);
        let g = half_pi * tau.sinh();
        let lambda = centre * g.exp();
        if !lambda.is_finite() || lambda == T::zero() {
            continue;
        }
        let dg = h * half_pi * tau.cosh();
        let c = match kind {
            Integral::InversePower => pref * dg * lambda.powf(one - alpha),
            Integral::Resolvent { mu } => pref * dg * (lambda * resolvent_kernel(lambda, alpha, mu)),
            Integral::Power => unreachable!(),
        };
        if c.is_finite() && c > T::zero() {
            out.push((lambda, c));
        }
    }
    Ok(out)
}

/// Gauss–Jacobi nodes and weights on (-1, 1) for the weight
/// `(1-x)^a (1+x)^b`, `a, b > -1`, by Golub–Welsch.
pub fn gauss_jacobi<T: Real>(q: usize, a: T, b: T) -> Result<(Vec<T>, Vec<T>)> {
    let one = T::one();
    let two = T::lit(2.0);
    if q == 0 {
        return Err(Error::invalid("Q", "need at least one node"));
    }
    if !(a > -one && b > -one) {
        return Err(Error::invalid("jacobi", format!("exponents must exceed -1, got a={a}, b={b}")));
    }
    let ab = a + b;
    let mut diag = vec![T::zero(); q];
    let mut off = vec![T::zero(); q];
    diag[0] = (b - a) / (ab + two);
    for (k, d) in diag.iter_mut().enumerate().skip(1) {
        let kk = T::from_usize_lossy(k);
        let s = two * kk + ab;
        *d = (b * b - a * a) / (s * (s + two));
    }
    for (k, o) in off.iter_mut().enumerate().take(q).skip(1) {
        let kk = T::from_usize_lossy(k);
        let beta = if k == 1 {
            T::lit(4.0) * (one + a) * (one + b) / ((two + ab) * (two + ab) * (T::lit(3.0) + ab))
        } else {
            let s = two * kk + ab;
            T::lit(4.0) * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + one) * (s - one))
        };
        *o = beta.sqrt();
    }
    let mu0 = two.powf(ab + one) * gamma(a + one) * gamma(b + one) / gamma(ab + two);
    let (nodes, first) = symmetric_tridiagonal_eigen(diag, off)?;
    let mut pairs: Vec<(T, T)> = nodes
        .into_iter()
        .zip(first)
        .map(|(x, z)| (x, mu0 * z * z))
        .collect();
    pairs.sort_by(|p, r| p.0.partial_cmp(&r.0).expect("finite nodes"));
    Ok(pairs.into_iter().unzip())
}

/// Implicit QL on a symmetric tridiagonal matrix (`off[k]` couples rows
/// k-1 and k). Returns eigenvalues and the first component of each
/// normalized eigenvector.
fn symmetric_tridiagonal_eigen<T: Real>(mut d: Vec<T>, off: Vec<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = d.len();
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(&off[1..n]);
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NumericalFailure {
                    t: 0.0,
                    message: "tridiagonal QL iteration did not converge".into(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn beta(x: f64, y: f64) -> f64 {
        gamma(x) * gamma(y) / gamma(x + y)
    }

    // ∫_{-1}^{1} (1-x)^a (1+x)^b (1+x)^k dx = 2^{a+b+k+1} B(a+1, b+k+1)
    fn moment(a: f64, b: f64, k: i32) -> f64 {
        2f64.powf(a + b + k as f64 + 1.0) * beta(a + 1.0, b + k as f64 + 1.0)
    }

    #[test]
    fn gauss_jacobi_integrates_moments() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (-0.3, -0.7), (0.4, -0.6), (-0.9, 0.9)] {
            let (x, w) = gauss_jacobi::<f64>(10, a, b).unwrap();
            for k in 0..19 {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * (1.0 + x).powi(k)).sum();
                let want = moment(a, b, k);
                assert!(((got - want) / want).abs() < 1e-12, "a={a} b={b} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn gauss_legendre_small() {
        let (x, w) = gauss_jacobi::<f64>(2, 0.0, 0.0).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nodes_sorted_inside_interval() {
        let (x, w) = gauss_jacobi::<f64>(64, -0.3, -0.7).unwrap();
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert!(x[0] > -1.0 && x[63] < 1.0);
        assert!(w.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::gauss_jacobi(0.0f64).is_err());
        assert!(QuadratureSpec::gauss_jacobi(1.0f64).is_err());
        assert!(QuadratureSpec::gauss_jacobi(0.5f64).unwrap().with_nodes(3).is_err());
        assert!(QuadratureSpec::exp_sinh(0.5f64).unwrap().with_scale(0.0).is_err());
        let s = QuadratureSpec::gauss_jacobi(0.5f64).unwrap();
        assert_eq!(s.nodes, 64);
        assert_eq!(QuadratureSpec::exp_sinh(0.5f64).unwrap().nodes, 384);
    }

    fn integrate(rule: &[(f64, f64)], g: impl Fn(f64) -> f64) -> f64 {
        rule.iter().map(|(l, c)| c * g(*l)).sum()
    }

    #[test]
    fn scalar_integrals_reproduce_powers() {
        for &alpha in &[0.2, 0.5, 0.8] {
            let gj = QuadratureSpec::gauss_jacobi(alpha).unwrap();
            let es = QuadratureSpec::exp_sinh(alpha).unwrap();
            for &kappa in &[0.5, 1.0, 3.0] {
                let p = lambda_rule(&gj, Integral::Power).unwrap();
                let got = integrate(&p, |l| kappa / (l + kappa));
                assert!((got / kappa.powf(alpha) - 1.0).abs() < 1e-9);
                for spec in [&gj, &es] {
                    let inv = lambda_rule(spec, Integral::InversePower).unwrap();
                    let got = integrate(&inv, |l| 1.0 / (l + kappa));
                    assert!((got * kappa.powf(alpha) - 1.0).abs() < 1e-8, "{:?}", spec.rule);
                }
                let r = lambda_rule(&es, Integral::Resolvent { mu: 2.0 }).unwrap();
                let got = integrate(&r, |l| 1.0 / (l + kappa));
                assert!((got * (2.0 + kappa.powf(alpha)) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exp_sinh_rejects_power() {
        let es = QuadratureSpec::exp_sinh(0.5f64).unwrap();
        assert!(lambda_rule(&es, Integral::Power).is_err());
        assert!(lambda_rule(&es, Integral::Resolvent { mu: 0.0 }).is_err());
    }

    #[test]
    fn resolvent_kernel_matches_direct_form() {
        for &(l, a, mu) in &[(0.3, 0.4, 1.0), (5.0, 0.7, 0.2), (1e-3, 0.5, 3.0)] {
            let la: f64 = f64::powf(l, a);
            let direct = la / (mu * mu + 2.0 * mu * la * (std::f64::consts::PI * a).cos() + la * la);
            assert!((resolvent_kernel(l, a, mu) - direct).abs() < 1e-14 * direct.max(1.0));
        }
        assert_eq!(resolvent_kernel(1e300, 0.9, 1.0), 0.0);
    }
}
