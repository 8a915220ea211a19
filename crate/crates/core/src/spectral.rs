//! Even 2π-periodic functions on the half-period grid `x_j = jπ/N` and the
//! cosine-spectral representation of `-A^α = -(-d²/dx²)^α` on it.
//!
//! Analysis and synthesis form an exact DCT-I pair: the endpoint modes
//! `n = 0` and `n = N` carry half weight (σ(0) = σ(N) = 1/2, σ(n) = 1
//! otherwise) and the endpoint samples carry half trapezoid weight. The
//! same σ is used in the `T` and `S` matrices, so `synthesize ∘ analyze`
//! is the identity on grid functions and `T`, `S` are diagonal in that
//! basis.

use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

/// Half-period grid `x_j = jh`, `h = π/N`, `j = 0..=N`.
#[derive(Clone, Debug)]
pub struct Grid<T> {
    n: usize,
    h: T,
    nodes: Arc<[T]>,
    // cos(k h) for k = 0..2N; cos(n x_j) = cos_table[(n j) mod 2N]
    cos_table: Arc<[T]>,
}

impl<T> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("N", format!("need N >= 2, got {n}")));
        }
        let nn = T::from_usize_lossy(n);
        let h = T::PI() / nn;
        let nodes: Arc<[T]> = (0..=n)
            .map(|j| {
                if j == n {
                    T::PI()
                } else {
                    T::PI() * T::from_usize_lossy(j) / nn
                }
            })
            .collect();
        let cos_table: Arc<[T]> = (0..2 * n)
            .map(|k| (T::PI() * T::from_usize_lossy(k) / nn).cos())
            .collect();
        Ok(Self {
            n,
            h,
            nodes,
            cos_table,
        })
    }

    /// Number of subintervals of `[0, π]`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// `cos(n x_j)` from the table.
    #[inline]
    pub fn cos_nx(&self, n: usize, j: usize) -> T {
        self.cos_table[(n * j) % (2 * self.n)]
    }

    /// σ(n): 1/2 at the two endpoint modes, 1 otherwise.
    #[inline]
    pub fn mode_weight(&self, n: usize) -> T {
        if n == 0 || n == self.n {
            T::lit(0.5)
        } else {
            T::one()
        }
    }

    /// Trapezoid multiplicity of node j on the full period: 1 at the two
    /// endpoints (x = 0, x = π), 2 in between (x_j and −x_j).
    #[inline]
    pub fn node_multiplicity(&self, j: usize) -> T {
        if j == 0 || j == self.n {
            T::one()
        } else {
            T::lit(2.0)
        }
    }

    fn check_same(&self, other: &Grid<T>) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GridMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

pub fn make_grid<T: Real>(n: usize) -> Result<Grid<T>> {
    Grid::new(n)
}

/// Samples `u_0..u_N` of an even 2π-periodic function.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, values })
    }

    /// Skips the finiteness check; used by the steppers, which classify
    /// non-finite states themselves.
    pub(crate) fn from_raw(grid: Grid<T>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn from_fn(grid: &Grid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn constant(grid: &Grid<T>, c: T) -> Result<Self> {
        Self::new(grid.clone(), vec![c; grid.len()])
    }

    /// Samples of `cos(kx)`, taken from the grid's cosine table.
    pub fn cosine_mode(grid: &Grid<T>, k: usize) -> Self {
        let values = (0..grid.len()).map(|j| grid.cos_nx(k, j)).collect();
        Self::from_raw(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |m, v| m.max(*v))
    }

    pub fn max_abs(&self) -> T {
        crate::real::max_abs(&self.values)
    }

    /// First index attaining the maximum.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (j, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = j;
            }
        }
        best
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        crate::real::max_abs_diff(&self.values, &other.values)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_raw(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self::from_raw(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * *x + b * *y)
                .collect(),
        ))
    }
}

/// Cosine coefficients `γ_0..γ_N` of `Σ γ_n cos(nx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosineSpectrum<T> {
    grid: Grid<T>,
    coeffs: Vec<T>,
}

impl<T: Real> CosineSpectrum<T> {
    pub fn new(grid: Grid<T>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        if let Some(n) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("coeffs", format!("non-finite coefficient at mode {n}")));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Multiplies coefficient n by `f(n)`.
    pub fn scaled(&self, f: impl Fn(usize) -> T) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| *c * f(n))
                .collect(),
        }
    }
}

/// Trapezoidal cosine analysis.
pub fn analyze<T: Real>(u: &GridFunction<T>) -> CosineSpectrum<T> {
    let grid = u.grid();
    let scale = grid.h() / T::PI();
    let weighted: Vec<T> = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| *v * grid.node_multiplicity(j))
        .collect();
    let coeffs = (0..grid.len())
        .map(|n| {
            let mut acc = CompensatedSum::new();
            for (j, w) in weighted.iter().enumerate() {
                acc.add(*w * grid.cos_nx(n, j));
            }
            scale * grid.mode_weight(n) * acc.value()
        })
        .collect();
    CosineSpectrum {
        grid: grid.clone(),
        coeffs,
    }
}

pub fn synthesize<T: Real>(spec: &CosineSpectrum<T>) -> GridFunction<T> {
    let grid = spec.grid();
    let values = (0..grid.len())
        .map(|j| {
            let mut acc = CompensatedSum::new();
            for (n, g) in spec.coeffs().iter().enumerate() {
                acc.add(*g * grid.cos_nx(n, j));
            }
            acc.value()
        })
        .collect();
    GridFunction::from_raw(grid.clone(), values)
}

/// Dense matrix `T` with `T u = samples of -A^α u`.
#[derive(Clone, Debug)]
pub struct FractionalOperator<T> {
    alpha: T,
    grid: Grid<T>,
    matrix: DenseMatrix<T>,
}

impl<T: Real> FractionalOperator<T> {
    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    Ok(())
}

/// Matrix of the spectral multiplier `mult(n)`:
/// `M_{m,k} = (h/π) w_k Σ_n σ(n) mult(n) cos(mnh) cos(knh)`.
fn assemble_multiplier<T: Real>(grid: &Grid<T>, mult: impl Fn(usize) -> T) -> DenseMatrix<T> {
    let len = grid.len();
    let scale = grid.h() / T::PI();
    let half = T::lit(0.5);
    let sigma_mult: Vec<T> = (0..len).map(|n| grid.mode_weight(n) * mult(n)).collect();
    let mut m = DenseMatrix::zeros(len, len);
    for i in 0..len {
        for k in 0..len {
            let mut acc = CompensatedSum::new();
            for (n, sm) in sigma_mult.iter().enumerate() {
                if *sm == T::zero() {
                    continue;
                }
                // cos a cos b = (cos(a+b) + cos(a-b)) / 2
                let c = half * (grid.cos_nx(n, i + k) + grid.cos_nx(n, i.abs_diff(k)));
                acc.add(*sm * c);
            }
            m[(i, k)] = scale * grid.node_multiplicity(k) * acc.value();
        }
    }
    m
}

/// Assembles `T` for `-A^α`. Valid for every α > 0.
pub fn assemble_t<T: Real>(grid: &Grid<T>, alpha: T) -> Result<FractionalOperator<T>> {
    check_alpha(alpha)?;
    let two_alpha = alpha + alpha;
    let mut matrix = assemble_multiplier(grid, |n| {
        if n == 0 {
            T::zero()
        } else {
            -T::from_usize_lossy(n).powf(two_alpha)
        }
    });
    // Rounding in the cosine table leaves row sums of order eps·N^{2α+1};
    // remove them so constants stay exactly in the kernel.
    let len = grid.len();
    let total_weight = T::from_usize_lossy(2 * grid.n());
    for i in 0..len {
        let mut acc = CompensatedSum::new();
        for k in 0..len {
            acc.add(matrix[(i, k)]);
        }
        let r = acc.value();
        for k in 0..len {
            matrix[(i, k)] -= r * grid.node_multiplicity(k) / total_weight;
        }
    }
    Ok(FractionalOperator {
        alpha,
        grid: grid.clone(),
        matrix,
    })
}

/// `v = T u`, samples of `-A^α u`.
pub fn apply_operator<T: Real>(op: &FractionalOperator<T>, u: &GridFunction<T>) -> Result<GridFunction<T>> {
    op.grid.check_same(u.grid())?;
    let v = op.matrix.mul_vec(u.values())?;
    Ok(GridFunction::from_raw(op.grid.clone(), v))
}

/// Matrix of `(1 + τ A^α)^{-1}`.
pub fn assemble_s<T: Real>(grid: &Grid<T>, alpha: T, tau: T) -> Result<DenseMatrix<T>> {
    check_alpha(alpha)?;
    check_tau(tau)?;
    let two_alpha = alpha + alpha;
    Ok(assemble_multiplier(grid, |n| {
        T::one() / (T::one() + tau * T::from_usize_lossy(n).powf(two_alpha))
    }))
}

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(Error::invalid("tau", format!("must be positive, got {tau}")));
    }
    Ok(())
}

/// `(1 + τ A^α)^{-1} u` by analyze → scale by `1/(1 + τ n^{2α})` → synthesize.
pub fn apply_implicit_resolvent<T: Real>(u: &GridFunction<T>, alpha: T, tau: T) -> Result<GridFunction<T>> {
    check_alpha(alpha)?;
    check_tau(tau)?;
    let two_alpha = alpha + alpha;
    let spec = analyze(u).scaled(|n| T::one() / (T::one() + tau * T::from_usize_lossy(n).powf(two_alpha)));
    Ok(synthesize(&spec))
}

/// `A^α u` (note: positive sign) through the cosine spectrum; `alpha = 0`
/// is rejected like everywhere else.
pub fn apply_frac_power_spectral<T: Real>(u: &GridFunction<T>, alpha: T) -> Result<GridFunction<T>> {
    check_alpha(alpha)?;
    let two_alpha = alpha + alpha;
    let spec = analyze(u).scaled(|n| {
        if n == 0 {
            T::zero()
        } else {
            T::from_usize_lossy(n).powf(two_alpha)
        }
    });
    Ok(synthesize(&spec))
}
