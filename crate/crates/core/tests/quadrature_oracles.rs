use fracblow::kernels::PeriodicKernel;
use fracblow::quadrature::gauss_jacobi;
use fracblow::{
    frac_power_apply, frac_resolvent_apply, hille_semigroup_apply, make_grid, scalar_frac_power,
    scalar_frac_power_with_estimate, singular_integral_frac, DenseMatrix, DenseResolvent,
    QuadratureSpec, SemigroupGenerator, WholeLine,
};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn scalar_identity_grid() {
    for &kappa in &[0.1, 1.0, 2.0, 10.0, 100.0] {
        for i in 1..=9 {
            let alpha = i as f64 / 10.0;
            let q = QuadratureSpec::gauss_jacobi(alpha).unwrap();
            let v = scalar_frac_power(kappa, &q).unwrap();
            let exact = f64::powf(kappa, alpha);
            assert!(((v - exact) / exact).abs() <= 1e-8, "kappa={kappa} alpha={alpha}");
        }
    }
}

#[test]
fn error_estimate_is_reported() {
    let q = QuadratureSpec::gauss_jacobi(0.5).unwrap();
    let (v, est) = scalar_frac_power_with_estimate(2.0, &q).unwrap();
    assert!((v - 2f64.sqrt()).abs() <= 1e-12);
    assert!(est <= 1e-12);
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let q = g.qr().q();
    let d = DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.gen_range(0.1..3.0)));
    let a = &q * d * q.transpose();
    (&a + a.transpose()) * 0.5
}

#[test]
fn spd_oracle_twenty_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in 0..20 {
        let n = 2 + s % 7;
        let a = random_spd(&mut rng, n);
        let alpha = [0.25, 0.5, 0.75][s % 3];
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let res = DenseResolvent::new(DenseMatrix::from_fn(n, n, |i, j| a[(i, j)])).unwrap();
        let got = frac_power_apply(&res, &u, &QuadratureSpec::gauss_jacobi(alpha).unwrap()).unwrap();
        let e = SymmetricEigen::new(a.clone());
        let f = DMatrix::from_diagonal(&e.eigenvalues.map(|k| k.powf(alpha)));
        let want = &e.eigenvectors * f * e.eigenvectors.transpose() * DVector::from_column_slice(&u);
        let got = DVector::from_vec(got);
        assert!((&got - &want).norm() / want.norm() <= 1e-6, "sample {s}");
    }
}

#[test]
fn positivity_on_the_circle() {
    let g = make_grid::<f64>(32).unwrap();
    let k = PeriodicKernel::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = QuadratureSpec::exp_sinh(0.5).unwrap();
    let gen = SemigroupGenerator::Fractional(q);
    for _ in 0..5 {
        let u: Vec<f64> = (0..33).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..2.0) }).collect();
        let r = frac_resolvent_apply(&k, 1.0, &u, &q).unwrap();
        assert!(r.iter().all(|x| *x >= -1e-8));
        let h = hille_semigroup_apply(&k, &gen, 0.5, 64, &u).unwrap();
        assert!(h.iter().all(|x| *x >= -1e-8));
    }
}

/// A^α e^{-x²} at x by the Fourier multiplier:
/// (1/π) ∫_0^∞ ξ^{2α} √π e^{-ξ²/4} cos(ξx) dξ.
fn fourier_oracle(alpha: f64, x: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    // [0, 1] with the ξ^{2α} factor as a Jacobi weight, then Gauss–Legendre panels
    let (xj, wj) = gauss_jacobi::<f64>(40, 0.0, 2.0 * alpha).unwrap();
    let mut s = 0.0;
    for (t, w) in xj.iter().zip(&wj) {
        let xi = (1.0 + t) / 2.0;
        s += w * 0.5f64.powf(2.0 * alpha + 1.0) * sqrt_pi * (-xi * xi / 4.0).exp() * (xi * x).cos();
    }
    let (xl, wl) = gauss_jacobi::<f64>(24, 0.0, 0.0).unwrap();
    for panel in 0..156 {
        let (a, b) = (1.0 + panel as f64 * 0.25, 1.25 + panel as f64 * 0.25);
        for (t, w) in xl.iter().zip(&wl) {
            let xi = a + (b - a) * (1.0 + t) / 2.0;
            s += w * (b - a) / 2.0 * xi.powf(2.0 * alpha) * sqrt_pi * (-xi * xi / 4.0).exp() * (xi * x).cos();
        }
    }
    s / std::f64::consts::PI
}

#[test]
fn singular_integral_against_fourier_and_resolvent_route() {
    let line = WholeLine::<f64>::standard();
    let xs = line.nodes();
    let v = line.sample(|x| (-x * x).exp());
    for &alpha in &[0.3, 0.5, 0.7] {
        let si = singular_integral_frac(&line, &v, alpha).unwrap();
        let route = frac_power_apply(&line, &v, &QuadratureSpec::gauss_jacobi(alpha).unwrap()).unwrap();
        let mut e_oracle: f64 = 0.0;
        let mut e_route: f64 = 0.0;
        for (i, x) in xs.iter().enumerate() {
            if x.abs() > 8.0 {
                continue;
            }
            e_oracle = e_oracle.max((si[i] - fourier_oracle(alpha, *x)).abs());
            e_route = e_route.max((si[i] - route[i]).abs());
        }
        assert!(e_oracle <= 1e-3, "alpha={alpha}: oracle gap {e_oracle:e}");
        assert!(e_route <= 1e-3, "alpha={alpha}: route gap {e_route:e}");
    }
}
