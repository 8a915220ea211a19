//! Gamma and Riemann zeta functions for real arguments.

use crate::real::Real;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) via the Lanczos approximation, with reflection below 1/2.
pub fn gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // Γ(x) Γ(1-x) = π / sin(πx)
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += T::lit(*c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        return (T::PI() / (T::PI() * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += T::lit(*c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

// B_2, B_4, ..., B_16
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Riemann ζ(s) for real s ≠ 1, by Euler–Maclaurin summation.
///
/// Intended for moderate |s| (the crate only needs s ∈ (−1, 1)).
pub fn zeta<T: Real>(s: T) -> T {
    const HEAD: usize = 20;
    let n = T::from_usize_lossy(HEAD);
    let mut acc = T::zero();
    for k in (1..HEAD).rev() {
        acc += T::from_usize_lossy(k).powf(-s);
    }
    acc += n.powf(T::one() - s) / (s - T::one());
    acc += T::lit(0.5) * n.powf(-s);
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j−2) · n^{−s−2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut factorial = T::lit(2.0);
    let mut power = n.powf(-s - T::one());
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = T::lit(*b) / factorial * rising * power;
        acc += term;
        let j2 = T::from_usize_lossy(2 * j + 2);
        rising = rising * (s + j2 - T::one()) * (s + j2);
        factorial = factorial * (j2 + T::one()) * (j2 + T::lit(2.0));
        power /= n * n;
    }
    acc
}
