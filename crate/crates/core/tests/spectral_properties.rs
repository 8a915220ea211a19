use fracblow::{analyze, apply_operator, assemble_s, assemble_t, make_grid, synthesize, GridFunction};

#[test]
fn eigen_exactness_all_modes() {
    for &n in &[16usize, 100] {
        let g = make_grid::<f64>(n).unwrap();
        for &alpha in &[0.3, 0.5, 0.7, 1.0, 1.3] {
            let op = assemble_t(&g, alpha).unwrap();
            for k in 0..=n {
                let u = GridFunction::cosine_mode(&g, k);
                let v = apply_operator(&op, &u).unwrap();
                let lam = (k as f64).powf(2.0 * alpha);
                let err = v.lin_comb(1.0, &u, lam).unwrap().max_abs();
                if k == 0 {
                    assert!(err <= 1e-10, "N={n} alpha={alpha} constant: {err:e}");
                } else {
                    assert!(err <= 1e-10 * lam, "N={n} alpha={alpha} k={k}: {err:e}");
                }
            }
        }
    }
}

#[test]
fn round_trip_sizes() {
    for &n in &[2usize, 4, 16, 100] {
        let g = make_grid::<f64>(n).unwrap();
        let u = GridFunction::from_fn(&g, |x| (3.0 * x).sin().exp() - x * x).unwrap();
        assert!(synthesize(&analyze(&u)).max_abs_diff(&u) <= 1e-12);
    }
}

#[test]
fn s_and_t_commute_at_n100() {
    let g = make_grid::<f64>(100).unwrap();
    let t = assemble_t(&g, 0.6).unwrap();
    let s = assemble_s(&g, 0.6, 1e-3).unwrap();
    let ts = t.matrix().matmul(&s).unwrap();
    let st = s.matmul(t.matrix()).unwrap();
    assert!(ts.max_abs_diff(&st) <= 1e-9);
}
