use bargmann::spectra::{
    domination_profile, eigen_complex, gribov_spec, heun_spec, invertibility_margin,
    invertibility_threshold, numerical_range_bound, schatten_partial, subordination_ratio,
    GribovParams, HeunVariant,
};
use bargmann::tridiag::{eigen_sym_tridiag, symmetrize, Tridiag};
use bargmann::{build_matrix, BandedMatrix, HamiltonianSpec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn numerical_range_is_bounded_below() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let mut spec = HamiltonianSpec::leading(2);
        for (i, j) in [
            (0, 0),
            (1, 0),
            (0, 1),
            (1, 1),
            (2, 1),
            (1, 2),
            (3, 0),
            (0, 3),
        ] {
            spec = spec.with_term(i, j, C64::from_polar(1.0, rng.gen_range(0.0..6.3)));
        }
        // ε = 1 in the domination inequality gives Re⟨Hφ,φ⟩ ≥ −C₁‖φ‖²
        let floor = -domination_profile(&spec, 1.0, 4096).unwrap().c_eps;
        for n in [32, 64, 128] {
            let b = numerical_range_bound(&build_matrix(&spec, n).unwrap());
            assert!(b >= floor - 1e-9, "N={n}: {b} < {floor}");
        }
    }
}

#[test]
fn displaced_oscillator_converges() {
    // N + g(A + A*) is similar to N − g²
    for g in [c(0.3, 0.0), c(0.2, 0.15)] {
        let spec = HamiltonianSpec::leading(1)
            .with_term(1, 0, g)
            .with_term(0, 1, g);
        let a = eigen_complex(&build_matrix(&spec, 32).unwrap())
            .unwrap()
            .eigenvalues;
        let b = eigen_complex(&build_matrix(&spec, 64).unwrap())
            .unwrap()
            .eigenvalues;
        for j in 0..8 {
            assert!((a[j] - b[j]).norm() < 1e-6, "j={j}: {} vs {}", a[j], b[j]);
            assert!((b[j] - (j as f64 - g * g)).norm() < 1e-6, "j={j}: {}", b[j]);
        }
    }
}

#[test]
fn complex_solver_agrees_with_tridiagonal_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..30 {
        let n = rng.gen_range(2..25);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let b: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.1..2.0)).collect();
        let cc: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.1..2.0)).collect();
        let t = Tridiag::new(a.clone(), b.clone(), cc.clone()).unwrap();
        let want = eigen_sym_tridiag(&symmetrize(&t).unwrap().s)
            .unwrap()
            .eigenvalues;
        let cv = |v: &[f64]| v.iter().map(|x| c(*x, 0.0)).collect::<Vec<_>>();
        let m = BandedMatrix::tridiagonal(&cv(&cc), &cv(&a), &cv(&b));
        let got = eigen_complex(&m).unwrap().eigenvalues;
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).norm() < 1e-9 * (1.0 + y.abs()), "{x} vs {y}");
        }
    }
}

#[test]
fn heun_entries() {
    let n = 30;
    let cubic = build_matrix(&heun_spec(HeunVariant::Cubic), n).unwrap();
    let diffusion = build_matrix(&heun_spec(HeunVariant::Diffusion), n).unwrap();
    for col in 0..n {
        let nf = col as f64;
        for row in 0..n {
            let (wc, wd) = if row + 1 == col {
                ((nf - 1.0) * nf.sqrt(), nf * nf.sqrt())
            } else if row == col + 1 {
                (nf * (nf + 1.0).sqrt(), -nf * (nf + 1.0).sqrt())
            } else {
                (0.0, 0.0)
            };
            assert!(
                (cubic.get(row, col) - wc).norm() < 1e-12 * (1.0 + wc.abs()),
                "cubic ({row},{col})"
            );
            assert!(
                (diffusion.get(row, col) - wd).norm() < 1e-12 * (1.0 + wd.abs()),
                "diffusion ({row},{col})"
            );
        }
    }
}

#[test]
fn gribov_examples() {
    let number = gribov_spec(&GribovParams {
        mu: 1.0,
        ..Default::default()
    });
    let ev = eigen_complex(&build_matrix(&number, 10).unwrap())
        .unwrap()
        .eigenvalues;
    for (n, v) in ev.iter().enumerate() {
        assert!((v - n as f64).norm() < 1e-12);
    }
    let pure = gribov_spec(&GribovParams {
        lambda: 1.0,
        ..Default::default()
    });
    let m = build_matrix(&pure, 12).unwrap();
    for n in 1..11usize {
        let want = c(0.0, n as f64 * (n as f64 + 1.0).sqrt());
        assert!((m.get(n + 1, n) - want).norm() < 1e-12);
        assert!((m.get(n, n + 1) - want).norm() < 1e-12);
    }
    assert!(gribov_spec(&GribovParams::default())
        .terms
        .iter()
        .all(|t| t.a == c(0.0, 0.0)));

    // low-lying eigenvalues of the Gribov operator settle under doubling
    let h = gribov_spec(&GribovParams {
        mu: 1.0,
        lambda: 0.1,
        ..Default::default()
    });
    let a = eigen_complex(&build_matrix(&h, 64).unwrap())
        .unwrap()
        .eigenvalues;
    let b = eigen_complex(&build_matrix(&h, 128).unwrap())
        .unwrap()
        .eigenvalues;
    for j in 0..5 {
        assert!((a[j] - b[j]).norm() < 1e-6, "j={j}: {} vs {}", a[j], b[j]);
    }
}

#[test]
fn subordination_examples() {
    let s = subordination_ratio(&HamiltonianSpec::annihilation(), 2, 10_000).unwrap();
    // ‖A e_n‖ / λ_{n,2}^{1/2} = 1/√(n − 1)
    for (i, v) in s.sequence.iter().enumerate() {
        let n = (i + 2) as f64;
        assert!((v - 1.0 / (n - 1.0).sqrt()).abs() < 1e-12);
    }
    assert_eq!(s.argmax, 2);
    assert!((s.ratio - 1.0).abs() < 1e-12);
    assert!(s.sequence.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(
        subordination_ratio(&HamiltonianSpec::zero(), 2, 100)
            .unwrap()
            .ratio,
        0.0
    );
    assert!(subordination_ratio(
        &HamiltonianSpec::leading(0).with_term(2, 1, c(1.0, 0.0)),
        2,
        10
    )
    .is_err());
}

#[test]
fn invertibility_examples() {
    let m = invertibility_margin(&HamiltonianSpec::number(), 1.0, 40).unwrap();
    assert!((m.margin - 1.0).abs() < 1e-10);

    // no perturbation: margin of A*²A² + βI is β
    for beta in [0.5, 2.0] {
        let m = invertibility_margin(&HamiltonianSpec::leading(2), beta, 40).unwrap();
        assert!((m.margin - beta).abs() < 1e-10);
        assert_eq!(m.neumann_norm, 0.0);
    }

    let h = gribov_spec(&GribovParams {
        mu: 1.0,
        lambda: 0.5,
        lambda_prime: 1.0,
        ..Default::default()
    });
    let beta = invertibility_threshold(&h, 0.25, 400).unwrap();
    for n in [50, 100, 200] {
        let m = invertibility_margin(&h, 1.01 * beta, n).unwrap();
        assert!(m.margin > 0.0 && m.contraction, "N={n}: {m:?}");
    }
}

#[test]
fn schatten_trends() {
    let basel = schatten_partial(1, 2.0, 100_000).unwrap();
    assert!((basel - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-5);
    let a = schatten_partial(2, 1.0, 1000).unwrap();
    let b = schatten_partial(2, 1.0, 2000).unwrap();
    assert!((b - a).abs() < 1e-3);
    let h = schatten_partial(1, 1.0, 100_000).unwrap();
    assert!((h - (100_000f64.ln() + 0.577_215_664_9)).abs() < 1e-4);
}
