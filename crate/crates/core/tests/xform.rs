use std::f64::consts::PI;

use bargmann::xform::{
    adjoint_transform, extract_coefficients, gabor_bargmann_link, gabor_transform, gabor_window,
    gauss_hermite, hermite_deriv2, hermite_eval, projection_kernel_apply, transform, PlaneRule,
    Signal, TransformKernel,
};
use bargmann::{fock::basis_eval, inner, CoeffVec, Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn isometry_on_hermite_span() {
    let rule = gauss_hermite(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let coef: Vec<C64> = (0..9)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = |u: f64| -> C64 {
            coef.iter()
                .enumerate()
                .map(|(n, a)| a * hermite_eval(n, u))
                .sum()
        };
        let l2 = rule.integrate_plain(|u| c(f(u).norm_sqr(), 0.0)).re;
        let bf = extract_coefficients(
            |z| transform(TransformKernel::Classical, &Signal::Function(&f), z, &rule).unwrap(),
            24,
            1.0,
            64,
        )
        .unwrap();
        assert!(
            (bf.norm_sqr() - l2).abs() < 1e-8 * l2,
            "{} vs {}",
            bf.norm_sqr(),
            l2
        );
    }
}

#[test]
fn hermite_operator_eigenvalues() {
    let rule = gauss_hermite(64).unwrap();
    for n in 0..=6 {
        let v = rule.integrate_plain(|u| {
            let h = hermite_eval(n, u);
            c((-hermite_deriv2(n, u) + (1.0 + u * u) * h) * h, 0.0)
        });
        assert!(
            (v.re - 2.0 * (n as f64 + 1.0)).abs() < 1e-6,
            "n={n}: {}",
            v.re
        );
    }
}

#[test]
fn kernel_reproduces() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let mut phi: Vec<C64> = (0..6)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        phi.resize(41, c(0.0, 0.0));
        let phi = CoeffVec::new(phi).unwrap();
        let z = C64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0 * PI));
        let got = inner(&phi, &CoeffVec::reproducing_kernel(z, 41)).unwrap();
        assert!((got - phi.eval(z)).norm() < 1e-10);
    }
}

#[test]
fn adjoint_inverts_transform() {
    let kern = TransformKernel::alpha(0.5).unwrap();
    let rule = gauss_hermite(64).unwrap();
    let grid = PlaneRule::with_order(64).unwrap();
    let h0 = |u: f64| c(hermite_eval(0, u), 0.0);
    // at α = 1/2 the preimage basis is the plain Hermite basis
    let coeffs = [c(1.0, 0.0)];
    for u in [-1.5, -0.4, 0.0, 0.7, 2.0] {
        assert!((kern.preimage(0, u) - h0(u).re).abs() < 1e-15);
        let v = adjoint_transform(
            kern,
            |z| transform(kern, &Signal::Hermite(&coeffs), z, &rule).unwrap(),
            u,
            &grid,
        )
        .unwrap();
        assert!((v - h0(u)).norm() < 1e-6, "u={u}: {v}");
    }
}

#[test]
fn adjoint_kills_antiholomorphic() {
    let grid = PlaneRule::with_order(64).unwrap();
    for kern in [TransformKernel::Classical, TransformKernel::Alpha(0.5)] {
        for u in [-1.0, 0.0, 0.5, 1.3] {
            let v = adjoint_transform(kern, |z| z.conj(), u, &grid).unwrap();
            assert!(v.norm() < 1e-10, "{v}");
            assert_eq!(
                adjoint_transform(kern, |_| c(0.0, 0.0), u, &grid).unwrap(),
                c(0.0, 0.0)
            );
        }
    }
}

#[test]
fn projection_examples() {
    let grid = PlaneRule::with_order(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let z = C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI));
        let v = projection_kernel_apply(|w| basis_eval(2, w), z, 1.0, &grid).unwrap();
        assert!((v - basis_eval(2, z)).norm() < 1e-6);
        let v = projection_kernel_apply(|w| w.conj(), z, 1.0, &grid).unwrap();
        assert!(v.norm() < 1e-6);
    }
}

#[test]
fn narrow_grid_is_flagged() {
    // a 4-point rule cannot hold the mass of e^{|z|^2 / 2} against the weight
    let grid = PlaneRule::with_order(4).unwrap();
    let r = projection_kernel_apply(
        |w| (0.45 * w.norm_sqr()).exp().into(),
        c(0.0, 0.0),
        1.0,
        &grid,
    );
    assert!(matches!(r, Err(Error::GridTooSmall { .. })), "{r:?}");
}

#[test]
fn gabor_link() {
    let rule = gauss_hermite(64).unwrap();
    let g00 = gabor_transform(|u| gabor_window(0.0, 0.0, u), 0.0, 0.0, &rule);
    assert!((g00 - 1.0).norm() < 1e-12);
    let h1 = |u: f64| c(hermite_eval(1, u), 0.0);
    for (p, q) in [
        (0.0, 0.0),
        (0.5, -0.3),
        (-1.0, 0.8),
        (1.2, 1.1),
        (-0.4, -1.5),
    ] {
        let (z, factor) = gabor_bargmann_link(p, q);
        let b = transform(TransformKernel::Classical, &Signal::Function(&h1), z, &rule).unwrap();
        let w = gabor_transform(h1, p, q, &rule);
        assert!(
            (b - factor * w).norm() < 1e-8 * b.norm().max(1.0),
            "p={p} q={q}"
        );
        // closed form at the same point: ℬh_1 = e_1
        assert!((b - z).norm() < 1e-10);
    }
}
