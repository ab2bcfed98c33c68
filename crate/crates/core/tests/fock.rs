use bargmann::fock::{falling_factorial, falling_factorial_exact, monomial_entry};
use bargmann::{apply_op, build_matrix, inner, CoeffVec, HamiltonianSpec, MonomialTerm, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

/// Random vector with a zero last entry, so creation does not leave the truncation.
fn padded(max_dim: usize) -> impl Strategy<Value = CoeffVec> {
    prop::collection::vec(complex(), 2..max_dim).prop_map(|mut v| {
        *v.last_mut().unwrap() = C64::new(0.0, 0.0);
        CoeffVec::new(v).unwrap()
    })
}

fn term() -> impl Strategy<Value = MonomialTerm> {
    (0u32..4, 0u32..4, complex()).prop_map(|(i, j, a)| MonomialTerm::new(i, j, a))
}

proptest! {
    #[test]
    fn ladder_identity(phi in padded(80)) {
        let up = apply_op(&HamiltonianSpec::creation(), &phi).unwrap().norm_sqr();
        let down = apply_op(&HamiltonianSpec::annihilation(), &phi).unwrap().norm_sqr();
        prop_assert!((up - phi.norm_sqr() - down).abs() <= 1e-12 * up.max(1e-300));
    }

    #[test]
    fn adjoint_on_interior_block(t in term(), n in 8usize..40) {
        let spec = HamiltonianSpec::new(0, vec![t]);
        let m = build_matrix(&spec, n).unwrap();
        let ma = build_matrix(&spec.adjoint(), n).unwrap();
        let interior = n - t.i.max(t.j) as usize;
        for r in 0..interior {
            for c in 0..interior {
                let d = (m.get(r, c) - ma.get(c, r).conj()).norm();
                prop_assert!(d <= 1e-12 * (1.0 + m.get(r, c).norm()));
            }
        }
    }

    #[test]
    fn growth_bound(phi in prop::collection::vec(complex(), 1..40), r in 0.0f64..3.0, th in 0.0f64..6.3) {
        let phi = CoeffVec::new(phi).unwrap();
        let z = C64::from_polar(r, th);
        prop_assert!(phi.eval(z).norm() <= (0.5 * r * r).exp() * phi.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn inner_is_hermitian(u in prop::collection::vec(complex(), 5), v in prop::collection::vec(complex(), 5)) {
        let u = CoeffVec::new(u).unwrap();
        let v = CoeffVec::new(v).unwrap();
        let d = inner(&u, &v).unwrap() - inner(&v, &u).unwrap().conj();
        prop_assert!(d.norm() < 1e-14);
    }

    #[test]
    fn json_round_trip(k in 0u32..4, terms in prop::collection::vec(term(), 0..6)) {
        let spec = HamiltonianSpec::new(k, terms);
        prop_assert_eq!(HamiltonianSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
}

#[test]
fn difference_identity() {
    for k in 1..=4u64 {
        for n in k..=200 {
            let lhs =
                falling_factorial_exact(n + 1, k).unwrap() - falling_factorial_exact(n, k).unwrap();
            assert_eq!(
                lhs,
                k as u128 * falling_factorial_exact(n, k - 1).unwrap(),
                "n={n} k={k}"
            );
        }
    }
    // large k only in floating point
    for k in 5..=60u64 {
        for n in k..=200 {
            let lhs = falling_factorial(n + 1, k) - falling_factorial(n, k);
            let rhs = k as f64 * falling_factorial(n, k - 1);
            if rhs.is_finite() && lhs.is_finite() {
                assert!((lhs - rhs).abs() <= 1e-10 * rhs, "n={n} k={k}");
            }
        }
    }
}

#[test]
fn monomial_growth() {
    for i in 0..4u64 {
        for j in 0..4u64 {
            let beta = (0..=10_000u64)
                .map(|n| monomial_entry(n, i, j) / ((n + 1) as f64).powf((i + j) as f64 / 2.0))
                .fold(0.0, f64::max);
            // the ratio stays below a constant that depends only on (i, j)
            assert!(
                beta.is_finite() && beta <= 2f64.powi((i + j) as i32),
                "i={i} j={j} beta={beta}"
            );
        }
    }
}

#[test]
fn truncation_drops_rows() {
    let m = build_matrix(&HamiltonianSpec::creation(), 4).unwrap();
    let out = m.matvec(CoeffVec::basis(3, 4).as_slice());
    assert!(out.iter().all(|x| x.norm() == 0.0));
}
