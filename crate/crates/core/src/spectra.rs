//! Hamiltonian presets and spectral computations for (possibly
//! non-self-adjoint) truncated operators.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    build_matrix, falling_factorial, monomial_entry, BandedMatrix, CoeffVec, HamiltonianSpec, C64,
};
use crate::linalg::{self, CMatrix};

/// Eigenvalues of a truncation, sorted by real part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<C64>,
    pub dim: usize,
    /// Length of the leading run of eigenvalues that agree with the `2N`
    /// truncation; `None` when no doubling study was run.
    pub converged_count: Option<usize>,
}

impl SpectrumResult {
    pub fn is_converged(&self, j: usize) -> Option<bool> {
        self.converged_count.map(|c| j < c)
    }
}

/// Order used for eigenvalue pairing: real part, then imaginary part, then
/// magnitude.
pub fn spectral_order(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re)
        .then(a.im.total_cmp(&b.im))
        .then(a.norm().total_cmp(&b.norm()))
}

pub fn sort_spectrum(v: &mut [C64]) {
    v.sort_by(spectral_order);
}

/// Couplings of the Gribov Hamiltonian
/// `λ'' A*³A³ + λ' A*²A² + μ A*A + iλ A*(A + A*)A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GribovParams {
    pub mu: f64,
    pub lambda: f64,
    pub lambda_prime: f64,
    pub lambda_second: f64,
}

impl GribovParams {
    /// The whole operator as plain monomial terms with no leading part.
    pub fn terms(&self) -> Vec<crate::fock::MonomialTerm> {
        use crate::fock::MonomialTerm;
        let mut t = Vec::new();
        for (p, c) in [
            (3, self.lambda_second),
            (2, self.lambda_prime),
            (1, self.mu),
        ] {
            if c != 0.0 {
                t.push(MonomialTerm::real(p, p, c));
            }
        }
        if self.lambda != 0.0 {
            t.push(MonomialTerm::new(1, 2, C64::new(0.0, self.lambda)));
            t.push(MonomialTerm::new(2, 1, C64::new(0.0, self.lambda)));
        }
        t
    }
}

/// Gribov Hamiltonian as a spec whose leading power `k` is the largest
/// `p` with a nonzero `A*^p A^p` coupling.
///
/// The leading part carries coefficient one, so a coupling `c ≠ 1` at that
/// power leaves a residual `(k, k, c − 1)` term.
pub fn gribov_spec(p: &GribovParams) -> HamiltonianSpec {
    let mut terms = p.terms();
    let k = terms
        .iter()
        .filter(|t| t.i == t.j && t.i > 0)
        .map(|t| t.i)
        .max()
        .unwrap_or(0);
    if k > 0 {
        let idx = terms.iter().position(|t| t.i == k && t.j == k).unwrap();
        let c = terms[idx].a - 1.0;
        if c == C64::new(0.0, 0.0) {
            terms.remove(idx);
        } else {
            terms[idx].a = c;
        }
    }
    HamiltonianSpec::new(k, terms)
}

/// The Gribov operator as a perturbation (no leading part), e.g. for use
/// as `B` next to a separate `A*^k A^k`.
pub fn gribov_perturbation(p: &GribovParams) -> HamiltonianSpec {
    HamiltonianSpec::new(0, p.terms())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeunVariant {
    /// `A*(A + A*)A`.
    Cubic,
    /// `A + A*(A − A*)A`.
    Diffusion,
}

pub fn heun_spec(variant: HeunVariant) -> HamiltonianSpec {
    let one = C64::new(1.0, 0.0);
    let s = HamiltonianSpec::zero();
    match variant {
        HeunVariant::Cubic => s.with_term(1, 2, one).with_term(2, 1, one),
        HeunVariant::Diffusion => s
            .with_term(0, 1, one)
            .with_term(1, 2, one)
            .with_term(2, 1, -one),
    }
}

/// Newton refinement of an eigenvalue of a complex tridiagonal matrix on
/// the determinant ratio recurrence. Returns `None` if it does not settle
/// within `max_move` of the start.
fn polish_tridiagonal(
    diag: &[C64],
    prod: &[C64],
    start: C64,
    max_move: f64,
    tiny: f64,
) -> Option<C64> {
    let mut s = start;
    for _ in 0..30 {
        let mut q = diag[0] - s;
        let mut dq = C64::new(-1.0, 0.0);
        if q == C64::new(0.0, 0.0) && (diag.len() == 1 || prod[0] == C64::new(0.0, 0.0)) {
            return Some(s);
        }
        if q == C64::new(0.0, 0.0) {
            q = C64::new(tiny, 0.0);
        }
        let mut sum = dq / q;
        for i in 1..diag.len() {
            let qn = diag[i] - s - prod[i - 1] / q;
            let dqn = C64::new(-1.0, 0.0) + prod[i - 1] * dq / (q * q);
            q = qn;
            dq = dqn;
            if q == C64::new(0.0, 0.0) {
                // an exact zero pivot followed by a decoupled block is an exact eigenvalue
                if i == diag.len() - 1 || prod[i] == C64::new(0.0, 0.0) {
                    return Some(s);
                }
                q = C64::new(tiny, 0.0);
            }
            sum += dq / q;
        }
        if sum == C64::new(0.0, 0.0) || !sum.re.is_finite() || !sum.im.is_finite() {
            return None;
        }
        let step = sum.inv();
        s -= step;
        if (s - start).norm() > max_move {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * s.norm().max(1.0) {
            return Some(s);
        }
    }
    None
}

/// All eigenvalues of the truncation, sorted by [`spectral_order`].
///
/// Dense Hessenberg reduction and shifted QR. For tridiagonal input each
/// eigenvalue is then refined by Newton's method on the characteristic
/// polynomial, which recovers relative accuracy for the small eigenvalues
/// of strongly graded matrices.
pub fn eigen_complex(m: &BandedMatrix) -> Result<SpectrumResult> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::invalid("eigen_complex", "empty matrix"));
    }
    let dense = CMatrix::from_banded(m);
    let mut ev = linalg::eigenvalues(&dense)?;
    if m.is_tridiagonal() && n > 1 {
        let diag = m.diagonal(0);
        let sup = m.diagonal(1);
        let sub = m.diagonal(-1);
        let prod: Vec<C64> = sup.iter().zip(&sub).map(|(a, b)| a * b).collect();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for v in ev.iter_mut() {
            if let Some(p) =
                polish_tridiagonal(&diag, &prod, *v, 1e-12 * scale, f64::EPSILON * scale)
            {
                *v = p;
            }
        }
    }
    sort_spectrum(&mut ev);
    Ok(SpectrumResult {
        eigenvalues: ev,
        dim: n,
        converged_count: None,
    })
}

/// Eigenpairs with unit eigenvectors from inverse iteration on the dense
/// matrix; intended for moderate `N`.
pub fn eigen_complex_vectors(m: &BandedMatrix) -> Result<(SpectrumResult, Vec<CoeffVec>)> {
    let res = eigen_complex(m)?;
    let dense = CMatrix::from_banded(m);
    let vecs = res
        .eigenvalues
        .iter()
        .map(|&s| CoeffVec::new(linalg::inverse_iteration(&dense, s)))
        .collect::<Result<Vec<_>>>()?;
    Ok((res, vecs))
}

/// Spectrum at `N` with `converged_count` from a comparison against `2N`.
///
/// An eigenvalue counts as converged when it moves by at most
/// `tol · max(1, |σ|)`; the count is the length of the leading run.
pub fn doubling_study(spec: &HamiltonianSpec, n: usize, tol: f64) -> Result<SpectrumResult> {
    let mut a = eigen_complex(&build_matrix(spec, n)?)?;
    let b = eigen_complex(&build_matrix(spec, 2 * n)?)?;
    let count = a
        .eigenvalues
        .iter()
        .zip(&b.eigenvalues)
        .take_while(|(x, y)| (*x - *y).norm() <= tol * x.norm().max(1.0))
        .count();
    a.converged_count = Some(count);
    Ok(a)
}

/// Result of [`domination_profile`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domination {
    pub epsilon: f64,
    /// Certified constant on the truncation.
    pub c_eps: f64,
    /// Row where the maximum is attained.
    pub argmax: usize,
    pub dim: usize,
}

/// `C_ε(N)` such that `|⟨Pφ, φ⟩| ≤ ε⟨A*^k A^k φ, φ⟩ + C_ε‖φ‖²` for every
/// `φ` in the truncation.
///
/// Uses the diagonal comparison `|φ_r||φ_c| ≤ ½(|φ_r|² + |φ_c|²)` on the
/// entrywise absolute values of each term, which bounds the form by
/// `Σ_n w(n)|φ_n|²`.
pub fn domination_profile(spec: &HamiltonianSpec, eps: f64, n: usize) -> Result<Domination> {
    if spec.k == 0 || spec.m() >= 2 * spec.k {
        return Err(Error::invalid(
            "domination_profile",
            "need k ≥ 1 and m ≤ 2k − 1",
        ));
    }
    if !(eps > 0.0) || n == 0 {
        return Err(Error::invalid("domination_profile", "need ε > 0 and N ≥ 1"));
    }
    let mut w = vec![0.0; n];
    for t in &spec.terms {
        let a = t.a.norm();
        for col in t.j as usize..n {
            let row = col as i64 + t.shift();
            if row < 0 || row >= n as i64 {
                continue;
            }
            let v = 0.5 * a * monomial_entry(col as u64, t.i as u64, t.j as u64);
            w[row as usize] += v;
            w[col] += v;
        }
    }
    let (argmax, c_eps) = w
        .iter()
        .enumerate()
        .map(|(i, wi)| {
            (
                i,
                (wi - eps * falling_factorial(i as u64, spec.k as u64)).max(0.0),
            )
        })
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(Domination {
        epsilon: eps,
        c_eps,
        argmax,
        dim: n,
    })
}

/// Number of vectors violating the domination inequality, with a relative
/// slack of `1e-12` for rounding.
pub fn domination_audit(
    spec: &HamiltonianSpec,
    d: &Domination,
    vectors: &[CoeffVec],
) -> Result<usize> {
    let p = spec.perturbation();
    let s = HamiltonianSpec::leading(spec.k);
    let mut bad = 0;
    for v in vectors {
        let lhs = crate::fock::inner(&crate::fock::apply_op(&p, v)?, v)?.norm();
        let sk = crate::fock::inner(&crate::fock::apply_op(&s, v)?, v)?.re;
        let rhs = d.epsilon * sk + d.c_eps * v.norm_sqr();
        if lhs > rhs * (1.0 + 1e-12) + 1e-300 {
            bad += 1;
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subordination {
    pub ratio: f64,
    pub argmax: usize,
    /// `‖P e_n‖ / ‖S_k e_n‖^{1/2}` for `n = k, …, N − 1`.
    pub sequence: Vec<f64>,
}

/// `sup_n ‖P e_n‖ / ‖A*^k A^k e_n‖^{1/2}` over `k ≤ n < N`, with `P` applied
/// to `e_n` exactly (no truncation).
pub fn subordination_ratio(p: &HamiltonianSpec, k: u32, n: usize) -> Result<Subordination> {
    if p.m() > k {
        return Err(Error::invalid("subordination_ratio", "need m ≤ k"));
    }
    if k == 0 {
        return Err(Error::invalid("subordination_ratio", "need k ≥ 1"));
    }
    let mut sequence = Vec::new();
    let mut best = (k as usize, 0.0);
    for col in k as usize..n {
        let mut image: Vec<(i64, C64)> = Vec::new();
        for t in &p.terms {
            let a = monomial_entry(col as u64, t.i as u64, t.j as u64);
            if a == 0.0 {
                continue;
            }
            let row = col as i64 + t.shift();
            match image.iter_mut().find(|(r, _)| *r == row) {
                Some(e) => e.1 += t.a * a,
                None => image.push((row, t.a * a)),
            }
        }
        let num = image.iter().map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt();
        let r = num / falling_factorial(col as u64, k as u64).sqrt();
        if r > best.1 {
            best = (col, r);
        }
        sequence.push(r);
    }
    Ok(Subordination {
        ratio: best.1,
        argmax: best.0,
        sequence,
    })
}

/// Constant `C` with `‖e_n‖`-wise bound `g(n) ≤ ε λ_{n,k} + C`, where
/// `g(n)² = T Σ_t |a_t|² α_t(n)²` over the `T` terms of the perturbation.
///
/// Since each monomial maps basis vectors injectively, this gives
/// `‖Pφ‖ ≤ ε‖A*^k A^k φ‖ + C‖φ‖` on the truncation.
pub fn norm_domination(spec: &HamiltonianSpec, eps: f64, n: usize) -> Result<f64> {
    if spec.k == 0 || spec.m() >= 2 * spec.k {
        return Err(Error::invalid(
            "norm_domination",
            "need k ≥ 1 and m ≤ 2k − 1",
        ));
    }
    let t = spec.terms.len() as f64;
    let mut c: f64 = 0.0;
    for col in 0..n {
        let g2: f64 = spec
            .terms
            .iter()
            .map(|term| {
                let a = monomial_entry(col as u64, term.i as u64, term.j as u64);
                term.a.norm_sqr() * a * a
            })
            .sum();
        let g = (t * g2).sqrt();
        c = c.max(g - eps * falling_factorial(col as u64, spec.k as u64));
    }
    Ok(c.max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvertibilityMargin {
    /// Smallest singular value of `M + βI`.
    pub margin: f64,
    /// `‖P (A*^k A^k + βI)^{-1}‖` on the truncation.
    pub neumann_norm: f64,
    /// `neumann_norm < 1`, the contraction condition.
    pub contraction: bool,
}

/// Smallest singular value of `M + βI` and the Neumann contraction norm.
pub fn invertibility_margin(
    spec: &HamiltonianSpec,
    beta: f64,
    n: usize,
) -> Result<InvertibilityMargin> {
    if !(beta > 0.0) {
        return Err(Error::invalid("invertibility_margin", "β must be positive"));
    }
    let m = build_matrix(spec, n)?.shifted(C64::new(beta, 0.0));
    let sv = linalg::singular_values(&CMatrix::from_banded(&m));
    let w: Vec<C64> = (0..n)
        .map(|i| {
            C64::new(
                1.0 / (falling_factorial(i as u64, spec.k as u64) + beta),
                0.0,
            )
        })
        .collect();
    let pr = build_matrix(&spec.perturbation(), n)?.scale_columns(&w);
    let neumann_norm = linalg::singular_values(&CMatrix::from_banded(&pr))
        .last()
        .copied()
        .unwrap_or(0.0);
    Ok(InvertibilityMargin {
        margin: sv[0],
        neumann_norm,
        contraction: neumann_norm < 1.0,
    })
}

/// Shift past which `A*^k A^k + P + βI` is invertible: `C/(1 − 2ε)` with
/// `C` from [`norm_domination`].
pub fn invertibility_threshold(spec: &HamiltonianSpec, eps: f64, n: usize) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::invalid(
            "invertibility_threshold",
            "need 0 < ε < 1/2",
        ));
    }
    Ok(norm_domination(spec, eps, n)? / (1.0 - 2.0 * eps))
}

/// `Σ_{n=k}^{N} λ_{n,k}^{-p}`.
pub fn schatten_partial(k: u32, p: f64, n: usize) -> Result<f64> {
    if k == 0 || !(p > 0.0) {
        return Err(Error::invalid("schatten_partial", "need k ≥ 1 and p > 0"));
    }
    Ok((k as usize..=n)
        .rev()
        .map(|i| falling_factorial(i as u64, k as u64).powf(-p))
        .sum())
}

/// Smallest eigenvalue of the Hermitian part `½(M + M†)`.
pub fn numerical_range_bound(m: &BandedMatrix) -> f64 {
    let d = CMatrix::from_banded(m);
    let da = d.adjoint();
    let n = d.dim();
    let mut h = CMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            h[(r, c)] = (d[(r, c)] + da[(r, c)]) * 0.5;
        }
    }
    linalg::hermitian_eigenvalues(&h)
        .first()
        .copied()
        .unwrap_or(0.0)
}
