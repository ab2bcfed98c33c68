//! Truncated Fock-space representation.
//!
//! Elements of the Bargmann space are represented by their coefficients in
//! the orthonormal basis `e_n(z) = z^n / √n!`. With the measure
//! `(1/π) e^{-|z|²} dx dy` this basis is orthonormal, so the coefficient
//! space carries the plain ℓ² inner product. (Without the `1/π` the squared
//! norm picks up a factor π; nothing in this crate uses that scaling.)
//!
//! On this basis the creation operator `A* = z` and the annihilation operator
//! `A = d/dz` act as
//!
//! ```text
//! A e_n  = √n     e_{n-1}
//! A* e_n = √(n+1) e_{n+1}
//! A*^i A^j e_n = √(λ_{n+i-j,i} λ_{n,j}) e_{n+i-j}
//! ```
//!
//! where `λ_{n,k} = n(n-1)⋯(n-k+1)` is the falling factorial. Every
//! monomial `A*^i A^j` is therefore a single shifted diagonal and any finite
//! sum of them is a banded matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest `n` for which `√n!` is formed as a direct product.
const DIRECT_FACTORIAL_LIMIT: u64 = 150;

/// `ln n!`, exact summation up to 150 and a Stirling series beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n <= DIRECT_FACTORIAL_LIMIT {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        let x = n as f64;
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        x * x.ln() - x
            + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
            + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
    }
}

/// `√n!`. Overflows to infinity past n ≈ 340, use [`ln_factorial`] there.
pub fn sqrt_factorial(n: u64) -> f64 {
    if n <= DIRECT_FACTORIAL_LIMIT {
        (1..=n).map(|k| (k as f64).sqrt()).product()
    } else {
        (0.5 * ln_factorial(n)).exp()
    }
}

/// Basis function `e_n(z) = z^n / √n!`.
pub fn basis_eval(n: u64, z: C64) -> C64 {
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    if z == ZERO {
        return ZERO;
    }
    if n <= DIRECT_FACTORIAL_LIMIT {
        // Incremental product keeps intermediate magnitudes moderate.
        let mut acc = C64::new(1.0, 0.0);
        for k in 1..=n {
            acc *= z / (k as f64).sqrt();
        }
        acc
    } else {
        (z.ln() * n as f64 - 0.5 * ln_factorial(n)).exp()
    }
}

/// Falling factorial `λ_{n,k} = n(n-1)⋯(n-k+1)`; zero when `k > n`.
///
/// This is the eigenvalue of `A*^k A^k` on `e_n`.
pub fn falling_factorial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|t| (n - t) as f64).product()
}

/// Exact integer falling factorial, `None` on overflow.
pub fn falling_factorial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    (0..k).try_fold(1u128, |acc, t| acc.checked_mul((n - t) as u128))
}

/// Coefficient of `e_{n+i-j}` in `A*^i A^j e_n`.
pub fn monomial_entry(n: u64, i: u64, j: u64) -> f64 {
    if j > n {
        return 0.0;
    }
    falling_factorial(n + i - j, i).sqrt() * falling_factorial(n, j).sqrt()
}

/// Finite coefficient vector `(a_0, …, a_{N-1})` in the basis `e_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct CoeffVec {
    coeffs: Vec<C64>,
}

impl TryFrom<Vec<C64>> for CoeffVec {
    type Error = Error;

    fn try_from(coeffs: Vec<C64>) -> Result<Self> {
        CoeffVec::new(coeffs)
    }
}

impl From<CoeffVec> for Vec<C64> {
    fn from(v: CoeffVec) -> Self {
        v.coeffs
    }
}

impl CoeffVec {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid(
                "CoeffVec::new",
                "dimension must be positive",
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "CoeffVec::zeros: dimension must be positive");
        Self {
            coeffs: vec![ZERO; dim],
        }
    }

    /// Unit vector `e_n` in a space of dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Self {
        assert!(
            n < dim,
            "CoeffVec::basis: index {n} outside dimension {dim}"
        );
        let mut v = Self::zeros(dim);
        v.coeffs[n] = C64::new(1.0, 0.0);
        v
    }

    /// Coefficients of the reproducing kernel `K(·, z) = Σ conj(e_n(z)) e_n`
    /// truncated to `dim` terms.
    pub fn reproducing_kernel(z: C64, dim: usize) -> Self {
        Self {
            coeffs: (0..dim as u64).map(|n| basis_eval(n, z).conj()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.coeffs
    }

    /// `‖φ‖² = Σ |a_n|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Point evaluation `φ(z) = Σ a_n e_n(z)`.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * basis_eval(n as u64, z))
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Copy resized to `dim`, zero padding or truncating the tail.
    pub fn resized(&self, dim: usize) -> Self {
        assert!(dim > 0);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim, ZERO);
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims("CoeffVec::sub", self.dim(), other.dim())?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

fn check_dims(op: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { op, expected, got });
    }
    Ok(())
}

/// `⟨u, v⟩ = Σ u_n conj(v_n)`: linear in `u`, conjugate-linear in `v`.
pub fn inner(u: &CoeffVec, v: &CoeffVec) -> Result<C64> {
    check_dims("inner", u.dim(), v.dim())?;
    Ok(u.coeffs
        .iter()
        .zip(&v.coeffs)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// One monomial `a · A*^i A^j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "TermRepr", into = "TermRepr")]
pub struct MonomialTerm {
    /// Power of the creation operator.
    pub i: u32,
    /// Power of the annihilation operator.
    pub j: u32,
    pub a: C64,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    i: u32,
    j: u32,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl From<TermRepr> for MonomialTerm {
    fn from(t: TermRepr) -> Self {
        MonomialTerm {
            i: t.i,
            j: t.j,
            a: C64::new(t.re, t.im),
        }
    }
}

impl From<MonomialTerm> for TermRepr {
    fn from(t: MonomialTerm) -> Self {
        TermRepr {
            i: t.i,
            j: t.j,
            re: t.a.re,
            im: t.a.im,
        }
    }
}

impl MonomialTerm {
    pub fn new(i: u32, j: u32, a: C64) -> Self {
        Self { i, j, a }
    }

    pub fn real(i: u32, j: u32, a: f64) -> Self {
        Self::new(i, j, C64::new(a, 0.0))
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }

    /// Row offset `i - j` produced by the term.
    pub fn shift(&self) -> i64 {
        self.i as i64 - self.j as i64
    }

    /// The adjoint monomial `conj(a) · A*^j A^i`.
    pub fn adjoint(&self) -> Self {
        Self::new(self.j, self.i, self.a.conj())
    }
}

/// `H = λ_k-term + Σ a_ij A*^i A^j` where the leading part is `A*^k A^k`.
///
/// `k = 0` means no leading term; the spec is then a pure perturbation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub k: u32,
    #[serde(default)]
    pub terms: Vec<MonomialTerm>,
}

impl HamiltonianSpec {
    pub fn new(k: u32, terms: Vec<MonomialTerm>) -> Self {
        Self { k, terms }
    }

    /// The zero operator.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `A*^k A^k` alone.
    pub fn leading(k: u32) -> Self {
        Self::new(k, Vec::new())
    }

    /// `c · I`.
    pub fn scalar(c: C64) -> Self {
        Self::new(0, vec![MonomialTerm::new(0, 0, c)])
    }

    pub fn annihilation() -> Self {
        Self::new(0, vec![MonomialTerm::real(0, 1, 1.0)])
    }

    pub fn creation() -> Self {
        Self::new(0, vec![MonomialTerm::real(1, 0, 1.0)])
    }

    /// Number operator `A*A`, written as a leading term with `k = 1`.
    pub fn number() -> Self {
        Self::leading(1)
    }

    pub fn with_term(mut self, i: u32, j: u32, a: C64) -> Self {
        self.terms.push(MonomialTerm::new(i, j, a));
        self
    }

    /// Highest total degree `max(i + j)` among the terms, 0 without terms.
    pub fn m(&self) -> u32 {
        self.terms
            .iter()
            .map(MonomialTerm::degree)
            .max()
            .unwrap_or(0)
    }

    /// The perturbation part, i.e. the same terms with the leading power dropped.
    pub fn perturbation(&self) -> Self {
        Self::new(0, self.terms.clone())
    }

    /// `m ≤ 2k - 1` with `k > 0`: the terms are form-bounded by `A*^k A^k`
    /// with arbitrarily small relative bound.
    pub fn is_dominated(&self) -> bool {
        self.k > 0 && self.m() < 2 * self.k
    }

    /// `m ≤ 2k - 3`: the regime where the contour trace formula applies.
    pub fn is_trace_admissible(&self) -> bool {
        self.k > 0 && self.m() + 3 <= 2 * self.k
    }

    /// Lower and upper bandwidth of the compiled matrix.
    pub fn bandwidths(&self) -> (usize, usize) {
        self.terms.iter().fold((0, 0), |(lo, up), t| {
            let s = t.shift();
            (lo.max(s.max(0) as usize), up.max((-s).max(0) as usize))
        })
    }

    /// The adjoint operator (leading part is self-adjoint).
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.k,
            self.terms.iter().map(MonomialTerm::adjoint).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::invalid("HamiltonianSpec::from_json", e.to_string()))
    }
}

/// Square matrix stored by diagonals.
///
/// Offset `d = c - r` ranges over `-lower..=upper`; every entry outside that
/// band is zero by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    dim: usize,
    lower: usize,
    upper: usize,
    // diags[lower + d][r] holds entry (r, r + d)
    diags: Vec<Vec<C64>>,
}

impl BandedMatrix {
    pub fn zeros(dim: usize, lower: usize, upper: usize) -> Self {
        Self {
            dim,
            lower,
            upper,
            diags: vec![vec![ZERO; dim]; lower + upper + 1],
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), 0, 0);
        m.diags[0].copy_from_slice(diag);
        m
    }

    /// Tridiagonal matrix from its three diagonals (`sub` and `sup` have length `n - 1`).
    pub fn tridiagonal(sub: &[C64], diag: &[C64], sup: &[C64]) -> Self {
        let n = diag.len();
        assert!(sub.len() + 1 == n.max(1) && sup.len() + 1 == n.max(1));
        let mut m = Self::zeros(n, 1, 1);
        for r in 0..n {
            m.set(r, r, diag[r]);
            if r + 1 < n {
                m.set(r, r + 1, sup[r]);
                m.set(r + 1, r, sub[r]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    fn slot(&self, r: usize, c: usize) -> Option<(usize, usize)> {
        let d = c as i64 - r as i64;
        if d < -(self.lower as i64) || d > self.upper as i64 || r >= self.dim || c >= self.dim {
            None
        } else {
            Some(((d + self.lower as i64) as usize, r))
        }
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.slot(r, c).map_or(ZERO, |(d, r)| self.diags[d][r])
    }

    /// Sets an entry inside the band. Panics outside it.
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        let (d, r) = self
            .slot(r, c)
            .unwrap_or_else(|| panic!("BandedMatrix::set: ({r}, {c}) outside the band"));
        self.diags[d][r] = v;
    }

    pub fn add(&mut self, r: usize, c: usize, v: C64) {
        let (d, r) = self
            .slot(r, c)
            .unwrap_or_else(|| panic!("BandedMatrix::add: ({r}, {c}) outside the band"));
        self.diags[d][r] += v;
    }

    /// Entries of the diagonal at offset `d = c - r`, indexed by row.
    pub fn diagonal(&self, d: i64) -> Vec<C64> {
        let n = self.dim as i64;
        let rows = (0.max(-d))..(n.min(n - d));
        rows.map(|r| self.get(r as usize, (r + d) as usize))
            .collect()
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(
            x.len(),
            self.dim,
            "BandedMatrix::matvec: dimension mismatch"
        );
        let mut y = vec![ZERO; self.dim];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        let n = self.dim;
        for (r, yr) in y.iter_mut().enumerate().take(n) {
            let c0 = r.saturating_sub(self.lower);
            let c1 = (r + self.upper + 1).min(n);
            let mut acc = ZERO;
            for c in c0..c1 {
                acc += self.diags[c + self.lower - r][r] * x[c];
            }
            *yr = acc;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim, self.upper, self.lower);
        for r in 0..self.dim {
            let c0 = r.saturating_sub(self.lower);
            let c1 = (r + self.upper + 1).min(self.dim);
            for c in c0..c1 {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    /// `self + s·I`.
    pub fn shifted(&self, s: C64) -> Self {
        let mut m = self.clone();
        for v in m.diags[self.lower].iter_mut() {
            *v += s;
        }
        m
    }

    /// Multiplies column `c` by `w[c]`, i.e. `self · diag(w)`.
    pub fn scale_columns(&self, w: &[C64]) -> Self {
        let mut m = self.clone();
        for r in 0..self.dim {
            let c0 = r.saturating_sub(self.lower);
            let c1 = (r + self.upper + 1).min(self.dim);
            for c in c0..c1 {
                let (d, rr) = m.slot(r, c).unwrap();
                m.diags[d][rr] *= w[c];
            }
        }
        m
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.diags
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// `max(‖M‖₁, ‖M‖_∞)`, an upper bound for the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let n = self.dim;
        let mut rows = vec![0.0; n];
        let mut cols = vec![0.0; n];
        for r in 0..n {
            let c0 = r.saturating_sub(self.lower);
            let c1 = (r + self.upper + 1).min(n);
            for c in c0..c1 {
                let a = self.get(r, c).norm();
                rows[r] += a;
                cols[c] += a;
            }
        }
        rows.iter().chain(&cols).copied().fold(0.0, f64::max)
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.lower <= 1 && self.upper <= 1
    }
}

/// Galerkin truncation `P_N M P_N` of the operator described by `spec`.
///
/// Creation terms that would write above row `N-1` are dropped, so adjoint
/// pairs only agree on the interior block.
pub fn build_matrix(spec: &HamiltonianSpec, n: usize) -> Result<BandedMatrix> {
    if n == 0 {
        return Err(Error::invalid(
            "build_matrix",
            "truncation dimension must be ≥ 1",
        ));
    }
    let (lower, upper) = spec.bandwidths();
    let mut m = BandedMatrix::zeros(n, lower, upper);
    if spec.k > 0 {
        for col in 0..n {
            m.add(
                col,
                col,
                C64::new(falling_factorial(col as u64, spec.k as u64), 0.0),
            );
        }
    }
    for t in &spec.terms {
        for col in (t.j as usize)..n {
            let row = col as i64 + t.shift();
            if row < 0 || row >= n as i64 {
                continue;
            }
            let alpha = monomial_entry(col as u64, t.i as u64, t.j as u64);
            m.add(row as usize, col, t.a * alpha);
        }
    }
    Ok(m)
}

/// Applies `spec` to `v` without forming the matrix.
pub fn apply_op(spec: &HamiltonianSpec, v: &CoeffVec) -> Result<CoeffVec> {
    let n = v.dim();
    let x = v.as_slice();
    let mut out = vec![ZERO; n];
    if spec.k > 0 {
        for (col, (o, xv)) in out.iter_mut().zip(x).enumerate() {
            *o += xv * falling_factorial(col as u64, spec.k as u64);
        }
    }
    for t in &spec.terms {
        for col in (t.j as usize)..n {
            let row = col as i64 + t.shift();
            if row < 0 || row >= n as i64 {
                continue;
            }
            out[row as usize] += t.a * monomial_entry(col as u64, t.i as u64, t.j as u64) * x[col];
        }
    }
    CoeffVec::new(out)
}

/// `apply_op` that checks the vector against an expected truncation size.
pub fn apply_op_checked(spec: &HamiltonianSpec, v: &CoeffVec, dim: usize) -> Result<CoeffVec> {
    check_dims("apply_op", dim, v.dim())?;
    apply_op(spec, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_eval_small_cases() {
        assert_eq!(basis_eval(0, c(3.0, 4.0)), c(1.0, 0.0));
        assert_eq!(basis_eval(1, c(1.0, 0.0)), c(1.0, 0.0));
        assert_relative_eq!(
            basis_eval(3, c(2.0, 0.0)).re,
            8.0 / 6f64.sqrt(),
            epsilon = 1e-14
        );
        assert_eq!(basis_eval(5, C64::new(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn basis_eval_continuous_across_factorial_switch() {
        let z = c(3.0, 1.5);
        for n in [149u64, 150, 151, 152] {
            let direct = (0..n).fold(c(1.0, 0.0), |acc, k| acc * z / ((k + 1) as f64).sqrt());
            let got = basis_eval(n, z);
            assert_relative_eq!(got.re, direct.re, max_relative = 1e-11);
            assert_relative_eq!(
                got.im,
                direct.im,
                max_relative = 1e-10,
                epsilon = 1e-10 * direct.norm()
            );
        }
    }

    #[test]
    fn stirling_matches_summation() {
        let exact: f64 = (2..=400u64).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(ln_factorial(400), exact, max_relative = 1e-14);
    }

    #[test]
    fn falling_factorial_cases() {
        assert_eq!(falling_factorial(5, 1), 5.0);
        assert_eq!(falling_factorial(2, 3), 0.0);
        assert_eq!(falling_factorial(5, 3), 60.0);
        assert_eq!(falling_factorial(7, 0), 1.0);
        assert_eq!(falling_factorial_exact(5, 3), Some(60));
    }

    #[test]
    fn monomial_entry_cases() {
        for n in 0..20u64 {
            assert_relative_eq!(monomial_entry(n, 1, 1), n as f64, epsilon = 1e-12);
            assert_relative_eq!(
                monomial_entry(n, 2, 1),
                n as f64 * ((n + 1) as f64).sqrt(),
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(monomial_entry(4, 0, 2), 12f64.sqrt(), epsilon = 1e-14);
        assert_eq!(monomial_entry(1, 0, 2), 0.0);
    }

    #[test]
    fn build_matrix_annihilation() {
        let m = build_matrix(&HamiltonianSpec::annihilation(), 2).unwrap();
        assert_eq!(
            m.to_dense(),
            vec![
                vec![c(0.0, 0.0), c(1.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0)]
            ]
        );
    }

    #[test]
    fn build_matrix_number_operator_is_diagonal() {
        let m = build_matrix(&HamiltonianSpec::number(), 4).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expect = if r == col { r as f64 } else { 0.0 };
                assert_eq!(m.get(r, col), c(expect, 0.0));
            }
        }
    }

    #[test]
    fn build_matrix_cubic_heun_columns() {
        let spec = HamiltonianSpec::new(
            0,
            vec![MonomialTerm::real(1, 2, 1.0), MonomialTerm::real(2, 1, 1.0)],
        );
        let n = 6;
        let m = build_matrix(&spec, n).unwrap();
        for col in 0..n {
            let nf = col as f64;
            if col >= 1 {
                assert_relative_eq!(
                    m.get(col - 1, col).re,
                    (nf - 1.0) * nf.sqrt(),
                    epsilon = 1e-12
                );
            }
            if col + 1 < n {
                assert_relative_eq!(
                    m.get(col + 1, col).re,
                    nf * (nf + 1.0).sqrt(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn build_matrix_rejects_zero_dim_and_accepts_zero_spec() {
        assert!(build_matrix(&HamiltonianSpec::zero(), 0).is_err());
        let m = build_matrix(&HamiltonianSpec::zero(), 3).unwrap();
        assert_eq!(m.max_abs(), 0.0);
    }

    #[test]
    fn apply_op_examples() {
        let a = HamiltonianSpec::annihilation();
        let out = apply_op(&a, &CoeffVec::basis(1, 4)).unwrap();
        assert_eq!(out, CoeffVec::basis(0, 4));

        let zero = apply_op(&HamiltonianSpec::leading(3), &CoeffVec::zeros(5)).unwrap();
        assert_eq!(zero.norm(), 0.0);

        let s = 1.0 / 3f64.sqrt();
        let v = CoeffVec::from_real(&[s, s, s]).unwrap();
        let out = apply_op(&HamiltonianSpec::number(), &v).unwrap();
        for (n, a) in out.as_slice().iter().enumerate() {
            assert_relative_eq!(a.re, n as f64 * s, epsilon = 1e-15);
        }
    }

    #[test]
    fn inner_examples() {
        let e2 = CoeffVec::basis(2, 4);
        assert_eq!(inner(&e2, &e2).unwrap(), c(1.0, 0.0));
        assert_eq!(
            inner(&CoeffVec::basis(1, 4), &CoeffVec::basis(3, 4)).unwrap(),
            c(0.0, 0.0)
        );
        let u = CoeffVec::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let v = CoeffVec::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(inner(&u, &v).unwrap(), c(0.0, 0.0));
        assert!(matches!(
            inner(&u, &CoeffVec::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_op_checked_rejects_mismatch() {
        let v = CoeffVec::zeros(3);
        assert!(apply_op_checked(&HamiltonianSpec::number(), &v, 4).is_err());
    }

    #[test]
    fn spec_flags() {
        let s = HamiltonianSpec::leading(3).with_term(1, 2, c(0.0, 1.0));
        assert_eq!(s.m(), 3);
        assert!(s.is_dominated());
        assert!(s.is_trace_admissible());
        let s = HamiltonianSpec::leading(2).with_term(1, 2, c(0.0, 1.0));
        assert!(s.is_dominated());
        assert!(!s.is_trace_admissible());
        assert!(!HamiltonianSpec::leading(1)
            .with_term(1, 1, c(1.0, 0.0))
            .is_trace_admissible());
    }

    #[test]
    fn spec_json_schema() {
        let json = r#"{"k": 3, "terms": [{"i": 1, "j": 2, "re": 0.0, "im": 0.2}, {"i": 1, "j": 1, "re": 1.0, "im": 0.0}]}"#;
        let spec = HamiltonianSpec::from_json(json).unwrap();
        assert_eq!(spec.k, 3);
        assert_eq!(spec.terms[0], MonomialTerm::new(1, 2, c(0.0, 0.2)));
        let back = HamiltonianSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let v: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(v["terms"][0]["im"], 0.2);
    }
}
