//! Tridiagonal and Jacobi-matrix toolkit.
//!
//! A [`Tridiag`] stores the diagonal `a_1..a_n`, the superdiagonal
//! `b_1..b_{n-1}` and the subdiagonal `c_1..c_{n-1}` of a real tridiagonal
//! matrix. Indices in the doc comments are 1-based to match the usual
//! presentation of the θ/φ recurrences; the slices themselves are 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TridiagRepr", into = "TridiagRepr")]
pub struct Tridiag {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TridiagRepr {
    a: Vec<f64>,
    #[serde(default)]
    b: Vec<f64>,
    #[serde(default)]
    c: Vec<f64>,
}

impl TryFrom<TridiagRepr> for Tridiag {
    type Error = Error;

    fn try_from(r: TridiagRepr) -> Result<Self> {
        Tridiag::new(r.a, r.b, r.c)
    }
}

impl From<Tridiag> for TridiagRepr {
    fn from(t: Tridiag) -> Self {
        TridiagRepr {
            a: t.a,
            b: t.b,
            c: t.c,
        }
    }
}

impl Tridiag {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::invalid("Tridiag::new", "empty diagonal"));
        }
        if b.len() != n - 1 || c.len() != n - 1 {
            return Err(Error::invalid(
                "Tridiag::new",
                format!(
                    "off-diagonals must have length {} (got b: {}, c: {})",
                    n - 1,
                    b.len(),
                    c.len()
                ),
            ));
        }
        Ok(Self { a, b, c })
    }

    /// Symmetric matrix with off-diagonal `b` on both sides.
    pub fn symmetric(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let c = b.clone();
        Self::new(a, b, c)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: vec![1.0; n],
            b: vec![0.0; n.saturating_sub(1)],
            c: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.a
    }

    pub fn sup(&self) -> &[f64] {
        &self.b
    }

    pub fn sub(&self) -> &[f64] {
        &self.c
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.c
    }

    /// All products `b_i c_i` strictly positive.
    pub fn is_symmetrizable(&self) -> bool {
        self.b.iter().zip(&self.c).all(|(b, c)| b * c > 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.a[i];
            if i + 1 < n {
                m[i][i + 1] = self.b[i];
                m[i + 1][i] = self.c[i];
            }
        }
        m
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.a[i] * x[i];
                if i + 1 < n {
                    y += self.b[i] * x[i + 1];
                }
                if i > 0 {
                    y += self.c[i - 1] * x[i - 1];
                }
                y
            })
            .collect()
    }
}

/// `P_0(λ), …, P_n(λ)` with `P_i = (a_i - λ) P_{i-1} - b_{i-1} c_{i-1} P_{i-2}`.
///
/// `P_i` is the leading principal minor of order `i` of `T - λI`, so
/// `P_n(λ) = det(T - λI)`.
pub fn char_poly_seq(t: &Tridiag, lambda: f64) -> Vec<f64> {
    let n = t.dim();
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    p.push(t.a[0] - lambda);
    for i in 1..n {
        let next = (t.a[i] - lambda) * p[i] - t.b[i - 1] * t.c[i - 1] * p[i - 1];
        p.push(next);
    }
    p
}

/// Number of sign changes in a Sturm sequence. Exact zeros take the sign
/// opposite to their predecessor.
pub fn sturm_sign_changes(seq: &[f64]) -> usize {
    let mut changes = 0;
    let mut prev = seq.first().copied().unwrap_or(1.0).signum();
    for &p in &seq[1..] {
        let s = if p == 0.0 { -prev } else { p.signum() };
        if s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

/// `θ_n = det T` via the three-term recurrence.
pub fn determinant(t: &Tridiag) -> f64 {
    *theta_seq(t).last().unwrap()
}

/// θ_0..θ_n: `θ_i = a_i θ_{i-1} - b_{i-1} c_{i-1} θ_{i-2}`, θ_0 = 1, θ_1 = a_1.
fn theta_seq(t: &Tridiag) -> Vec<f64> {
    let n = t.dim();
    let mut th = vec![0.0; n + 1];
    th[0] = 1.0;
    th[1] = t.a[0];
    for i in 2..=n {
        th[i] = t.a[i - 1] * th[i - 1] - t.b[i - 2] * t.c[i - 2] * th[i - 2];
    }
    th
}

/// φ_1..φ_{n+1} stored at index i-1: `φ_i = a_i φ_{i+1} - b_i c_i φ_{i+2}`,
/// φ_{n+1} = 1, φ_n = a_n.
fn phi_seq(t: &Tridiag) -> Vec<f64> {
    let n = t.dim();
    let mut ph = vec![0.0; n + 2];
    ph[n + 1] = 1.0;
    ph[n] = t.a[n - 1];
    for i in (1..n).rev() {
        ph[i] = t.a[i - 1] * ph[i + 1] - t.b[i - 1] * t.c[i - 1] * ph[i + 2];
    }
    ph
}

/// Signed logarithmic magnitude, used for long products of off-diagonals.
#[derive(Clone, Copy, Debug)]
struct LogMag {
    ln: f64,
    sign: f64,
}

impl LogMag {
    const ONE: LogMag = LogMag { ln: 0.0, sign: 1.0 };

    fn of(x: f64) -> Self {
        LogMag {
            ln: x.abs().ln(),
            sign: if x == 0.0 { 0.0 } else { x.signum() },
        }
    }

    fn mul(self, o: LogMag) -> Self {
        LogMag {
            ln: self.ln + o.ln,
            sign: self.sign * o.sign,
        }
    }

    fn div(self, o: LogMag) -> Self {
        LogMag {
            ln: self.ln - o.ln,
            sign: self.sign * o.sign,
        }
    }

    fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln.exp()
        }
    }
}

/// Closed-form inverse of a tridiagonal matrix.
///
/// For `i ≤ j`: `(T⁻¹)_ij = (-1)^{i+j} b_i⋯b_{j-1} θ_{i-1} φ_{j+1} / θ_n`,
/// for `i > j`: `(T⁻¹)_ij = (-1)^{i+j} c_j⋯c_{i-1} θ_{j-1} φ_{i+1} / θ_n`.
///
/// The matrix is rejected as singular when `|θ_n|` falls below `1e-12` times
/// the Hadamard bound `Π ‖row_i‖₂`.
pub fn usmani_inverse(t: &Tridiag) -> Result<Vec<Vec<f64>>> {
    let n = t.dim();
    let theta = theta_seq(t);
    let phi = phi_seq(t);
    let det = theta[n];
    let ln_hadamard: f64 = t
        .to_dense()
        .iter()
        .map(|row| row.iter().map(|x| x * x).sum::<f64>().sqrt().ln())
        .sum();
    if det == 0.0 || !det.is_finite() || det.abs().ln() < ln_hadamard + 1e-12_f64.ln() {
        return Err(Error::Singular {
            op: "usmani_inverse",
            det,
        });
    }
    let det = LogMag::of(det);
    let lb: Vec<LogMag> = t.b.iter().map(|&x| LogMag::of(x)).collect();
    let lc: Vec<LogMag> = t.c.iter().map(|&x| LogMag::of(x)).collect();

    let mut inv = vec![vec![0.0; n]; n];
    // 1-based i, j
    for i in 1..=n {
        // upper triangle, products b_i..b_{j-1} accumulated as j grows
        let mut prod = LogMag::ONE;
        for j in i..=n {
            if j > i {
                prod = prod.mul(lb[j - 2]);
            }
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let v = prod
                .mul(LogMag::of(theta[i - 1]))
                .mul(LogMag::of(phi[j + 1]))
                .div(det)
                .value();
            inv[i - 1][j - 1] = sign * v;
        }
        // lower triangle with roles swapped: entry (j, i) for j > i uses c_i..c_{j-1}
        let mut prod = LogMag::ONE;
        for j in (i + 1)..=n {
            prod = prod.mul(lc[j - 2]);
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let v = prod
                .mul(LogMag::of(theta[i - 1]))
                .mul(LogMag::of(phi[j + 1]))
                .div(det)
                .value();
            inv[j - 1][i - 1] = sign * v;
        }
    }
    Ok(inv)
}

/// Result of [`symmetrize`]: `S = D T D⁻¹` with `D = diag(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetrized {
    pub d: Vec<f64>,
    pub s: Tridiag,
}

/// Diagonal similarity that turns `T` into a symmetric tridiagonal matrix.
///
/// `d_1 = 1`, `d_k = √(b_1⋯b_{k-1}) / √(c_1⋯c_{k-1})` and the symmetric
/// off-diagonals are `√(b_i c_i)`. Requires every `b_i c_i > 0`.
pub fn symmetrize(t: &Tridiag) -> Result<Symmetrized> {
    for (i, (b, c)) in t.b.iter().zip(&t.c).enumerate() {
        if b * c <= 0.0 {
            return Err(Error::NotSymmetrizable {
                op: "symmetrize",
                index: i + 1,
                product: b * c,
            });
        }
    }
    let n = t.dim();
    let mut d = vec![1.0; n];
    for k in 1..n {
        d[k] = d[k - 1] * (t.c[k - 1] / t.b[k - 1]).abs().sqrt().recip();
    }
    let off: Vec<f64> =
        t.b.iter()
            .zip(&t.c)
            .map(|(b, c)| b.signum() * (b * c).sqrt())
            .collect();
    Ok(Symmetrized {
        d,
        s: Tridiag::symmetric(t.a.clone(), off)?,
    })
}

/// Eigenvalues and norming constants of a symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// First components of the normalized eigenvectors, made nonnegative.
    pub norming_constants: Vec<f64>,
    /// Normalized eigenvectors, `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectralData {
    pub fn norming_sum(&self) -> f64 {
        self.norming_constants.iter().map(|g| g * g).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.eigenvalues.windows(2).all(|w| w[0] < w[1])
    }
}

/// Number of eigenvalues of the symmetric tridiagonal (a, b) strictly below `x`.
///
/// Counts negative pivots of the LDLᵀ factorization of `T - xI`, which is the
/// ratio form of the Sturm sequence and cannot overflow.
pub fn count_below(a: &[f64], b: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..a.len() {
        q = if i == 0 {
            a[0] - x
        } else {
            a[i] - x - b[i - 1] * b[i - 1] / q
        };
        if q.abs() < tiny {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin enclosure of a symmetric tridiagonal spectrum.
fn gershgorin(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i + 1 < n { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    (lo, hi)
}

/// All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.
///
/// The matrix is scaled by its largest entry first, so strongly graded
/// inputs keep full absolute accuracy relative to that entry.
pub fn eigenvalues_sym(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let scale = a.iter().chain(b).fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let a_s: Vec<f64> = a.iter().map(|x| x / scale).collect();
    let b_s: Vec<f64> = b.iter().map(|x| x / scale).collect();
    let (lo, hi) = gershgorin(&a_s, &b_s);
    let pad = 2.0 * f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
    let (lo, hi) = (lo - pad, hi + pad);

    (0..n)
        .map(|k| {
            // smallest x with count_below(x) > k
            let (mut l, mut h) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (l + h);
                if mid <= l || mid >= h {
                    break;
                }
                if count_below(&a_s, &b_s, mid) > k {
                    h = mid;
                } else {
                    l = mid;
                }
            }
            0.5 * (l + h) * scale
        })
        .collect()
}

/// Solves `(T - x I) y = rhs` for symmetric tridiagonal `T` by Gaussian
/// elimination with partial pivoting; zero pivots are nudged to `tiny`.
fn shifted_solve(a: &[f64], b: &[f64], x: f64, rhs: &[f64], tiny: f64) -> Vec<f64> {
    let n = a.len();
    // rows carry three potential nonzeros after pivoting: d, u1, u2
    let mut d: Vec<f64> = a.iter().map(|v| v - x).collect();
    let mut u1: Vec<f64> = (0..n).map(|i| if i + 1 < n { b[i] } else { 0.0 }).collect();
    let mut u2 = vec![0.0; n];
    let mut l = vec![0.0; n];
    let mut swapped = vec![false; n];
    let mut sub: Vec<f64> = (0..n).map(|i| if i + 1 < n { b[i] } else { 0.0 }).collect();
    for i in 0..n.saturating_sub(1) {
        // candidate rows i (d[i], u1[i], u2[i]) and i+1 (sub[i], d[i+1], u1[i+1])
        if sub[i].abs() > d[i].abs() {
            swapped[i] = true;
            let (r0d, r0u1, r0u2) = (d[i], u1[i], u2[i]);
            d[i] = sub[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            sub[i] = r0d;
            d[i + 1] = r0u1;
            u1[i + 1] = r0u2;
        }
        if d[i] == 0.0 {
            d[i] = tiny;
        }
        l[i] = sub[i] / d[i];
        d[i + 1] -= l[i] * u1[i];
        u1[i + 1] -= l[i] * u2[i];
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut y = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            y.swap(i, i + 1);
        }
        y[i + 1] -= l[i] * y[i];
    }
    for i in (0..n).rev() {
        let mut v = y[i];
        if i + 1 < n {
            v -= u1[i] * y[i + 1];
        }
        if i + 2 < n {
            v -= u2[i] * y[i + 2];
        }
        y[i] = v / d[i];
    }
    y
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    nrm
}

/// Eigenvectors of an unreduced symmetric tridiagonal block by inverse
/// iteration, with Gram–Schmidt inside clusters of close eigenvalues.
fn inverse_iteration(a: &[f64], b: &[f64], eigenvalues: &[f64]) -> Vec<Vec<f64>> {
    let n = a.len();
    if n == 1 {
        return vec![vec![1.0]];
    }
    let scale = a
        .iter()
        .chain(b)
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let cluster_gap = 1e-3 * scale;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (k, &lam) in eigenvalues.iter().enumerate() {
        // deterministic, non-degenerate start vector
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + ((i * 7 + k * 13) % 11) as f64 * 0.01)
            .collect();
        normalize(&mut v);
        let cluster_start = (0..k)
            .rev()
            .take_while(|&j| (eigenvalues[j + 1] - eigenvalues[j]).abs() < cluster_gap)
            .last()
            .unwrap_or(k);
        for _ in 0..4 {
            v = shifted_solve(a, b, lam, &v, tiny);
            for prev in &vectors[cluster_start..k] {
                let dot: f64 = prev.iter().zip(&v).map(|(p, x)| p * x).sum();
                v.iter_mut().zip(prev).for_each(|(x, p)| *x -= dot * p);
            }
            normalize(&mut v);
        }
        vectors.push(v);
    }
    vectors
}

/// Eigen-decomposition of a symmetric tridiagonal matrix.
///
/// Eigenvalues come from Sturm bisection, eigenvectors from inverse
/// iteration. Negligible off-diagonals split the problem into independent
/// blocks; eigenvalues of a reducible matrix may then repeat.
pub fn eigen_sym_tridiag(s: &Tridiag) -> Result<SpectralData> {
    if !s.is_symmetric() {
        return Err(Error::invalid(
            "eigen_sym_tridiag",
            "matrix is not symmetric",
        ));
    }
    let n = s.dim();
    let a = s.diag();
    let b = s.sup();

    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    let mut start = 0;
    for end in 1..=n {
        let split =
            end == n || b[end - 1].abs() <= f64::EPSILON * (a[end - 1].abs() + a[end].abs());
        if !split {
            continue;
        }
        let (ab, bb) = (&a[start..end], &b[start..end - 1]);
        let vals = eigenvalues_sym(ab, bb);
        let vecs = inverse_iteration(ab, bb, &vals);
        for (lam, v) in vals.into_iter().zip(vecs) {
            let mut full = vec![0.0; n];
            full[start..end].copy_from_slice(&v);
            pairs.push((lam, full));
        }
        start = end;
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut norming_constants = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for (lam, mut v) in pairs {
        let lead = v.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0);
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        eigenvalues.push(lam);
        norming_constants.push(v[0]);
        eigenvectors.push(v);
    }
    Ok(SpectralData {
        eigenvalues,
        norming_constants,
        eigenvectors,
    })
}

/// Intervals `[a_k - σ_k, a_k + σ_k]` with `σ_k² = b_k² + b_{k-1}²`; a
/// missing neighbour at either end counts as zero.
pub fn golub_intervals(s: &Tridiag) -> Vec<(f64, f64)> {
    let n = s.dim();
    let b = s.sup();
    (0..n)
        .map(|k| {
            let left = if k > 0 { b[k - 1] } else { 0.0 };
            let right = if k + 1 < n { b[k] } else { 0.0 };
            let sigma = (left * left + right * right).sqrt();
            (s.diag()[k] - sigma, s.diag()[k] + sigma)
        })
        .collect()
}

/// Jacobi weight `ω_n = (n+1)√n` of the cubic Heun operator.
pub fn jacobi_omega(n: u64) -> f64 {
    (n + 1) as f64 * (n as f64).sqrt()
}

/// Truncated Jacobi matrix `𝕁` on indices `1..=n`: zero diagonal,
/// off-diagonal `ω_k` between rows `k` and `k+1`.
pub fn jacobi_matrix(n: usize) -> Result<Tridiag> {
    if n == 0 {
        return Err(Error::invalid("jacobi_matrix", "dimension must be ≥ 1"));
    }
    let off = (1..n as u64).map(jacobi_omega).collect();
    Tridiag::symmetric(vec![0.0; n], off)
}

/// Solution of `𝕁ã = 0` normalized by `ã_1 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiKernelSolution {
    // entries[0] is ã_1
    entries: Vec<f64>,
}

impl JacobiKernelSolution {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ã_n` for 1-based `n`.
    pub fn get(&self, n: usize) -> f64 {
        self.entries[n - 1]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `max |(𝕁ã)_n|` over rows `2..N-1` (row `N` needs `ã_{N+1}`).
    pub fn residual(&self) -> f64 {
        let n = self.entries.len();
        (2..n)
            .map(|row| {
                let r = row as u64;
                (jacobi_omega(r - 1) * self.get(row - 1) + jacobi_omega(r) * self.get(row + 1))
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `ã_1 = 1`, `ã_2 = 0` and `ã_{n+1} = -ω_{n-1} ã_{n-1} / ω_n`, which is
/// `-√(n(n-1))/(n+1) · ã_{n-1}`. Every even entry vanishes.
pub fn kernel_solution(n: usize) -> Result<JacobiKernelSolution> {
    if n == 0 {
        return Err(Error::invalid("kernel_solution", "N must be ≥ 1"));
    }
    let mut entries = vec![0.0; n];
    entries[0] = 1.0;
    // entries[k] = ã_{k+1}; the even entries stay +0
    for k in (2..n).step_by(2) {
        let kk = k as u64;
        entries[k] = -(jacobi_omega(kk - 1) * entries[k - 2]) / jacobi_omega(kk);
    }
    Ok(JacobiKernelSolution { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn char_poly_examples() {
        let t = Tridiag::new(vec![5.0], vec![], vec![]).unwrap();
        assert_eq!(char_poly_seq(&t, 2.0), vec![1.0, 3.0]);

        let z = Tridiag::new(vec![0.0; 3], vec![0.0; 2], vec![0.0; 2]).unwrap();
        let lam = 1.5;
        assert_relative_eq!(*char_poly_seq(&z, lam).last().unwrap(), (-lam).powi(3));

        let t = Tridiag::symmetric(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(*char_poly_seq(&t, 1.0).last().unwrap(), 0.0);
    }

    #[test]
    fn usmani_examples() {
        let inv = usmani_inverse(&Tridiag::identity(4)).unwrap();
        for (i, row) in inv.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { 1.0 } else { 0.0 });
            }
        }
        let t = Tridiag::symmetric(vec![2.0, 2.0], vec![-1.0]).unwrap();
        let inv = usmani_inverse(&t).unwrap();
        assert_relative_eq!(inv[0][0], 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(inv[0][1], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(inv[1][0], 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(inv[1][1], 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn usmani_rejects_singular() {
        let t = Tridiag::symmetric(vec![1.0, 1.0], vec![1.0]).unwrap();
        assert!(matches!(usmani_inverse(&t), Err(Error::Singular { .. })));
    }

    #[test]
    fn symmetrize_examples() {
        let t = Tridiag::symmetric(vec![1.0, 2.0, 3.0], vec![0.5, 0.25]).unwrap();
        let sym = symmetrize(&t).unwrap();
        assert_eq!(sym.d, vec![1.0; 3]);
        assert_eq!(sym.s, t);

        let t = Tridiag::new(vec![0.0, 0.0], vec![4.0], vec![1.0]).unwrap();
        let sym = symmetrize(&t).unwrap();
        assert_relative_eq!(sym.s.sup()[0], 2.0);
        assert_relative_eq!(sym.d[1], 2.0);

        let bad = Tridiag::new(vec![0.0, 0.0], vec![1.0], vec![-1.0]).unwrap();
        assert!(matches!(
            symmetrize(&bad),
            Err(Error::NotSymmetrizable { index: 1, .. })
        ));
    }

    #[test]
    fn symmetrize_is_a_similarity() {
        let t = Tridiag::new(vec![1.0, -2.0, 0.5], vec![3.0, 0.2], vec![0.5, 4.0]).unwrap();
        let Symmetrized { d, s } = symmetrize(&t).unwrap();
        let td = t.to_dense();
        let sd = s.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(sd[i][j], d[i] * td[i][j] / d[j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn eigen_free_two_by_two() {
        let t = Tridiag::symmetric(vec![0.0, 0.0], vec![1.0]).unwrap();
        let sd = eigen_sym_tridiag(&t).unwrap();
        assert_relative_eq!(sd.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(sd.eigenvalues[1], 1.0, epsilon = 1e-15);
        for g in &sd.norming_constants {
            assert_relative_eq!(*g, 0.5f64.sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn eigen_diagonal_is_exact() {
        let t = Tridiag::symmetric(vec![3.0, 0.0, 2.0, 1.0], vec![0.0; 3]).unwrap();
        let sd = eigen_sym_tridiag(&t).unwrap();
        assert_eq!(sd.eigenvalues, vec![0.0, 1.0, 2.0, 3.0]);
        assert_relative_eq!(sd.norming_sum(), 1.0);
        assert_eq!(sd.norming_constants, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn eigen_graded_jacobi_matrix() {
        let j = jacobi_matrix(60).unwrap();
        let sd = eigen_sym_tridiag(&j).unwrap();
        assert!(sd.is_simple());
        assert_relative_eq!(sd.norming_sum(), 1.0, epsilon = 1e-10);
        // spectrum symmetric about zero for a zero-diagonal Jacobi matrix
        for k in 0..30 {
            assert_relative_eq!(
                sd.eigenvalues[k],
                -sd.eigenvalues[59 - k],
                epsilon = 1e-9 * j.max_abs()
            );
        }
        for (lam, v) in sd.eigenvalues.iter().zip(&sd.eigenvectors) {
            let r = j.matvec(v);
            let res: f64 = r
                .iter()
                .zip(v)
                .map(|(x, y)| (x - lam * y).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-10 * j.max_abs(), "residual {res}");
        }
    }

    #[test]
    fn golub_intervals_examples() {
        let t = Tridiag::symmetric(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(golub_intervals(&t), vec![(-1.0, 1.0), (-1.0, 1.0)]);
        let d = Tridiag::symmetric(vec![2.0, 5.0], vec![0.0]).unwrap();
        assert_eq!(golub_intervals(&d), vec![(2.0, 2.0), (5.0, 5.0)]);
    }

    #[test]
    fn omega_values() {
        assert_eq!(jacobi_omega(1), 2.0);
        assert_eq!(jacobi_omega(4), 10.0);
        assert!((1..10_000).all(|n| jacobi_omega(n + 1) > jacobi_omega(n)));
    }

    #[test]
    fn kernel_solution_first_entries() {
        let s = kernel_solution(100).unwrap();
        assert_eq!(s.get(1), 1.0);
        assert_eq!(s.get(2), 0.0);
        assert_relative_eq!(s.get(3), -(2f64.sqrt()) / 3.0, epsilon = 1e-15);
        assert!((1..=50).all(|p| s.get(2 * p) == 0.0));
        assert!(s.residual() < 1e-12);
    }

    #[test]
    fn sturm_changes_count_eigenvalues_below() {
        let t = Tridiag::symmetric(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(sturm_sign_changes(&char_poly_seq(&t, -2.0)), 0);
        assert_eq!(sturm_sign_changes(&char_poly_seq(&t, 0.0)), 1);
        assert_eq!(sturm_sign_changes(&char_poly_seq(&t, 2.0)), 2);
    }

    #[test]
    fn tridiag_json() {
        let t: Tridiag = serde_json::from_str(r#"{"a": [1, 2], "b": [3], "c": [4]}"#).unwrap();
        assert_eq!(t.sup(), &[3.0]);
        assert!(serde_json::from_str::<Tridiag>(r#"{"a": [1, 2], "b": [], "c": [4]}"#).is_err());
    }
}
