//! Dense complex linear algebra used by the spectral routines.
//!
//! Only what the crate needs: balancing, Householder reduction to
//! Hessenberg form, single-shift complex QR for eigenvalues, Householder
//! tridiagonalization of Hermitian matrices, and LU solves.

use crate::error::{Error, Result};
use crate::fock::{BandedMatrix, C64};
use crate::tridiag::eigenvalues_sym;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "CMatrix::from_rows: matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn from_banded(b: &BandedMatrix) -> Self {
        let n = b.dim();
        let mut m = Self::zeros(n);
        for r in 0..n {
            let c0 = r.saturating_sub(b.lower());
            let c1 = (r + b.upper() + 1).min(n);
            for c in c0..c1 {
                m[(r, c)] = b.get(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    m.data[r * n + c] += a * o.data[k * n + c];
                }
            }
        }
        m
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Lower bandwidth, i.e. largest `r - c` with a nonzero entry.
    pub fn lower_bandwidth(&self) -> usize {
        let n = self.n;
        let mut bw = 0;
        for r in 0..n {
            for c in 0..r {
                if self[(r, c)] != ZERO {
                    bw = bw.max(r - c);
                    break;
                }
            }
        }
        bw
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.n + c]
    }
}

/// Diagonal similarity by powers of two that equalizes row and column norms.
pub fn balance(m: &mut CMatrix) {
    const RADIX: f64 = 2.0;
    let n = m.n;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= g;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place).
pub fn hessenberg_reduce(m: &mut CMatrix) {
    let n = m.n;
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|r| m[(r, k)]).collect();
        let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 || x[1..].iter().all(|v| *v == ZERO) {
            continue;
        }
        let phase = if x[0] == ZERO {
            C64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;
        // left: rows k+1.., all columns k..
        for c in k..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * m[(k + 1 + t, c)])
                .sum();
            let f = dot * beta;
            for (t, vt) in v.iter().enumerate() {
                m[(k + 1 + t, c)] -= vt * f;
            }
        }
        // right: all rows, columns k+1..
        for r in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| m[(r, k + 1 + t)] * vt)
                .sum();
            let f = dot * beta;
            for (t, vt) in v.iter().enumerate() {
                m[(r, k + 1 + t)] -= f * vt.conj();
            }
        }
        m[(k + 1, k)] = alpha;
        for r in k + 2..n {
            m[(r, k)] = ZERO;
        }
    }
}

/// Givens rotation with real cosine that maps `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let ax = x.norm();
    let r = ax.hypot(y.norm());
    (ax / r, (x / ax) * y.conj() / r)
}

/// Outcome of the QR iteration: eigenvalues in deflation order plus the
/// indices that hit the iteration cap (their entries are then the last
/// diagonal estimate).
pub struct QrOutcome {
    pub eigenvalues: Vec<C64>,
    pub unconverged: Vec<usize>,
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and an exceptional shift every tenth sweep.
pub fn hessenberg_qr(mut h: CMatrix, max_sweeps_per_eigenvalue: usize) -> QrOutcome {
    let n = h.n;
    let mut eig = vec![ZERO; n];
    let mut unconverged = Vec::new();
    if n == 0 {
        return QrOutcome {
            eigenvalues: eig,
            unconverged,
        };
    }
    let anorm = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].l1_norm() + h[(l, l)].l1_norm();
            if s == 0.0 {
                s = anorm;
            }
            if h[(l, l - 1)].l1_norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_sweeps_per_eigenvalue {
            // give up on this eigenvalue, keep the diagonal estimate
            unconverged.push(hi);
            eig[hi] = h[(hi, hi)];
            h[(hi, hi - 1)] = ZERO;
            hi -= 1;
            iter = 0;
            continue;
        }

        let mu = if iter.is_multiple_of(10) {
            h[(hi, hi)] + C64::new(1.0, 1.0) * 0.75 * h[(hi, hi - 1)].norm()
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let rmax = (k + 2).min(hi);
            for i in l..=rmax {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    QrOutcome {
        eigenvalues: eig,
        unconverged,
    }
}

/// All eigenvalues of a general complex matrix (balance, Hessenberg, QR).
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let mut h = m.clone();
    balance(&mut h);
    if h.lower_bandwidth() > 1 {
        hessenberg_reduce(&mut h);
    }
    let out = hessenberg_qr(h, 60);
    if let Some(&index) = out.unconverged.first() {
        return Err(Error::NoConvergence {
            op: "eigen_complex",
            index,
            iterations: 60,
        });
    }
    Ok(out.eigenvalues)
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    pub min_pivot: f64,
}

impl Lu {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.n;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[(a, k)].norm().total_cmp(&lu[(b, k)].norm()))
                .unwrap();
            if p != k {
                for c in 0..n {
                    let t = lu[(k, c)];
                    lu[(k, c)] = lu[(p, c)];
                    lu[(p, c)] = t;
                }
                perm.swap(k, p);
            }
            let piv = lu[(k, k)];
            min_pivot = min_pivot.min(piv.norm());
            if piv == ZERO {
                continue;
            }
            for r in k + 1..n {
                let f = lu[(r, k)] / piv;
                lu[(r, k)] = f;
                if f != ZERO {
                    for c in k + 1..n {
                        let t = lu[(k, c)];
                        lu[(r, c)] -= f * t;
                    }
                }
            }
        }
        Self {
            lu,
            perm,
            min_pivot,
        }
    }

    /// Solves `M x = b`; zero pivots are replaced by `tiny`.
    pub fn solve(&self, b: &[C64], tiny: f64) -> Vec<C64> {
        let n = self.lu.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut acc = x[r];
            for c in 0..r {
                acc -= self.lu[(r, c)] * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc -= self.lu[(r, c)] * x[c];
            }
            let piv = if self.lu[(r, r)] == ZERO {
                C64::new(tiny, 0.0)
            } else {
                self.lu[(r, r)]
            };
            x[r] = acc / piv;
        }
        x
    }

    pub fn determinant(&self) -> C64 {
        let n = self.lu.n;
        let mut d: C64 = (0..n).map(|i| self.lu[(i, i)]).product();
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                d = -d;
            }
        }
        d
    }
}

/// Unit eigenvector for an eigenvalue estimate `sigma` by inverse iteration.
pub fn inverse_iteration(m: &CMatrix, sigma: C64) -> Vec<C64> {
    let n = m.n;
    let scale = m.max_abs().max(1.0);
    // perturb the shift slightly so the factorization is not exactly singular
    let shift = sigma + C64::new(scale * 1e-14, scale * 1e-14);
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = Lu::new(&a);
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0, 0.1 * (i % 5) as f64))
        .collect();
    for _ in 0..3 {
        v = lu.solve(&v, f64::EPSILON * scale);
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 || !nrm.is_finite() {
            break;
        }
        v.iter_mut().for_each(|z| *z /= nrm);
    }
    v
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Householder reduction to a complex Hermitian tridiagonal, a unitary
/// diagonal similarity to make the off-diagonal real, then Sturm bisection.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.n;
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|r| a[(r, k)]).collect();
        let xnorm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 || x[1..].iter().all(|v| *v == ZERO) {
            continue;
        }
        let phase = if x[0] == ZERO {
            C64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let beta = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let off = k + 1;
        let len = n - off;
        // p = β A v on the trailing block
        let p: Vec<C64> = (0..len)
            .map(|r| (0..len).map(|c| a[(off + r, off + c)] * v[c]).sum::<C64>() * beta)
            .collect();
        let vhp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let kk = vhp * (beta * 0.5);
        let q: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for r in 0..len {
            for c in 0..len {
                let upd = v[r] * q[c].conj() + q[r] * v[c].conj();
                a[(off + r, off + c)] -= upd;
            }
        }
        a[(off, k)] = alpha;
        a[(k, off)] = alpha.conj();
        for r in off + 1..n {
            a[(r, k)] = ZERO;
            a[(k, r)] = ZERO;
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let off: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| a[(i + 1, i)].norm())
        .collect();
    eigenvalues_sym(&diag, &off)
}

/// Singular values of `m` from the Hermitian dilation `[[0, M], [M†, 0]]`,
/// ascending. Accurate to `ε‖M‖` in absolute terms.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let n = m.n;
    let mut big = CMatrix::zeros(2 * n);
    for r in 0..n {
        for c in 0..n {
            big[(r, n + c)] = m[(r, c)];
            big[(n + c, r)] = m[(r, c)].conj();
        }
    }
    let ev = hermitian_eigenvalues(&big);
    // the top n eigenvalues are the singular values
    ev[n..].iter().map(|v| v.max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_eigenvalues_exact() {
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(ev, vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
    }

    #[test]
    fn rotation_matrix_eigenvalues() {
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert_relative_eq!(ev[0].im, -1.0, epsilon = 1e-14);
        assert_relative_eq!(ev[1].im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hessenberg_preserves_trace_and_shape() {
        let n = 6;
        let mut m = CMatrix::zeros(n);
        for r in 0..n {
            for col in 0..n {
                m[(r, col)] = c(
                    ((r * 3 + col * 5) % 7) as f64 - 3.0,
                    ((r + 2 * col) % 4) as f64,
                );
            }
        }
        let tr: C64 = (0..n).map(|i| m[(i, i)]).sum();
        let mut h = m.clone();
        hessenberg_reduce(&mut h);
        assert!(h.lower_bandwidth() <= 1);
        let tr2: C64 = (0..n).map(|i| h[(i, i)]).sum();
        assert_relative_eq!(tr.re, tr2.re, epsilon = 1e-12);
        assert_relative_eq!(tr.im, tr2.im, epsilon = 1e-12);
    }

    #[test]
    fn lu_determinant_and_solve() {
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(1.0, 1.0)],
        ]);
        let lu = Lu::new(&m);
        assert_relative_eq!(lu.determinant().re, -6.0, epsilon = 1e-14);
        let x = lu.solve(&[c(2.0, 0.0), c(4.0, 1.0)], 0.0);
        let back = m.matvec(&x);
        assert_relative_eq!(back[0].re, 2.0, epsilon = 1e-14);
        assert_relative_eq!(back[1].im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hermitian_eigenvalues_small() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ]);
        let ev = hermitian_eigenvalues(&m);
        assert_relative_eq!(ev[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(ev[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = CMatrix::from_rows(&[
            vec![c(-3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.5)],
        ]);
        let sv = singular_values(&m);
        assert_relative_eq!(sv[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(sv[1], 3.0, epsilon = 1e-14);
    }
}
