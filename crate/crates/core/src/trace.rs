//! Regularized traces of `A*^k A^k + B`.
//!
//! Eigenvalues `σ_n` of the perturbed truncation are paired with the
//! reference eigenvalues `λ_{n,k}` by increasing real part. Two kinds of
//! correction are offered: the diagonal one `⟨B e_n, e_n⟩`, and contour
//! integrals over circles `|σ| = r` of
//!
//! ```text
//! Σ_{t=1}^{l} (−1)^{t−1}/t · Tr[(B R_0(σ))^t],   R_0(σ) = (A*^k A^k − σ)^{-1}
//! ```
//!
//! normalized by `1/(2πi)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    build_matrix, falling_factorial, monomial_entry, BandedMatrix, HamiltonianSpec, C64,
};
use crate::spectra::eigen_complex;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Upper limit for the adaptive number of contour samples.
pub const MAX_SAMPLES: usize = 1 << 17;

/// Parameters of a contour trace run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub k: u32,
    /// Degree of the perturbation.
    pub m: u32,
    /// Number of Neumann terms.
    pub l: u32,
    /// `m / (2k)`.
    pub delta: f64,
    /// Chosen below `1/(2k)`.
    pub omega: f64,
    /// Index `s` of the first contour.
    pub first_contour: usize,
    pub contour_count: usize,
    /// Minimum number of samples per contour; more are used when the
    /// trapezoid rule has not settled.
    pub contour_samples: usize,
    /// Truncation used for the eigenvalues `σ_n`.
    pub dim: usize,
}

impl TraceConfig {
    /// Defaults: `ω = 1/(4k)`, first contour `s = 2k − 1`, ten contours,
    /// 256 samples, `N = 400`.
    pub fn new(k: u32, b: &HamiltonianSpec, l: u32) -> Self {
        let m = b.m();
        let kf = k.max(1) as f64;
        Self {
            k,
            m,
            l,
            delta: m as f64 / (2.0 * kf),
            omega: 1.0 / (4.0 * kf),
            first_contour: (2 * k as usize).saturating_sub(1),
            contour_count: 10,
            contour_samples: 256,
            dim: 400,
        }
    }

    /// `m ≤ 2k − 3`, `l ≥ 2(k − 1)`, `ω < 1/(2k)` and `δ + ω < 1`.
    pub fn is_admissible(&self) -> bool {
        self.k >= 2
            && self.m + 3 <= 2 * self.k
            && self.l >= 2 * (self.k - 1)
            && self.l >= 1
            && self.omega > 0.0
            && self.omega < 1.0 / (2.0 * self.k as f64)
            && self.delta + self.omega < 1.0
    }
}

/// Output of the trace routines.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    /// First-order partial sums `S_0, S_1, …`.
    pub partial_sums: Vec<C64>,
    /// Contour indices `s`.
    pub contours: Vec<usize>,
    /// Radii `r_s`, strictly increasing.
    pub radii: Vec<f64>,
    /// `Σ_{λ_n < r_s} (σ_n − λ_n)`.
    pub eigen_sums: Vec<C64>,
    /// Contour correction at each radius.
    pub contour_values: Vec<C64>,
    /// `eigen_sums + contour_values`.
    pub values: Vec<C64>,
    /// Eigenvalues whose pairing with the reference is doubtful.
    pub mismatch_count: usize,
}

impl TraceSeries {
    /// `|v_{s+1}| / |v_s|` for consecutive values.
    pub fn ratios(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| w[1].norm() / w[0].norm())
            .collect()
    }
}

/// `⟨B e_n, e_n⟩`: only monomials with `i = j` contribute.
pub fn diagonal_correction(b: &HamiltonianSpec, n: usize) -> C64 {
    let mut v: C64 = b
        .terms
        .iter()
        .filter(|t| t.i == t.j)
        .map(|t| t.a * falling_factorial(n as u64, t.i as u64))
        .sum();
    if b.k > 0 {
        v += falling_factorial(n as u64, b.k as u64);
    }
    v
}

fn reference(k: u32, n: usize) -> f64 {
    falling_factorial(n as u64, k as u64)
}

/// Count of `j ≤ n_max` for which `σ_j` is closer to a different
/// reference value than to `λ_j`.
fn pairing_mismatches(k: u32, sigma: &[C64], n_max: usize) -> usize {
    (0..=n_max.min(sigma.len().saturating_sub(1)))
        .filter(|&j| {
            let own_ref = reference(k, j);
            let own = (sigma[j] - own_ref).norm();
            let below = (0..j)
                .rev()
                .map(|i| reference(k, i))
                .find(|&x| x != own_ref);
            let above = (j + 1..j + 2 + k as usize)
                .map(|i| reference(k, i))
                .find(|&x| x != own_ref);
            [below, above]
                .into_iter()
                .flatten()
                .any(|x| (sigma[j] - x).norm() < own)
        })
        .count()
}

fn perturbed_spec(k: u32, b: &HamiltonianSpec, op: &'static str) -> Result<HamiltonianSpec> {
    if b.k != 0 {
        return Err(Error::invalid(
            op,
            "the perturbation must not carry its own leading power",
        ));
    }
    Ok(HamiltonianSpec::new(k, b.terms.clone()))
}

/// Partial sums `S_n = Σ_{j ≤ n} (σ_j − λ_{j,k} − ⟨B e_j, e_j⟩)`.
pub fn first_order_series(
    k: u32,
    b: &HamiltonianSpec,
    n_trunc: usize,
    n_max: usize,
) -> Result<TraceSeries> {
    if n_max >= n_trunc {
        return Err(Error::invalid(
            "first_order_series",
            "n_max must be below the truncation",
        ));
    }
    let h = perturbed_spec(k, b, "first_order_series")?;
    let sigma = eigen_complex(&build_matrix(&h, n_trunc)?)?.eigenvalues;
    let mut acc = ZERO;
    let partial_sums = (0..=n_max)
        .map(|j| {
            acc += sigma[j] - reference(k, j) - diagonal_correction(b, j);
            acc
        })
        .collect();
    Ok(TraceSeries {
        partial_sums,
        mismatch_count: pairing_mismatches(k, &sigma, n_max),
        ..Default::default()
    })
}

/// `r_s = (λ_{s,k} + λ_{s+1,k}) / 2`.
pub fn radius_for(k: u32, s: usize) -> f64 {
    0.5 * (reference(k, s) + reference(k, s + 1))
}

/// Radii for `s = k − 1, k, …` (`count` of them); the first one is the
/// first midpoint above the `k`-fold zero eigenvalue.
pub fn choose_contours(k: u32, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid(
            "choose_contours",
            "count must be at least 1",
        ));
    }
    let s0 = (k as usize).saturating_sub(1);
    Ok((s0..s0 + count).map(|s| radius_for(k, s)).collect())
}

/// Diagonal of `Σ_t c_t (B R)^t` summed, with `R = diag(r0)`, by walking
/// each basis vector through the band.
fn neumann_trace(b: &BandedMatrix, r0: &[C64], l: u32) -> C64 {
    let n = b.dim();
    let (lo, up) = (b.lower(), b.upper());
    let mut total = ZERO;
    let reach = l as usize * lo.max(up);
    let width = 2 * reach + 1;
    let mut cur = vec![ZERO; width];
    let mut next = vec![ZERO; width];
    for start in 0..n {
        let base = start as i64 - reach as i64;
        cur.iter_mut().for_each(|v| *v = ZERO);
        cur[reach] = C64::new(1.0, 0.0);
        for t in 1..=l {
            next.iter_mut().for_each(|v| *v = ZERO);
            for (off, &v) in cur.iter().enumerate() {
                if v == ZERO {
                    continue;
                }
                let c = base + off as i64;
                if c < 0 || c >= n as i64 {
                    continue;
                }
                let c = c as usize;
                let scaled = v * r0[c];
                let r_lo = c.saturating_sub(up);
                let r_hi = (c + lo + 1).min(n);
                for r in r_lo..r_hi {
                    let idx = r as i64 - base;
                    if idx < 0 || idx >= width as i64 {
                        continue;
                    }
                    next[idx as usize] += b.get(r, c) * scaled;
                }
            }
            std::mem::swap(&mut cur, &mut next);
            let sign = if t % 2 == 1 { 1.0 } else { -1.0 };
            total += cur[reach] * (sign / t as f64);
        }
    }
    total
}

/// Trapezoid values with `q` and `q/2` points of `(1/2πi)∮ f dσ` over
/// `|σ| = radius`, plus the mean absolute integrand.
fn trapezoid_pair(
    b: &BandedMatrix,
    k: u32,
    l: u32,
    radius: f64,
    q: usize,
) -> Result<(C64, C64, f64)> {
    let n = b.dim();
    let lam: Vec<f64> = (0..n).map(|i| reference(k, i)).collect();
    let mut full = ZERO;
    let mut half = ZERO;
    let mut mass = 0.0;
    let mut r0 = vec![ZERO; n];
    for j in 0..q {
        let sigma = C64::from_polar(radius, 2.0 * PI * j as f64 / q as f64);
        for (x, &lv) in r0.iter_mut().zip(&lam) {
            *x = (lv - sigma).inv();
        }
        let v = neumann_trace(b, &r0, l) * sigma;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite {
                op: "contour_correction",
                index: j,
            });
        }
        full += v;
        mass += v.norm();
        if j % 2 == 0 {
            half += v;
        }
    }
    Ok((full / q as f64, half / (q / 2) as f64, mass / q as f64))
}

/// `(1/2πi)∮_{|σ|=r} Σ_{t=1}^{l} (−1)^{t−1}/t · Tr[(B R_0(σ))^t] dσ`.
///
/// The truncation only has to hold every closed walk of length `≤ l` that
/// visits an index inside the circle, so it starts at
/// `max(2(s+1), s + 1 + l·bandwidth + 1)` with `s + 1` the number of
/// reference eigenvalues inside, and is doubled once to confirm the tail is
/// below `1e-10`. The sample count starts at `samples` and doubles until
/// the `q` and `q/2` trapezoid values agree to `1e-7` of the mean absolute
/// integrand, which puts the `q`-point error near rounding level.
pub fn contour_correction(
    k: u32,
    b: &HamiltonianSpec,
    l: u32,
    radius: f64,
    samples: usize,
) -> Result<C64> {
    if samples < 2 || !(radius > 0.0) || l == 0 {
        return Err(Error::invalid(
            "contour_correction",
            "need samples ≥ 2, radius > 0 and l ≥ 1",
        ));
    }
    if b.k != 0 {
        return Err(Error::invalid(
            "contour_correction",
            "B must be a pure perturbation (k = 0)",
        ));
    }
    let mut inside = 0usize;
    loop {
        let lam = reference(k, inside);
        let d = (lam - radius).abs();
        if d < 1e-9 {
            return Err(Error::RadiusCollision {
                radius,
                index: inside,
                distance: d,
            });
        }
        if lam > radius {
            break;
        }
        inside += 1;
    }
    if b.terms.is_empty() {
        return Ok(ZERO);
    }
    let (lo, up) = b.bandwidths();
    let bw = lo.max(up).max(1);
    let floor = (2 * inside).max(inside + l as usize * bw + 1);
    let q0 = samples.next_power_of_two().max(4);

    let eval = |n_tr: usize| -> Result<C64> {
        let m = build_matrix(b, n_tr)?;
        let mut q = q0;
        loop {
            let (full, half, mass) = trapezoid_pair(&m, k, l, radius, q)?;
            if (full - half).norm() <= 1e-7 * mass || mass == 0.0 {
                return Ok(full);
            }
            if q >= MAX_SAMPLES {
                return Err(Error::NoConvergence {
                    op: "contour_correction",
                    index: inside,
                    iterations: q,
                });
            }
            q *= 2;
        }
    };
    let v = eval(floor)?;
    let v2 = eval(2 * floor)?;
    if (v2 - v).norm() > 1e-10 * v2.norm().max(1.0) {
        return Err(Error::invalid(
            "contour_correction",
            format!("truncation tail {:e} exceeds 1e-10", (v2 - v).norm()),
        ));
    }
    Ok(v2)
}

/// A perturbation that is a multiple of the identity.
fn is_scalar(b: &HamiltonianSpec) -> bool {
    b.k == 0 && b.terms.iter().all(|t| t.i == 0 && t.j == 0)
}

/// Values `Σ_{λ_n < r_s} (σ_n − λ_n) + contour_correction(r_s)` for the
/// contours `s = first_contour, …`.
///
/// Rejects configurations outside the admissible regime, except for a
/// scalar `B`, where the Neumann terms cancel exactly for any `k ≥ 1`.
pub fn regularized_trace_check(cfg: &TraceConfig, b: &HamiltonianSpec) -> Result<TraceSeries> {
    const OP: &str = "regularized_trace_check";
    if cfg.m != b.m() {
        return Err(Error::invalid(OP, "cfg.m does not match the perturbation"));
    }
    if !(cfg.is_admissible() || (is_scalar(b) && cfg.k >= 1 && cfg.l >= 1)) {
        return Err(Error::NotAdmissible {
            op: OP,
            msg: format!(
                "k = {}, m = {}, l = {} (need m ≤ 2k − 3, l ≥ 2(k − 1), δ + ω < 1)",
                cfg.k, cfg.m, cfg.l
            ),
        });
    }
    if cfg.contour_count == 0 {
        return Err(Error::invalid(OP, "contour_count must be at least 1"));
    }
    let last = cfg.first_contour + cfg.contour_count;
    if 2 * last > cfg.dim {
        return Err(Error::invalid(
            OP,
            "truncation must be at least twice the last contour index",
        ));
    }
    let h = perturbed_spec(cfg.k, b, OP)?;
    let sigma = eigen_complex(&build_matrix(&h, cfg.dim)?)?.eigenvalues;

    let mut out = TraceSeries {
        mismatch_count: pairing_mismatches(cfg.k, &sigma, last),
        ..Default::default()
    };
    for s in cfg.first_contour..last {
        let r = radius_for(cfg.k, s);
        let eig: C64 = (0..=s).map(|n| sigma[n] - reference(cfg.k, n)).sum();
        let c = contour_correction(cfg.k, b, cfg.l, r, cfg.contour_samples)?;
        out.contours.push(s);
        out.radii.push(r);
        out.eigen_sums.push(eig);
        out.contour_values.push(c);
        out.values.push(eig + c);
    }
    Ok(out)
}

/// `‖B e_n‖ · (λ_{n,k} + 1)^{-δ}` for `n < n_max`, with `δ = m/(2k)`; stays
/// bounded when `B` is relatively bounded with that exponent.
pub fn relative_bound_sequence(b: &HamiltonianSpec, k: u32, n_max: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::invalid("relative_bound_sequence", "need k ≥ 1"));
    }
    let delta = b.m() as f64 / (2.0 * k as f64);
    Ok((0..n_max)
        .map(|n| {
            let mut image: Vec<(i64, C64)> = Vec::new();
            for t in &b.terms {
                let a = monomial_entry(n as u64, t.i as u64, t.j as u64);
                if a == 0.0 {
                    continue;
                }
                let row = n as i64 + t.shift();
                match image.iter_mut().find(|(r, _)| *r == row) {
                    Some(e) => e.1 += t.a * a,
                    None => image.push((row, t.a * a)),
                }
            }
            let norm = image.iter().map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt();
            norm * (reference(k, n) + 1.0).powf(-delta)
        })
        .collect())
}
