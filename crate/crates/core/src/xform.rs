//! Segal–Bargmann transform by quadrature, Hermite functions and the
//! Gabor relation.
//!
//! One-dimensional integrals use Gauss–Hermite rules (weight `e^{-u²}`);
//! integrals over the complex plane use a tensor product of the same rule,
//! rescaled to the Gaussian measure of the target space.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::fock::{basis_eval, sqrt_factorial, CoeffVec, HamiltonianSpec, C64};
use crate::tridiag::eigenvalues_sym;

/// Default one-dimensional quadrature order.
pub const DEFAULT_ORDER: usize = 64;

/// Gauss–Hermite nodes and weights for the weight `e^{-u²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ g(u) e^{-u²} du`.
    pub fn integrate<F: FnMut(f64) -> C64>(&self, mut g: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| g(u) * w)
            .sum()
    }

    /// `∫ g(u) du`, with the Gaussian weight divided back out at the nodes.
    ///
    /// `g` should decay like `e^{-u²}` or the result is meaningless.
    pub fn integrate_plain<F: FnMut(f64) -> C64>(&self, mut g: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| g(u) * (w * (u * u).exp()))
            .sum()
    }
}

/// Gauss–Hermite rule of order `q`.
///
/// Nodes are the eigenvalues of the Hermite Jacobi matrix (Golub–Welsch);
/// weights come from the Christoffel function `1 / Σ p_n(u)²`, which keeps
/// the tiny outer weights accurate to full relative precision.
pub fn gauss_hermite(q: usize) -> Result<QuadratureRule> {
    if q == 0 {
        return Err(Error::invalid("gauss_hermite", "order must be at least 1"));
    }
    let diag = vec![0.0; q];
    let off: Vec<f64> = (1..q).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut nodes = eigenvalues_sym(&diag, &off);
    for i in 0..q / 2 {
        let x = 0.5 * (nodes[q - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    for x in nodes.iter_mut() {
        *x = newton_hermite_root(q, *x);
    }
    let weights = nodes
        .iter()
        .map(|&u| {
            // p_n(u) = h_n(u) e^{u²/2}; recurrence carried without the Gaussian
            let mut p_prev = 0.0;
            let mut p = PI.powf(-0.25);
            let mut sum = p * p;
            for n in 0..q - 1 {
                let nf = n as f64;
                let next = (2.0 / (nf + 1.0)).sqrt() * u * p - (nf / (nf + 1.0)).sqrt() * p_prev;
                p_prev = p;
                p = next;
                sum += p * p;
            }
            1.0 / sum
        })
        .collect();
    Ok(QuadratureRule { nodes, weights })
}

/// One or two Newton steps on `p_q` to polish a node from bisection.
fn newton_hermite_root(q: usize, mut x: f64) -> f64 {
    for _ in 0..2 {
        let mut p_prev = 0.0;
        let mut p = 1.0;
        for n in 0..q {
            let nf = n as f64;
            let next = (2.0 / (nf + 1.0)).sqrt() * x * p - (nf / (nf + 1.0)).sqrt() * p_prev;
            p_prev = p;
            p = next;
        }
        // p'_q = sqrt(2q) p_{q-1}
        let d = (2.0 * q as f64).sqrt() * p_prev;
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = p / d;
        if !step.is_finite() || step.abs() > 1e-6 * (1.0 + x.abs()) {
            break;
        }
        x -= step;
    }
    x
}

/// Tensor-product rule on the complex plane for `∫ g(z) e^{-α|z|²} dx dy`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneRule {
    line: QuadratureRule,
}

impl PlaneRule {
    pub fn new(line: QuadratureRule) -> Self {
        Self { line }
    }

    pub fn with_order(q: usize) -> Result<Self> {
        gauss_hermite(q).map(Self::new)
    }

    pub fn line(&self) -> &QuadratureRule {
        &self.line
    }

    /// Largest `|x|` or `|y|` reached by the grid after rescaling to `α`.
    pub fn radius(&self, alpha: f64) -> f64 {
        self.line.nodes.last().copied().unwrap_or(0.0) / alpha.sqrt()
    }

    /// `∫ g(z) e^{-α|z|²} dx dy`.
    ///
    /// Fails with [`Error::GridTooSmall`] when more than `1e-10` of the
    /// absolute integrand mass sits on the outermost ring of the grid.
    pub fn integrate<F: FnMut(C64) -> C64>(
        &self,
        alpha: f64,
        op: &'static str,
        mut g: F,
    ) -> Result<C64> {
        let s = alpha.sqrt();
        let q = self.line.order();
        let mut total = C64::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut outer = 0.0;
        for (i, (&x, &wx)) in self.line.nodes.iter().zip(&self.line.weights).enumerate() {
            for (j, (&y, &wy)) in self.line.nodes.iter().zip(&self.line.weights).enumerate() {
                let v = g(C64::new(x / s, y / s));
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite {
                        op,
                        index: i * q + j,
                    });
                }
                let t = v * (wx * wy);
                total += t;
                let a = t.norm();
                mass += a;
                if q > 2 && (i == 0 || j == 0 || i == q - 1 || j == q - 1) {
                    outer += a;
                }
            }
        }
        if mass > 0.0 && outer / mass > 1e-10 {
            return Err(Error::GridTooSmall {
                op,
                ratio: outer / mass,
            });
        }
        Ok(total / alpha)
    }
}

/// Orthonormal Hermite function `h_n(u)`.
pub fn hermite_eval(n: usize, u: f64) -> f64 {
    hermite_all(n, u)[n]
}

/// `h_0(u) … h_n(u)` from the orthonormal three-term recurrence.
pub fn hermite_all(n: usize, u: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * u * u).exp();
    out.push(cur);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `h_n'(u) = √(n/2) h_{n-1}(u) − √((n+1)/2) h_{n+1}(u)`.
pub fn hermite_deriv(n: usize, u: f64) -> f64 {
    let h = hermite_all(n + 1, u);
    let lower = if n > 0 {
        (n as f64 / 2.0).sqrt() * h[n - 1]
    } else {
        0.0
    };
    lower - ((n as f64 + 1.0) / 2.0).sqrt() * h[n + 1]
}

/// `h_n''(u)`, by applying the derivative recurrence twice.
pub fn hermite_deriv2(n: usize, u: f64) -> f64 {
    let lower = if n > 0 {
        (n as f64 / 2.0).sqrt() * hermite_deriv(n - 1, u)
    } else {
        0.0
    };
    lower - ((n as f64 + 1.0) / 2.0).sqrt() * hermite_deriv(n + 1, u)
}

/// Hermite functions up to a fixed degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    pub max_n: usize,
}

impl HermiteBasis {
    pub fn new(max_n: usize) -> Self {
        Self { max_n }
    }

    pub fn eval(&self, u: f64) -> Vec<f64> {
        hermite_all(self.max_n, u)
    }

    /// `Σ c_n h_n(u)`.
    pub fn synthesize(coeffs: &[C64], u: f64) -> C64 {
        if coeffs.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let h = hermite_all(coeffs.len() - 1, u);
        coeffs.iter().zip(h).map(|(c, hn)| c * hn).sum()
    }
}

/// Integral kernel of the transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransformKernel {
    /// `π^{-1/4} exp(−u²/2 + √2 u z − z²/2)`, onto the measure `e^{-|z|²}/π`.
    Classical,
    /// `(2α/π)^{1/4} exp(−α u² + 2α u z − (α/2) z²)`, onto `(α/π) e^{-α|z|²}`.
    Alpha(f64),
}

impl TransformKernel {
    pub fn alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid("TransformKernel", "alpha must be positive"));
        }
        Ok(Self::Alpha(alpha))
    }

    /// Normalization constant `c`.
    pub fn c(&self) -> f64 {
        match *self {
            Self::Classical => PI.powf(-0.25),
            Self::Alpha(a) => (2.0 * a / PI).powf(0.25),
        }
    }

    /// Parameter of the target Gaussian measure `(a/π) e^{-a|z|²}`.
    pub fn measure_alpha(&self) -> f64 {
        match *self {
            Self::Classical => 1.0,
            Self::Alpha(a) => a,
        }
    }

    /// Natural logarithm of the kernel value.
    fn ln_eval(&self, z: C64, u: f64) -> C64 {
        let c = self.c().ln();
        match *self {
            Self::Classical => -0.5 * u * u + SQRT_2 * u * z - 0.5 * z * z + c,
            Self::Alpha(a) => -a * u * u + 2.0 * a * u * z - 0.5 * a * z * z + c,
        }
    }

    /// `𝒜(z, u)`.
    pub fn eval(&self, z: C64, u: f64) -> C64 {
        self.ln_eval(z, u).exp()
    }

    /// Preimage of the `n`-th orthonormal basis function of the target space.
    ///
    /// For the classical kernel this is `h_n(u)`; for the α-kernel it is
    /// `(2α)^{1/4} h_n(√(2α) u)`.
    pub fn preimage(&self, n: usize, u: f64) -> f64 {
        match *self {
            Self::Classical => hermite_eval(n, u),
            Self::Alpha(a) => (2.0 * a).powf(0.25) * hermite_eval(n, (2.0 * a).sqrt() * u),
        }
    }

    /// Orthonormal basis function of the target space, `(√a z)^n / √n!`.
    pub fn basis(&self, n: usize, z: C64) -> C64 {
        basis_eval(n as u64, z * self.measure_alpha().sqrt())
    }

    /// Reproducing kernel of the target space, `e^{a z w̄}`.
    pub fn gram_exact(&self, z: C64, w: C64) -> C64 {
        (self.measure_alpha() * z * w.conj()).exp()
    }
}

/// `𝒜(z, u)` for the given kernel.
pub fn bargmann_kernel(kern: TransformKernel, z: C64, u: f64) -> C64 {
    kern.eval(z, u)
}

/// Quadrature value of `∫ 𝒜(z,u) conj(𝒜(w,u)) du`.
pub fn kernel_gram(kern: TransformKernel, z: C64, w: C64, rule: &QuadratureRule) -> C64 {
    rule.integrate(|u| (kern.ln_eval(z, u) + kern.ln_eval(w, u).conj() + u * u).exp())
}

/// Input to [`transform`].
pub enum Signal<'a> {
    /// Coefficients on the preimage basis (Hermite functions for the
    /// classical kernel); the transform is then exact.
    Hermite(&'a [C64]),
    /// A function sampled at the quadrature nodes.
    Function(&'a dyn Fn(f64) -> C64),
    /// Tabulated samples `(u, f(u))` on an increasing grid, integrated by
    /// the trapezoid rule.
    Table(&'a [(f64, C64)]),
}

/// `ℬf(z) = ∫ 𝒜(z,u) f(u) du`.
pub fn transform(
    kern: TransformKernel,
    f: &Signal<'_>,
    z: C64,
    rule: &QuadratureRule,
) -> Result<C64> {
    match f {
        Signal::Hermite(c) => Ok(c
            .iter()
            .enumerate()
            .map(|(n, cn)| cn * kern.basis(n, z))
            .sum()),
        Signal::Function(g) => {
            let mut acc = C64::new(0.0, 0.0);
            for (q, (&u, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
                let v = g(u);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite {
                        op: "transform",
                        index: q,
                    });
                }
                acc += (kern.ln_eval(z, u) + u * u).exp() * v * w;
            }
            Ok(acc)
        }
        Signal::Table(rows) => {
            for (q, (u, v)) in rows.iter().enumerate() {
                if !u.is_finite() || !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite {
                        op: "transform",
                        index: q,
                    });
                }
            }
            if rows.windows(2).any(|p| p[1].0 <= p[0].0) {
                return Err(Error::invalid(
                    "transform",
                    "sample abscissae must be strictly increasing",
                ));
            }
            Ok(rows
                .windows(2)
                .map(|p| {
                    let (u0, f0) = p[0];
                    let (u1, f1) = p[1];
                    (kern.eval(z, u0) * f0 + kern.eval(z, u1) * f1) * (0.5 * (u1 - u0))
                })
                .sum())
        }
    }
}

/// Taylor coefficients of an entire function on the orthonormal basis
/// `e_n = z^n/√n!`, by the trapezoid rule on the circle `|z| = radius`.
pub fn extract_coefficients<F: FnMut(C64) -> C64>(
    mut f: F,
    dim: usize,
    radius: f64,
    samples: usize,
) -> Result<CoeffVec> {
    if dim == 0 || samples < dim || radius <= 0.0 {
        return Err(Error::invalid(
            "extract_coefficients",
            "need dim ≥ 1, samples ≥ dim and a positive radius",
        ));
    }
    let vals: Vec<C64> = (0..samples)
        .map(|m| {
            f(C64::from_polar(
                radius,
                2.0 * PI * m as f64 / samples as f64,
            ))
        })
        .collect();
    let coeffs = (0..dim)
        .map(|n| {
            let s: C64 = vals
                .iter()
                .enumerate()
                .map(|(m, v)| {
                    v * C64::from_polar(1.0, -2.0 * PI * (n * m % samples) as f64 / samples as f64)
                })
                .sum();
            s / samples as f64 * sqrt_factorial(n as u64) / radius.powi(n as i32)
        })
        .collect();
    CoeffVec::new(coeffs)
}

/// `ℬ*φ(u) = (a/π) ∫ conj(𝒜(z,u)) φ(z) e^{-a|z|²} dx dy`.
///
/// For the α-kernel the prefactor works out to `2^{1/4} α^{5/4} / π^{5/4}`.
pub fn adjoint_transform<F: Fn(C64) -> C64>(
    kern: TransformKernel,
    phi: F,
    u: f64,
    grid: &PlaneRule,
) -> Result<C64> {
    let a = kern.measure_alpha();
    let v = grid.integrate(a, "adjoint_transform", |z| kern.eval(z, u).conj() * phi(z))?;
    Ok(v * (a / PI))
}

/// [`adjoint_transform`] for a finite expansion on the target basis.
pub fn adjoint_transform_coeffs(
    kern: TransformKernel,
    phi: &CoeffVec,
    u: f64,
    grid: &PlaneRule,
) -> Result<C64> {
    adjoint_transform(
        kern,
        |z| {
            phi.as_slice()
                .iter()
                .enumerate()
                .map(|(n, c)| c * kern.basis(n, z))
                .sum()
        },
        u,
        grid,
    )
}

/// `(α/π) ∫ e^{α z conj(z')} φ(z') e^{-α|z'|²} dx' dy'`.
pub fn projection_kernel_apply<F: Fn(C64) -> C64>(
    phi: F,
    z: C64,
    alpha: f64,
    grid: &PlaneRule,
) -> Result<C64> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(
            "projection_kernel_apply",
            "alpha must be positive",
        ));
    }
    let v = grid.integrate(alpha, "projection_kernel_apply", |w| {
        (alpha * z * w.conj()).exp() * phi(w)
    })?;
    Ok(v * (alpha / PI))
}

/// Gabor window `φ_{p,q}(u) = π^{-1/4} e^{ipu} e^{-(u-q)²/2}`.
pub fn gabor_window(p: f64, q: f64, u: f64) -> C64 {
    C64::new(-0.5 * (u - q) * (u - q), p * u).exp() * PI.powf(-0.25)
}

/// `W f(p, q) = ∫ conj(φ_{p,q}(u)) f(u) du` by quadrature.
pub fn gabor_transform<F: Fn(f64) -> C64>(f: F, p: f64, q: f64, rule: &QuadratureRule) -> C64 {
    rule.integrate(|u| {
        C64::new(-0.5 * (u - q) * (u - q) + u * u, -p * u).exp() * PI.powf(-0.25) * f(u)
    })
}

/// Point and factor linking the two transforms:
/// `ℬf(z) = factor · W f(p, q)` with `z = (q − ip)/√2` and
/// `factor = e^{(p² + q² + 2ipq)/4}`.
pub fn gabor_bargmann_link(p: f64, q: f64) -> (C64, C64) {
    let z = C64::new(q, -p) / SQRT_2;
    let factor = C64::new((p * p + q * q) / 4.0, p * q / 2.0).exp();
    (z, factor)
}

/// Coefficient-space image of multiplication by `u`: `½(A + A*)`.
pub fn zhu_position() -> HamiltonianSpec {
    HamiltonianSpec::new(0, Vec::new())
        .with_term(0, 1, C64::new(0.5, 0.0))
        .with_term(1, 0, C64::new(0.5, 0.0))
}

/// Coefficient-space image of `d/du`: `A − A*`.
pub fn zhu_derivative() -> HamiltonianSpec {
    HamiltonianSpec::new(0, Vec::new())
        .with_term(0, 1, C64::new(1.0, 0.0))
        .with_term(1, 0, C64::new(-1.0, 0.0))
}
