//! Linear evolution `∂_t v = G v` of coefficient vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{build_matrix, BandedMatrix, CoeffVec, HamiltonianSpec, C64};
use crate::spectra::{heun_spec, HeunVariant};
use crate::tridiag::jacobi_omega;

/// Largest admissible `max(‖G‖₁, ‖G‖_∞) · dt`.
pub const STABILITY_LIMIT: f64 = 0.1;

/// Largest admissible fraction of `‖v‖²` in the top tenth of the indices.
pub const TAIL_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `∂_t φ = ±G φ` on the truncation set by the initial vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionProblem {
    pub generator: HamiltonianSpec,
    #[serde(default)]
    pub sign: Sign,
    pub initial: CoeffVec,
    pub t_final: f64,
    pub dt: f64,
}

/// A finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionRun {
    pub state: CoeffVec,
    /// `(t, v(t))` every `stride` steps, including both ends.
    pub snapshots: Vec<(f64, CoeffVec)>,
    pub steps: usize,
    /// Largest tail fraction seen over the run.
    pub max_tail: f64,
}

impl EvolutionRun {
    /// False when the tail audit flagged the run.
    pub fn truncation_ok(&self) -> bool {
        self.max_tail < TAIL_LIMIT
    }
}

/// `a_n(t) = a_n(0) e^{−μ n t}`, i.e. `φ(t; z) = φ(z e^{−μt})`.
pub fn dilation_solution(initial: &CoeffVec, mu: f64, t: f64) -> CoeffVec {
    let v = initial
        .as_slice()
        .iter()
        .enumerate()
        .map(|(n, a)| a * (-mu * n as f64 * t).exp())
        .collect();
    CoeffVec::new(v).expect("dimension preserved")
}

fn tail_fraction(v: &[C64]) -> f64 {
    let total: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let top = v.len().div_ceil(10);
    v[v.len() - top..].iter().map(|x| x.norm_sqr()).sum::<f64>() / total
}

/// Classical RK4 with a fixed step for `∂_t v = G v`.
///
/// The step count is `⌈t_final / dt⌉` and the step is shrunk to land on
/// `t_final` exactly. `stride = 0` records only the end points.
pub fn rk4_matrix(
    g: &BandedMatrix,
    initial: &CoeffVec,
    t_final: f64,
    dt: f64,
    stride: usize,
) -> Result<EvolutionRun> {
    const OP: &str = "rk4_evolve";
    if !(dt > 0.0) || !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::invalid(OP, "need dt > 0 and a finite t_final ≥ 0"));
    }
    if g.dim() != initial.dim() {
        return Err(Error::DimensionMismatch {
            op: OP,
            expected: g.dim(),
            got: initial.dim(),
        });
    }
    let guard = g.norm_bound() * dt;
    if guard > STABILITY_LIMIT {
        return Err(Error::StabilityGuard {
            op: OP,
            value: guard,
            limit: STABILITY_LIMIT,
        });
    }
    let steps = if t_final == 0.0 {
        0
    } else {
        (t_final / dt - 1e-9).ceil() as usize
    };
    let h = if steps == 0 {
        0.0
    } else {
        t_final / steps as f64
    };

    let n = g.dim();
    let mut v = initial.as_slice().to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    let mut snapshots = vec![(0.0, initial.clone())];
    let mut max_tail = tail_fraction(&v);
    for step in 1..=steps {
        g.matvec_into(&v, &mut k1);
        for i in 0..n {
            tmp[i] = v[i] + k1[i] * (0.5 * h);
        }
        g.matvec_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = v[i] + k2[i] * (0.5 * h);
        }
        g.matvec_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = v[i] + k3[i] * h;
        }
        g.matvec_into(&tmp, &mut k4);
        for i in 0..n {
            v[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        if let Some(i) = v
            .iter()
            .position(|x| !x.re.is_finite() || !x.im.is_finite())
        {
            return Err(Error::NonFinite { op: OP, index: i });
        }
        max_tail = max_tail.max(tail_fraction(&v));
        if (stride > 0 && step % stride == 0) || step == steps {
            snapshots.push((h * step as f64, CoeffVec::new(v.clone())?));
        }
    }
    Ok(EvolutionRun {
        state: CoeffVec::new(v)?,
        snapshots,
        steps,
        max_tail,
    })
}

/// The full run for a problem, with snapshots every `stride` steps.
pub fn rk4_run(p: &EvolutionProblem, stride: usize) -> Result<EvolutionRun> {
    let g = build_matrix(&p.generator, p.initial.dim())?;
    let g = g.scale_columns(&vec![C64::new(p.sign.factor(), 0.0); g.dim()]);
    rk4_matrix(&g, &p.initial, p.t_final, p.dt, stride)
}

/// Final state of [`rk4_run`].
pub fn rk4_evolve(p: &EvolutionProblem) -> Result<CoeffVec> {
    rk4_run(p, 0).map(|r| r.state)
}

/// Jacobi matrix `𝕁` acting on `ã_1 … ã_N` (stored at indices `0 … N−1`),
/// with off-diagonals `ω_n = (n+1)√n`.
///
/// With `a_n = (i^n/√n) ã_n` the coefficient equations of
/// `Ĥ = A + A*(A − A*)A` become `∂_t ã = i 𝕁 ã` for `n ≥ 1`.
pub fn heun_coefficient_system(n: usize) -> Result<BandedMatrix> {
    if n < 3 {
        return Err(Error::invalid("heun_coefficient_system", "need N ≥ 3"));
    }
    let off: Vec<C64> = (1..n as u64)
        .map(|k| C64::new(jacobi_omega(k), 0.0))
        .collect();
    Ok(BandedMatrix::tridiagonal(
        &off,
        &vec![C64::new(0.0, 0.0); n],
        &off,
    ))
}

/// The untransformed system `∂_t a = Ĥ a` on `a_0 … a_{N−1}`.
pub fn heun_coefficient_equations(n: usize) -> Result<BandedMatrix> {
    build_matrix(&heun_spec(HeunVariant::Diffusion), n)
}

/// Diagonal of the substitution `a_n = (i^n/√n) ã_n` for `n = 1 … N`.
pub fn heun_substitution(n: usize) -> Vec<C64> {
    let i = C64::new(0.0, 1.0);
    (1..=n)
        .map(|k| i.powu(k as u32) / (k as f64).sqrt())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coeffs(v: &[f64]) -> CoeffVec {
        CoeffVec::from_real(v).unwrap()
    }

    #[test]
    fn dilation_examples() {
        let e2 = CoeffVec::basis(2, 5);
        assert_eq!(dilation_solution(&e2, 1.0, 0.0), e2);
        assert_eq!(dilation_solution(&e2, 0.0, 3.0), e2);
        let v = dilation_solution(&e2, 1.0, 2f64.ln());
        assert_relative_eq!(v.as_slice()[2].re, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn zero_generator_is_identity() {
        let p = EvolutionProblem {
            generator: HamiltonianSpec::zero(),
            sign: Sign::Plus,
            initial: coeffs(&[1.0, 2.0, 3.0]),
            t_final: 1.0,
            dt: 0.1,
        };
        assert_eq!(rk4_evolve(&p).unwrap(), p.initial);
    }

    #[test]
    fn stability_guard() {
        let p = EvolutionProblem {
            generator: HamiltonianSpec::number(),
            sign: Sign::Minus,
            initial: CoeffVec::basis(1, 64),
            t_final: 1.0,
            dt: 0.01,
        };
        assert!(matches!(rk4_evolve(&p), Err(Error::StabilityGuard { .. })));
    }

    #[test]
    fn heun_rows() {
        let g = heun_coefficient_equations(6).unwrap();
        assert_relative_eq!(g.get(0, 1).re, 1.0, max_relative = 1e-15);
        assert_relative_eq!(g.get(1, 2).re, 2.0 * 2f64.sqrt(), max_relative = 1e-15);
        let j = heun_coefficient_system(6).unwrap();
        // ω_4 couples ã_4 and ã_5, stored at indices 3 and 4
        assert_relative_eq!(j.get(3, 4).re, 10.0, max_relative = 1e-15);
    }
}
