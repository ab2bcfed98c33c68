use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bargmann::evolve::{rk4_run, EvolutionProblem, Sign};
use bargmann::spectra::{doubling_study, eigen_complex};
use bargmann::trace::{regularized_trace_check, TraceConfig};
use bargmann::tridiag::{eigen_sym_tridiag, kernel_solution, symmetrize, Tridiag};
use bargmann::xform::{extract_coefficients, gauss_hermite, transform, Signal, TransformKernel};
use bargmann::{build_matrix, CoeffVec, HamiltonianSpec, C64};
use serde::Deserialize;

use crate::table::{Cell, Table};
use crate::{Cli, Command, SignArg};

const PRESETS: [(&str, &str); 3] = [
    ("number", include_str!("../presets/number.json")),
    ("heun", include_str!("../presets/heun.json")),
    ("gribov", include_str!("../presets/gribov.json")),
];

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<bargmann::Error> for CliError {
    fn from(e: bargmann::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// A spec file, or one of the built-in presets when no such file exists.
fn load_spec(arg: &str) -> Result<HamiltonianSpec> {
    let path = Path::new(arg);
    let text = if path.exists() {
        fs::read_to_string(path).map_err(|e| invalid(format!("{arg}: {e}")))?
    } else if let Some((_, json)) = PRESETS.iter().find(|(name, _)| *name == arg) {
        json.to_string()
    } else {
        return Err(invalid(format!("{arg}: no such file or preset")));
    };
    Ok(HamiltonianSpec::from_json(&text)?)
}

/// Perturbation `B` next to `A*^k A^k`: the spec's terms, plus its own
/// leading part when that differs from `k`.
fn perturbation_against(spec: &HamiltonianSpec, k: u32) -> HamiltonianSpec {
    let mut b = spec.perturbation();
    if spec.k > 0 && spec.k != k {
        b = b.with_term(spec.k, spec.k, C64::new(1.0, 0.0));
    }
    merge_terms(b)
}

fn merge_terms(spec: HamiltonianSpec) -> HamiltonianSpec {
    let mut out = HamiltonianSpec::new(spec.k, Vec::new());
    for t in spec.terms {
        match out.terms.iter_mut().find(|u| u.i == t.i && u.j == t.j) {
            Some(u) => u.a += t.a,
            None => out.terms.push(t),
        }
    }
    out.terms.retain(|t| t.a != C64::new(0.0, 0.0));
    out
}

#[derive(Deserialize)]
struct Sample {
    u: f64,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
struct Coefficient {
    re: f64,
    #[serde(default)]
    im: f64,
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn read_coefficients(path: &Path) -> Result<Vec<C64>> {
    let rows: Vec<Coefficient> = read_csv(path)?;
    if rows.is_empty() {
        return Err(invalid(format!("{}: no coefficients", path.display())));
    }
    Ok(rows.iter().map(|c| C64::new(c.re, c.im)).collect())
}

#[derive(Deserialize)]
struct TridiagFile {
    a: Vec<f64>,
    #[serde(default)]
    b: Vec<f64>,
    /// Omitted for a symmetric matrix.
    c: Option<Vec<f64>>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be positive")))
    }
}

fn nonzero(name: &str, v: usize) -> Result<()> {
    if v > 0 {
        Ok(())
    } else {
        Err(invalid(format!("--{name} must be at least 1")))
    }
}

fn spectrum(spec: &str, dim: usize, double_check: bool, tol: f64) -> Result<Table> {
    nonzero("dim", dim)?;
    positive("tol", tol)?;
    let spec = load_spec(spec)?;
    let res = if double_check {
        doubling_study(&spec, dim, tol)?
    } else {
        eigen_complex(&build_matrix(&spec, dim)?)?
    };
    let mut t = Table::new(&["index", "re", "im", "converged"]);
    for (j, v) in res.eigenvalues.iter().enumerate() {
        t.push(vec![
            j.into(),
            v.re.into(),
            v.im.into(),
            Cell::Flag(res.is_converged(j)),
        ]);
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
fn trace(
    k: u32,
    spec: &str,
    l: Option<u32>,
    contours: usize,
    first: Option<usize>,
    samples: usize,
    dim: usize,
) -> Result<Table> {
    nonzero("contours", contours)?;
    nonzero("samples", samples)?;
    nonzero("dim", dim)?;
    let b = perturbation_against(&load_spec(spec)?, k);
    let l = l.unwrap_or_else(|| (2 * k.saturating_sub(1)).max(1));
    let mut cfg = TraceConfig::new(k, &b, l);
    cfg.contour_count = contours;
    cfg.contour_samples = samples;
    cfg.dim = dim;
    if let Some(s) = first {
        cfg.first_contour = s;
    }
    let series = regularized_trace_check(&cfg, &b)?;
    let mut t = Table::new(&[
        "s",
        "r_s",
        "re",
        "im",
        "eigen_re",
        "eigen_im",
        "contour_re",
        "contour_im",
    ]);
    for i in 0..series.values.len() {
        let (v, e, c) = (
            series.values[i],
            series.eigen_sums[i],
            series.contour_values[i],
        );
        t.push(vec![
            series.contours[i].into(),
            series.radii[i].into(),
            v.re.into(),
            v.im.into(),
            e.re.into(),
            e.im.into(),
            c.re.into(),
            c.im.into(),
        ]);
    }
    if series.mismatch_count > 0 {
        eprintln!(
            "bargmann: {} eigenvalues could not be paired reliably",
            series.mismatch_count
        );
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
fn transform_cmd(
    input: Option<&PathBuf>,
    hermite: Option<&PathBuf>,
    alpha: Option<f64>,
    order: usize,
    dim: usize,
    radius: f64,
    samples: usize,
) -> Result<Table> {
    nonzero("dim", dim)?;
    positive("radius", radius)?;
    let kern = match alpha {
        Some(a) => TransformKernel::alpha(a)?,
        None => TransformKernel::Classical,
    };
    let rule = gauss_hermite(order)?;
    let table: Vec<(f64, C64)>;
    let coeffs: Vec<C64>;
    let signal = match (input, hermite) {
        (Some(p), _) => {
            let rows: Vec<Sample> = read_csv(p)?;
            table = rows.iter().map(|s| (s.u, C64::new(s.re, s.im))).collect();
            Signal::Table(&table)
        }
        (None, Some(p)) => {
            coeffs = read_coefficients(p)?;
            Signal::Hermite(&coeffs)
        }
        (None, None) => return Err(invalid("one of --input or --hermite is required")),
    };
    // evaluate once per sample point and keep the first failure
    let mut failure = None;
    let c = extract_coefficients(
        |z| match transform(kern, &signal, z, &rule) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        },
        dim,
        radius,
        samples,
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    let mut t = Table::new(&["n", "re", "im"]);
    for (n, v) in c.as_slice().iter().enumerate() {
        t.push(vec![n.into(), v.re.into(), v.im.into()]);
    }
    Ok(t)
}

fn evolve(
    spec: &str,
    sign: SignArg,
    initial: &Path,
    t_final: f64,
    dt: f64,
    stride: usize,
) -> Result<(Table, bool)> {
    let p = EvolutionProblem {
        generator: load_spec(spec)?,
        sign: match sign {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        },
        initial: CoeffVec::new(read_coefficients(initial)?)?,
        t_final,
        dt,
    };
    let run = rk4_run(&p, stride)?;
    let mut t = Table::new(&["t", "n", "re", "im"]);
    for (time, v) in &run.snapshots {
        for (n, a) in v.as_slice().iter().enumerate() {
            t.push(vec![(*time).into(), n.into(), a.re.into(), a.im.into()]);
        }
    }
    Ok((t, run.truncation_ok()))
}

fn jacobi(kernel: Option<usize>, tridiag: Option<&PathBuf>) -> Result<Table> {
    if let Some(n) = kernel {
        let sol = kernel_solution(n)?;
        let mut t = Table::new(&["n", "value"]);
        for (i, v) in sol.entries().iter().enumerate() {
            t.push(vec![(i + 1).into(), (*v).into()]);
        }
        return Ok(t);
    }
    let path =
        tridiag.ok_or_else(|| invalid("one of --kernel-solution or --tridiag is required"))?;
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let f: TridiagFile =
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let m = match f.c {
        Some(c) => Tridiag::new(f.a, f.b, c)?,
        None => Tridiag::symmetric(f.a, f.b)?,
    };
    let s = if m.is_symmetric() {
        m
    } else {
        symmetrize(&m)?.s
    };
    let sd = eigen_sym_tridiag(&s)?;
    let mut t = Table::new(&["k", "eigenvalue", "norming_constant"]);
    for (i, (l, g)) in sd.eigenvalues.iter().zip(&sd.norming_constants).enumerate() {
        t.push(vec![(i + 1).into(), (*l).into(), (*g).into()]);
    }
    Ok(t)
}

fn emit(cli: &Cli, table: &Table) -> Result<()> {
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(
                File::create(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?,
            );
            table.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => table.write(cli.format, io::stdout().lock())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    let table = match &cli.command {
        Command::Spectrum {
            spec,
            dim,
            double_check,
            tol,
        } => spectrum(spec, *dim, *double_check, *tol)?,
        Command::Trace {
            k,
            spec,
            l,
            contours,
            first,
            samples,
            dim,
        } => trace(*k, spec, *l, *contours, *first, *samples, *dim)?,
        Command::Transform {
            input,
            hermite,
            alpha,
            order,
            dim,
            radius,
            samples,
        } => transform_cmd(
            input.as_ref(),
            hermite.as_ref(),
            *alpha,
            *order,
            *dim,
            *radius,
            *samples,
        )?,
        Command::Evolve {
            spec,
            sign,
            initial,
            t,
            dt,
            stride,
        } => {
            let (table, ok) = evolve(spec, *sign, initial, *t, *dt, *stride)?;
            emit(cli, &table)?;
            if !ok {
                return Err(CliError::Numerical(
                    "rk4_evolve: coefficient mass reached the top tenth of the truncation; increase N".into(),
                ));
            }
            return Ok(());
        }
        Command::Jacobi {
            kernel_solution,
            tridiag,
        } => jacobi(*kernel_solution, tridiag.as_ref())?,
        Command::Preset { name } => {
            let (_, json) = PRESETS.iter().find(|(n, _)| n == name).ok_or_else(|| {
                invalid(format!("unknown preset {name}; try number, heun or gribov"))
            })?;
            let spec = HamiltonianSpec::from_json(json)?;
            let text = spec.to_json() + "\n";
            match &cli.output {
                Some(path) => fs::write(path, text)?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            return Ok(());
        }
    };
    emit(cli, &table)
}
