use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bounds::BoundsReport;
use crate::error::{Error, Result};
use crate::family::Mode;
use crate::generate::{gaussian_isotropic, rational_isotropic};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::select::{select, SelectionResult, TraceStep};
use crate::verify::{run_suite, Level};

use super::io::{format_matrix, read_matrix, Format, LoadedMatrix};

/// Largest `|BBᵀ − I|` entry accepted from the float generator.
pub const GEN_ISOTROPY_TOLERANCE: f64 = 1e-10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
/// Selection ran, but `k` exceeds the stable rank so no guarantee applies.
pub const EXIT_OUTSIDE_GUARANTEE: i32 = 2;

#[derive(Clone, Debug, Serialize)]
pub struct Inputs {
    pub path: String,
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub exact: bool,
}

/// One inequality `sigma_min_sq ≥ bound − ε`.
#[derive(Clone, Debug, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub bound: f64,
    pub achieved: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelectReport {
    pub inputs: Inputs,
    pub mode: Mode,
    pub epsilon: f64,
    pub indices: Vec<usize>,
    pub sigma_min_sq: f64,
    pub initial_root: f64,
    pub trace: Vec<TraceStep>,
    pub bounds: BoundsReport,
    pub checks: Vec<ReportCheck>,
    pub within_stable_rank: bool,
    pub guarantee_applicable: bool,
}

impl SelectReport {
    fn build<T: Scalar>(b: &Matrix<T>, inputs: Inputs, mode: Mode, eps: f64) -> Result<Self> {
        let result: SelectionResult = select(b, inputs.k, mode, eps)?;
        let bounds = BoundsReport::for_matrix(b, inputs.k, Some(mode))?.with_achieved(result.sigma_min_sq, eps);
        let achieved = result.sigma_min_sq;
        let check = |name: &str, bound: f64| ReportCheck {
            name: name.to_owned(),
            bound,
            achieved,
            passed: achieved >= bound - eps,
        };
        let mut checks = vec![check("initial_root", result.initial_root)];
        if let Some(last) = result.root_trace.last() {
            checks.push(check("final_root", last.root));
        }
        for (name, entry) in bounds.entries() {
            if let (true, Some(v)) = (entry.applicable, entry.value) {
                checks.push(check(name, v));
            }
        }
        Ok(Self {
            inputs,
            mode,
            epsilon: eps,
            indices: result.indices,
            sigma_min_sq: achieved,
            initial_root: result.initial_root,
            trace: result.root_trace,
            guarantee_applicable: bounds.guarantee_applicable(),
            bounds,
            checks,
            within_stable_rank: result.within_stable_rank,
        })
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let i = &self.inputs;
        let arith = if i.exact { "exact" } else { "float" };
        let _ = writeln!(
            out,
            "d={} m={} k={} mode={} epsilon={:e} ({arith})",
            i.d, i.m, i.k, self.mode, self.epsilon
        );
        let _ = writeln!(out, "indices       {:?}", self.indices);
        let _ = writeln!(out, "sigma_min_sq  {:.12}", self.sigma_min_sq);
        let _ = writeln!(out, "initial_root  {:.12}", self.initial_root);
        let _ = writeln!(out, "\nstep  index  lambda_k");
        for (n, step) in self.trace.iter().enumerate() {
            let _ = writeln!(out, "{:<5} {:<6} {:.12}", n + 1, step.index, step.root);
        }
        let _ = write!(out, "\n{}", bounds_table(&self.bounds));
        let _ = writeln!(out, "\ncheck             bound           result");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<17} {:<15.10} {}",
                c.name,
                c.bound,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
        if !self.within_stable_rank {
            let _ = writeln!(out, "\nwarning: k exceeds the stable rank; no guarantee applies");
        }
        out
    }
}

pub fn bounds_table(report: &BoundsReport) -> String {
    let mut out = String::new();
    let opt = |v: Option<f64>| v.map_or("-".to_owned(), |v| format!("{v:.10}"));
    let _ = writeln!(
        out,
        "d={} m={} k={} srank={} kappa={} isotropic={}",
        report.d,
        report.m,
        report.k,
        opt(report.srank),
        opt(report.kappa),
        report.isotropic
    );
    let _ = writeln!(out, "bound             value           applicable  satisfied");
    for (name, e) in report.entries() {
        let satisfied = match e.satisfied {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "-",
        };
        let note = if e.vacuous { " (vacuous)" } else { "" };
        let _ = writeln!(
            out,
            "{:<17} {:<15} {:<11} {satisfied}{note}",
            name,
            opt(e.value),
            if e.applicable { "yes" } else { "no" }
        );
    }
    out
}

fn emit_json<S: Serialize>(doc: &S, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SelectOptions {
    pub input: PathBuf,
    pub k: usize,
    pub mode: Mode,
    pub epsilon: f64,
    pub exact: bool,
    pub output: Option<PathBuf>,
}

pub fn select_report(opts: &SelectOptions) -> Result<SelectReport> {
    let loaded = read_matrix(&opts.input, opts.exact)?;
    let inputs = Inputs {
        path: opts.input.display().to_string(),
        d: loaded.rows(),
        m: loaded.cols(),
        k: opts.k,
        exact: loaded.is_exact(),
    };
    match &loaded {
        LoadedMatrix::Real(b) => SelectReport::build(b, inputs, opts.mode, opts.epsilon),
        LoadedMatrix::Exact(b) => SelectReport::build(b, inputs, opts.mode, opts.epsilon),
    }
}

/// Writes the JSON report to `output` (the table goes to stdout) or, without
/// an output path, prints the table followed by the report.
pub fn cmd_select(opts: &SelectOptions) -> Result<i32> {
    let report = select_report(opts)?;
    print!("{}", report.table());
    if opts.output.is_none() {
        println!();
    }
    emit_json(&report, opts.output.as_deref())?;
    Ok(if !report.passed() {
        eprintln!("error: the achieved value violates a bound");
        EXIT_ERROR
    } else if !report.within_stable_rank {
        EXIT_OUTSIDE_GUARANTEE
    } else {
        EXIT_OK
    })
}

#[derive(Clone, Debug)]
pub struct BoundsOptions {
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub k: usize,
    pub input: Option<PathBuf>,
    pub exact: bool,
    pub mode: Option<Mode>,
    pub output: Option<PathBuf>,
}

pub fn bounds_report(opts: &BoundsOptions) -> Result<BoundsReport> {
    let Some(path) = &opts.input else {
        let (Some(d), Some(m)) = (opts.d, opts.m) else {
            return Err(Error::InvalidArgument("give --d and --m, or --input".into()));
        };
        return BoundsReport::for_dimensions(d, m, opts.k);
    };
    let loaded = read_matrix(path, opts.exact)?;
    for (flag, given, actual) in [("d", opts.d, loaded.rows()), ("m", opts.m, loaded.cols())] {
        if given.is_some_and(|g| g != actual) {
            return Err(Error::Dimension(format!(
                "--{flag} {} does not match the input's {actual}",
                given.unwrap_or_default()
            )));
        }
    }
    match &loaded {
        LoadedMatrix::Real(b) => BoundsReport::for_matrix(b, opts.k, opts.mode),
        LoadedMatrix::Exact(b) => BoundsReport::for_matrix(b, opts.k, opts.mode),
    }
}

pub fn cmd_bounds(opts: &BoundsOptions) -> Result<i32> {
    let report = bounds_report(opts)?;
    print!("{}", bounds_table(&report));
    if opts.output.is_none() {
        println!();
    }
    emit_json(&report, opts.output.as_deref())?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(level: Level) -> Result<i32> {
    let outcomes = run_suite(level)?;
    let mut failed = 0;
    for outcome in &outcomes {
        println!("{outcome}");
        if !outcome.passed() {
            failed += 1;
        }
    }
    println!("{} checks, {failed} failed", outcomes.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_ERROR })
}

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub d: usize,
    pub m: usize,
    pub seed: u64,
    pub exact: bool,
    pub output: Option<PathBuf>,
}

/// The generated instance as file text.
pub fn generate_text(opts: &GenOptions) -> Result<String> {
    let format = opts.output.as_deref().map_or(Format::Csv, Format::from_path);
    if opts.exact {
        return Ok(format_matrix(&rational_isotropic(opts.d, opts.m, opts.seed)?, format));
    }
    let b = gaussian_isotropic(opts.d, opts.m, opts.seed)?;
    let defect = b.isotropy_defect();
    if defect > GEN_ISOTROPY_TOLERANCE {
        return Err(Error::NotIsotropic(defect));
    }
    Ok(format_matrix(&b, format))
}

pub fn cmd_gen(opts: &GenOptions) -> Result<i32> {
    let text = generate_text(opts)?;
    match &opts.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
