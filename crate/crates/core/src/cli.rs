//! `discform` command line: build, verify, analyze, probe.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 for usage and
//! input errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::analysis::{classify, poly_from_profile, probe_higher_nullity, Classification, FormulaSet, ProbeReport, RootProfile};
use crate::error::{Error, Result};
use crate::exact::poly::{monomial_to_string, parse_monomial};
use crate::exact::rational::{parse_rational, to_fraction_string, to_short_string};
use crate::exact::{Label, MultiPoly, PolyMatrix, Rational, TriDegree};
use crate::formulas::{FormulaBundle, FormulaKind};
use crate::verify::{verify_matrix_det, verify_monic_det, VerifyMode, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "discform", version, about = "Determinantal formulae for discriminants of binary forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a formula matrix.
    Build(BuildArgs),
    /// Check det(M) = c * a0^e * D_n.
    Verify(VerifyArgs),
    /// Classify the repeated roots of a polynomial.
    Analyze(AnalyzeArgs),
    /// Record swallowtail nullities of derivatives of polynomials with two high-order roots.
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symbolic,
    Sampled,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "swallowtail-full")]
    pub formula: FormulaKind,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "swallowtail-full")]
    pub formula: FormulaKind,
    #[arg(long, value_enum, default_value = "sampled")]
    pub mode: Mode,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Comma-separated coefficients a0,..,an (rationals allowed).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "profile", required_unless_present = "profile")]
    pub coeffs: Option<String>,
    /// Roots with multiplicities, e.g. "0^3,1^1".
    #[arg(long, allow_hyphen_values = true)]
    pub profile: Option<String>,
    /// Degree; must agree with the input when given.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long)]
    pub n: usize,
    /// Derivative order.
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (result, output) = match &cli.command {
        Command::Build(a) => (cmd_build(a), &a.output),
        Command::Verify(a) => (cmd_verify(a), &a.output),
        Command::Analyze(a) => (cmd_analyze(a), &a.output),
        Command::Probe(a) => (cmd_probe(a), &a.output),
    };
    match result {
        Ok((text, code)) => {
            if let Err(e) = emit(&text, output, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::VerificationFailed(_) => EXIT_VERIFY_FAILED,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn emit(text: &str, output: &Output, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

fn cmd_build(a: &BuildArgs) -> Result<(String, i32)> {
    let bundle = FormulaBundle::build(a.formula, a.n)?;
    let text = match a.output.format {
        Format::Json => matrix_to_json(&bundle)?,
        Format::Latex => matrix_to_latex(&bundle.matrix),
        Format::Csv => matrix_to_csv(&bundle.matrix),
        Format::Plain => format!("{} n={} ({}x{})\n{}", bundle.kind, bundle.n, bundle.matrix.rows(), bundle.matrix.cols(), bundle.matrix),
    };
    Ok((text, EXIT_OK))
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub formula: String,
    pub n: usize,
    pub mode: String,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub passed: bool,
    pub c: Option<String>,
    pub e: Option<u32>,
    pub message: Option<String>,
}

fn cmd_verify(a: &VerifyArgs) -> Result<(String, i32)> {
    let mode = match a.mode {
        Mode::Symbolic => VerifyMode::Symbolic,
        Mode::Sampled => {
            if a.samples == 0 {
                return Err(Error::Construction("--samples must be at least 1".into()));
            }
            VerifyMode::Sampled {
                count: a.samples,
                seed: a.seed,
            }
        }
    };
    let bundle = FormulaBundle::build(a.formula, a.n)?;
    let outcome = if a.formula == FormulaKind::SwallowtailMonic {
        verify_monic_det(&bundle.matrix, a.n, mode).map(|c| (c, 0))
    } else {
        verify_matrix_det(&bundle.matrix, a.n, mode).map(|r| (r.c, r.a0_exponent))
    };
    let (sampled, seed) = match mode {
        VerifyMode::Sampled { count, seed } => (Some(count), Some(seed)),
        VerifyMode::Symbolic => (None, None),
    };
    let mut report = VerifyReport {
        formula: a.formula.to_string(),
        n: a.n,
        mode: mode.name().into(),
        samples: sampled,
        seed,
        passed: false,
        c: None,
        e: None,
        message: None,
    };
    let code = match outcome {
        Ok((c, e)) => {
            report.passed = true;
            report.c = Some(to_fraction_string(&c));
            report.e = Some(e);
            EXIT_OK
        }
        Err(Error::VerificationFailed(m)) => {
            report.message = Some(m);
            EXIT_VERIFY_FAILED
        }
        Err(e) => return Err(e),
    };
    let text = match a.output.format {
        Format::Json => to_json_line(&report)?,
        Format::Csv => {
            let mut s = String::from("formula,n,mode,samples,seed,passed,c,e\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                report.formula,
                report.n,
                report.mode,
                opt(&report.samples),
                opt(&report.seed),
                report.passed,
                report.c.clone().unwrap_or_default(),
                opt(&report.e)
            );
            s
        }
        Format::Plain => match (&report.c, report.e) {
            (Some(c), Some(e)) => format!(
                "{} n={} {}: pass\nc = {c}\ne = {e}\n",
                report.formula, report.n, report.mode
            ),
            _ => format!(
                "{} n={} {}: FAIL\n{}\n",
                report.formula,
                report.n,
                report.mode,
                report.message.clone().unwrap_or_default()
            ),
        },
        Format::Latex => match (&report.c, report.e) {
            (Some(c), Some(e)) => format!(
                "\\det M = {}\\, a_{{0}}^{{{e}}} D_{{{}}}\n",
                latex_rational(&parse_rational(c)?),
                report.n
            ),
            _ => format!("% verification failed: {}\n", report.message.clone().unwrap_or_default()),
        },
    };
    Ok((text, code))
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn parse_coeffs(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<(String, i32)> {
    let coeffs = match (&a.coeffs, &a.profile) {
        (Some(c), _) => parse_coeffs(c)?,
        (None, Some(p)) => poly_from_profile(&p.parse::<RootProfile>()?),
        (None, None) => return Err(Error::Parse("--coeffs or --profile is required".into())),
    };
    if coeffs.len() < 3 {
        return Err(Error::DegreeTooSmall {
            min: 2,
            got: coeffs.len().saturating_sub(1),
        });
    }
    let n = coeffs.len() - 1;
    if let Some(m) = a.n {
        if m != n {
            return Err(Error::Parse(format!("--n {m} disagrees with input of degree {n}")));
        }
    }
    if coeffs[0] == Rational::from_integer(0.into()) {
        return Err(Error::LeadingCoefficientZero);
    }
    if n < 3 {
        return Err(Error::DegreeTooSmall { min: 3, got: n });
    }
    let c = classify(&coeffs, &FormulaSet::new(n)?)?;
    let text = match a.output.format {
        Format::Json => to_json_line(&c)?,
        Format::Csv => format!("{}\n{}\n", CLASSIFICATION_FIELDS.join(","), classification_values(&c).join(",")),
        Format::Plain => CLASSIFICATION_FIELDS
            .iter()
            .zip(classification_values(&c))
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect(),
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{ll}\n");
            for (k, v) in CLASSIFICATION_FIELDS.iter().zip(classification_values(&c)) {
                let _ = writeln!(s, "\\texttt{{{}}} & {v} \\\\", k.replace('_', "\\_"));
            }
            s.push_str("\\end{tabular}\n");
            s
        }
    };
    Ok((text, EXIT_OK))
}

const CLASSIFICATION_FIELDS: [&str; 7] = [
    "n",
    "bezout_rank",
    "bezout_nullity",
    "swallowtail_nullity",
    "distinct_roots_detected",
    "multiplicity_excess",
    "multi_double_pair",
];

fn classification_values(c: &Classification) -> Vec<String> {
    vec![
        c.n.to_string(),
        c.bezout_rank.to_string(),
        c.bezout_nullity.to_string(),
        c.swallowtail_nullity.to_string(),
        c.distinct_roots_detected.to_string(),
        c.multiplicity_excess.to_string(),
        c.multi_double_pair.to_string(),
    ]
}

fn cmd_probe(a: &ProbeArgs) -> Result<(String, i32)> {
    if a.n < 3 {
        return Err(Error::DegreeTooSmall { min: 3, got: a.n });
    }
    let r = probe_higher_nullity(a.n, a.i, a.trials, a.seed)?;
    let text = match a.output.format {
        Format::Json => to_json_line(&r)?,
        Format::Csv => histogram_csv(&r),
        Format::Plain => {
            let mut s = format!("n={} i={} trials={} feasible={}\n", r.n, r.i, r.trials, r.feasible);
            for (k, v) in &r.histogram {
                let _ = writeln!(s, "nullity {k}: {v}");
            }
            s
        }
        Format::Latex => {
            let mut s = String::from("\\begin{tabular}{rr}\nnullity & count \\\\\n\\hline\n");
            for (k, v) in &r.histogram {
                let _ = writeln!(s, "{k} & {v} \\\\");
            }
            s.push_str("\\end{tabular}\n");
            s
        }
    };
    Ok((text, EXIT_OK))
}

fn histogram_csv(r: &ProbeReport) -> String {
    let mut s = String::from("nullity,count\n");
    for (k, v) in &r.histogram {
        let _ = writeln!(s, "{k},{v}");
    }
    s
}

fn to_json_line<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Construction(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// JSON form of a formula matrix. Entries are row-major; each is a map
/// from monomial (`a0*a2^2`, `1` for constants) to a `p/q` coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub formula: Option<String>,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub discriminant_tri_degree: TriDegree,
    pub entries: Vec<Vec<BTreeMap<String, String>>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &PolyMatrix, formula: Option<FormulaKind>) -> Self {
        let n = m.a_vars().saturating_sub(1);
        let entries = (0..m.rows())
            .map(|r| {
                m.row(r)
                    .iter()
                    .map(|p| {
                        p.terms()
                            .map(|(mono, c)| {
                                (monomial_to_string(mono, p.a_vars(), p.aux_vars()), to_fraction_string(c))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        MatrixDoc {
            formula: formula.map(|k| k.to_string()),
            n,
            rows: m.rows(),
            cols: m.cols(),
            row_labels: m.row_labels().iter().map(|l| l.to_string()).collect(),
            col_labels: m.col_labels().iter().map(|l| l.to_string()).collect(),
            discriminant_tri_degree: TriDegree::discriminant(n),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<PolyMatrix> {
        let a_vars = self.n + 1;
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::InvalidMatrix("entry array does not match rows/cols".into()));
        }
        let rows = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        let terms = cell
                            .iter()
                            .map(|(k, v)| {
                                let m = parse_monomial(k, a_vars, 0)?;
                                Ok((m.exponents().to_vec(), parse_rational(v)?))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(MultiPoly::from_terms(a_vars, 0, terms))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let parse_labels = |v: &[String]| v.iter().map(|s| s.parse::<Label>()).collect::<Result<Vec<_>>>();
        PolyMatrix::new(
            self.rows,
            self.cols,
            a_vars,
            rows.into_iter().flatten().collect(),
            parse_labels(&self.row_labels)?,
            parse_labels(&self.col_labels)?,
        )
    }
}

pub fn matrix_to_json(bundle: &FormulaBundle) -> Result<String> {
    plain_matrix_to_json(&bundle.matrix, Some(bundle.kind))
}

pub fn plain_matrix_to_json(m: &PolyMatrix, formula: Option<FormulaKind>) -> Result<String> {
    to_json_line(&MatrixDoc::from_matrix(m, formula))
}

pub fn matrix_from_json(s: &str) -> Result<PolyMatrix> {
    let doc: MatrixDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_matrix()
}

fn latex_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        let sign = if c.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", c.numer().abs(), c.denom())
    }
}

/// `3a_{1}^{2} - 8a_{0}a_{2}` style rendering.
pub fn poly_to_latex(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mut mono = String::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if i < p.a_vars() {
                format!("a_{{{i}}}")
            } else {
                crate::exact::poly::aux_name(p.aux_vars(), i - p.a_vars())
            };
            mono.push_str(&name);
            if e != 1 {
                let _ = write!(mono, "^{{{e}}}");
            }
        }
        let abs = c.abs();
        if mono.is_empty() {
            s.push_str(&latex_rational(&abs));
        } else {
            if !abs.is_one() {
                s.push_str(&latex_rational(&abs));
            }
            s.push_str(&mono);
        }
    }
    s
}

pub fn matrix_to_latex(m: &PolyMatrix) -> String {
    let mut s = String::from("\\begin{pmatrix}\n");
    for r in 0..m.rows() {
        let cells: Vec<String> = m.row(r).iter().map(poly_to_latex).collect();
        let _ = writeln!(s, "{} \\\\", cells.join(" & "));
    }
    s.push_str("\\end{pmatrix}\n");
    s
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn matrix_to_csv(m: &PolyMatrix) -> String {
    let mut s = String::new();
    let header: Vec<String> = std::iter::once(String::new())
        .chain(m.col_labels().iter().map(|l| csv_cell(&l.to_string())))
        .collect();
    let _ = writeln!(s, "{}", header.join(","));
    for r in 0..m.rows() {
        let cells: Vec<String> = std::iter::once(csv_cell(&m.row_labels()[r].to_string()))
            .chain(m.row(r).iter().map(|p| csv_cell(&p.to_string())))
            .collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

/// Short display of a coefficient vector, e.g. `1,0,-2,0,1`.
pub fn coeffs_to_string(c: &[Rational]) -> String {
    c.iter().map(to_short_string).collect::<Vec<_>>().join(",")
}
