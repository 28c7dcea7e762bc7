//! Command-line front end: builds models, runs the engines and prints text
//! or JSON reports.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on flag errors
//! (including parameters the model builder rejects). JSON mode writes exactly
//! one document to standard output; wall-time goes to standard error.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gradsym::cohomology::{harmonic_h2, CohomologyReport};
use gradsym::gate::{two_symmetry_flatness, GateOptions, GateVerdict};
use gradsym::models::{Family, ModelDescriptor, StructureReport};
use gradsym::symmetry::{symmetry_verdict, SymmetryReport};
use gradsym::verify::{catalog, run_acceptance, Budget, CheckRow, CheckStatus, CriterionResult};
use gradsym::{build_model, Error, GradedModel, GroupVariant, Mat, ModelSpec, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "gradsym", version, about = "Symmetries and harmonic curvature of |1|-graded models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the models within a budget with their dimensions and structure checks.
    Catalog {
        #[arg(long)]
        budget: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Group elements inducing symmetries of the homogeneous model.
    Symmetries {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Harmonic curvature `H^2` split by homogeneity.
    Cohomology {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Two-symmetry flatness criterion for a difference element `Z`.
    Gate {
        #[command(flatten)]
        model: ModelArgs,
        /// `e1` (first dual basis element), `b2` (second basis element of
        /// `g_1`), combinations such as `e1+2*e3` or `1/2*b1-b2`, or a
        /// matrix literal `[[0,1],[0,0]]`.
        #[arg(long = "Z", default_value = "e1", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full acceptance matrix.
    VerifyAll {
        /// `m=5,pq=6,h=2`: projective m, conformal and Grassmannian p+q,
        /// quaternionic m.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    group: Option<GroupVariant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A failure attributable to the command line rather than to a check.
#[derive(Debug)]
struct FlagError(String);

impl From<Error> for FlagError {
    fn from(e: Error) -> Self {
        FlagError(e.to_string())
    }
}

type Flagged<T> = std::result::Result<T, FlagError>;

fn spec_from(args: &ModelArgs) -> Flagged<ModelSpec> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| FlagError(format!("--{name} is required for family {}", args.family)))
    };
    let forbid = |v: Option<usize>, name: &str| match v {
        Some(_) => Err(FlagError(format!("--{name} does not apply to family {}", args.family))),
        None => Ok(()),
    };
    Ok(match args.family {
        Family::Projective | Family::Quaternionic => {
            forbid(args.p, "p")?;
            forbid(args.q, "q")?;
            let m = need(args.m, "m")?;
            if args.family == Family::Projective {
                ModelSpec::Projective { m }
            } else {
                ModelSpec::Quaternionic { m }
            }
        }
        Family::Conformal | Family::Grassmannian => {
            forbid(args.m, "m")?;
            let (p, q) = (need(args.p, "p")?, need(args.q, "q")?);
            if args.family == Family::Conformal {
                ModelSpec::Conformal { p, q }
            } else {
                ModelSpec::Grassmannian { p, q }
            }
        }
    })
}

fn model_from(args: &ModelArgs) -> Flagged<GradedModel> {
    let g = build_model(spec_from(args)?)?;
    Ok(match args.group {
        Some(group) => g.with_group(group)?,
        None => g,
    })
}

fn parse_budget(s: Option<&str>) -> Flagged<Budget> {
    match s {
        Some(s) => Ok(s.parse()?),
        None => Ok(Budget::default()),
    }
}

fn parse_rational(s: &str) -> Flagged<Rational> {
    s.parse().map_err(|_| FlagError(format!("not a rational number: {s:?}")))
}

fn parse_matrix(s: &str, n: usize) -> Flagged<Mat> {
    let bad = |why: &str| FlagError(format!("matrix literal {s:?}: {why}"));
    let body = s
        .trim()
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(|| bad("expected [[..],..,[..]]"))?;
    let rows: Vec<Vec<Rational>> = body
        .split("],")
        .map(|r| {
            r.trim()
                .trim_start_matches('[')
                .split(',')
                .map(|x| parse_rational(x.trim()))
                .collect::<Flagged<Vec<_>>>()
        })
        .collect::<Flagged<_>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad(&format!("expected a {n}x{n} matrix")));
    }
    Ok(Mat::from_rows(rows))
}

/// One summand `[coef*]name` of a `--Z` expression.
fn parse_term(model: &GradedModel, term: &str) -> Flagged<Mat> {
    let (coef, name) = match term.rsplit_once('*') {
        Some((c, n)) => (parse_rational(c.trim())?, n.trim()),
        None => (Rational::one(), term.trim()),
    };
    let bad = || FlagError(format!("unknown element {name:?}; use eN or bN with N in 1..={}", model.basis_1.len()));
    let (kind, idx) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
    let i: usize = idx.parse().map_err(|_| bad())?;
    if i == 0 || i > model.basis_1.len() {
        return Err(bad());
    }
    let m = match kind {
        "e" => model.dual_g1_basis()[i - 1].matrix.clone(),
        "b" => model.basis_1[i - 1].clone(),
        _ => return Err(bad()),
    };
    Ok(m.scale(&coef))
}

/// Parses a `--Z` value into an ambient matrix.
fn parse_z(model: &GradedModel, s: &str) -> Flagged<Mat> {
    let s = s.trim();
    if s.starts_with('[') {
        return parse_matrix(s, model.ambient_size);
    }
    let n = model.ambient_size;
    let mut acc = Mat::zeros(n, n);
    let mut start = 0;
    let mut sign = Rational::one();
    let bytes = s.as_bytes();
    for i in 0..=bytes.len() {
        let split = i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'*');
        if !split {
            continue;
        }
        let mut term = s[start..i].trim();
        if let Some(t) = term.strip_prefix('-') {
            sign = -sign;
            term = t;
        } else if let Some(t) = term.strip_prefix('+') {
            term = t;
        }
        if term.is_empty() {
            return Err(FlagError(format!("malformed --Z expression {s:?}")));
        }
        acc = &acc + &parse_term(model, term)?.scale(&sign);
        sign = Rational::one();
        start = i;
    }
    Ok(acc)
}

#[derive(Debug, Serialize)]
struct CatalogEntry {
    model: String,
    descriptor: ModelDescriptor,
    dim: usize,
    structure: StructureReport,
    structure_ok: bool,
}

#[derive(Debug, Serialize)]
struct CatalogReport {
    budget: String,
    models: Vec<CatalogEntry>,
}

#[derive(Debug, Serialize)]
pub struct CriterionSummary {
    pub id: u8,
    pub name: String,
    pub status: CheckStatus,
}

/// Outcome of `verify-all`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub version: String,
    pub budget: String,
    pub passed: bool,
    pub criteria: Vec<CriterionSummary>,
    pub checks: Vec<CheckRow>,
}

impl RunReport {
    fn from_results(command: Vec<String>, budget: &Budget, results: Vec<CriterionResult>) -> Self {
        let criteria = results
            .iter()
            .map(|c| CriterionSummary {
                id: c.id,
                name: c.name.to_string(),
                status: c.status,
            })
            .collect();
        let checks: Vec<CheckRow> = results.into_iter().flat_map(|c| c.rows).collect();
        RunReport {
            command,
            version: VERSION.to_string(),
            budget: budget.to_string(),
            passed: checks.iter().all(|r| r.status != CheckStatus::Fail),
            criteria,
            checks,
        }
    }
}

/// Runs the acceptance matrix within `budget`.
pub fn verify_all(budget: &Budget) -> RunReport {
    let command = vec!["verify-all".to_string(), "--budget".to_string(), budget.to_string()];
    RunReport::from_results(command, budget, run_acceptance(budget))
}

fn json<T: Serialize>(out: &mut dyn Write, v: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn fmt_values(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|r| r.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &Mat, indent: &str) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("{indent}{}", fmt_values(r)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn text_symmetries(out: &mut dyn Write, g: &GradedModel, r: &SymmetryReport) -> std::io::Result<()> {
    writeln!(out, "{} with group {}: {:?}", g.spec, r.group_variant, r.verdict)?;
    writeln!(out, "linear anticommutant dimension: {}", r.notes.linear_solution_dim)?;
    if r.notes.determinant_obstruction {
        writeln!(out, "some linear solutions have no admissible rescaling")?;
    }
    for (i, c) in r.g0_solutions.iter().enumerate() {
        writeln!(out, "g0 solution {}:\n{}", i + 1, fmt_matrix(&c.matrix, "  "))?;
    }
    for (i, c) in r.kernel.iter().enumerate() {
        writeln!(out, "kernel element {}:\n{}", i + 1, fmt_matrix(&c.matrix, "  "))?;
    }
    writeln!(out, "each solution extends to g0 exp(Z), Z in g_1 (dimension {})", r.family_dimension_of_exp_part)
}

fn text_cohomology(out: &mut dyn Write, g: &GradedModel, r: &CohomologyReport) -> std::io::Result<()> {
    writeln!(out, "{}: dim ker = {}, dim im = {}, H2 = {}", g.spec, r.dim_ker, r.dim_im, r.h2_total)?;
    for s in &r.slices {
        writeln!(
            out,
            "  homogeneity {} (values in g_{}): cochains {}, ker {}, im {}, H2 {}",
            s.homogeneity, s.value_degree, s.cochain_dim, s.dim_ker, s.dim_im, s.h2
        )?;
    }
    writeln!(out, "classification: {}", r.classification)?;
    for n in &r.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

fn text_gate(out: &mut dyn Write, g: &GradedModel, v: &GateVerdict) -> std::io::Result<()> {
    writeln!(out, "{}: {:?}", g.spec, v.status)?;
    writeln!(out, "Z:\n{}", fmt_matrix(&v.z.matrix, "  "))?;
    if let Some(r) = v.z_rank {
        writeln!(out, "rank of Z: {r}")?;
    }
    if let (Some(x), Some(src)) = (&v.witness_x, &v.witness_source) {
        writeln!(out, "witness X ({src:?}):\n{}", fmt_matrix(&x.matrix, "  "))?;
    }
    writeln!(out, "eigenvalues of ad[X,Z] on g_-1: {}", fmt_values(&v.eigenvalues))?;
    if let Some(qd) = &v.violating_quadruple {
        writeln!(out, "violating quadruple: {}", fmt_values(qd))?;
    }
    writeln!(out, "candidates tried: {}", v.candidates_tried)?;
    writeln!(out, "joint solution dimension: {}", v.joint_solution_dim)?;
    writeln!(out, "cross-check: {}", if v.cross_check { "consistent" } else { "INCONSISTENT" })
}

fn text_run(out: &mut dyn Write, r: &RunReport) -> std::io::Result<()> {
    writeln!(out, "verify-all, budget {}", r.budget)?;
    for c in &r.criteria {
        writeln!(out, "criterion {} [{}]: {}", c.id, c.name, c.status)?;
        for row in r.checks.iter().filter(|x| x.criterion == c.id) {
            writeln!(out, "    {} {}: {}", row.status, row.subject, row.detail)?;
        }
    }
    writeln!(out, "{}", if r.passed { "all checks passed" } else { "some checks FAILED" })
}

fn dispatch(cli: Cli, argv: &[String], out: &mut dyn Write) -> Flagged<std::io::Result<i32>> {
    Ok(match cli.command {
        Command::Catalog { budget, format } => {
            let budget = parse_budget(budget.as_deref())?;
            let models: Vec<CatalogEntry> = catalog(&budget)
                .into_iter()
                .map(|spec| -> Flagged<CatalogEntry> {
                    let g = build_model(spec)?;
                    let structure = g.structure_check();
                    Ok(CatalogEntry {
                        model: spec.to_string(),
                        descriptor: g.descriptor(),
                        dim: g.dim(),
                        structure_ok: structure.all_ok(),
                        structure,
                    })
                })
                .collect::<Flagged<_>>()?;
            let ok = models.iter().all(|m| m.structure_ok);
            let report = CatalogReport {
                budget: budget.to_string(),
                models,
            };
            let res = match format {
                Format::Json => json(out, &report),
                Format::Text => (|| {
                    for m in &report.models {
                        let d = &m.descriptor.dims;
                        writeln!(
                            out,
                            "{:<26} group {:<5} dim {:>3} = {} + {} + {}  structure {}",
                            m.model,
                            m.descriptor.group.to_string(),
                            m.dim,
                            d.neg1,
                            d.zero,
                            d.one,
                            if m.structure_ok { "ok" } else { "FAILED" }
                        )?;
                    }
                    Ok(())
                })(),
            };
            res.map(|_| if ok { 0 } else { 1 })
        }
        Command::Symmetries { model, format } => {
            let g = model_from(&model)?;
            let r = symmetry_verdict(&g)?;
            match format {
                Format::Json => json(out, &r),
                Format::Text => text_symmetries(out, &g, &r),
            }
            .map(|_| 0)
        }
        Command::Cohomology { model, format } => {
            let g = model_from(&model)?;
            let r = harmonic_h2(&g)?;
            match format {
                Format::Json => json(out, &r),
                Format::Text => text_cohomology(out, &g, &r),
            }
            .map(|_| 0)
        }
        Command::Gate { model, z, seed, format } => {
            let g = model_from(&model)?;
            let z = g.element(parse_z(&g, &z)?)?;
            let opts = GateOptions {
                seed,
                ..GateOptions::default()
            };
            let v = two_symmetry_flatness(&g, &z, &opts)?;
            match format {
                Format::Json => json(out, &v),
                Format::Text => text_gate(out, &g, &v),
            }
            .map(|_| if v.cross_check { 0 } else { 1 })
        }
        Command::VerifyAll { budget, format } => {
            let budget = parse_budget(budget.as_deref())?;
            let report = RunReport::from_results(argv.to_vec(), &budget, run_acceptance(&budget));
            match format {
                Format::Json => json(out, &report),
                Format::Text => text_run(out, &report),
            }
            .map(|_| if report.passed { 0 } else { 1 })
        }
    })
}

/// Parses `argv` (without the program name), runs the command and returns
/// the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let full = std::iter::once("gradsym".to_string()).chain(argv.iter().cloned());
    let cli = match Cli::try_parse_from(full) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let code = match dispatch(cli, argv, out) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: writing output: {e}");
            1
        }
        Err(FlagError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    };
    let _ = writeln!(err, "wall-time: {:.3}s", start.elapsed().as_secs_f64());
    code
}

/// [`run_with`] on the process's standard streams.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(spec: ModelSpec) -> GradedModel {
        build_model(spec).unwrap()
    }

    #[test]
    fn z_names_and_combinations() {
        let g = model(ModelSpec::Projective { m: 3 });
        let d = g.dual_g1_basis();
        assert_eq!(parse_z(&g, "e1").unwrap(), d[0].matrix);
        assert_eq!(parse_z(&g, "b2").unwrap(), g.basis_1[1]);
        let want = &d[0].matrix + &d[2].matrix.scale(&Rational::from_int(3));
        assert_eq!(parse_z(&g, "e1+3*e3").unwrap(), want);
        let want = &g.basis_1[0].scale(&Rational::new(1, 2)) - &g.basis_1[1];
        assert_eq!(parse_z(&g, "1/2*b1 - b2").unwrap(), want);
        assert_eq!(parse_z(&g, "-b1").unwrap(), g.basis_1[0].scale(&Rational::from_int(-1)));
        assert_eq!(parse_z(&g, "-2*b1").unwrap(), g.basis_1[0].scale(&Rational::from_int(-2)));
        for bad in ["e0", "e4", "x1", "e1+", "2*", "e1++e2", "1/0*e1"] {
            assert!(parse_z(&g, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn z_matrix_literal() {
        let g = model(ModelSpec::Projective { m: 2 });
        let m = parse_z(&g, "[[0,1,1/2],[0,0,0],[0,0,0]]").unwrap();
        assert_eq!(m[(0, 2)], Rational::new(1, 2));
        assert!(parse_z(&g, "[[0,1],[0,0]]").is_err());
        assert!(parse_z(&g, "[[0,x,0],[0,0,0],[0,0,0]]").is_err());
    }

    #[test]
    fn model_flags() {
        let args = |family, m, p, q| ModelArgs {
            family,
            m,
            p,
            q,
            group: None,
        };
        assert_eq!(
            spec_from(&args(Family::Conformal, None, Some(2), Some(1))).unwrap(),
            ModelSpec::Conformal { p: 2, q: 1 }
        );
        assert!(spec_from(&args(Family::Conformal, Some(2), Some(2), Some(1))).is_err());
        assert!(spec_from(&args(Family::Projective, None, None, None)).is_err());
    }
}
