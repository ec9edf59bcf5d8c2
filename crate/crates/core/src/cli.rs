//! The `precy` command line: verification and construction commands over
//! workbench files, with text or JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! lists witnesses), 2 on input errors. A construction writes its object to
//! `--out` and the report to stdout; without `--out` the object goes to
//! stdout and the report to stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::ainfty::{self, check_cyclic, check_stasheff, check_ultracyclic, classify, AInfinity, PermutationMode};
use crate::correspondence::{boundary_algebra, bracket_from_precy, precy_from_bracket, verify_precy, BoundaryAlgebra};
use crate::dpa::{check_double_poisson, DgAlgebra, DoubleBracket};
use crate::error::{Error, Result};
use crate::functoriality::{
    boundary_morphism, check_dpa_morphism, check_dpa_quasi_iso, cohomology, compose_boundary, quasi_iso_outcome,
    verify_composition, verify_mixed_boundary, DpaMorphism,
};
use crate::io::{self, WorkbenchFile};
use crate::pinfty::{check_p_infinity, pinfty_from_precy, precy_from_pinfty, verify_pinf_precy, PInfinityFamily};
use crate::report::{AxiomReport, CheckOutcome};

/// Environment variable holding the default report format.
pub const REPORT_ENV: &str = "PRECY_REPORT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "precy", version, about = "Double Poisson, A∞ and pre-Calabi-Yau verification workbench")]
struct Cli {
    /// Report format; defaults to $PRECY_REPORT, then text.
    #[arg(long, global = true, value_enum)]
    report: Option<ReportFormat>,
    /// Where constructions write their object.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Build from inputs that fail their axioms.
    #[arg(long, global = true)]
    force: bool,
    /// Record the wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the axioms of a file.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Build a structure from a file.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Read a bracket back from a structure.
    #[command(subcommand)]
    Extract(ExtractCommand),
    /// Construct and extract, and compare entry by entry.
    Roundtrip { file: PathBuf },
    /// Mediate two composable morphisms.
    Compose { first: PathBuf, second: PathBuf },
    /// Cohomology ranks per degree.
    Cohomology { file: PathBuf },
    /// Whether a morphism and the legs of its boundary are quasi-isomorphisms.
    Quasiiso { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Double Poisson axioms of a bracket (or the zero bracket of an algebra).
    Dpa { file: PathBuf },
    /// Double P∞ axioms.
    Pinf {
        file: PathBuf,
        #[arg(long, value_parser = parse_mode, default_value = "generators")]
        ultra: PermutationMode,
    },
    /// Stasheff identities, and cyclicity when the file has a form.
    Ainfty {
        file: PathBuf,
        #[arg(long)]
        max_n: Option<usize>,
        /// Also check ultracyclicity with these permutations.
        #[arg(long, value_parser = parse_mode)]
        ultra: Option<PermutationMode>,
    },
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// The boundary algebra of a bracket, or of an algebra with zero bracket.
    Precy { file: PathBuf },
    /// The pre-Calabi-Yau structure of a double P∞ family.
    PinfPrecy { file: PathBuf },
    /// The mixed boundary of a morphism.
    Morphism { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ExtractCommand {
    Bracket { file: PathBuf },
    Pinf { file: PathBuf },
}

fn parse_mode(s: &str) -> std::result::Result<PermutationMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// The machine-readable result of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub predicates: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    fn absorb(&mut self, r: AxiomReport) {
        self.checks.extend(r.checks);
        self.notes.extend(r.notes);
    }

    fn check(&mut self, name: &str, passed: bool) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            witness: None,
            failing_tuples: 0,
        });
    }

    fn finish(&mut self) {
        let sorted = AxiomReport {
            checks: std::mem::take(&mut self.checks),
            notes: Vec::new(),
        }
        .sorted();
        self.checks = sorted.checks;
        self.passed = self.error.is_none() && self.checks.iter().all(|c| c.passed);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command.join(" "));
        let body = AxiomReport {
            checks: self.checks.clone(),
            notes: self.notes.clone(),
        };
        out.push_str(&body.to_string());
        if !self.predicates.is_empty() {
            out.push_str(&format!("predicates: {}\n", self.predicates.join(", ")));
        }
        for (k, v) in &self.data {
            out.push_str(&format!("data  {k} = {v}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("timing: {t} ms\n"));
        }
        out.push_str(if self.passed { "verdict: pass\n" } else { "verdict: FAIL\n" });
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Text => self.to_text(),
        }
    }
}

/// Everything a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// Canonical text of a constructed object.
    pub object: Option<String>,
    pub exit_code: i32,
    pub format: ReportFormat,
    pub out: Option<PathBuf>,
}

/// Runs a command line (`args[0]` is the program name) without touching
/// stdout. Clap usage errors come back as input errors.
pub fn run(args: &[String]) -> Outcome {
    let env_format = std::env::var(REPORT_ENV).ok().and_then(|v| match v.as_str() {
        "json" => Some(ReportFormat::Json),
        "text" => Some(ReportFormat::Text),
        _ => None,
    });
    let mut report = Report {
        command: args.iter().skip(1).cloned().collect(),
        ..Report::default()
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            report.error = Some(e.to_string());
            report.finish();
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                report,
                object: None,
                exit_code: code,
                format: env_format.unwrap_or(ReportFormat::Text),
                out: None,
            };
        }
    };
    let format = cli.report.or(env_format).unwrap_or(ReportFormat::Text);
    let start = Instant::now();
    let result = execute(&cli, &mut report);
    let (object, exit_code) = match result {
        Ok(object) => {
            report.finish();
            let code = if report.passed { 0 } else { 1 };
            (object, code)
        }
        Err(Error::Precondition(m)) => {
            report.check("precondition", false);
            report.notes.push(m);
            report.finish();
            (None, 1)
        }
        Err(e) => {
            report.error = Some(e.to_string());
            report.finish();
            (None, 2)
        }
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Outcome {
        report,
        object,
        exit_code,
        format,
        out: cli.out.clone(),
    }
}

/// The binary entry point: runs, writes the object and report, returns the
/// exit code.
pub fn main_with_args(args: &[String]) -> i32 {
    let o = run(args);
    if o.report.error.is_some() && o.report.checks.is_empty() && o.exit_code == 0 {
        // --help and --version
        print!("{}", o.report.error.as_deref().unwrap_or_default());
        return 0;
    }
    let rendered = o.report.render(o.format);
    match (&o.object, &o.out) {
        (Some(obj), Some(path)) => {
            if let Err(e) = std::fs::write(path, obj) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
            print!("{rendered}");
        }
        (Some(obj), None) => {
            print!("{obj}");
            eprint!("{rendered}");
        }
        (None, _) => print!("{rendered}"),
    }
    o.exit_code
}

fn load(path: &Path) -> Result<WorkbenchFile> {
    io::load(path)
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn load_bracket(path: &Path) -> Result<(DgAlgebra, DoubleBracket)> {
    match load(path)? {
        WorkbenchFile::Bracket { algebra, bracket } => Ok((algebra, bracket)),
        WorkbenchFile::Algebra { algebra, d } => {
            let br = DoubleBracket::zero(algebra.space().clone(), d.unwrap_or(0));
            Ok((algebra, br))
        }
        f => Err(wrong_kind(path, &f, "bracket or algebra")),
    }
}

fn load_pinfty(path: &Path) -> Result<PInfinityFamily> {
    match load(path)? {
        WorkbenchFile::Pinfty(f) => Ok(f),
        f => Err(wrong_kind(path, &f, "pinfty")),
    }
}

fn load_ainfty(path: &Path) -> Result<AInfinity> {
    match load(path)? {
        WorkbenchFile::Ainfty(s) => Ok(s),
        f => Err(wrong_kind(path, &f, "ainfty")),
    }
}

fn load_morphism(path: &Path) -> Result<DpaMorphism> {
    match load(path)? {
        WorkbenchFile::Morphism(m) => m.resolve(&dir_of(path)),
        f => Err(wrong_kind(path, &f, "morphism")),
    }
}

fn wrong_kind(path: &Path, f: &WorkbenchFile, expected: &str) -> Error {
    Error::Schema(format!("{} has kind {}, expected {expected}", path.display(), f.kind()))
}

fn predicates_of(s: &AInfinity) -> Result<Vec<String>> {
    let p = match BoundaryAlgebra::from_structure(s.clone()) {
        Ok(ba) => ba.classify()?,
        Err(_) => classify(s, None)?,
    };
    Ok(p.names().into_iter().map(String::from).collect())
}

fn cohomology_value(space: &crate::graded::Space, diff: &crate::graded::MultiMap) -> Result<Value> {
    Ok(json!(cohomology(space, diff)?))
}

/// Runs the parsed command, filling `report`; returns the constructed object.
fn execute(cli: &Cli, report: &mut Report) -> Result<Option<String>> {
    match &cli.command {
        Command::Check(CheckCommand::Dpa { file }) => {
            let (alg, br) = load_bracket(file)?;
            report.absorb(alg.validate());
            if alg.is_valid() {
                report.absorb(check_double_poisson(&alg, &br)?);
            }
            Ok(None)
        }
        Command::Check(CheckCommand::Pinf { file, ultra }) => {
            let fam = load_pinfty(file)?;
            report.absorb(check_p_infinity(&fam, *ultra)?);
            Ok(None)
        }
        Command::Check(CheckCommand::Ainfty { file, max_n, ultra }) => {
            let s = load_ainfty(file)?;
            report.absorb(check_stasheff(&s, *max_n));
            if s.form().is_some() {
                report.absorb(check_cyclic(&s)?);
                if let Some(mode) = ultra {
                    report.absorb(check_ultracyclic(&s, *mode)?);
                }
            } else if ultra.is_some() {
                return Err(Error::Missing("ultracyclicity needs a form".into()));
            }
            report.predicates = predicates_of(&s)?;
            Ok(None)
        }
        Command::Build(BuildCommand::Precy { file }) => {
            let (alg, br) = load_bracket(file)?;
            let input = check_double_poisson(&alg, &br)?;
            let ok = input.passed();
            report.absorb(input);
            if !ok && !cli.force {
                return Ok(None);
            }
            let ba = precy_from_bracket(&alg, &br, cli.force)?;
            if ok {
                report.absorb(verify_precy(&ba, ainfty::default_n_max(ba.structure()))?);
            } else {
                report.notes.push("built from a failing bracket; structure not verified".into());
            }
            report.predicates = predicates_of(ba.structure())?;
            Ok(Some(io::serialize_boundary(&ba)))
        }
        Command::Build(BuildCommand::PinfPrecy { file }) => {
            let fam = load_pinfty(file)?;
            let input = check_p_infinity(&fam, PermutationMode::Generators)?;
            let ok = input.passed();
            report.absorb(input);
            if !ok && !cli.force {
                return Ok(None);
            }
            let ba = precy_from_pinfty(&fam, cli.force)?;
            if ok {
                report.absorb(verify_pinf_precy(&ba, fam.p_max().max(1), PermutationMode::Generators)?);
            } else {
                report.notes.push("built from a failing family; structure not verified".into());
            }
            report.predicates = predicates_of(ba.structure())?;
            Ok(Some(io::serialize_boundary(&ba)))
        }
        Command::Build(BuildCommand::Morphism { file }) => {
            let phi = load_morphism(file)?;
            let input = check_dpa_morphism(&phi)?;
            let ok = input.passed();
            report.absorb(input);
            if !ok && !cli.force {
                return Ok(None);
            }
            let mb = boundary_morphism(&phi)?;
            if ok {
                report.absorb(verify_mixed_boundary(&mb)?);
            }
            Ok(Some(io::serialize_ainfty(&mb.structure)))
        }
        Command::Extract(ExtractCommand::Bracket { file }) => {
            let ba = BoundaryAlgebra::from_structure(load_ainfty(file)?)?;
            let br = bracket_from_precy(&ba)?;
            report.absorb(check_double_poisson(ba.base(), &br)?);
            Ok(Some(io::serialize_bracket(ba.base(), &br)))
        }
        Command::Extract(ExtractCommand::Pinf { file }) => {
            let ba = BoundaryAlgebra::from_structure(load_ainfty(file)?)?;
            let fam = pinfty_from_precy(&ba)?;
            report.absorb(check_p_infinity(&fam, PermutationMode::Generators)?);
            Ok(Some(io::serialize_pinfty(&fam)))
        }
        Command::Roundtrip { file } => roundtrip(file, cli.force, report),
        Command::Compose { first, second } => {
            let phi = load_morphism(first)?;
            let psi = load_morphism(second)?;
            let w = compose_boundary(&phi, &psi)?;
            report.absorb(verify_composition(&w)?);
            Ok(Some(io::serialize_ainfty(&w.composite.structure)))
        }
        Command::Cohomology { file } => {
            let value = match load(file)? {
                WorkbenchFile::Algebra { algebra, .. } | WorkbenchFile::Bracket { algebra, .. } => {
                    cohomology_value(algebra.space(), algebra.differential())?
                }
                WorkbenchFile::Pinfty(f) => {
                    let dg = f.dg_algebra()?;
                    cohomology_value(dg.space(), dg.differential())?
                }
                WorkbenchFile::Ainfty(s) => cohomology_value(s.space(), &s.op_or_zero(1))?,
                f @ WorkbenchFile::Morphism(_) => return Err(wrong_kind(file, &f, "algebra, bracket, pinfty or ainfty")),
            };
            report.data.insert("cohomology".into(), value);
            Ok(None)
        }
        Command::Quasiiso { file } => {
            let phi = load_morphism(file)?;
            report.data.insert(
                "source_cohomology".into(),
                cohomology_value(phi.source.space(), phi.source.differential())?,
            );
            report.data.insert(
                "target_cohomology".into(),
                cohomology_value(phi.target.space(), phi.target.differential())?,
            );
            report.check("phi quasi-iso", check_dpa_quasi_iso(&phi)?);
            let mb = boundary_morphism(&phi)?;
            report.checks.push(quasi_iso_outcome("leg to source boundary quasi-iso", &mb.leg_source)?);
            report.checks.push(quasi_iso_outcome("leg to target boundary quasi-iso", &mb.leg_target)?);
            Ok(None)
        }
    }
}

fn roundtrip(file: &Path, force: bool, report: &mut Report) -> Result<Option<String>> {
    let original = load(file)?;
    let canonical = io::serialize(&original);
    let back = match &original {
        WorkbenchFile::Bracket { algebra, bracket } => {
            let ba = precy_from_bracket(algebra, bracket, force)?;
            let br = bracket_from_precy(&ba)?;
            report.check("bracket → precy → bracket", &br == bracket);
            let again = precy_from_bracket(algebra, &br, true)?;
            report.check("precy → bracket → precy", again == ba);
            io::serialize_bracket(algebra, &br)
        }
        WorkbenchFile::Algebra { algebra, d } => {
            let ba = boundary_algebra(algebra, d.unwrap_or(0))?;
            let br = bracket_from_precy(&ba)?;
            report.check("extracted bracket is zero", br.is_zero());
            io::serialize_algebra(ba.base(), *d)
        }
        WorkbenchFile::Pinfty(fam) => {
            let ba = precy_from_pinfty(fam, force)?;
            let fam2 = pinfty_from_precy(&ba)?;
            report.check("pinfty → precy → pinfty", &fam2 == fam);
            let again = precy_from_pinfty(&fam2, true)?;
            report.check("precy → pinfty → precy", again == ba);
            io::serialize_pinfty(&fam2)
        }
        WorkbenchFile::Ainfty(s) => {
            let ba = BoundaryAlgebra::from_structure(s.clone())?;
            let br = bracket_from_precy(&ba)?;
            let again = precy_from_bracket(ba.base(), &br, true)?;
            report.check("precy → bracket → precy", again.structure() == s);
            io::serialize_boundary(&again)
        }
        WorkbenchFile::Morphism(m) => io::serialize_morphism(m),
    };
    report.check("canonical bytes identical", back == canonical);
    Ok(Some(back))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(a: &[&str]) -> Vec<String> {
        std::iter::once("precy").chain(a.iter().copied()).map(String::from).collect()
    }

    #[test]
    fn usage_errors_are_input_errors() {
        assert_eq!(run(&args(&["check"])).exit_code, 2);
        assert_eq!(run(&args(&["check", "ainfty", "x.json", "--ultra", "some"])).exit_code, 2);
        assert_eq!(run(&args(&["check", "dpa", "/nonexistent/file.json"])).exit_code, 2);
    }

    #[test]
    fn zero_bracket_checks_and_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let (alg, _) = crate::corpus::nilpotent_example();
        let path = dir.path().join("zero.json");
        std::fs::write(&path, io::serialize_bracket(&alg, &DoubleBracket::zero(alg.space().clone(), 1))).unwrap();
        let p = path.to_str().unwrap();
        let o = run(&args(&["check", "dpa", p, "--report", "json"]));
        assert_eq!(o.exit_code, 0, "{}", o.report.to_text());
        let o = run(&args(&["roundtrip", p]));
        assert_eq!(o.exit_code, 0, "{}", o.report.to_text());
        assert_eq!(o.object.unwrap(), std::fs::read_to_string(&path).unwrap());
    }

    #[test]
    fn report_checks_are_sorted() {
        let mut r = Report::default();
        r.check("b", true);
        r.check("a", false);
        r.finish();
        assert_eq!(r.checks[0].name, "a");
        assert!(!r.passed);
    }
}
