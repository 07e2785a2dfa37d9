//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation failed, 2 I/O or format error,
//! 3 usage error, 4 conjecture falsified by `check`.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::container::{self, ContainerError, ContainerManifest, PackedContainer};
use crate::convert::{self, ConvertError, DslError};
use crate::eval::{check_conjecture, CheckError, CheckReport, Tolerance, Verdict, DEFAULT_EPS_REL};
use crate::model::{ProblemInfo, ProblemName};
use crate::violation::{has_errors, Severity, Violation};
use crate::xml::{self, DocumentKind};
use crate::Problem;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_IO_OR_FORMAT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_FALSIFIED: i32 = 4;

/// Environment variable holding the default relative tolerance of `check`.
pub const EPS_ENV: &str = "I2GATP_EPS";

/// Version of the JSON report printed by `check --json`.
pub const CHECK_JSON_SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "i2gatp", version, about = "Work with i2gatp problem containers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zip a container directory tree into an archive.
    Pack {
        dir: PathBuf,
        /// Output file, `-` for stdout. Defaults to problem<name>.zip.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Set the problem name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Extract an archive into a new directory.
    Unpack {
        archive: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Remove the i2gatp-only parts, leaving an i2g container.
    Strip {
        archive: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check an archive, a container directory or a single XML document.
    Validate {
        path: PathBuf,
        /// Only require what an i2g container needs.
        #[arg(long)]
        i2g: bool,
    },
    /// Summarize a problem and its proof attempts.
    Info { archive: PathBuf },
    /// Convert between the construction language, containers and prover input.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        from: Option<Format>,
        #[arg(long, value_enum)]
        to: Format,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Test the conjecture on random instances of the construction.
    Check {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance in (0, 0.01]. Overrides I2GATP_EPS.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dsl,
    I2gatp,
    Proverinput,
}

/// Process streams and environment, injectable for tests.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Value of [`EPS_ENV`], if set.
    pub eps_env: Option<String>,
}

struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn new(code: i32, msg: impl Into<String>) -> Self {
        Failure {
            code,
            lines: vec![msg.into()],
        }
    }

    fn violations(vs: &[Violation]) -> Self {
        Failure {
            code: EXIT_VALIDATION_FAILED,
            lines: vs.iter().map(|v| v.to_string()).collect(),
        }
    }
}

impl From<ContainerError> for Failure {
    fn from(e: ContainerError) -> Self {
        if e.is_validation() {
            Failure::violations(&e.to_violations())
        } else {
            Failure::new(EXIT_IO_OR_FORMAT, e.to_string())
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        Failure::new(EXIT_IO_OR_FORMAT, e.to_string())
    }
}

impl From<ConvertError> for Failure {
    fn from(e: ConvertError) -> Self {
        Failure::new(EXIT_IO_OR_FORMAT, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(io.stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(io.stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, io) {
        Ok(code) => code,
        Err(f) => {
            for line in &f.lines {
                let _ = writeln!(io.stderr, "error: {line}");
            }
            f.code
        }
    }
}

fn dispatch(cmd: Command, io: &mut Io<'_>) -> Outcome {
    match cmd {
        Command::Pack { dir, out, name } => cmd_pack(&dir, out.as_deref(), name, io),
        Command::Unpack { archive, out } => cmd_unpack(&archive, &out, io),
        Command::Strip { archive, out } => cmd_strip(&archive, &out, io),
        Command::Validate { path, i2g } => cmd_validate(&path, i2g, io),
        Command::Info { archive } => cmd_info(&archive, io),
        Command::Convert {
            input,
            from,
            to,
            out,
            name,
        } => cmd_convert(&input, from, to, &out, name, io),
        Command::Check {
            input,
            trials,
            seed,
            eps,
            json,
        } => cmd_check(&input, trials, seed, eps, json, io),
    }
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_input(path: &Path, io: &mut Io<'_>) -> Result<Vec<u8>, Failure> {
    if is_stdio(path) {
        let mut buf = Vec::new();
        io.stdin
            .read_to_end(&mut buf)
            .map_err(|e| Failure::new(EXIT_IO_OR_FORMAT, format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path)
            .map_err(|e| Failure::new(EXIT_IO_OR_FORMAT, format!("{}: {e}", path.display())))
    }
}

fn write_output(path: &Path, bytes: &[u8], io: &mut Io<'_>) -> Result<(), Failure> {
    if is_stdio(path) {
        io.stdout
            .write_all(bytes)
            .map_err(|e| Failure::new(EXIT_IO_OR_FORMAT, format!("stdout: {e}")))
    } else {
        std::fs::write(path, bytes)
            .map_err(|e| Failure::new(EXIT_IO_OR_FORMAT, format!("{}: {e}", path.display())))
    }
}

fn is_zip(bytes: &[u8]) -> bool {
    bytes.starts_with(b"PK")
}

fn set_name(p: &mut Problem, name: Option<String>) -> Result<(), Failure> {
    if let Some(name) = name {
        let name = ProblemName::new(name)
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
        match &mut p.info {
            Some(info) => info.name = name,
            None => p.info = Some(ProblemInfo::new(name)),
        }
    }
    Ok(())
}

fn write_packed(
    packed: &PackedContainer,
    out: Option<&Path>,
    io: &mut Io<'_>,
) -> Outcome {
    let target = match (out, &packed.suggested_filename) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(name)) => PathBuf::from(name),
        (None, None) => {
            return Err(Failure::new(
                EXIT_USAGE,
                "the problem has no name; pass --out or --name",
            ))
        }
    };
    write_output(&target, &packed.bytes, io)?;
    if !is_stdio(&target) {
        let _ = writeln!(io.stdout, "{}", target.display());
    }
    Ok(EXIT_OK)
}

fn cmd_pack(dir: &Path, out: Option<&Path>, name: Option<String>, io: &mut Io<'_>) -> Outcome {
    if !dir.is_dir() {
        return Err(Failure::new(
            EXIT_IO_OR_FORMAT,
            format!("{} is not a directory", dir.display()),
        ));
    }
    let manifest = container::read_dir_manifest(dir)?;
    let mut p = container::problem_from_entries(&manifest.files)?;
    set_name(&mut p, name)?;
    let packed = container::pack(&p)?;
    write_packed(&packed, out, io)
}

fn cmd_unpack(archive: &Path, out: &Path, io: &mut Io<'_>) -> Outcome {
    let bytes = read_input(archive, io)?;
    let manifest = container::read_manifest(&bytes)?;
    container::problem_from_entries(&manifest.files)?;
    if out.exists()
        && std::fs::read_dir(out)
            .map(|mut d| d.next().is_some())
            .unwrap_or(true)
    {
        return Err(Failure::new(
            EXIT_IO_OR_FORMAT,
            format!("{} exists and is not an empty directory", out.display()),
        ));
    }
    let mut dirs: Vec<&str> = manifest.dirs.iter().map(String::as_str).collect();
    dirs.extend(container::MANDATORY_DIRS);
    container::write_dir_entries(out, &manifest.files, &dirs)?;
    Ok(EXIT_OK)
}

fn cmd_strip(archive: &Path, out: &Path, io: &mut Io<'_>) -> Outcome {
    let bytes = read_input(archive, io)?;
    let packed = container::strip_to_i2g(&bytes)?;
    write_output(out, &packed.bytes, io)?;
    Ok(EXIT_OK)
}

fn report(vs: &[Violation], io: &mut Io<'_>) -> i32 {
    for v in vs {
        let _ = writeln!(io.stdout, "{v}");
    }
    let errors = vs.iter().filter(|v| v.severity == Severity::Error).count();
    let warnings = vs.len() - errors;
    if errors == 0 {
        if warnings > 0 {
            let _ = writeln!(io.stdout, "valid ({warnings} warnings)");
        }
        EXIT_OK
    } else {
        let _ = writeln!(io.stdout, "invalid ({errors} errors, {warnings} warnings)");
        EXIT_VALIDATION_FAILED
    }
}

fn cmd_validate(path: &Path, i2g: bool, io: &mut Io<'_>) -> Outcome {
    if !is_stdio(path) && path.is_dir() {
        let m: ContainerManifest = container::read_dir_manifest(path)?;
        return Ok(report(&container::validate_manifest(&m, i2g), io));
    }
    let bytes = read_input(path, io)?;
    if is_zip(&bytes) {
        return Ok(report(&container::validate_container(&bytes, i2g), io));
    }
    match DocumentKind::detect(&bytes) {
        Ok(kind) => Ok(report(&xml::validate_document(kind, &bytes), io)),
        Err(e) => Ok(report(&[e.to_violation()], io)),
    }
}

fn cmd_info(archive: &Path, io: &mut Io<'_>) -> Outcome {
    let bytes = read_input(archive, io)?;
    let p = container::unpack(&bytes)?;
    let mut out = String::new();
    if let Some(info) = &p.info {
        out.push_str(&format!("name: {}\n", info.name));
        if !info.description.is_empty() {
            out.push_str(&format!("description: {}\n", info.description));
        }
        if !info.keywords.is_empty() {
            out.push_str(&format!("keywords: {}\n", info.keywords.join(", ")));
        }
    }
    let k = &p.construction;
    out.push_str(&format!(
        "construction: {} elements, {} constraints\n",
        k.elements.len(),
        k.constraints.len()
    ));
    if let Some(c) = &p.conjecture {
        out.push_str(&format!(
            "conjecture: {} hypotheses, {} ndg conditions, {} conclusions\n",
            c.hypothesis.len(),
            c.ndg.len(),
            c.conclusion.len()
        ));
    }
    out.push_str(&format!("proof attempts: {}\n", p.proofs.len()));
    for a in &p.proofs {
        out.push_str(&format!("{} {} {} {}\n", a.prover, a.version, a.method, a.status));
    }
    write_output(Path::new("-"), out.as_bytes(), io)?;
    Ok(EXIT_OK)
}

fn format_for(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "gcl" => Some(Format::Dsl),
        "zip" => Some(Format::I2gatp),
        _ => None,
    }
}

fn load_problem(bytes: &[u8], from: Format) -> Result<Problem, Failure> {
    match from {
        Format::Dsl => {
            let text = std::str::from_utf8(bytes)
                .map_err(|e| Failure::new(EXIT_IO_OR_FORMAT, format!("input is not UTF-8: {e}")))?;
            Ok(convert::parse_dsl(text)?)
        }
        Format::I2gatp => Ok(container::unpack(bytes)?),
        Format::Proverinput => Err(Failure::new(EXIT_USAGE, "prover input cannot be read back")),
    }
}

fn cmd_convert(
    input: &Path,
    from: Option<Format>,
    to: Format,
    out: &Path,
    name: Option<String>,
    io: &mut Io<'_>,
) -> Outcome {
    let from = from
        .or_else(|| format_for(input))
        .ok_or_else(|| Failure::new(EXIT_USAGE, "cannot tell the input format; pass --from"))?;
    let bytes = read_input(input, io)?;
    let mut p = load_problem(&bytes, from)?;
    set_name(&mut p, name)?;
    let text = match to {
        Format::Dsl => {
            let losses = convert::dsl_losses(&p);
            if !losses.is_empty() {
                let _ = writeln!(io.stderr, "warning: not representable and left out: {}", losses.join(", "));
            }
            convert::emit_dsl(&p)?.into_bytes()
        }
        Format::Proverinput => convert::emit_prover_input(&p)?.into_bytes(),
        Format::I2gatp => container::pack(&p)?.bytes,
    };
    write_output(out, &text, io)?;
    Ok(EXIT_OK)
}

fn tolerance(eps: Option<f64>, env: Option<&str>) -> Result<Tolerance, Failure> {
    let value = match (eps, env) {
        (Some(v), _) => v,
        (None, Some(s)) => s.trim().parse::<f64>().map_err(|_| {
            Failure::new(EXIT_USAGE, format!("{EPS_ENV}={s:?} is not a number"))
        })?,
        (None, None) => DEFAULT_EPS_REL,
    };
    Tolerance::new(value).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
}

const NOT_A_PROOF: &str = "randomized numeric test; a consistent result is evidence, not a proof";

fn check_json(r: &CheckReport, seed: u64, trials: u64, tol: Tolerance) -> serde_json::Value {
    let witness = r.witness.as_ref().map(|w| {
        let assignment: serde_json::Map<String, serde_json::Value> = w
            .assignment
            .iter()
            .map(|(id, (x, y))| (id.clone(), serde_json::json!([x, y])))
            .collect();
        serde_json::json!({
            "trial": w.trial,
            "predicate": w.predicate.to_string(),
            "margin": w.margin,
            "assignment": assignment,
        })
    });
    serde_json::json!({
        "schema_version": CHECK_JSON_SCHEMA_VERSION,
        "note": NOT_A_PROOF,
        "verdict": r.verdict.as_str(),
        "seed": seed,
        "trials": trials,
        "eps_rel": tol.eps_rel(),
        "samples_total": r.samples_total,
        "samples_degenerate": r.samples_degenerate,
        "samples_hypothesis_failed": r.samples_hypothesis_failed,
        "samples_checked": r.samples_checked,
        "witness": witness,
    })
}

fn check_text(r: &CheckReport, seed: u64, trials: u64, tol: Tolerance) -> String {
    let mut out = format!("note: {NOT_A_PROOF}\n");
    out.push_str(&format!("verdict: {}\n", r.verdict.as_str()));
    out.push_str(&format!(
        "samples: {} total, {} checked, {} hypothesis failed, {} degenerate\n",
        r.samples_total, r.samples_checked, r.samples_hypothesis_failed, r.samples_degenerate
    ));
    out.push_str(&format!("seed: {seed}, trials: {trials}, eps_rel: {}\n", tol.eps_rel()));
    if let Some(w) = &r.witness {
        out.push_str(&format!(
            "witness: trial {}, {} fails by {}\n",
            w.trial, w.predicate, w.margin
        ));
        for (id, (x, y)) in &w.assignment {
            out.push_str(&format!("  {id} = ({x}, {y})\n"));
        }
    }
    out
}

fn cmd_check(
    input: &Path,
    trials: u64,
    seed: u64,
    eps: Option<f64>,
    json: bool,
    io: &mut Io<'_>,
) -> Outcome {
    let tol = tolerance(eps, io.eps_env.as_deref())?;
    let bytes = read_input(input, io)?;
    let from = if is_zip(&bytes) { Format::I2gatp } else { Format::Dsl };
    let p = load_problem(&bytes, from)?;
    let report = check_conjecture(&p, trials, seed, tol).map_err(|e| match e {
        CheckError::NoTrials => Failure::new(EXIT_USAGE, e.to_string()),
        CheckError::InvalidProblem(vs) if has_errors(&vs) => Failure::violations(&vs),
        other => Failure::new(EXIT_IO_OR_FORMAT, other.to_string()),
    })?;
    let text = if json {
        let mut s = serde_json::to_string_pretty(&check_json(&report, seed, trials, tol))
            .expect("report serializes");
        s.push('\n');
        s
    } else {
        check_text(&report, seed, trials, tol)
    };
    write_output(Path::new("-"), text.as_bytes(), io)?;
    Ok(if report.verdict == Verdict::Falsified {
        EXIT_FALSIFIED
    } else {
        EXIT_OK
    })
}
