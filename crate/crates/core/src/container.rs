//! The zip container.
//!
//! ```text
//! problem<name>.zip
//!   information/information.xml
//!   construction/intergeo.xml            (mandatory)
//!   conjecture/conjecture.xml
//!   proofs/proof<GATP><Version><Method>/proofInfo.xml
//!   proofs/proof<GATP><Version><Method>/<prover outputs>
//!   metadata/           resources/           private/<domain>/
//! ```
//!
//! Archives are written deterministically: entries sorted by path, every
//! parent directory present as an explicit entry, timestamps fixed at
//! 1980-01-01 00:00, Unix modes 0644 for files and 0755 for directories,
//! and deflate at level 6 for files larger than 256 bytes (stored
//! otherwise). Packing the same problem twice gives identical bytes.
//!
//! Removing `information/`, `conjecture/` and `proofs/` leaves a plain i2g
//! container; see [`strip_to_i2g`].

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Cursor, Read, Write};
use std::path::Path;

use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipArchive, ZipWriter};

use crate::model::{
    is_safe_relative_path, CarriedFile, PrivateDomain, Problem, ProofAttempt,
};
use crate::violation::{has_errors, Violation, ViolationCode};
use crate::xml::{self, CodecError, DocumentKind};

pub const INFORMATION_XML: &str = "information/information.xml";
pub const INTERGEO_XML: &str = "construction/intergeo.xml";
pub const CONJECTURE_XML: &str = "conjecture/conjecture.xml";
pub const PROOF_INFO_XML: &str = "proofInfo.xml";

/// Directories every packed container carries, even when empty.
pub const MANDATORY_DIRS: [&str; 4] = ["information", "construction", "conjecture", "proofs"];

const TOP_LEVEL: [&str; 7] = [
    "information",
    "construction",
    "conjecture",
    "proofs",
    "metadata",
    "resources",
    "private",
];

/// Top-level directories removed to obtain an i2g container.
const I2GATP_ONLY: [&str; 3] = ["information", "conjecture", "proofs"];

const DEFLATE_THRESHOLD: usize = 256;
const DEFLATE_LEVEL: i64 = 6;

#[derive(Debug, thiserror::Error)]
pub enum ContainerError {
    #[error("not a readable zip archive: {0}")]
    MalformedZip(String),
    #[error("unsafe entry path {0:?}")]
    BadPath(String),
    #[error("entry {0:?} appears more than once")]
    DuplicateEntry(String),
    #[error("entry {0:?} is not part of the container layout")]
    UnexpectedEntry(String),
    #[error("proofs/{0}/ is not named proof<GATP><Version><Method>")]
    BadProofDirName(String),
    #[error("container has no {INTERGEO_XML}")]
    MissingIntergeo,
    #[error("{entry}: {error}")]
    Codec { entry: String, error: CodecError },
    #[error("{}", .0.iter().filter(|v| v.is_error()).map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ContainerError {
    fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        ContainerError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// The error as violations, for reporting alongside validation output.
    pub fn to_violations(&self) -> Vec<Violation> {
        use ViolationCode as C;
        let one = |code, path: &str| vec![Violation::error(code, path, self.to_string())];
        match self {
            ContainerError::MalformedZip(_) | ContainerError::Io { .. } => one(C::MalformedZip, ""),
            ContainerError::BadPath(p) => one(C::BadPath, p),
            ContainerError::DuplicateEntry(p) => one(C::DuplicateEntry, p),
            ContainerError::UnexpectedEntry(p) => one(C::UnexpectedEntry, p),
            ContainerError::BadProofDirName(d) => one(C::BadProofDirName, &format!("proofs/{d}/")),
            ContainerError::MissingIntergeo => one(C::MissingIntergeo, INTERGEO_XML),
            ContainerError::Codec { entry, error } => {
                vec![error.to_violation().prefixed(entry)]
            }
            ContainerError::Invalid(v) => v.clone(),
        }
    }

    /// Whether the failure is about content rather than about reading it.
    pub fn is_validation(&self) -> bool {
        !matches!(self, ContainerError::MalformedZip(_) | ContainerError::Io { .. })
    }
}

/// One file of a container, addressed by its full `/`-separated path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Entry {
    pub path: String,
    pub bytes: Vec<u8>,
}

impl Entry {
    pub fn new(path: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Entry {
            path: path.into(),
            bytes: bytes.into(),
        }
    }
}

/// The raw contents of an archive, before any document is decoded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContainerManifest {
    /// Files, sorted by path.
    pub files: Vec<Entry>,
    /// Explicit directory entries, without the trailing `/`.
    pub dirs: BTreeSet<String>,
}

impl ContainerManifest {
    pub fn file(&self, path: &str) -> Option<&Entry> {
        self.files.iter().find(|e| e.path == path)
    }

    /// A directory exists if it has an entry of its own or holds a file.
    pub fn has_dir(&self, dir: &str) -> bool {
        let prefix = format!("{dir}/");
        self.dirs.contains(dir) || self.files.iter().any(|e| e.path.starts_with(&prefix))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackedContainer {
    pub bytes: Vec<u8>,
    /// `problem<name>.zip` when the problem has a name.
    pub suggested_filename: Option<String>,
}

/// Kind of document stored at `path`, if the layout assigns one.
pub fn document_kind(path: &str) -> Option<DocumentKind> {
    match path {
        INFORMATION_XML => Some(DocumentKind::Information),
        INTERGEO_XML => Some(DocumentKind::Construction),
        CONJECTURE_XML => Some(DocumentKind::Conjecture),
        _ => {
            let parts: Vec<&str> = path.split('/').collect();
            matches!(parts[..], ["proofs", _, PROOF_INFO_XML]).then_some(DocumentKind::ProofInfo)
        }
    }
}

fn is_proof_dir_name(dir: &str) -> bool {
    dir.len() > "proof".len() && dir.starts_with("proof")
}

fn check_entry_path(path: &str) -> Result<(), ContainerError> {
    if is_safe_relative_path(path) {
        Ok(())
    } else {
        Err(ContainerError::BadPath(path.to_string()))
    }
}

/// Reads every entry of a zip archive, checking paths and duplicates.
pub fn read_manifest(bytes: &[u8]) -> Result<ContainerManifest, ContainerError> {
    let bad_zip = |e: zip::result::ZipError| ContainerError::MalformedZip(e.to_string());
    let mut archive = ZipArchive::new(Cursor::new(bytes)).map_err(bad_zip)?;
    let mut manifest = ContainerManifest::default();
    let mut seen = BTreeSet::new();
    for i in 0..archive.len() {
        let mut file = archive.by_index(i).map_err(bad_zip)?;
        let name = file.name().map_err(bad_zip)?.into_owned();
        let is_dir = name.ends_with('/');
        let path = name.trim_end_matches('/').to_string();
        check_entry_path(&path)?;
        if !seen.insert(path.clone()) {
            return Err(ContainerError::DuplicateEntry(path));
        }
        if is_dir {
            manifest.dirs.insert(path);
        } else {
            let mut data = Vec::new();
            file.read_to_end(&mut data)
                .map_err(|e| ContainerError::MalformedZip(e.to_string()))?;
            manifest.files.push(Entry::new(path, data));
        }
    }
    manifest.files.sort();
    if let Some(f) = manifest.files.iter().find(|f| manifest.dirs.contains(&f.path)) {
        return Err(ContainerError::DuplicateEntry(f.path.clone()));
    }
    Ok(manifest)
}

/// Writes a deterministic archive holding `files`, every parent directory
/// of them, and the directories in `extra_dirs`.
pub fn write_zip(files: &[Entry], extra_dirs: &[&str]) -> Result<Vec<u8>, ContainerError> {
    let mut dirs: BTreeSet<String> = extra_dirs.iter().map(|d| d.to_string()).collect();
    for f in files {
        check_entry_path(&f.path)?;
        let mut parts: Vec<&str> = f.path.split('/').collect();
        parts.pop();
        for n in 1..=parts.len() {
            dirs.insert(parts[..n].join("/"));
        }
    }
    let mut all: BTreeMap<String, Option<&[u8]>> = BTreeMap::new();
    for d in &dirs {
        all.insert(format!("{d}/"), None);
    }
    for f in files {
        if all.insert(f.path.clone(), Some(f.bytes.as_slice())).is_some() || dirs.contains(&f.path)
        {
            return Err(ContainerError::DuplicateEntry(f.path.clone()));
        }
    }

    let io_err = |e: zip::result::ZipError| ContainerError::MalformedZip(e.to_string());
    let base = SimpleFileOptions::default().last_modified_time(DateTime::DEFAULT);
    let mut zw = ZipWriter::new(Cursor::new(Vec::new()));
    for (name, data) in all {
        match data {
            None => {
                let opts = base
                    .compression_method(CompressionMethod::Stored)
                    .unix_permissions(0o755);
                zw.add_directory(name.as_str(), opts).map_err(io_err)?;
            }
            Some(bytes) => {
                let opts = if bytes.len() > DEFLATE_THRESHOLD {
                    base.compression_method(CompressionMethod::Deflated)
                        .compression_level(Some(DEFLATE_LEVEL))
                } else {
                    base.compression_method(CompressionMethod::Stored)
                };
                zw.start_file(name.as_str(), opts.unix_permissions(0o644))
                    .map_err(io_err)?;
                zw.write_all(bytes)
                    .map_err(|e| ContainerError::MalformedZip(e.to_string()))?;
            }
        }
    }
    Ok(zw.finish().map_err(io_err)?.into_inner())
}

/// The files a problem is stored as.
pub fn problem_entries(p: &Problem) -> Vec<Entry> {
    let mut out = Vec::new();
    if let Some(info) = &p.info {
        out.push(Entry::new(INFORMATION_XML, xml::serialize_information(info)));
    }
    out.push(Entry::new(INTERGEO_XML, xml::serialize_construction(&p.construction)));
    if let Some(c) = &p.conjecture {
        out.push(Entry::new(CONJECTURE_XML, xml::serialize_conjecture(c)));
    }
    for a in &p.proofs {
        let dir = format!("proofs/{}", a.directory_name());
        out.push(Entry::new(format!("{dir}/{PROOF_INFO_XML}"), xml::serialize_proof_info(a)));
        for f in &a.outputs {
            out.push(Entry::new(format!("{dir}/{}", f.path), f.bytes.clone()));
        }
    }
    for f in &p.resources {
        out.push(Entry::new(format!("resources/{}", f.path), f.bytes.clone()));
    }
    for f in &p.metadata {
        out.push(Entry::new(format!("metadata/{}", f.path), f.bytes.clone()));
    }
    for d in &p.private {
        for f in &d.files {
            out.push(Entry::new(format!("private/{}/{}", d.domain, f.path), f.bytes.clone()));
        }
    }
    for f in &p.attachments {
        out.push(Entry::new(f.path.clone(), f.bytes.clone()));
    }
    out.sort();
    out
}

/// Serializes and zips a valid problem.
pub fn pack(p: &Problem) -> Result<PackedContainer, ContainerError> {
    let violations = crate::validate_problem(p);
    if has_errors(&violations) {
        return Err(ContainerError::Invalid(violations));
    }
    let bytes = write_zip(&problem_entries(p), &MANDATORY_DIRS)?;
    Ok(PackedContainer {
        bytes,
        suggested_filename: p.name().map(|n| n.archive_file_name()),
    })
}

fn codec(entry: &str) -> impl FnOnce(CodecError) -> ContainerError + '_ {
    move |error| ContainerError::Codec {
        entry: entry.to_string(),
        error,
    }
}

/// Builds a problem from container files (from an archive or a directory
/// tree). Proof directories without `proofInfo.xml` and unclaimed files in
/// the format directories become attachments.
pub fn problem_from_entries(files: &[Entry]) -> Result<Problem, ContainerError> {
    for f in files {
        check_entry_path(&f.path)?;
        let top = f.path.split('/').next().unwrap_or_default();
        if !f.path.contains('/') || !TOP_LEVEL.contains(&top) {
            return Err(ContainerError::UnexpectedEntry(f.path.clone()));
        }
        if let ["proofs", dir, _, ..] = f.path.split('/').collect::<Vec<_>>()[..] {
            if !is_proof_dir_name(dir) {
                return Err(ContainerError::BadProofDirName(dir.to_string()));
            }
        }
    }
    let find = |path: &str| files.iter().find(|e| e.path == path);

    let intergeo = find(INTERGEO_XML).ok_or(ContainerError::MissingIntergeo)?;
    let construction = xml::parse_construction(&intergeo.bytes).map_err(codec(INTERGEO_XML))?;
    let mut p = Problem::new(construction);
    if let Some(e) = find(INFORMATION_XML) {
        p.info = Some(xml::parse_information(&e.bytes).map_err(codec(INFORMATION_XML))?);
    }
    if let Some(e) = find(CONJECTURE_XML) {
        p.conjecture = Some(xml::parse_conjecture(&e.bytes).map_err(codec(CONJECTURE_XML))?);
    }

    let mut attempt_dirs: BTreeMap<&str, ProofAttempt> = BTreeMap::new();
    for f in files {
        if document_kind(&f.path) == Some(DocumentKind::ProofInfo) {
            let dir = f.path.split('/').nth(1).unwrap_or_default();
            let attempt = xml::parse_proof_info(&f.bytes).map_err(codec(&f.path))?;
            attempt_dirs.insert(dir, attempt);
        }
    }

    let mut private: BTreeMap<String, Vec<CarriedFile>> = BTreeMap::new();
    for f in files {
        if document_kind(&f.path).is_some() {
            continue;
        }
        let (top, rest) = f.path.split_once('/').expect("checked above");
        match top {
            "resources" => p.resources.push(CarriedFile::new(rest, f.bytes.clone())),
            "metadata" => p.metadata.push(CarriedFile::new(rest, f.bytes.clone())),
            "private" => match rest.split_once('/') {
                Some((domain, path)) => private
                    .entry(domain.to_string())
                    .or_default()
                    .push(CarriedFile::new(path, f.bytes.clone())),
                None => return Err(ContainerError::UnexpectedEntry(f.path.clone())),
            },
            "proofs" => match rest.split_once('/') {
                Some((dir, path)) => match attempt_dirs.get_mut(dir) {
                    Some(a) => a.outputs.push(CarriedFile::new(path, f.bytes.clone())),
                    None => p.attachments.push(CarriedFile::new(&f.path, f.bytes.clone())),
                },
                None => return Err(ContainerError::UnexpectedEntry(f.path.clone())),
            },
            _ => p.attachments.push(CarriedFile::new(&f.path, f.bytes.clone())),
        }
    }
    p.proofs = attempt_dirs.into_values().collect();
    p.private = private
        .into_iter()
        .map(|(domain, files)| PrivateDomain { domain, files })
        .collect();

    let violations = crate::validate_problem(&p);
    if has_errors(&violations) {
        return Err(ContainerError::Invalid(violations));
    }
    Ok(p.canonical())
}

pub fn unpack(bytes: &[u8]) -> Result<Problem, ContainerError> {
    problem_from_entries(&read_manifest(bytes)?.files)
}

/// Drops everything an i2g reader does not know about. The input must be
/// a valid container; the result keeps the remaining entries byte for
/// byte, and stripping it again changes nothing.
pub fn strip_to_i2g(bytes: &[u8]) -> Result<PackedContainer, ContainerError> {
    let manifest = read_manifest(bytes)?;
    let p = problem_from_entries(&manifest.files)?;
    let keep = |path: &str| !I2GATP_ONLY.contains(&path.split('/').next().unwrap_or_default());
    let files: Vec<Entry> = manifest
        .files
        .into_iter()
        .filter(|e| keep(&e.path))
        .collect();
    let dirs: Vec<&str> = manifest
        .dirs
        .iter()
        .map(String::as_str)
        .filter(|d| keep(d))
        .collect();
    Ok(PackedContainer {
        bytes: write_zip(&files, &dirs)?,
        suggested_filename: p.name().map(|n| n.archive_file_name()),
    })
}

/// Adds one proof attempt (with its outputs) to an existing container,
/// leaving every other entry untouched.
pub fn add_proof_attempt(
    bytes: &[u8],
    attempt: &ProofAttempt,
) -> Result<PackedContainer, ContainerError> {
    let manifest = read_manifest(bytes)?;
    let mut p = problem_from_entries(&manifest.files)?;
    let dir = format!("proofs/{}", attempt.directory_name());
    let mut violations = crate::model::validate_attempt(attempt);
    if manifest.has_dir(&dir) {
        violations.push(Violation::error(
            ViolationCode::DuplicateProofDirectory,
            &dir,
            "directory already present in the container",
        ));
    }
    p.proofs.push(attempt.clone());
    violations.extend(
        crate::validate_problem(&p)
            .into_iter()
            .filter(|v| v.code == ViolationCode::DuplicateAttempt),
    );
    if has_errors(&violations) {
        return Err(ContainerError::Invalid(violations));
    }
    let mut files = manifest.files;
    files.push(Entry::new(
        format!("{dir}/{PROOF_INFO_XML}"),
        xml::serialize_proof_info(attempt),
    ));
    for f in &attempt.outputs {
        files.push(Entry::new(format!("{dir}/{}", f.path), f.bytes.clone()));
    }
    files.sort();
    let dirs: Vec<&str> = manifest.dirs.iter().map(String::as_str).collect();
    Ok(PackedContainer {
        bytes: write_zip(&files, &dirs)?,
        suggested_filename: p.name().map(|n| n.archive_file_name()),
    })
}

/// Re-zips an archive with every document replaced by its canonical text,
/// working entry by entry without decoding the problem.
pub fn canonicalize_container(bytes: &[u8]) -> Result<Vec<u8>, ContainerError> {
    let manifest = read_manifest(bytes)?;
    let mut files = Vec::new();
    for e in manifest.files {
        let bytes = match document_kind(&e.path) {
            Some(kind) => xml::canonicalize(kind, &e.bytes)
                .map_err(codec(&e.path))?
                .into_bytes(),
            None => e.bytes,
        };
        files.push(Entry::new(e.path, bytes));
    }
    write_zip(&files, &MANDATORY_DIRS)
}

/// Every finding for a container: layout, each document on its own, and
/// the invariants that span documents. With `i2g_only`, only the
/// construction is required.
pub fn validate_container(bytes: &[u8], i2g_only: bool) -> Vec<Violation> {
    match read_manifest(bytes) {
        Ok(m) => validate_manifest(&m, i2g_only),
        Err(e) => e.to_violations(),
    }
}

pub fn validate_manifest(m: &ContainerManifest, i2g_only: bool) -> Vec<Violation> {
    use ViolationCode as C;
    let mut out = Vec::new();
    for f in &m.files {
        let top = f.path.split('/').next().unwrap_or_default();
        if !f.path.contains('/') || !TOP_LEVEL.contains(&top) {
            out.push(Violation::error(C::UnexpectedEntry, &f.path, "not part of the container layout"));
        } else if top == "private" && f.path.matches('/').count() < 2 {
            out.push(Violation::error(C::UnexpectedEntry, &f.path, "private files belong in a domain directory"));
        } else if top == "proofs" && f.path.matches('/').count() < 2 {
            out.push(Violation::error(C::UnexpectedEntry, &f.path, "proof files belong in an attempt directory"));
        }
    }
    for d in &m.dirs {
        let top = d.split('/').next().unwrap_or_default();
        if !TOP_LEVEL.contains(&top) {
            out.push(Violation::error(C::UnexpectedEntry, format!("{d}/"), "not part of the container layout"));
        }
    }
    if m.file(INTERGEO_XML).is_none() {
        out.push(Violation::error(C::MissingIntergeo, INTERGEO_XML, "the construction is mandatory"));
    }
    if !i2g_only {
        for d in MANDATORY_DIRS {
            if !m.has_dir(d) {
                out.push(Violation::error(C::MissingDirectory, format!("{d}/"), "directory missing"));
            }
        }
    }

    let mut proof_dirs = BTreeSet::new();
    for path in m.files.iter().map(|f| f.path.as_str()).chain(m.dirs.iter().map(String::as_str)) {
        let parts: Vec<&str> = path.split('/').collect();
        if parts.len() >= 2 && parts[0] == "proofs" && (parts.len() > 2 || m.dirs.contains(path)) {
            proof_dirs.insert(parts[1].to_string());
        }
    }
    for dir in &proof_dirs {
        if !is_proof_dir_name(dir) {
            out.push(Violation::error(
                C::BadProofDirName,
                format!("proofs/{dir}/"),
                "attempt directories are named proof<GATP><Version><Method>",
            ));
        }
    }

    for f in &m.files {
        let Some(kind) = document_kind(&f.path) else {
            continue;
        };
        out.extend(
            xml::validate_document(kind, &f.bytes)
                .into_iter()
                .map(|v| v.prefixed(&f.path)),
        );
        if kind == DocumentKind::ProofInfo {
            if let Ok(a) = xml::parse_proof_info(&f.bytes) {
                let dir = f.path.split('/').nth(1).unwrap_or_default();
                if a.directory_name() != dir {
                    out.push(Violation::warning(
                        C::ProofDirMismatch,
                        &f.path,
                        format!("record describes {}, stored in {dir}", a.directory_name()),
                    ));
                }
            }
        }
    }

    if !has_errors(&out) {
        match problem_from_entries(&m.files) {
            Ok(_) => {}
            Err(ContainerError::Invalid(vs)) => {
                for v in vs {
                    let known = out.iter().any(|o| o.code == v.code && o.message == v.message);
                    if !known {
                        out.push(v);
                    }
                }
            }
            Err(e) => out.extend(e.to_violations()),
        }
    }
    out
}

/// A container laid out as a directory tree under `root`, with
/// `/`-separated paths relative to it.
pub fn read_dir_manifest(root: &Path) -> Result<ContainerManifest, ContainerError> {
    fn rel_path(root: &Path, path: &Path) -> String {
        let rel = path.strip_prefix(root).expect("walk stays under root");
        rel.components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/")
    }
    fn walk(root: &Path, dir: &Path, m: &mut ContainerManifest) -> Result<(), ContainerError> {
        let mut items: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| ContainerError::io(dir, e))?
            .collect::<Result<_, _>>()
            .map_err(|e| ContainerError::io(dir, e))?;
        items.sort_by_key(|e| e.file_name());
        for item in items {
            let path = item.path();
            let ty = item.file_type().map_err(|e| ContainerError::io(&path, e))?;
            if ty.is_dir() {
                m.dirs.insert(rel_path(root, &path));
                walk(root, &path, m)?;
            } else {
                let bytes = std::fs::read(&path).map_err(|e| ContainerError::io(&path, e))?;
                m.files.push(Entry::new(rel_path(root, &path), bytes));
            }
        }
        Ok(())
    }
    let mut m = ContainerManifest::default();
    walk(root, root, &mut m)?;
    m.files.sort();
    Ok(m)
}

/// Writes container files under `root`. Every path is checked before
/// anything is written.
pub fn write_dir_entries(root: &Path, files: &[Entry], dirs: &[&str]) -> Result<(), ContainerError> {
    for f in files {
        check_entry_path(&f.path)?;
    }
    for d in dirs {
        check_entry_path(d)?;
    }
    for d in dirs {
        let path = root.join(d);
        std::fs::create_dir_all(&path).map_err(|e| ContainerError::io(&path, e))?;
    }
    for f in files {
        let path = root.join(&f.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| ContainerError::io(parent, e))?;
        }
        std::fs::write(&path, &f.bytes).map_err(|e| ContainerError::io(&path, e))?;
    }
    Ok(())
}
