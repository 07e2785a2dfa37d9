//! Fixtures, an exact-arithmetic oracle and the mutation corpus shared by
//! the integration tests.

#![allow(dead_code)]

pub mod exact;
pub mod mutations;
pub mod scenes;

use std::io::{Cursor, Write};
use std::path::{Path, PathBuf};

use i2gatp::container::{self, Entry};
use i2gatp::xml::DocumentKind;
use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipWriter};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub const DSL_FIXTURES: &[&str] = &[
    "varignon",
    "midpoint_thm",
    "centroid",
    "thales",
    "harmonic",
    "orthocenter",
    "midline",
    "collinear_false",
    "parallelogram",
    "triangle_only",
];

pub fn dsl_source(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("dsl").join(format!("{name}.gcl")))
        .unwrap_or_else(|e| panic!("dsl fixture {name}: {e}"))
}

pub fn container_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures().join("containers"))
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().unwrap().is_dir())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

pub fn container_dir(name: &str) -> PathBuf {
    fixtures().join("containers").join(name)
}

pub fn container_files(name: &str) -> Vec<Entry> {
    container::read_dir_manifest(&container_dir(name))
        .unwrap_or_else(|e| panic!("container fixture {name}: {e}"))
        .files
}

/// The fixture directory zipped the way an ordinary archiver might: reverse
/// path order, directory entries only for the top-level directories, a real
/// timestamp, everything stored.
pub fn raw_zip(files: &[Entry]) -> Vec<u8> {
    let mut files: Vec<&Entry> = files.iter().collect();
    files.sort_by(|a, b| b.path.cmp(&a.path));
    let opts = SimpleFileOptions::default()
        .compression_method(CompressionMethod::Stored)
        .last_modified_time(DateTime::from_date_and_time(2014, 7, 9, 15, 30, 2).unwrap());
    let mut zw = ZipWriter::new(Cursor::new(Vec::new()));
    for f in files {
        zw.start_file(f.path.as_str(), opts).unwrap();
        zw.write_all(&f.bytes).unwrap();
    }
    for d in container::MANDATORY_DIRS {
        zw.add_directory(d, opts).unwrap();
    }
    zw.finish().unwrap().into_inner()
}

pub fn fixture_zip(name: &str) -> Vec<u8> {
    raw_zip(&container_files(name))
}

pub struct XmlFixture {
    pub name: String,
    pub kind: DocumentKind,
    pub bytes: Vec<u8>,
}

pub fn xml_fixtures() -> Vec<XmlFixture> {
    let mut out: Vec<XmlFixture> = std::fs::read_dir(fixtures().join("xml"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "xml"))
        .map(|p| {
            let bytes = std::fs::read(&p).unwrap();
            let kind = DocumentKind::detect(&bytes).unwrap();
            XmlFixture {
                name: p.file_name().unwrap().to_string_lossy().into_owned(),
                kind,
                bytes,
            }
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Every documented violation code string found in `vs`.
pub fn codes(vs: &[i2gatp::Violation]) -> Vec<&'static str> {
    vs.iter().map(|v| v.code.as_str()).collect()
}
