//! `proofs/proof<GATP><Version><Method>/proofInfo.xml`.
//!
//! ```text
//! <proof_info>
//!   <prover>GCLCprover</prover>
//!   <version>2.0</version>
//!   <method>areamethod</method>
//!   <status>proved</status>
//!   <limits>
//!     <time_limit_seconds>60</time_limit_seconds>
//!     <iterations_limit>100000</iterations_limit>
//!     <memory_limit>512</memory_limit>                 (MB)
//!   </limits>
//!   <measures>
//!     <CPU_time>0.02</CPU_time>                        (seconds)
//!     <elimination_steps>12</elimination_steps>
//!     <number_terms_largest_polynomial>40</number_terms_largest_polynomial>
//!     <proof_steps>31</proof_steps>
//!   </measures>
//!   <platform>
//!     <computer_name>lab-3</computer_name>
//!     <clock_speed>2400</clock_speed>                  (MHz)
//!     <RAM>8192</RAM>                                  (MB)
//!     <operating_system>Linux</operating_system>
//!   </platform>
//! </proof_info>
//! ```
//!
//! Every field of the three groups is optional; empty groups are omitted.

use roxmltree::Node;

use super::read::{decode as decode_text, elements, expect_root, name, parse_tree, Ctx};
use super::writer::Writer;
use super::{CodecError, CodecErrorKind as K, Decoded};
use crate::model::{format_real, Platform, ProofAttempt, ProofLimits, ProofMeasures, ProofStatus};

pub fn parse_proof_info(bytes: &[u8]) -> Result<ProofAttempt, CodecError> {
    decode(bytes).into_result()
}

pub(crate) fn decode(bytes: &[u8]) -> Decoded<ProofAttempt> {
    let mut ctx = Ctx::default();
    let value = decode_into(bytes, &mut ctx).unwrap_or_else(|e| {
        ctx.errors.push(e);
        None
    });
    Decoded {
        value,
        errors: ctx.errors,
        warnings: ctx.warnings,
    }
}

/// Children of a group, each allowed once and only from `allowed`.
fn group<'a, 'i>(
    ctx: &mut Ctx,
    node: Node<'a, 'i>,
    path: &str,
    allowed: &[&str],
) -> Vec<(&'a str, Node<'a, 'i>, String)> {
    ctx.only_attrs(node, path, &[]);
    let mut out: Vec<(&str, Node, String)> = Vec::new();
    for child in elements(node) {
        let tag = name(&child);
        let at = format!("{path}/{tag}");
        if !allowed.contains(&tag) {
            ctx.err(&at, K::UnknownTag(tag.to_string()));
        } else if out.iter().any(|(t, _, _)| *t == tag) {
            ctx.err(&at, K::DuplicateSection(tag.to_string()));
        } else {
            ctx.only_attrs(child, &at, &[]);
            out.push((tag, child, at));
        }
    }
    out
}

fn positive(ctx: &mut Ctx, node: Node<'_, '_>, path: &str, value: Option<f64>) -> Option<f64> {
    match value {
        Some(v) if v < 0.0 => {
            ctx.err(path, K::NegativeMeasure(name(&node).to_string()));
            None
        }
        other => other,
    }
}

fn decode_into(bytes: &[u8], ctx: &mut Ctx) -> Result<Option<ProofAttempt>, CodecError> {
    let text = decode_text(bytes)?;
    let doc = parse_tree(&text)?;
    let root = expect_root(&doc, "proof_info")?;

    let top = group(
        ctx,
        root,
        "/proof_info",
        &["prover", "version", "method", "status", "limits", "measures", "platform"],
    );
    let mut ident: [Option<String>; 3] = [None, None, None];
    let mut status = None;
    let mut limits = ProofLimits::default();
    let mut measures = ProofMeasures::default();
    let mut platform = Platform::default();

    for (tag, node, path) in top {
        match tag {
            "prover" => ident[0] = Some(ctx.leaf_text(node, &path)),
            "version" => ident[1] = Some(ctx.leaf_text(node, &path)),
            "method" => ident[2] = Some(ctx.leaf_text(node, &path)),
            "status" => {
                let s = ctx.leaf_text(node, &path);
                match s.parse::<ProofStatus>() {
                    Ok(st) => status = Some(st),
                    Err(_) => ctx.err(&path, K::UnknownStatus(s)),
                }
            }
            "limits" => {
                let fields = &["time_limit_seconds", "iterations_limit", "memory_limit"];
                for (t, n, at) in group(ctx, node, &path, fields) {
                    match t {
                        "time_limit_seconds" => {
                            let v = ctx.real(n, &at);
                            limits.time_limit_seconds = positive(ctx, n, &at, v);
                        }
                        "iterations_limit" => limits.iterations_limit = ctx.count(n, &at),
                        _ => limits.memory_limit_mb = ctx.count(n, &at),
                    }
                }
            }
            "measures" => {
                let fields = &[
                    "CPU_time",
                    "elimination_steps",
                    "number_terms_largest_polynomial",
                    "proof_steps",
                ];
                for (t, n, at) in group(ctx, node, &path, fields) {
                    match t {
                        "CPU_time" => {
                            let v = ctx.real(n, &at);
                            measures.cpu_time_seconds = positive(ctx, n, &at, v);
                        }
                        "elimination_steps" => measures.elimination_steps = ctx.count(n, &at),
                        "number_terms_largest_polynomial" => {
                            measures.number_terms_largest_polynomial = ctx.count(n, &at)
                        }
                        _ => measures.proof_steps = ctx.count(n, &at),
                    }
                }
            }
            _ => {
                let fields = &["computer_name", "clock_speed", "RAM", "operating_system"];
                for (t, n, at) in group(ctx, node, &path, fields) {
                    match t {
                        "computer_name" => platform.computer_name = Some(ctx.leaf_text(n, &at)),
                        "operating_system" => {
                            platform.operating_system = Some(ctx.leaf_text(n, &at))
                        }
                        "clock_speed" => match ctx.real(n, &at) {
                            Some(v) if v <= 0.0 => {
                                ctx.err(&at, K::NonPositiveValue("clock_speed".into()))
                            }
                            v => platform.clock_speed_mhz = v,
                        },
                        _ => match ctx.count(n, &at) {
                            Some(0) => ctx.err(&at, K::NonPositiveValue("RAM".into())),
                            v => platform.ram_mb = v,
                        },
                    }
                }
            }
        }
    }

    for (field, value) in ["prover", "version", "method"].iter().zip(&ident) {
        if value.as_deref().is_none_or(str::is_empty) {
            ctx.err("/proof_info", K::MissingField(field.to_string()));
        }
    }
    if status.is_none() && !ctx.errors.iter().any(|e| e.path == "/proof_info/status") {
        ctx.err("/proof_info", K::MissingField("status".into()));
    }
    let [Some(prover), Some(version), Some(method)] = ident else {
        return Ok(None);
    };
    let Some(status) = status else {
        return Ok(None);
    };
    Ok(Some(ProofAttempt {
        prover,
        version,
        method,
        status,
        limits,
        measures,
        platform,
        outputs: Vec::new(),
    }))
}

/// Writes the record without its output files, which live next to it in
/// the container.
pub fn serialize_proof_info(a: &ProofAttempt) -> String {
    fn opt_real(w: &mut Writer, tag: &str, v: Option<f64>) {
        if let Some(v) = v {
            w.leaf(tag, &[], &format_real(v));
        }
    }
    fn opt_count(w: &mut Writer, tag: &str, v: Option<u64>) {
        if let Some(v) = v {
            w.leaf(tag, &[], &v.to_string());
        }
    }
    fn opt_text(w: &mut Writer, tag: &str, v: &Option<String>) {
        if let Some(v) = v.as_deref().filter(|s| !s.trim().is_empty()) {
            w.leaf(tag, &[], v);
        }
    }

    let mut w = Writer::new();
    w.open("proof_info", &[]);
    w.leaf("prover", &[], &a.prover);
    w.leaf("version", &[], &a.version);
    w.leaf("method", &[], &a.method);
    w.leaf("status", &[], a.status.as_str());
    if !a.limits.is_empty() {
        w.open("limits", &[]);
        opt_real(&mut w, "time_limit_seconds", a.limits.time_limit_seconds);
        opt_count(&mut w, "iterations_limit", a.limits.iterations_limit);
        opt_count(&mut w, "memory_limit", a.limits.memory_limit_mb);
        w.close("limits");
    }
    if !a.measures.is_empty() {
        w.open("measures", &[]);
        opt_real(&mut w, "CPU_time", a.measures.cpu_time_seconds);
        opt_count(&mut w, "elimination_steps", a.measures.elimination_steps);
        opt_count(
            &mut w,
            "number_terms_largest_polynomial",
            a.measures.number_terms_largest_polynomial,
        );
        opt_count(&mut w, "proof_steps", a.measures.proof_steps);
        w.close("measures");
    }
    if !a.platform.is_empty() {
        w.open("platform", &[]);
        opt_text(&mut w, "computer_name", &a.platform.computer_name);
        opt_real(&mut w, "clock_speed", a.platform.clock_speed_mhz);
        opt_count(&mut w, "RAM", a.platform.ram_mb);
        opt_text(&mut w, "operating_system", &a.platform.operating_system);
        w.close("platform");
    }
    w.close("proof_info");
    w.finish()
}
