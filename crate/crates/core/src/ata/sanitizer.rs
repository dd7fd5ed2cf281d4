//! Parser for ASan, MSan and UBSan crash reports.

use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use super::{AccessOp, CrashReport, Frame, ReportSanitizer};
use crate::corpus::classify_crash;
use crate::error::{Error, Result};

fn header_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^==\d+==\s*(?:ERROR|WARNING): (\w+): (.*)$").unwrap()
    })
}

fn frame_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*#(\d+)\s+(0x[0-9a-fA-F]+)(?:\s+in\s+(.*)|\s+(\(.*\)))\s*$").unwrap())
}

fn location_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(.*?):(\d+)(?::(\d+))?$").unwrap())
}

fn ubsan_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(\S+?):(\d+):(\d+): runtime error: (.+)$").unwrap())
}

fn access_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(READ|WRITE) of size (\d+)").unwrap())
}

fn signal_access_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"caused by a (READ|WRITE) memory access").unwrap())
}

fn address_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\bon (?:unknown )?(?:address )?(0x[0-9a-fA-F]+)").unwrap())
}

/// UBSan runtime-error descriptions mapped to crash subtypes.
const UBSAN_SUBTYPES: &[(&str, &str)] = &[
    ("does not point to an object of type", "Bad-cast"),
    ("downcast of", "Bad-cast"),
    ("index", "Index-out-of-bounds"),
    ("through pointer to incorrect function type", "Incorrect-function-pointer-type"),
    ("variable length array bound", "Non-positive-vla-bound-value"),
    ("null pointer", "Null-dereference"),
    ("insufficient space", "Object-size"),
    ("misaligned address", "Object-size"),
];

fn ubsan_subtype(desc: &str) -> String {
    UBSAN_SUBTYPES
        .iter()
        .find(|(needle, _)| desc.contains(needle))
        .map(|(_, subtype)| subtype.to_string())
        .unwrap_or_else(|| desc.to_string())
}

fn sanitizer_kind(tool: &str) -> Option<ReportSanitizer> {
    match tool {
        "AddressSanitizer" => Some(ReportSanitizer::Asan),
        "MemorySanitizer" => Some(ReportSanitizer::Msan),
        "UndefinedBehaviorSanitizer" => Some(ReportSanitizer::Ubsan),
        _ => None,
    }
}

/// Crash subtype from the text after `XSanitizer: `.
fn crash_type_from(desc: &str) -> String {
    let desc = desc.trim();
    let desc = desc.strip_prefix("attempting ").unwrap_or(desc);
    if let Some(rest) = desc.strip_prefix("SEGV ") {
        if rest.starts_with("on unknown address") {
            return "SEGV on unknown address".to_string();
        }
        return "SEGV".to_string();
    }
    let cut = [" on address", " on unknown address", " on 0x", ": ", " ("]
        .iter()
        .filter_map(|p| desc.find(p))
        .min()
        .unwrap_or(desc.len());
    desc[..cut].trim().to_string()
}

pub(crate) fn parse_frame_line(line: &str) -> Option<Frame> {
    let caps = frame_re().captures(line)?;
    let index = caps[1].parse().ok()?;
    let address = Some(caps[2].to_string());
    let Some(body) = caps.get(3) else {
        // `#5 0x... (/path/module+0x1324)`: no symbol
        return Some(Frame {
            index,
            address,
            function: String::new(),
            file: None,
            line: None,
            column: None,
            in_project: false,
        });
    };
    let mut body = body.as_str().trim();
    if let Some(pos) = body.rfind(" (BuildId:") {
        body = body[..pos].trim_end();
    }
    let (function, loc) = match body.rfind(' ') {
        Some(pos) => (&body[..pos], &body[pos + 1..]),
        None => (body, ""),
    };
    let (file, line_no, column) = if loc.starts_with('(') || loc.is_empty() {
        (None, None, None)
    } else if let Some(m) = location_re().captures(loc) {
        (
            Some(m[1].to_string()),
            m[2].parse().ok(),
            m.get(3).and_then(|c| c.as_str().parse().ok()),
        )
    } else {
        (Some(loc.to_string()), None, None)
    };
    Some(Frame {
        index,
        address,
        function: function.trim().to_string(),
        file,
        line: line_no,
        column,
        in_project: false,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Main,
    Alloc,
    Free,
    Other,
}

/// Parses the first recognized sanitizer block in `text`.
///
/// LeakSanitizer blocks are skipped. With `root`, frame files are rewritten to
/// root-relative paths and `in_project` is set for frames that resolve.
pub fn parse_sanitizer_report(text: &str, root: Option<&Path>) -> Result<CrashReport> {
    let lines: Vec<&str> = text.lines().collect();
    let mut report = None;
    for (i, line) in lines.iter().enumerate() {
        let line = line.trim_end();
        if let Some(caps) = header_re().captures(line) {
            let Some(kind) = sanitizer_kind(&caps[1]) else {
                continue;
            };
            report = Some(parse_block(kind, &caps[2], &lines[i + 1..], text)?);
            break;
        }
        if let Some(caps) = ubsan_re().captures(line) {
            report = Some(parse_ubsan(&caps, &lines[i + 1..], text)?);
            break;
        }
    }
    let mut report = report.ok_or(Error::NoCrashDetected)?;
    if let Some(root) = root {
        report.resolve_paths(root);
    }
    Ok(report)
}

fn parse_block(
    kind: ReportSanitizer,
    desc: &str,
    rest: &[&str],
    raw: &str,
) -> Result<CrashReport> {
    let crash_type = crash_type_from(desc);
    let family = classify_crash(&crash_type)?;
    let fault_address = address_re().captures(desc).map(|c| c[1].to_string());
    let mut access_op = None;
    let mut access_size = None;
    let mut frames = Vec::new();
    let mut alloc: Vec<Frame> = Vec::new();
    let mut free: Vec<Frame> = Vec::new();
    let mut section = Section::Main;
    let mut main_done = false;

    for line in rest {
        let t = line.trim();
        if t.starts_with("SUMMARY:") || header_re().is_match(t) {
            break;
        }
        if let Some(c) = access_re().captures(t) {
            access_op = Some(op(&c[1]));
            access_size = c[2].parse().ok();
            continue;
        }
        if let Some(c) = signal_access_re().captures(t) {
            access_op = Some(op(&c[1]));
            continue;
        }
        if t.contains("freed by thread") {
            section = Section::Free;
            continue;
        }
        if t.contains("allocated by thread") || t.contains("was created by") {
            section = Section::Alloc;
            continue;
        }
        if t.ends_with("created by T0 here:") || t.starts_with("Thread T") {
            section = Section::Other;
            continue;
        }
        let Some(frame) = parse_frame_line(t) else {
            continue;
        };
        match section {
            Section::Main if !main_done => {
                if frame.index == 0 && !frames.is_empty() {
                    main_done = true;
                } else {
                    frames.push(frame);
                }
            }
            Section::Alloc => alloc.push(frame),
            Section::Free => free.push(frame),
            _ => {}
        }
    }
    if frames.is_empty() {
        return Err(Error::NoCrashDetected);
    }
    renumber(&mut frames);
    Ok(CrashReport {
        sanitizer: kind,
        crash_type,
        family,
        access_op,
        access_size,
        fault_address,
        frames,
        alloc_frames: (!alloc.is_empty()).then_some(alloc),
        free_frames: (!free.is_empty()).then_some(free),
        raw: raw.to_string(),
    })
}

fn parse_ubsan(caps: &regex::Captures<'_>, rest: &[&str], raw: &str) -> Result<CrashReport> {
    let desc = caps[4].trim();
    let crash_type = ubsan_subtype(desc);
    let family = classify_crash(&crash_type)?;
    // A stack is present only with print_stacktrace=1; use it when it is.
    let mut frames: Vec<Frame> = Vec::new();
    for line in rest {
        let t = line.trim();
        if t.starts_with("SUMMARY:") || ubsan_re().is_match(t) || header_re().is_match(t) {
            break;
        }
        if let Some(f) = parse_frame_line(t) {
            if f.index == 0 && !frames.is_empty() {
                break;
            }
            frames.push(f);
        }
    }
    if frames.is_empty() {
        frames.push(Frame {
            index: 0,
            address: None,
            function: String::new(),
            file: Some(caps[1].to_string()),
            line: caps[2].parse().ok(),
            column: caps[3].parse().ok(),
            in_project: false,
        });
    }
    renumber(&mut frames);
    Ok(CrashReport {
        sanitizer: ReportSanitizer::Ubsan,
        crash_type,
        family,
        access_op: None,
        access_size: None,
        fault_address: None,
        frames,
        alloc_frames: None,
        free_frames: None,
        raw: raw.to_string(),
    })
}

fn renumber(frames: &mut [Frame]) {
    for (i, f) in frames.iter_mut().enumerate() {
        f.index = i as u32;
    }
}

fn op(s: &str) -> AccessOp {
    if s == "WRITE" {
        AccessOp::Write
    } else {
        AccessOp::Read
    }
}
