//! Debugger backtrace parsing.

use std::sync::OnceLock;

use regex::Regex;

use super::sanitizer::parse_frame_line;
use super::Frame;

fn gdb_frame_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*#(\d+)\s+(?:(0x[0-9a-fA-F]+) in )?(.+?)(?: at (\S+):(\d+)| from (\S+))?\s*$")
            .unwrap()
    })
}

fn parse_gdb_frame(line: &str) -> Option<Frame> {
    let caps = gdb_frame_re().captures(line)?;
    let index = caps[1].parse().ok()?;
    let body = caps[3].trim();
    // `func (args)`; anything without an argument list is not a gdb frame
    let paren = body.find(" (").or_else(|| body.ends_with("()").then(|| body.len() - 2))?;
    let function = body[..paren].trim().to_string();
    if function.is_empty() {
        return None;
    }
    Some(Frame {
        index,
        address: caps.get(2).map(|m| m.as_str().to_string()),
        function,
        file: caps.get(4).map(|m| m.as_str().to_string()),
        line: caps.get(5).and_then(|m| m.as_str().parse().ok()),
        column: None,
        in_project: false,
    })
}

/// Extracts the last complete backtrace (the last run of frames that starts
/// at `#0`) from a debugger transcript. Lines between frames are ignored.
pub fn parse_backtrace(text: &str) -> Vec<Frame> {
    let mut runs: Vec<Vec<Frame>> = Vec::new();
    for line in text.lines() {
        let frame = parse_gdb_frame(line).or_else(|| parse_frame_line(line));
        let Some(frame) = frame else { continue };
        if frame.index == 0 || runs.is_empty() {
            runs.push(Vec::new());
        }
        let run = runs.last_mut().expect("run exists");
        if run.last().is_some_and(|prev| frame.index <= prev.index) {
            continue;
        }
        run.push(frame);
    }
    runs.into_iter()
        .rev()
        .find(|r| r.first().is_some_and(|f| f.index == 0))
        .unwrap_or_default()
}
