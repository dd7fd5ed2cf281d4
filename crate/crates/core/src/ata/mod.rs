//! Runtime evidence: executing cases under sanitizers, parsing sanitizer and
//! debugger output, and correlating stack frames with source chunks.

pub mod backend;
pub mod backtrace;
pub mod evidence;
pub mod sanitizer;
pub mod static_findings;

use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::CrashFamily;

pub use backend::{
    exec_run, run_debugger_script, run_sanitized, run_sanitized_ref, ContainerBackend,
    ExecBackend, ExecResult, LocalBackend, ReplayBackend, Revision, DEFAULT_TIMEOUT,
};
pub use backtrace::parse_backtrace;
pub use evidence::{
    correlate_backtrace, correlate_evidence, seed_candidates, EvidenceEdge, EvidenceGraph,
    EvidenceSource, FrameRef,
};
pub use sanitizer::parse_sanitizer_report;
pub use static_findings::{collect_static_findings, AnalyzerCommand, Finding, StaticReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    /// 0 is the crash-most frame.
    pub index: u32,
    pub address: Option<String>,
    pub function: String,
    pub file: Option<String>,
    pub line: Option<u32>,
    pub column: Option<u32>,
    pub in_project: bool,
}

impl Frame {
    /// Frames belonging to the sanitizer runtime itself.
    pub fn is_sanitizer_runtime(&self) -> bool {
        const PREFIXES: [&str; 5] = [
            "__asan",
            "__msan",
            "__ubsan",
            "__sanitizer",
            "__interceptor",
        ];
        PREFIXES.iter().any(|p| self.function.starts_with(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportSanitizer {
    Asan,
    Msan,
    Ubsan,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessOp {
    Read,
    Write,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrashReport {
    pub sanitizer: ReportSanitizer,
    pub crash_type: String,
    pub family: CrashFamily,
    pub access_op: Option<AccessOp>,
    pub access_size: Option<u32>,
    pub fault_address: Option<String>,
    pub frames: Vec<Frame>,
    pub alloc_frames: Option<Vec<Frame>>,
    pub free_frames: Option<Vec<Frame>>,
    pub raw: String,
}

impl CrashReport {
    /// Resolves frame files against `root`, setting `in_project`.
    pub fn resolve_paths(&mut self, root: &Path) {
        let resolver = SourceResolver::new(root);
        resolver.resolve_all(&mut self.frames);
        for list in [&mut self.alloc_frames, &mut self.free_frames]
            .into_iter()
            .flatten()
        {
            resolver.resolve_all(list);
        }
    }
}

/// Maps paths as printed by sanitizers or debuggers (often absolute paths
/// inside a build container) onto files under a local source root.
#[derive(Debug, Clone)]
pub struct SourceResolver {
    root: PathBuf,
}

impl SourceResolver {
    pub fn new(root: &Path) -> Self {
        SourceResolver {
            root: root.to_path_buf(),
        }
    }

    /// Returns the root-relative path for `raw`: the path itself when it is
    /// under the root, otherwise the longest path suffix that names a file
    /// under the root.
    pub fn resolve(&self, raw: &str) -> Option<String> {
        let path = Path::new(raw);
        if let Ok(rel) = path.strip_prefix(&self.root) {
            if self.root.join(rel).is_file() {
                return Some(to_slash(rel));
            }
        }
        let comps: Vec<String> = path
            .components()
            .filter_map(|c| match c {
                Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
                _ => None,
            })
            .collect();
        if path.components().any(|c| c == Component::ParentDir) {
            // `../sysdeps/...` style paths belong to toolchain sources
            return None;
        }
        (0..comps.len()).find_map(|k| {
            let suffix = comps[k..].join("/");
            self.root.join(&suffix).is_file().then_some(suffix)
        })
    }

    pub fn resolve_all(&self, frames: &mut [Frame]) {
        for frame in frames {
            frame.in_project = false;
            if let Some(file) = frame.file.as_deref() {
                if let Some(rel) = self.resolve(file) {
                    frame.file = Some(rel);
                    frame.in_project = frame.line.is_some();
                }
            }
        }
    }
}

fn to_slash(p: &Path) -> String {
    p.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_container_paths_by_suffix() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("src")).unwrap();
        std::fs::write(dir.path().join("src/parse.c"), "x").unwrap();
        let r = SourceResolver::new(dir.path());
        assert_eq!(
            r.resolve("/src/toyhbo/src/parse.c").as_deref(),
            Some("src/parse.c")
        );
        assert_eq!(r.resolve("src/parse.c").as_deref(), Some("src/parse.c"));
        let abs = dir.path().join("src/parse.c");
        assert_eq!(
            r.resolve(abs.to_str().unwrap()).as_deref(),
            Some("src/parse.c")
        );
        assert_eq!(r.resolve("../csu/libc-start.c"), None);
        assert_eq!(r.resolve("/usr/include/stdio.h"), None);
    }

    #[test]
    fn runtime_frames_are_recognized() {
        let mut f = Frame {
            index: 0,
            address: None,
            function: "__interceptor_malloc".into(),
            file: None,
            line: None,
            column: None,
            in_project: false,
        };
        assert!(f.is_sanitizer_runtime());
        f.function = "__sanitizer::Die".into();
        assert!(f.is_sanitizer_runtime());
        f.function = "parse_hdr".into();
        assert!(!f.is_sanitizer_runtime());
    }
}
