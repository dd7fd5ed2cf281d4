//! Optional external static analyzers. Findings are prompt context only.

use std::path::Path;
use std::sync::OnceLock;
use std::time::Duration;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::backend::{find_program, ExecBackend};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzerCommand {
    pub name: String,
    /// `{root}` in any argument is replaced with the source root.
    pub argv: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Finding {
    pub file: String,
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticReport {
    pub findings: Vec<Finding>,
    pub notices: Vec<String>,
}

fn finding_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^([^:\s][^:]*):(\d+)(?::\d+)?:\s*(.+)$").unwrap())
}

pub fn parse_findings(output: &str) -> Vec<Finding> {
    output
        .lines()
        .filter_map(|l| {
            let c = finding_re().captures(l.trim_end())?;
            Some(Finding {
                file: c[1].to_string(),
                line: c[2].parse().ok()?,
                message: c[3].trim().to_string(),
            })
        })
        .collect()
}

/// Runs each configured analyzer through `backend` and gathers its
/// `file:line: message` lines. A missing analyzer is recorded as a notice.
pub fn collect_static_findings(
    backend: &mut dyn ExecBackend,
    root: &Path,
    enabled: bool,
    analyzers: &[AnalyzerCommand],
) -> StaticReport {
    let mut report = StaticReport::default();
    if !enabled {
        return report;
    }
    if analyzers.is_empty() {
        report.notices.push("no static analyzers configured".into());
        return report;
    }
    let root_s = root.to_string_lossy();
    for a in analyzers {
        let argv: Vec<String> = a.argv.iter().map(|s| s.replace("{root}", &root_s)).collect();
        let present = argv
            .first()
            .is_some_and(|p| backend.name() != "local" || find_program(p).is_some());
        if !present {
            report.notices.push(format!("AnalyzerMissing: {}", a.name));
            continue;
        }
        match backend.exec(&argv, Duration::from_secs(300)) {
            Ok(r) => {
                let mut f = parse_findings(&r.stdout);
                f.extend(parse_findings(&r.stderr));
                report.findings.extend(f);
            }
            Err(Error::BackendUnavailable(msg)) => {
                report.notices.push(format!("AnalyzerMissing: {} ({msg})", a.name));
            }
            Err(e) => report.notices.push(format!("{}: {e}", a.name)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ata::LocalBackend;

    #[test]
    fn disabled_returns_nothing() {
        let mut b = LocalBackend::new(".");
        let r = collect_static_findings(&mut b, Path::new("."), false, &[]);
        assert_eq!(r, StaticReport::default());
    }

    #[test]
    fn enabled_without_analyzers_records_notice() {
        let mut b = LocalBackend::new(".");
        let r = collect_static_findings(&mut b, Path::new("."), true, &[]);
        assert!(r.findings.is_empty());
        assert_eq!(r.notices.len(), 1);
    }

    #[test]
    fn stub_analyzer_output_is_parsed() {
        let mut b = LocalBackend::new(".");
        let a = AnalyzerCommand {
            name: "stub".into(),
            argv: vec!["sh".into(), "-c".into(), "echo 'a.c:7: uninitialized read'; echo noise".into()],
        };
        let missing = AnalyzerCommand {
            name: "ghost".into(),
            argv: vec!["no-such-analyzer-xyz".into()],
        };
        let r = collect_static_findings(&mut b, Path::new("."), true, &[a, missing]);
        assert_eq!(
            r.findings,
            vec![Finding {
                file: "a.c".into(),
                line: 7,
                message: "uninitialized read".into()
            }]
        );
        assert_eq!(r.notices, vec!["AnalyzerMissing: ghost".to_string()]);
    }
}
