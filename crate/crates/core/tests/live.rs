//! Builds the toy projects with AddressSanitizer and runs them for real.
//! Skipped when gcc with ASan or `patch` is not available.

use std::path::{Path, PathBuf};
use std::process::Command;

use tracelocate::ata::{parse_sanitizer_report, run_sanitized_ref, LocalBackend, Revision};
use tracelocate::corpus::{classify_crash, load_manifest, CaseEntry};
use tracelocate::llm::{ScriptRule, ScriptedProvider};
use tracelocate::orchestrator::{run_case, RunConfig, RunOutcome};
use tracelocate::Error;

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toyproj")
}

fn ok(cmd: &mut Command) -> bool {
    cmd.output().map(|o| o.status.success()).unwrap_or(false)
}

fn copy_tree(from: &Path, to: &Path) {
    for e in walkdir(from) {
        let rel = e.strip_prefix(from).unwrap();
        std::fs::create_dir_all(to.join(rel).parent().unwrap()).unwrap();
        std::fs::copy(&e, to.join(rel)).unwrap();
    }
}

fn walkdir(dir: &Path) -> Vec<PathBuf> {
    walkdir::WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .collect()
}

fn compile(src: &Path, out: &Path) -> bool {
    let mut cmd = Command::new("gcc");
    cmd.args(["-g", "-O0", "-fsanitize=address", "-fno-omit-frame-pointer", "-o"])
        .arg(out);
    for f in walkdir(src) {
        if f.extension().is_some_and(|x| x == "c") {
            cmd.arg(f);
        }
    }
    ok(&mut cmd)
}

/// Builds both revisions of `case` under `work` and points its refs there.
fn build(case: &mut CaseEntry, work: &Path) -> bool {
    let vuln_src = work.join(format!("{}-vuln", case.id));
    let fixed_src = work.join(format!("{}-fixed", case.id));
    copy_tree(&case.source_root, &vuln_src);
    copy_tree(&case.source_root, &fixed_src);
    let patched = ok(Command::new("patch")
        .args(["-s", "-p1", "-i"])
        .arg(&case.ground_truth_diff)
        .current_dir(&fixed_src));
    case.vulnerable_ref = work.join(format!("{}-vuln.bin", case.id)).display().to_string();
    case.patched_ref = work.join(format!("{}-fixed.bin", case.id)).display().to_string();
    patched
        && compile(&vuln_src.join("src"), Path::new(&case.vulnerable_ref))
        && compile(&fixed_src.join("src"), Path::new(&case.patched_ref))
}

fn toolchain() -> bool {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("t.c");
    std::fs::write(&src, "int main(void) { return 0; }\n").unwrap();
    let exe = dir.path().join("t");
    ok(Command::new("gcc").arg("-fsanitize=address").arg(&src).arg("-o").arg(&exe))
        && ok(&mut Command::new(&exe))
        && ok(Command::new("patch").arg("--version"))
}

#[test]
fn sanitized_builds_crash_only_before_the_fix() {
    if !toolchain() {
        eprintln!("skipping: gcc with AddressSanitizer or patch unavailable");
        return;
    }
    let work = tempfile::tempdir().unwrap();
    let rules: Vec<ScriptRule> =
        serde_json::from_str(&std::fs::read_to_string(toy().join("script.json")).unwrap()).unwrap();
    for mut case in load_manifest(&toy().join("manifest.toml")).unwrap() {
        assert!(build(&mut case, work.path()), "{}: build failed", case.id);
        let mut backend = LocalBackend::new(work.path());

        let patched = run_sanitized_ref(&mut backend, &case, Revision::Patched).unwrap();
        assert!(
            matches!(parse_sanitizer_report(&patched, None), Err(Error::NoCrashDetected)),
            "{}: {patched}",
            case.id
        );
        let vuln = run_sanitized_ref(&mut backend, &case, Revision::Vulnerable).unwrap();
        let report = parse_sanitizer_report(&vuln, None).unwrap();
        assert_eq!(report.family, classify_crash(&case.crash_type).unwrap(), "{}", case.id);

        let provider = ScriptedProvider::new("replay", rules.clone());
        let cfg = RunConfig { debugger_enabled: false, ..RunConfig::default() };
        let run = run_case(&case, &cfg, &mut backend, &provider, None);
        assert_eq!(run.outcome, RunOutcome::Success, "{}: {:?}", case.id, run.notices);
        assert_eq!(run.metrics.localization, 1.0, "{}", case.id);
    }
}
