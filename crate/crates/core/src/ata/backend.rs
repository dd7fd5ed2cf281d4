//! Execution backends: local processes, an OCI container runtime driven
//! through its CLI, and replay of recorded logs.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use crate::corpus::CaseEntry;
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(120);

const ASAN_DEBUG_OPTIONS: &str = "abort_on_error=1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecResult {
    pub stdout: String,
    pub stderr: String,
    /// `128 + signal` when the process was killed by a signal.
    pub exit_code: i32,
    pub duration: Duration,
    pub timed_out: bool,
}

impl ExecResult {
    pub fn combined(&self) -> String {
        let mut out = self.stdout.clone();
        if !out.is_empty() && !out.ends_with('\n') && !self.stderr.is_empty() {
            out.push('\n');
        }
        out.push_str(&self.stderr);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Revision {
    Vulnerable,
    Patched,
}

impl Revision {
    pub fn reference(self, case: &CaseEntry) -> &str {
        match self {
            Revision::Vulnerable => &case.vulnerable_ref,
            Revision::Patched => &case.patched_ref,
        }
    }
}

/// One backend handle serves one case; handles are not shared across cases.
pub trait ExecBackend: Send {
    fn name(&self) -> &'static str;

    /// Runs `argv`, never failing on a nonzero exit.
    fn exec(&mut self, argv: &[String], timeout: Duration) -> Result<ExecResult>;

    /// Executes the case binary of `revision` on the case reproducer.
    fn reproduce(
        &mut self,
        case: &CaseEntry,
        revision: Revision,
        timeout: Duration,
    ) -> Result<ExecResult>;

    /// Runs the debugger in batch mode on `binary input` and returns the
    /// transcript.
    fn debug(
        &mut self,
        binary: &Path,
        input: &Path,
        commands: &[String],
        timeout: Duration,
    ) -> Result<String>;
}

pub fn exec_run(
    backend: &mut dyn ExecBackend,
    command: &[String],
    timeout: Duration,
) -> Result<ExecResult> {
    backend.exec(command, timeout)
}

/// Combined stdout and stderr of the vulnerable revision on its reproducer.
pub fn run_sanitized(backend: &mut dyn ExecBackend, case: &CaseEntry) -> Result<String> {
    run_sanitized_ref(backend, case, Revision::Vulnerable)
}

pub fn run_sanitized_ref(
    backend: &mut dyn ExecBackend,
    case: &CaseEntry,
    revision: Revision,
) -> Result<String> {
    Ok(backend
        .reproduce(case, revision, DEFAULT_TIMEOUT)?
        .combined())
}

/// Debugger commands used when none are configured.
pub fn default_debugger_commands() -> Vec<String> {
    vec!["run".to_string(), "bt".to_string()]
}

pub fn run_debugger_script(
    backend: &mut dyn ExecBackend,
    binary: &Path,
    input: &Path,
    commands: &[String],
) -> Result<String> {
    backend.debug(binary, input, commands, DEFAULT_TIMEOUT)
}

fn gdb_argv(gdb: &str, binary: &Path, input: &Path, commands: &[String]) -> Vec<String> {
    let mut argv = vec![
        gdb.to_string(),
        "-batch".to_string(),
        "-nx".to_string(),
        "-ex".to_string(),
        format!("set environment ASAN_OPTIONS={ASAN_DEBUG_OPTIONS}"),
    ];
    for c in commands {
        argv.push("-ex".to_string());
        argv.push(c.clone());
    }
    argv.push("--args".to_string());
    argv.push(binary.to_string_lossy().into_owned());
    argv.push(input.to_string_lossy().into_owned());
    argv
}

/// Locates an executable on `PATH`, or checks an explicit path.
pub fn find_program(name: &str) -> Option<PathBuf> {
    let p = Path::new(name);
    if p.components().count() > 1 {
        return is_executable(p).then(|| p.to_path_buf());
    }
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(name))
        .find(|c| is_executable(c))
}

#[cfg(unix)]
fn is_executable(p: &Path) -> bool {
    use std::os::unix::fs::PermissionsExt;
    p.metadata()
        .map(|m| m.is_file() && m.permissions().mode() & 0o111 != 0)
        .unwrap_or(false)
}

#[cfg(not(unix))]
fn is_executable(p: &Path) -> bool {
    p.is_file()
}

fn spawn_and_wait(mut cmd: Command, timeout: Duration) -> std::io::Result<ExecResult> {
    let started = Instant::now();
    let mut child = cmd
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    let out_reader = drain(child.stdout.take());
    let err_reader = drain(child.stderr.take());
    let (status, timed_out) = wait_with_deadline(&mut child, started + timeout)?;
    let stdout = out_reader.join().unwrap_or_default();
    let stderr = err_reader.join().unwrap_or_default();
    Ok(ExecResult {
        stdout,
        stderr,
        exit_code: exit_code(&status),
        duration: started.elapsed(),
        timed_out,
    })
}

fn drain<R: Read + Send + 'static>(pipe: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut p) = pipe {
            let _ = p.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn wait_with_deadline(
    child: &mut Child,
    deadline: Instant,
) -> std::io::Result<(std::process::ExitStatus, bool)> {
    loop {
        if let Some(status) = child.try_wait()? {
            return Ok((status, false));
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            return Ok((child.wait()?, true));
        }
        thread::sleep(Duration::from_millis(5));
    }
}

#[cfg(unix)]
fn exit_code(status: &std::process::ExitStatus) -> i32 {
    use std::os::unix::process::ExitStatusExt;
    status
        .code()
        .or_else(|| status.signal().map(|s| 128 + s))
        .unwrap_or(-1)
}

#[cfg(not(unix))]
fn exit_code(status: &std::process::ExitStatus) -> i32 {
    status.code().unwrap_or(-1)
}

/// Runs argv lists directly, relative to a working directory.
#[derive(Debug, Clone)]
pub struct LocalBackend {
    workdir: PathBuf,
    gdb: String,
}

impl LocalBackend {
    pub fn new(workdir: impl Into<PathBuf>) -> Self {
        LocalBackend {
            workdir: workdir.into(),
            gdb: "gdb".to_string(),
        }
    }

    pub fn with_debugger(mut self, gdb: impl Into<String>) -> Self {
        self.gdb = gdb.into();
        self
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.workdir.join(p)
        }
    }
}

impl ExecBackend for LocalBackend {
    fn name(&self) -> &'static str {
        "local"
    }

    fn exec(&mut self, argv: &[String], timeout: Duration) -> Result<ExecResult> {
        let (prog, args) = argv
            .split_first()
            .ok_or_else(|| Error::ContractViolation("empty command".into()))?;
        let mut cmd = Command::new(prog);
        cmd.args(args).current_dir(&self.workdir);
        spawn_and_wait(cmd, timeout).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::BackendUnavailable(format!("{prog}: not found")),
            _ => Error::io(prog, e),
        })
    }

    fn reproduce(
        &mut self,
        case: &CaseEntry,
        revision: Revision,
        timeout: Duration,
    ) -> Result<ExecResult> {
        let binary = self.resolve(Path::new(revision.reference(case)));
        if !binary.is_file() {
            return Err(Error::BuildMissing(binary));
        }
        let input = self.resolve(&case.reproducer);
        self.exec(
            &[
                binary.to_string_lossy().into_owned(),
                input.to_string_lossy().into_owned(),
            ],
            timeout,
        )
    }

    fn debug(
        &mut self,
        binary: &Path,
        input: &Path,
        commands: &[String],
        timeout: Duration,
    ) -> Result<String> {
        let gdb = find_program(&self.gdb).ok_or_else(|| Error::DebuggerMissing(self.gdb.clone()))?;
        let argv = gdb_argv(
            &gdb.to_string_lossy(),
            &self.resolve(binary),
            &self.resolve(input),
            commands,
        );
        Ok(self.exec(&argv, timeout)?.combined())
    }
}

/// Drives a container runtime CLI (`docker`, `podman`, ...). One container is
/// created per image reference and removed on drop.
#[derive(Debug)]
pub struct ContainerBackend {
    runtime: PathBuf,
    reproduce_cmd: Vec<String>,
    containers: BTreeMap<String, String>,
    name_prefix: String,
}

impl ContainerBackend {
    /// The runtime comes from `T2L_CONTAINER_RUNTIME`, defaulting to `docker`.
    pub fn from_env(case_id: &str) -> Result<Self> {
        let runtime = std::env::var("T2L_CONTAINER_RUNTIME").unwrap_or_else(|_| "docker".into());
        Self::new(&runtime, case_id)
    }

    pub fn new(runtime: &str, case_id: &str) -> Result<Self> {
        let runtime = find_program(runtime)
            .ok_or_else(|| Error::BackendUnavailable(format!("container runtime {runtime}")))?;
        let safe: String = case_id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '-' })
            .collect();
        Ok(ContainerBackend {
            runtime,
            reproduce_cmd: vec!["arvo".to_string()],
            containers: BTreeMap::new(),
            name_prefix: format!("tracelocate-{safe}-{}", std::process::id()),
        })
    }

    /// Command that reproduces the crash inside an image.
    pub fn with_reproduce_command(mut self, argv: Vec<String>) -> Self {
        self.reproduce_cmd = argv;
        self
    }

    fn runtime_cmd(&self, args: &[&str], timeout: Duration) -> Result<ExecResult> {
        let mut cmd = Command::new(&self.runtime);
        cmd.args(args);
        spawn_and_wait(cmd, timeout).map_err(|e| {
            Error::BackendUnavailable(format!("{}: {e}", self.runtime.display()))
        })
    }

    fn checked(&self, args: &[&str]) -> Result<String> {
        let r = self.runtime_cmd(args, DEFAULT_TIMEOUT)?;
        if r.exit_code != 0 || r.timed_out {
            return Err(Error::BackendUnavailable(format!(
                "{} {} failed: {}",
                self.runtime.display(),
                args.first().unwrap_or(&""),
                r.stderr.trim()
            )));
        }
        Ok(r.stdout)
    }

    fn container_for(&mut self, image: &str) -> Result<String> {
        if let Some(name) = self.containers.get(image) {
            return Ok(name.clone());
        }
        let name = format!("{}-{}", self.name_prefix, self.containers.len());
        self.checked(&["create", "--name", &name, image, "sleep", "infinity"])?;
        self.containers.insert(image.to_string(), name.clone());
        self.checked(&["start", &name])?;
        Ok(name)
    }

    fn exec_in(&mut self, image: &str, argv: &[String], timeout: Duration) -> Result<ExecResult> {
        let name = self.container_for(image)?;
        let mut args: Vec<&str> = vec!["exec", &name];
        args.extend(argv.iter().map(String::as_str));
        self.runtime_cmd(&args, timeout)
    }

    /// Copies a path out of the container for `image`.
    pub fn copy_out(&mut self, image: &str, src: &str, dest: &Path) -> Result<()> {
        let name = self.container_for(image)?;
        let from = format!("{name}:{src}");
        self.checked(&["cp", &from, &dest.to_string_lossy()])?;
        Ok(())
    }

    fn default_image(&self) -> Option<String> {
        self.containers.keys().next().cloned()
    }
}

impl ExecBackend for ContainerBackend {
    fn name(&self) -> &'static str {
        "container"
    }

    fn exec(&mut self, argv: &[String], timeout: Duration) -> Result<ExecResult> {
        let image = self.default_image().ok_or_else(|| {
            Error::BackendUnavailable("no container started; reproduce a case first".into())
        })?;
        self.exec_in(&image, argv, timeout)
    }

    fn reproduce(
        &mut self,
        case: &CaseEntry,
        revision: Revision,
        timeout: Duration,
    ) -> Result<ExecResult> {
        let image = revision.reference(case).to_string();
        let cmd = self.reproduce_cmd.clone();
        self.exec_in(&image, &cmd, timeout)
    }

    fn debug(
        &mut self,
        binary: &Path,
        input: &Path,
        commands: &[String],
        timeout: Duration,
    ) -> Result<String> {
        let argv = gdb_argv("gdb", binary, input, commands);
        let r = self.exec(&argv, timeout)?;
        if r.exit_code == 127 {
            return Err(Error::DebuggerMissing("gdb (in container)".into()));
        }
        Ok(r.combined())
    }
}

impl Drop for ContainerBackend {
    fn drop(&mut self) {
        for name in self.containers.values() {
            let _ = self.runtime_cmd(&["rm", "-f", name], Duration::from_secs(30));
        }
    }
}

/// Serves recorded `<case_id>.san.log`, `<case_id>.patched.san.log` and
/// `<case_id>.gdb.log` files instead of executing anything.
#[derive(Debug, Clone)]
pub struct ReplayBackend {
    dir: PathBuf,
    case_id: String,
}

impl ReplayBackend {
    pub fn new(dir: impl Into<PathBuf>, case_id: impl Into<String>) -> Self {
        ReplayBackend {
            dir: dir.into(),
            case_id: case_id.into(),
        }
    }

    fn recorded(&self, suffix: &str) -> Result<String> {
        let path = self.dir.join(format!("{}.{suffix}", self.case_id));
        if !path.is_file() {
            return Err(Error::BackendUnavailable(format!(
                "no recording {}",
                path.display()
            )));
        }
        crate::error::read_to_string(&path)
    }
}

impl ExecBackend for ReplayBackend {
    fn name(&self) -> &'static str {
        "replay"
    }

    fn exec(&mut self, argv: &[String], _timeout: Duration) -> Result<ExecResult> {
        Err(Error::BackendUnavailable(format!(
            "replay backend cannot run {:?}",
            argv.first()
        )))
    }

    fn reproduce(
        &mut self,
        _case: &CaseEntry,
        revision: Revision,
        _timeout: Duration,
    ) -> Result<ExecResult> {
        let suffix = match revision {
            Revision::Vulnerable => "san.log",
            Revision::Patched => "patched.san.log",
        };
        let stderr = self.recorded(suffix)?;
        Ok(ExecResult {
            stdout: String::new(),
            stderr,
            exit_code: 0,
            duration: Duration::ZERO,
            timed_out: false,
        })
    }

    fn debug(
        &mut self,
        _binary: &Path,
        _input: &Path,
        _commands: &[String],
        _timeout: Duration,
    ) -> Result<String> {
        self.recorded("gdb.log")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn true_exits_zero() {
        let mut b = LocalBackend::new(".");
        let r = exec_run(&mut b, &argv(&["true"]), Duration::from_secs(5)).unwrap();
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.is_empty() && r.stderr.is_empty());
        assert!(!r.timed_out);
    }

    #[test]
    fn sleep_times_out() {
        let mut b = LocalBackend::new(".");
        let r = exec_run(&mut b, &argv(&["sleep", "10"]), Duration::from_secs(1)).unwrap();
        assert!(r.timed_out);
        assert_eq!(r.exit_code, 128 + 9);
        assert!(r.duration < Duration::from_secs(5));
    }

    #[test]
    fn nonzero_exit_is_not_an_error() {
        let mut b = LocalBackend::new(".");
        let r = exec_run(
            &mut b,
            &argv(&["sh", "-c", "echo out; echo err >&2; exit 3"]),
            Duration::from_secs(5),
        )
        .unwrap();
        assert_eq!(r.exit_code, 3);
        assert_eq!(r.stdout, "out\n");
        assert_eq!(r.stderr, "err\n");
    }

    #[test]
    fn missing_program_is_unavailable() {
        let mut b = LocalBackend::new(".");
        let e = exec_run(&mut b, &argv(&["no-such-program-xyz"]), Duration::from_secs(1));
        assert!(matches!(e, Err(Error::BackendUnavailable(_))));
    }

    #[test]
    fn missing_runtime_is_unavailable() {
        let e = ContainerBackend::new("no-such-runtime-xyz", "case");
        assert!(matches!(e, Err(Error::BackendUnavailable(_))));
    }

    #[test]
    fn debugger_argv_shape() {
        let a = gdb_argv("gdb", Path::new("/b"), Path::new("/i"), &default_debugger_commands());
        assert_eq!(
            a,
            argv(&[
                "gdb",
                "-batch",
                "-nx",
                "-ex",
                "set environment ASAN_OPTIONS=abort_on_error=1",
                "-ex",
                "run",
                "-ex",
                "bt",
                "--args",
                "/b",
                "/i"
            ])
        );
    }
}
