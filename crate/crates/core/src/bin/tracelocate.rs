fn main() -> std::process::ExitCode {
    tracelocate::cli::main()
}
