fn main() -> std::process::ExitCode {
    batchsched::cli::main()
}
