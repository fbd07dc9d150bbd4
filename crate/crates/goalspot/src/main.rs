fn main() -> std::process::ExitCode {
    goalspot::cli::main()
}
