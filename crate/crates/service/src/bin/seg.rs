fn main() -> std::process::ExitCode {
    segstudio_service::cli::main()
}
