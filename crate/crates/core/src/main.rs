fn main() -> std::process::ExitCode {
    cckit::cli::run(std::env::args_os())
}
