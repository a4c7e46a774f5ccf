fn main() -> std::process::ExitCode {
    kgalign::cli::run()
}
