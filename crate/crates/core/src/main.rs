fn main() -> std::process::ExitCode {
    mippc::cli::main()
}
