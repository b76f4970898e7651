fn main() -> std::process::ExitCode {
    approxcount::cli::main_entry()
}
