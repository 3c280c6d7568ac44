fn main() {
    std::process::exit(restcheck_core::cli::main_with_args(std::env::args_os()));
}
