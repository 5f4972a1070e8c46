fn main() {
    std::process::exit(lhc_kit::cli::main_with_args(std::env::args_os()));
}
