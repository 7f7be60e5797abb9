fn main() {
    std::process::exit(liepoisson::cli::main_with_args(std::env::args_os()));
}
