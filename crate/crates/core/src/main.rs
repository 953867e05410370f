fn main() {
    std::process::exit(glkr::cli::main_with_args(std::env::args_os()));
}
