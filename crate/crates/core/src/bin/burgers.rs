fn main() {
    std::process::exit(burgers::cli::main_with_args(std::env::args_os()));
}
