fn main() {
    std::process::exit(quasirot::cli::main_with_args(std::env::args_os()));
}
