fn main() {
    std::process::exit(magicdistill::cli::main_with_args(std::env::args_os()));
}
