fn main() {
    std::process::exit(densetree::cli::run_cli(std::env::args_os()));
}
