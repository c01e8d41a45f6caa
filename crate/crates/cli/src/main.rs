fn main() {
    std::process::exit(qham_cli::run_from(std::env::args_os()));
}
