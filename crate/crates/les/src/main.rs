fn main() {
    std::process::exit(les::cli::run_cli(std::env::args_os()));
}
