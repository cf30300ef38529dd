fn main() {
    std::process::exit(wicklab::cli::run_cli(std::env::args_os()));
}
