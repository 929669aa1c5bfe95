fn main() {
    std::process::exit(bianchi::cli::run_cli(std::env::args_os()));
}
