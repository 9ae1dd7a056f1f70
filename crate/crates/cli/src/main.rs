fn main() {
    std::process::exit(coupm_cli::run_cli(std::env::args_os()));
}
