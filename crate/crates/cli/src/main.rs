fn main() {
    std::process::exit(plrs_cli::run(std::env::args_os()));
}
