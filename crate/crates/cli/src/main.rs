fn main() {
    std::process::exit(qsl_cli::run(std::env::args_os()));
}
