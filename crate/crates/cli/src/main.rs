fn main() {
    std::process::exit(takagi_cli::run(std::env::args_os()));
}
