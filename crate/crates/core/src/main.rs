fn main() {
    std::process::exit(zblab::cli::run(std::env::args_os()));
}
