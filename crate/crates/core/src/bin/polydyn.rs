fn main() {
    std::process::exit(polydyn::cli::run(std::env::args_os()));
}
