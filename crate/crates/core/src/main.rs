fn main() {
    std::process::exit(polysep::cli::run(std::env::args_os()));
}
