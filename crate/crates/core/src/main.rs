fn main() {
    std::process::exit(prolfa::cli::run(std::env::args_os()));
}
