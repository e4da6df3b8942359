fn main() {
    std::process::exit(critflow::cli::run(std::env::args_os()));
}
