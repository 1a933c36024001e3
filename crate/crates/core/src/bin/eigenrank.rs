fn main() {
    std::process::exit(eigenrank::cli::run(std::env::args_os()));
}
