fn main() {
    std::process::exit(starcode::cli::run(std::env::args_os()));
}
