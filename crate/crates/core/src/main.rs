fn main() {
    std::process::exit(tetquad::cli::run(std::env::args_os()));
}
