fn main() {
    std::process::exit(unclosed::cli::run(std::env::args_os()));
}
