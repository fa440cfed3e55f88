fn main() {
    std::process::exit(cascadia::cli::run(std::env::args_os()));
}
