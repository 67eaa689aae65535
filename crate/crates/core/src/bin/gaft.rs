fn main() {
    std::process::exit(gaft::cli::run(std::env::args_os()));
}
