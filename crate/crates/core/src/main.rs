fn main() {
    std::process::exit(weitz::cli::run(std::env::args_os()));
}
