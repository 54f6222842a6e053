fn main() {
    std::process::exit(perpcount::cli::run(std::env::args_os()));
}
