fn main() {
    std::process::exit(hardcore_interference::cli::run(std::env::args_os()));
}
