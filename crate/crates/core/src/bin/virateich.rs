fn main() {
    std::process::exit(virateich::cli::run(std::env::args_os()));
}
