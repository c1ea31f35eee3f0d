fn main() {
    std::process::exit(srrham::cli::run(std::env::args_os()));
}
