fn main() {
    std::process::exit(tdp::cli::run(std::env::args_os()));
}
