fn main() {
    std::process::exit(msolearn::harness::cli::run(std::env::args_os()));
}
