fn main() {
    std::process::exit(cospans::cli::run(std::env::args_os()));
}
