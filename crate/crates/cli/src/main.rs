fn main() {
    std::process::exit(atiyah_cli::run(std::env::args()));
}
