fn main() {
    std::process::exit(extremal_moments::cli::run(std::env::args()));
}
