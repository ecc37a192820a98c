fn main() {
    std::process::exit(fdrelay::cli::run());
}
