fn main() {
    std::process::exit(pocketprimes::cli::run());
}
