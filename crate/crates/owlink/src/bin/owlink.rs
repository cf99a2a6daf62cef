fn main() {
    std::process::exit(owlink::cli::run());
}
