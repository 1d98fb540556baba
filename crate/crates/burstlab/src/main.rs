fn main() {
    std::process::exit(burstlab::cli::run());
}
