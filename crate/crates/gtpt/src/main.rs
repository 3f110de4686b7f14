fn main() {
    std::process::exit(gtpt::cli::run());
}
