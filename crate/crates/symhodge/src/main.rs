fn main() {
    std::process::exit(symhodge::cli::run());
}
