fn main() {
    std::process::exit(specsym::cli::run());
}
