fn main() {
    std::process::exit(triwalk::cli::run());
}
