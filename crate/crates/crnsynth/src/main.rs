fn main() {
    std::process::exit(crnsynth::cli::run());
}
