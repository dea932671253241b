fn main() {
    std::process::exit(oversmooth::cli::main());
}
