fn main() {
    std::process::exit(descent_kit::cli::main());
}
