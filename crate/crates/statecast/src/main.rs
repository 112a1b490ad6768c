fn main() {
    std::process::exit(statecast::cli::main());
}
