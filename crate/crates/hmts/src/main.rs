fn main() {
    std::process::exit(hmts::cli::main());
}
