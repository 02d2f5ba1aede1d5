fn main() {
    std::process::exit(chowla::cli::main());
}
