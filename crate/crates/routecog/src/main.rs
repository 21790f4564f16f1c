fn main() {
    std::process::exit(routecog::cli::main());
}
