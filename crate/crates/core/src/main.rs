fn main() {
    std::process::exit(amc::cli::main_with_env());
}
