fn main() {
    std::process::exit(regimes_cli::main_with(std::env::args_os()));
}
