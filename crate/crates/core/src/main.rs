fn main() {
    std::process::exit(statecount::cli::run(std::env::args_os()));
}
