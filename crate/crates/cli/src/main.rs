fn main() {
    std::process::exit(plateau_cli::run(std::env::args_os()));
}
