fn main() {
    std::process::exit(specrad_cli::run(std::env::args_os()));
}
