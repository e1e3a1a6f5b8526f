fn main() {
    std::process::exit(maxsum_cli::run(std::env::args_os()));
}
