fn main() {
    std::process::exit(susybi_cli::run(std::env::args_os()));
}
