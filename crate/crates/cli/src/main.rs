fn main() {
    std::process::exit(graphon_cheeger_cli::run(std::env::args_os()));
}
