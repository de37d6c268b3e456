fn main() {
    std::process::exit(satiab::expcli::cli::run(std::env::args_os()));
}
