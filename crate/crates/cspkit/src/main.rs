fn main() {
    std::process::exit(cspkit::cli::cli_main(std::env::args_os()));
}
