fn main() {
    std::process::exit(simgadget::cli::run_cli(std::env::args_os()));
}
