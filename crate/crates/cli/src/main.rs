fn main() {
    std::process::exit(liouville_cli::run_command(std::env::args()));
}
