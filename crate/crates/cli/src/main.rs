fn main() {
    std::process::exit(isogeny_forge_cli::run(std::env::args_os()));
}
