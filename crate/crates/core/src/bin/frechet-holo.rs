fn main() {
    std::process::exit(frechet_holo::cli::cli_main(std::env::args_os()));
}
