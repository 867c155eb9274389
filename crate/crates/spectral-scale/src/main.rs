fn main() {
    std::process::exit(spectral_scale::cli::parse_and_run(std::env::args_os()));
}
