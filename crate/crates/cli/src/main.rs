fn main() {
    std::process::exit(crystalft_cli::dispatch(std::env::args_os()));
}
