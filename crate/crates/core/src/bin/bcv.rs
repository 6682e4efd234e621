fn main() {
    std::process::exit(bcv_harmonic::cli::dispatch(std::env::args_os()));
}
