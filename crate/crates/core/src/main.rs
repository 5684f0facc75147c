fn main() {
    std::process::exit(stokes_core::cli::run(std::env::args_os()));
}
