//! Command-line entry point; see [`photocorr::cli`].

fn main() {
    std::process::exit(photocorr::cli::main_with_args(std::env::args_os()));
}
