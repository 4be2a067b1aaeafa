fn main() {
    std::process::exit(fock_toeplitz::cli::main_with_args(std::env::args_os()));
}
