fn main() {
    std::process::exit(epi_lab::cli::main_with_args(std::env::args_os()));
}
