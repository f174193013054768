fn main() {
    std::process::exit(ginzburg::cli::main_with_args(std::env::args_os()));
}
