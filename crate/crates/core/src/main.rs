fn main() {
    std::process::exit(kfree::cli::main_with_args(std::env::args_os()));
}
