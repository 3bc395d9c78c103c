fn main() {
    std::process::exit(entshare::cli::main_with_args(std::env::args_os()));
}
