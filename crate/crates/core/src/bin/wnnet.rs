fn main() {
    std::process::exit(wnnet::cli::main_with_args(std::env::args_os()));
}
