fn main() {
    std::process::exit(blochlab::harness::cli::main_with_args(std::env::args_os()));
}
