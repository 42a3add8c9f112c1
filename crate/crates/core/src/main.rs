fn main() {
    std::process::exit(qkdsec::cli::main_with_args(std::env::args_os()));
}
