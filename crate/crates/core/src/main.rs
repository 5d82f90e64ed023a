fn main() {
    std::process::exit(flncs::cli::main_with_args(std::env::args_os()));
}
