fn main() {
    std::process::exit(plurinfo::cli::run(std::env::args_os()));
}
