fn main() {
    std::process::exit(sememevec::cli::run(std::env::args_os()));
}
