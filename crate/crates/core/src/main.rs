fn main() {
    std::process::exit(statkit::cli::dispatch(std::env::args_os()));
}
