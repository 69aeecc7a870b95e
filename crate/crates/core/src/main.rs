fn main() {
    std::process::exit(hulllab::cli::run(std::env::args_os()));
}
