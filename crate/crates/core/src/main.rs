fn main() {
    std::process::exit(bailey_forge::cli::run(std::env::args_os()));
}
