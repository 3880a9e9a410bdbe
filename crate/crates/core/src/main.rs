fn main() {
    std::process::exit(sphwell::cli::run(std::env::args_os()));
}
