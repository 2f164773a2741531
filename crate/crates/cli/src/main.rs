fn main() {
    std::process::exit(ginprod_cli::run(std::env::args_os()));
}
