fn main() {
    std::process::exit(kdelta::cli::run(std::env::args_os()));
}
