fn main() {
    std::process::exit(heatcorner::cli::run(std::env::args_os()));
}
