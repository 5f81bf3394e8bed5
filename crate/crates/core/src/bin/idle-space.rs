fn main() {
    std::process::exit(idle_space::cli::run(std::env::args_os()));
}
