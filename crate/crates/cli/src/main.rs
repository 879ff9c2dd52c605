fn main() {
    std::process::exit(topikrank::run(std::env::args_os()));
}
