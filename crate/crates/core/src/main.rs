fn main() {
    let result = elim_core::cli::run(std::env::args_os());
    std::process::exit(result.emit());
}
