fn main() {
    let (code, out) = coalg_cli::run_command(std::env::args_os());
    if code == coalg_cli::EXIT_USAGE || code == coalg_cli::EXIT_INVALID {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
