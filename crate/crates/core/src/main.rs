fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(precy::cli::main_with_args(&args));
}
