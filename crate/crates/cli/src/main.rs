fn main() {
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    std::process::exit(stabevo_cli::run(std::env::args(), &mut stdout, &mut stderr));
}
