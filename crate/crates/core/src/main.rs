use quandle_homology::cli;

fn main() {
    let code = cli::main_with(std::env::args().collect());
    std::process::exit(code);
}
