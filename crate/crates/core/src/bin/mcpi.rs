use clap::Parser;
use correntropy_pca::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("mcpi: {e}");
        std::process::exit(e.exit_code());
    }
}
