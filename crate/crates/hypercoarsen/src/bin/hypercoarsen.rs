use clap::Parser;

use hypercoarsen::cli::{self, error_class, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = cli::run(cli) {
        let (class, code) = error_class(&err);
        eprintln!("error: {class}: {err}");
        std::process::exit(code);
    }
}
