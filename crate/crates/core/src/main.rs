use clap::Parser;

use zetadelta::cli;
use zetadelta::ErrorCategory;

fn main() {
    let args = cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = cli::run(&args, &mut stdout) {
        eprintln!("error: {e}");
        let code = match e.category() {
            ErrorCategory::Input | ErrorCategory::Io => 2,
            ErrorCategory::Numerical => 3,
            ErrorCategory::NonConvergence => 4,
        };
        std::process::exit(code);
    }
}
