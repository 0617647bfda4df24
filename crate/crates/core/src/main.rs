use std::io::Write;

use clap::Parser;

use disc_dynamics::cli::{run, Cli};

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{text}");
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
