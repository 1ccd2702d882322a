use clap::Parser;

use cfshape::args::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("cfshape {}: {e}", cli.command.name());
        std::process::exit(e.exit_code());
    }
}
