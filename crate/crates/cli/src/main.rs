use clap::Parser;

use ftr_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let code = match ftr_cli::run(cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ftr: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
