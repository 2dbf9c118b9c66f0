use clap::Parser;

fn main() {
    let cli = lakefca::cli::Cli::parse();
    if let Err(e) = lakefca::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
