use clap::Parser;

fn main() {
    let cli = discord_dynamics::cli::Cli::parse();
    if let Err(e) = discord_dynamics::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
