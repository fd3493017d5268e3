use clap::Parser;

fn main() {
    let cli = chgeom_cli::config::Cli::parse();
    if let Err(e) = chgeom_cli::run(&cli) {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
