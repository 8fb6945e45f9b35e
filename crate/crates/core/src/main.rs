use clap::Parser;

fn main() {
    let cli = rum_dual::cli::Cli::parse();
    std::process::exit(rum_dual::cli::main_with(cli));
}
