use clap::Parser;

fn main() {
    let cli = cfaudit::cli::Cli::parse();
    std::process::exit(cfaudit::cli::run(cli));
}
