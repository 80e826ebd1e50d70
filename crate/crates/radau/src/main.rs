use clap::Parser;

fn main() {
    let cli = radau::cli::Cli::parse();
    std::process::exit(radau::cli::run(cli));
}
