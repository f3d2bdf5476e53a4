use clap::Parser;

fn main() {
    let cli = chiralx::Cli::parse();
    let code = chiralx::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
