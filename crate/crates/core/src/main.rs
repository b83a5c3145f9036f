use clap::Parser;

fn main() {
    let cli = wfti::cli::Cli::parse();
    match wfti::cli::run(&cli) {
        Ok(summary) => println!("{summary}"),
        Err(f) => {
            eprintln!("wfti: error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}
