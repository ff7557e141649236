use clap::Parser;

use clean2hs::cli::{run, Args};

fn main() {
    let config = Args::parse().into_config();
    std::process::exit(run(&config));
}
