use clap::Parser;

use duopoly_core::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
