use clap::Parser;

use interlace::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
