use chords_cli::{main_with, RunConfig};
use clap::Parser;

fn main() {
    let cfg = RunConfig::parse();
    std::process::exit(main_with(&cfg));
}
