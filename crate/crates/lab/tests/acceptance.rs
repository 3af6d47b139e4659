//! Runs every acceptance criterion and prints one verdict line each.
//! Exits non-zero when any criterion fails.

use boussinesq_lab::acceptance::{criterion, NAMES};

fn main() {
    let verbose = std::env::args().any(|a| a == "--verbose");
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() as u8 {
        let c = criterion(id);
        println!("{}", c.line());
        if verbose || !c.pass {
            println!("    {}", c.detail);
        }
        if !c.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
