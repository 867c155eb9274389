//! Runs the complete verification suite — every registered statement checked
//! over randomized matrix families — and prints the summary table.

use spectral_scale::verify::{self, SuiteConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let outcomes = verify::run_all(&SuiteConfig::default())?;

    print!("{}", verify::summary_table(&outcomes));

    if verify::all_passed(&outcomes) {
        println!("all checks passed");
        Ok(())
    } else {
        Err("verification failures detected".into())
    }
}
