//! Writes the CSV data behind one figure or table.
//!
//! Usage: `reproduce <fig2|fig3|fig4|fig5|fig6|fig7|table1> [out_dir]`

use nftrack::sim::{write_figure, Scenario, FIGURES};
use std::path::PathBuf;

fn main() -> nftrack::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(name) = args.next() else {
        eprintln!("usage: reproduce <{}> [out_dir]", FIGURES.join("|"));
        std::process::exit(2);
    };
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    for path in write_figure(&name, &Scenario::default(), &dir)? {
        println!("{}", path.display());
    }
    Ok(())
}
