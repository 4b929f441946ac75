//! Regenerates the K-stability table of the family and lists the solution
//! set of the volume inequality.

use kdelta::catalog::{classify, solution_set, table1, table1_tsv};
use kdelta::Result;

pub fn run_example() -> Result<()> {
    let set = solution_set();
    println!("triples passing the volume screen: {set:?}");

    let row = classify(5, 2, 7)?;
    println!("(5,2,7): {} via {}", row.status, row.evidence_summary());

    print!("{}", table1_tsv(&table1()?));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
