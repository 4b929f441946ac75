//! Builds P(1,1,3) blown up at seven points, contracts the line through the
//! vertex and prints the resulting intersection data.

use std::collections::BTreeMap;

use kdelta::builder::{self, PointSpec};
use kdelta::rational::{format, q};
use kdelta::Result;

pub fn run_example() -> Result<()> {
    let vertex = BTreeMap::from([(builder::SEED_VERTEX.to_string(), 1)]);
    let mut model = builder::seed_wps(3)?;
    println!("P(1,1,3): (-K)^2 = {}", format(&model.degree()?));

    model = builder::declare_curve(&model, "L", &builder::class_map(&[("l", 1)]), &vertex)?;
    model = builder::declare_curve(&model, "C", &builder::class_map(&[("l", 4)]), &vertex)?;
    model = builder::blow_up(&model, &PointSpec::on("e1", &[("L", 1)]))?;
    for i in 2..=7 {
        model = builder::blow_up(&model, &PointSpec::on(format!("e{i}"), &[("C", 1)]))?;
    }
    model = builder::blow_up(&model, &PointSpec::on("ep", &[("L", 1)]))?;
    println!(
        "after 8 blow-ups: L^2 = {}, C^2 = {}",
        format(&model.self_intersection("L")?),
        format(&model.self_intersection("C")?)
    );

    let surface = builder::contract(&model, &["L"])?;
    for s in surface.surface_singularities() {
        println!("{s}");
    }
    let degree = surface.degree()?;
    println!("contracted: (-K)^2 = {}", format(&degree));
    assert_eq!(degree, q(2, 5));
    println!("A(L) = {}", format(&surface.log_discrepancy("L")?));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
