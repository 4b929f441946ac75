//! Walks the chambers of -K - tL1 on the (3,2,6) surface and integrates the
//! volume exactly.

use kdelta::catalog::{build_config, ConfigName};
use kdelta::rational::format;
use kdelta::{s_invariant, volume_function, zariski_path, Result};

pub fn run_example() -> Result<()> {
    let config = build_config(ConfigName::S326)?;
    let (model, _) = config.flag("L1")?;
    let path = zariski_path(model, "L1")?;
    let vol = volume_function(&path)?;

    for (seg, c) in path.segments.iter().zip(&vol.segments) {
        let support: Vec<_> = seg.negative_support.iter().cloned().collect();
        println!(
            "[{}, {}]  N supported on {:?}  vol = {} + {} t + {} t^2",
            format(&seg.t_lo),
            format(&seg.t_hi),
            support,
            format(&c[0]),
            format(&c[1]),
            format(&c[2])
        );
        for (curve, coeff) in &seg.coefficients {
            println!(
                "    coeff of {curve}: {} + {} t",
                format(&coeff.c0),
                format(&coeff.c1)
            );
        }
    }
    println!("tau = {}", format(&path.tau));
    println!("int vol = {}", format(&vol.integrate_all()));
    println!("S(L1) = {}", format(&s_invariant(&path)?));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
