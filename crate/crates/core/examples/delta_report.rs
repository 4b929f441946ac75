//! Flag lower bounds for delta at the singular point of the (5,2,7) surface,
//! where the bound is exactly 1.

use kdelta::catalog::{build_config, delta_report, ConfigName};
use kdelta::rational::format;
use kdelta::Result;

pub fn run_example() -> Result<()> {
    let config = build_config(ConfigName::Sn2FlagE(5))?;
    for flag in config.flag_labels() {
        let report = delta_report(&config, flag)?;
        println!(
            "flag {flag}: A = {}, S = {}, A/S = {}",
            format(&report.a),
            format(&report.s),
            format(&report.ratio)
        );
        for p in &report.points {
            println!(
                "  {:<8} S_W = {:<6} ({:?})",
                p.point,
                format(&p.s_w),
                p.mode
            );
        }
        println!(
            "  delta >= {} ({})",
            format(&report.delta_lower_bound),
            report.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
