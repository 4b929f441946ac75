//! Normalized volume screen across the family, with the alpha bound
//! arithmetic used for smooth points.

use kdelta::catalog::classify::{group_order, max_k};
use kdelta::catalog::volume_formula;
use kdelta::kstab::{alpha_delta_bounds, liu_test, LiuVerdict};
use kdelta::rational::{format, q};

pub fn run_example() {
    for (n, m) in [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (6, 2), (5, 3)] {
        let passing: Vec<u64> = (0..=max_k(n, m))
            .filter(|&k| {
                liu_test(&volume_formula(n, m, k), group_order(n, m)) == LiuVerdict::Passes
            })
            .collect();
        println!(
            "(n,m) = ({n},{m}), |G| = {}: k passing the screen {passing:?}",
            group_order(n, m)
        );
    }
    let (lo, hi) = alpha_delta_bounds(&q(3, 4), 2);
    println!(
        "alpha >= 3/4 gives {} <= delta <= {}",
        format(&lo),
        format(&hi)
    );
}

#[allow(dead_code)]
fn main() {
    run_example()
}
