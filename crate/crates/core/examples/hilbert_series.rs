//! Compares truncated Hilbert series of weighted hypersurfaces with their
//! closed forms.

use kdelta::catalog::{hilbert_series_check, two_negative_check};

pub fn run_example() -> Result<(), String> {
    for n in 2..=5 {
        let check = hilbert_series_check(&[1, 1, 1, n], &[n + 1], 50);
        println!(
            "degree {} in P(1,1,1,{n}): equal to order 50 = {}",
            n + 1,
            check.equal
        );
        if !check.equal {
            return Err(format!("mismatch for n = {n}"));
        }
    }
    for (n, m) in [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3)] {
        let check = two_negative_check(n, m, 50);
        println!(
            "degree {} in P(1,1,{n},{}): first terms {:?}, equal = {}",
            n * m,
            n * m - 1,
            &check.closed_form[..8],
            check.equal
        );
        if !check.equal {
            return Err(format!(
                "mismatch for ({n},{m}) at degree {:?}",
                check.first_mismatch
            ));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), String> {
    run_example()
}
