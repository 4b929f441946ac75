//! Truncated Hilbert series of weighted hypersurfaces.

use serde::Serialize;

/// Coefficients of `prod (1 - t^d_i) / prod (1 - t^w_j)` up to `t^order`.
pub fn rational_series(numerator_degrees: &[u64], weights: &[u64], order: usize) -> Vec<i128> {
    let mut s = vec![0i128; order + 1];
    s[0] = 1;
    for &d in numerator_degrees {
        let d = d as usize;
        for i in (d..=order).rev() {
            s[i] -= s[i - d];
        }
    }
    for &w in weights {
        let w = w as usize;
        for i in w..=order {
            s[i] += s[i - w];
        }
    }
    s
}

/// Number of monomials of each weighted degree up to `order`, by direct
/// enumeration.
pub fn monomial_counts(weights: &[u64], order: usize) -> Vec<i128> {
    fn walk(weights: &[u64], budget: usize, acc: usize, out: &mut [i128]) {
        match weights.split_first() {
            None => out[acc] += 1,
            Some((&w, rest)) => {
                let w = w as usize;
                let mut used = 0;
                while acc + used <= budget {
                    walk(rest, budget, acc + used, out);
                    used += w;
                }
            }
        }
    }
    let mut out = vec![0i128; order + 1];
    walk(weights, order, 0, &mut out);
    out
}

/// Graded dimensions of `k[x_j] / (f)` for `f` of degree `degree`.
pub fn hypersurface_dimensions(weights: &[u64], degree: u64, order: usize) -> Vec<i128> {
    let counts = monomial_counts(weights, order);
    let d = degree as usize;
    (0..=order)
        .map(|j| counts[j] - if j >= d { counts[j - d] } else { 0 })
        .collect()
}

/// `(1 + t^n + ... + t^{n(m-1)}) / ((1-t)^2 (1 - t^{nm-1}))`.
pub fn two_negative_series(n: u64, m: u64, order: usize) -> Vec<i128> {
    let mut num = vec![0i128; order + 1];
    for i in 0..m {
        let e = (n * i) as usize;
        if e <= order {
            num[e] += 1;
        }
    }
    let mut s = num;
    for w in [1usize, 1, (n * m - 1) as usize] {
        for i in w..=order {
            s[i] += s[i - w];
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertCheck {
    pub order: usize,
    pub closed_form: Vec<i128>,
    pub other: Vec<i128>,
    pub equal: bool,
    pub first_mismatch: Option<usize>,
}

fn compare(order: usize, closed_form: Vec<i128>, other: Vec<i128>) -> HilbertCheck {
    let first_mismatch = closed_form.iter().zip(&other).position(|(a, b)| a != b);
    HilbertCheck {
        order,
        equal: first_mismatch.is_none(),
        closed_form,
        other,
        first_mismatch,
    }
}

/// Closed form against the graded dimensions of a hypersurface cut out by
/// one equation of degree `numerator_degrees[0]` (or the plain monomial
/// count when there is no equation).
pub fn hilbert_series_check(
    weights: &[u64],
    numerator_degrees: &[u64],
    order: usize,
) -> HilbertCheck {
    let closed = rational_series(numerator_degrees, weights, order);
    let other = match numerator_degrees {
        [] => monomial_counts(weights, order),
        [d] => hypersurface_dimensions(weights, *d, order),
        more => {
            // Complete intersection of independent equations: peel one at a time.
            let mut s = monomial_counts(weights, order);
            for &d in more {
                let d = d as usize;
                for i in (d..=order).rev() {
                    s[i] -= s[i - d];
                }
            }
            s
        }
    };
    compare(order, closed, other)
}

/// The degree `nm` hypersurface in `P(1,1,n,nm-1)` against the two-term
/// expression for `S_{n,m}^0`.
pub fn two_negative_check(n: u64, m: u64, order: usize) -> HilbertCheck {
    let closed = rational_series(&[n * m], &[1, 1, n, n * m - 1], order);
    compare(order, closed, two_negative_series(n, m, order))
}
