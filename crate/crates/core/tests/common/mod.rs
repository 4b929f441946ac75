//! Floating-point re-evaluation of chamber data, independent of the exact
//! chamber walk: Zariski decompositions are recomputed pointwise in `f64` by
//! Fujita's support-growing iteration and integrated by adaptive Simpson.

#![allow(dead_code)]

use std::collections::BTreeMap;

use kdelta::rational::to_f64;
use kdelta::SurfaceModel;

const EPS: f64 = 1e-11;

pub struct FloatModel {
    form: Vec<Vec<f64>>,
    curves: Vec<(String, Vec<f64>)>,
    start: Vec<f64>,
}

fn dot(form: &[Vec<f64>], u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0.0 {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            s += ui * form[i][j] * vj;
        }
    }
    s
}

/// Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Negative definiteness by Cholesky on the negated matrix.
pub fn negative_definite(g: &[Vec<f64>]) -> bool {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            let a = -g[i][j];
            if i == j {
                let d = a - s;
                if d <= 1e-12 {
                    return false;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a - s) / l[j][j];
            }
        }
    }
    true
}

pub struct FloatDecomposition {
    pub positive: Vec<f64>,
    pub negative: BTreeMap<String, f64>,
}

impl FloatModel {
    /// Reads the form and tracked curves; the start class is `-K` made
    /// orthogonal to the contracted curves by a float solve.
    pub fn new(model: &SurfaceModel) -> Self {
        let form: Vec<Vec<f64>> = model
            .form()
            .rows()
            .iter()
            .map(|r| r.iter().map(to_f64).collect())
            .collect();
        let class = |label: &str| -> Vec<f64> {
            model
                .class_of(label)
                .unwrap()
                .coefficients()
                .iter()
                .map(to_f64)
                .collect()
        };
        let curves = model
            .curves()
            .iter()
            .filter(|c| c.is_irreducible)
            .map(|c| (c.label.clone(), class(&c.label)))
            .collect();
        let mut start: Vec<f64> = model
            .anticanonical()
            .coefficients()
            .iter()
            .map(to_f64)
            .collect();
        let contracted: Vec<Vec<f64>> = model.contracted().iter().map(|c| class(c)).collect();
        if !contracted.is_empty() {
            let g: Vec<Vec<f64>> = contracted
                .iter()
                .map(|a| contracted.iter().map(|b| dot(&form, a, b)).collect())
                .collect();
            let rhs: Vec<f64> = contracted.iter().map(|c| -dot(&form, &start, c)).collect();
            let x = solve(g, rhs).expect("contracted curves have invertible Gram matrix");
            for (xi, c) in x.iter().zip(&contracted) {
                for (s, ci) in start.iter_mut().zip(c) {
                    *s += xi * ci;
                }
            }
        }
        FloatModel {
            form,
            curves,
            start,
        }
    }

    pub fn pair(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(&self.form, u, v)
    }

    pub fn curve(&self, label: &str) -> &[f64] {
        &self
            .curves
            .iter()
            .find(|(l, _)| l == label)
            .expect("tracked curve")
            .1
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    /// Fujita iteration: add every curve with `P . C < 0`, re-solve, repeat.
    pub fn decompose(&self, d: &[f64]) -> Option<FloatDecomposition> {
        let mut support: Vec<usize> = Vec::new();
        loop {
            let (p, coeffs) = if support.is_empty() {
                (d.to_vec(), Vec::new())
            } else {
                let g: Vec<Vec<f64>> = support
                    .iter()
                    .map(|&i| {
                        support
                            .iter()
                            .map(|&j| self.pair(&self.curves[i].1, &self.curves[j].1))
                            .collect()
                    })
                    .collect();
                if !negative_definite(&g) {
                    return None;
                }
                let rhs: Vec<f64> = support
                    .iter()
                    .map(|&i| self.pair(d, &self.curves[i].1))
                    .collect();
                let x = solve(g, rhs)?;
                let mut p = d.to_vec();
                for (xi, &i) in x.iter().zip(&support) {
                    for (pk, ck) in p.iter_mut().zip(&self.curves[i].1) {
                        *pk -= xi * ck;
                    }
                }
                (p, x)
            };
            let scale = 1.0 + self.pair(d, d).abs();
            let new: Vec<usize> = (0..self.curves.len())
                .filter(|i| !support.contains(i))
                .filter(|&i| self.pair(&p, &self.curves[i].1) < -EPS * scale)
                .collect();
            if new.is_empty() {
                if coeffs.iter().any(|&c| c < -EPS * scale) {
                    return None;
                }
                let h = &self.start;
                if self.pair(&p, h) < -EPS * scale {
                    return None;
                }
                let negative = support
                    .iter()
                    .zip(&coeffs)
                    .map(|(&i, &c)| (self.curves[i].0.clone(), c))
                    .collect();
                return Some(FloatDecomposition {
                    positive: p,
                    negative,
                });
            }
            support.extend(new);
        }
    }

    pub fn ray(&self, flag: &str, t: f64) -> Vec<f64> {
        let e = self.curve(flag);
        self.start.iter().zip(e).map(|(s, ei)| s - t * ei).collect()
    }

    /// `vol(start - tE)`, zero where the class is not big.
    pub fn volume(&self, flag: &str, t: f64) -> f64 {
        match self.decompose(&self.ray(flag, t)) {
            Some(z) => self.pair(&z.positive, &z.positive).max(0.0),
            None => 0.0,
        }
    }

    /// `h(t)` for the given local multiplicities at `q`.
    pub fn restricted(&self, flag: &str, mults: &BTreeMap<String, f64>, t: f64) -> f64 {
        match self.decompose(&self.ray(flag, t)) {
            Some(z) => {
                if self.pair(&z.positive, &z.positive) <= 0.0 {
                    return 0.0;
                }
                let pe = self.pair(&z.positive, self.curve(flag));
                let nq: f64 = z
                    .negative
                    .iter()
                    .map(|(c, a)| a * mults.get(c).copied().unwrap_or(0.0))
                    .sum();
                pe * nq + 0.5 * pe * pe
            }
            None => 0.0,
        }
    }

    /// Pseudoeffective threshold by doubling then bisection on "decomposes
    /// with `P^2 > 0` and `P . H > 0`". At a double root of `vol` the class
    /// `P` changes sign, which `P . H` sees and `P^2` does not.
    pub fn tau(&self, flag: &str) -> f64 {
        let inside = |t: f64| match self.decompose(&self.ray(flag, t)) {
            Some(z) => {
                self.pair(&z.positive, &z.positive) > 0.0
                    && self.pair(&z.positive, &self.start) > 0.0
            }
            None => false,
        };
        let mut lo = 0.0;
        let mut hi = 1.0 / 64.0;
        while inside(hi) {
            lo = hi;
            hi *= 2.0;
            assert!(hi < 1e6, "threshold not found");
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Float `S(E)` and `S(W; q)` for each multiplicity map.
pub fn float_invariants(
    model: &SurfaceModel,
    flag: &str,
    points: &[BTreeMap<String, f64>],
) -> (f64, f64, Vec<f64>) {
    let fm = FloatModel::new(model);
    let tau = fm.tau(flag);
    let v0 = fm.volume(flag, 0.0);
    let s = simpson(|t| fm.volume(flag, t), 0.0, tau, 1e-15) / v0;
    let sw = points
        .iter()
        .map(|m| 2.0 * simpson(|t| fm.restricted(flag, m, t), 0.0, tau, 1e-15) / v0)
        .collect();
    (tau, s, sw)
}

pub fn relative_error(approx: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        approx.abs()
    } else {
        ((approx - exact) / exact).abs()
    }
}
