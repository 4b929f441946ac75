//! Zariski decompositions and the chamber walk of `P - tE`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{solve_linear, ClassVector, SurfaceModel};
use crate::rational::{self, qi, sqrt_exact, Rational};

const MAX_ROUNDS: usize = 10_000;

/// `c0 + c1 t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub c0: Rational,
    pub c1: Rational,
}

impl Affine {
    pub fn new(c0: Rational, c1: Rational) -> Self {
        Affine { c0, c1 }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        &self.c0 + &self.c1 * t
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// `(value, slope)` at `t`, compared lexicographically.
    fn germ(&self, t: &Rational) -> (Rational, Rational) {
        (self.eval(t), self.c1.clone())
    }

    /// Product as quadratic coefficients.
    pub fn mul(&self, other: &Affine) -> [Rational; 3] {
        [
            &self.c0 * &other.c0,
            &self.c0 * &other.c1 + &self.c1 * &other.c0,
            &self.c1 * &other.c1,
        ]
    }
}

impl Serialize for Affine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [rational::format(&self.c0), rational::format(&self.c1)].serialize(s)
    }
}

/// `D = P + N` with `N` given by curve coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: ClassVector,
    pub negative: BTreeMap<String, Rational>,
}

fn candidates(model: &SurfaceModel) -> Vec<&str> {
    model
        .curves()
        .iter()
        .filter(|c| c.is_irreducible)
        .map(|c| c.label.as_str())
        .collect()
}

/// Solves `P = D + sum c_i C_i` with `P . C_j = 0`; returns `P` and the
/// negative part coefficients `-c_i`.
fn project(
    model: &SurfaceModel,
    d: &ClassVector,
    support: &[&str],
) -> Result<(ClassVector, Vec<Rational>)> {
    if support.is_empty() {
        return Ok((d.clone(), Vec::new()));
    }
    if !model.is_negative_definite(support)? {
        return Err(Error::NotPseudoeffective);
    }
    let gram = model.gram(support)?;
    let rhs = support
        .iter()
        .map(|c| Ok(-model.pair(d, model.class_of(c)?)?))
        .collect::<Result<Vec<_>>>()?;
    let c = solve_linear(&gram, &rhs).ok_or(Error::NotPseudoeffective)?;
    let mut p = d.clone();
    for (ci, label) in c.iter().zip(support) {
        p = p.add_scaled(ci, model.class_of(label)?);
    }
    Ok((p, c.into_iter().map(|x| -x).collect()))
}

fn finish(
    model: &SurfaceModel,
    d: &ClassVector,
    support: Vec<&str>,
) -> Result<ZariskiDecomposition> {
    let (p, n) = project(model, d, &support)?;
    if n.iter().any(Signed::is_negative) {
        return Err(Error::NotPseudoeffective);
    }
    if model.pair(&p, &p)?.is_negative() {
        return Err(Error::NotPseudoeffective);
    }
    if let Ok(h) = model.anticanonical_pullback() {
        if model.pair(&h, &h)?.is_positive() && model.pair(&p, &h)?.is_negative() {
            return Err(Error::NotPseudoeffective);
        }
    }
    Ok(ZariskiDecomposition {
        positive: p,
        negative: support
            .into_iter()
            .zip(n)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l.to_string(), c))
            .collect(),
    })
}

/// Zariski decomposition over the tracked curves, adding every curve with
/// `P . C < 0` at each round.
pub fn zariski_decompose(model: &SurfaceModel, d: &ClassVector) -> Result<ZariskiDecomposition> {
    let all = candidates(model);
    let mut support: Vec<&str> = Vec::new();
    for _ in 0..MAX_ROUNDS {
        let (p, _) = project(model, d, &support)?;
        let mut grew = false;
        for c in &all {
            if !support.contains(c) && model.pair(&p, model.class_of(c)?)?.is_negative() {
                support.push(c);
                grew = true;
            }
        }
        if !grew {
            return finish(model, d, support);
        }
    }
    Err(Error::PseudoeffectiveDataIncomplete(
        "support did not stabilize".into(),
    ))
}

/// As [`zariski_decompose`], but adds one curve per round, the first in
/// `order` with `P . C < 0`.
pub fn zariski_decompose_ordered(
    model: &SurfaceModel,
    d: &ClassVector,
    order: &[&str],
) -> Result<ZariskiDecomposition> {
    let mut support: Vec<&str> = Vec::new();
    for _ in 0..MAX_ROUNDS {
        let (p, _) = project(model, d, &support)?;
        let mut next = None;
        for c in order {
            if !support.contains(c) && model.pair(&p, model.class_of(c)?)?.is_negative() {
                next = Some(*c);
                break;
            }
        }
        match next {
            Some(c) => support.push(c),
            None => return finish(model, d, support),
        }
    }
    Err(Error::PseudoeffectiveDataIncomplete(
        "support did not stabilize".into(),
    ))
}

/// One chamber `[t_lo, t_hi]` with constant negative support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiSegment {
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub negative_support: BTreeSet<String>,
    /// Coefficient of each support curve in `N(t)`.
    pub coefficients: BTreeMap<String, Affine>,
    /// `P(t) = p0 + t p1`.
    pub p0: ClassVector,
    pub p1: ClassVector,
}

impl ZariskiSegment {
    pub fn positive_at(&self, t: &Rational) -> ClassVector {
        self.p0.add_scaled(t, &self.p1)
    }

    /// `P(t) . v` as an affine function.
    pub fn pair_affine(&self, model: &SurfaceModel, v: &ClassVector) -> Result<Affine> {
        Ok(Affine::new(
            model.pair(&self.p0, v)?,
            model.pair(&self.p1, v)?,
        ))
    }

    /// `P(t)^2` as quadratic coefficients.
    pub fn volume_coefficients(&self, model: &SurfaceModel) -> Result<[Rational; 3]> {
        let a = model.pair(&self.p0, &self.p0)?;
        let b = model.pair(&self.p0, &self.p1)? * qi(2);
        let c = model.pair(&self.p1, &self.p1)?;
        Ok([a, b, c])
    }

    pub fn coefficient(&self, curve: &str) -> Affine {
        self.coefficients.get(curve).cloned().unwrap_or_default()
    }
}

/// The chamber decomposition of `start - tE` on `[0, tau]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiPath {
    pub model: SurfaceModel,
    pub flag: String,
    pub start: ClassVector,
    pub segments: Vec<ZariskiSegment>,
    pub tau: Rational,
}

impl ZariskiPath {
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.segments.iter().map(|s| s.t_lo.clone()).collect();
        out.push(self.tau.clone());
        out
    }

    pub fn segment_at(&self, t: &Rational) -> Option<&ZariskiSegment> {
        self.segments.iter().find(|s| &s.t_lo <= t && t <= &s.t_hi)
    }

    pub fn flag_class(&self) -> Result<&ClassVector> {
        self.model.class_of(&self.flag)
    }
}

/// Chamber walk of `pullback(-K) - tE` for the flag curve `E`.
pub fn zariski_path(model: &SurfaceModel, flag: &str) -> Result<ZariskiPath> {
    let start = model.anticanonical_pullback()?;
    zariski_path_from(model, flag, &start)
}

/// Chamber walk of `start - tE`.
pub fn zariski_path_from(
    model: &SurfaceModel,
    flag: &str,
    start: &ClassVector,
) -> Result<ZariskiPath> {
    let e = model.class_of(flag)?.clone();
    let all = candidates(model);
    let mut support: Vec<&str> = Vec::new();
    let mut t0 = Rational::zero();
    let mut segments = Vec::new();

    for _ in 0..MAX_ROUNDS {
        // Grow the support at t0+ until no tracked curve goes negative.
        let (p0, p1, n_aff) = loop {
            let (p0, n0) = project(model, start, &support)?;
            let (p1, n1) = project_direction(model, &e, &support)?;
            let mut added = false;
            for c in &all {
                if support.contains(c) {
                    continue;
                }
                let cls = model.class_of(c)?;
                let f = Affine::new(model.pair(&p0, cls)?, model.pair(&p1, cls)?);
                if f.germ(&t0) < (Rational::zero(), Rational::zero()) {
                    support.push(c);
                    added = true;
                }
            }
            if !added {
                let n_aff: Vec<Affine> = n0
                    .into_iter()
                    .zip(n1)
                    .map(|(a, b)| Affine::new(a, b))
                    .collect();
                break (p0, p1, n_aff);
            }
        };
        if n_aff
            .iter()
            .any(|a| a.germ(&t0) < (Rational::zero(), Rational::zero()))
        {
            return Err(Error::NotPseudoeffective);
        }

        let seg_template = ZariskiSegment {
            t_lo: t0.clone(),
            t_hi: t0.clone(),
            negative_support: support.iter().map(|s| s.to_string()).collect(),
            coefficients: support.iter().map(|s| s.to_string()).zip(n_aff).collect(),
            p0,
            p1,
        };
        let vol = seg_template.volume_coefficients(model)?;

        let mut next_break: Option<Rational> = None;
        for c in &all {
            if support.contains(c) {
                continue;
            }
            let f = seg_template.pair_affine(model, model.class_of(c)?)?;
            if f.c1.is_negative() {
                let root = -&f.c0 / &f.c1;
                if root > t0 && next_break.as_ref().is_none_or(|b| &root < b) {
                    next_break = Some(root);
                }
            }
        }

        // The volume is positive up to the next breakpoint unless it vanishes there.
        let vol_root = match &next_break {
            Some(b) if PiecewiseQuadratic::poly(&vol, b).is_positive() => None,
            _ => smallest_root_from(&vol, &t0)?,
        };
        match (vol_root, next_break) {
            (Some(tau), b) if b.as_ref().is_none_or(|b| &tau <= b) => {
                if tau > t0 || segments.is_empty() {
                    let mut seg = seg_template;
                    seg.t_hi = tau.clone();
                    segments.push(seg);
                }
                return Ok(ZariskiPath {
                    model: model.clone(),
                    flag: flag.to_string(),
                    start: start.clone(),
                    segments,
                    tau,
                });
            }
            (_, Some(b)) => {
                let mut seg = seg_template;
                seg.t_hi = b.clone();
                segments.push(seg);
                t0 = b;
            }
            (_, None) => {
                return Err(Error::PseudoeffectiveDataIncomplete(format!(
                    "volume has no root after t = {} and no tracked curve bounds the chamber",
                    rational::format(&t0)
                )))
            }
        }
    }
    Err(Error::PseudoeffectiveDataIncomplete(
        "too many chambers".into(),
    ))
}

/// Linear part of the projection: `P1 = -E + sum c_i C_i`, `P1 . C_j = 0`.
fn project_direction(
    model: &SurfaceModel,
    e: &ClassVector,
    support: &[&str],
) -> Result<(ClassVector, Vec<Rational>)> {
    project(model, &-e, support)
}

/// Smallest root `>= t0` of `c0 + c1 t + c2 t^2`; `t0` itself when the
/// polynomial vanishes identically.
fn smallest_root_from(c: &[Rational; 3], t0: &Rational) -> Result<Option<Rational>> {
    let [a, b, q2] = c;
    if a.is_zero() && b.is_zero() && q2.is_zero() {
        return Ok(Some(t0.clone()));
    }
    let mut roots = Vec::new();
    if q2.is_zero() {
        if !b.is_zero() {
            roots.push(-a / b);
        }
    } else {
        let disc = b * b - qi(4) * a * q2;
        if disc.is_negative() {
            return Ok(None);
        }
        let s = sqrt_exact(&disc).ok_or_else(|| {
            Error::PseudoeffectiveDataIncomplete(format!(
                "volume root is irrational (discriminant {})",
                rational::format(&disc)
            ))
        })?;
        let two_a = qi(2) * q2;
        roots.push((-b - &s) / &two_a);
        roots.push((-b + &s) / &two_a);
    }
    Ok(roots.into_iter().filter(|r| r >= t0).min())
}

/// Piecewise quadratic `c0 + c1 t + c2 t^2` on consecutive intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseQuadratic {
    pub breakpoints: Vec<Rational>,
    pub segments: Vec<[Rational; 3]>,
}

impl PiecewiseQuadratic {
    pub fn new(breakpoints: Vec<Rational>, segments: Vec<[Rational; 3]>) -> Result<Self> {
        if breakpoints.len() != segments.len() + 1 {
            return Err(Error::DimensionMismatch {
                expected: segments.len() + 1,
                found: breakpoints.len(),
            });
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) && segments.len() > 1 {
            return Err(Error::OutOfDomain("breakpoints not increasing".into()));
        }
        Ok(PiecewiseQuadratic {
            breakpoints,
            segments,
        })
    }

    pub fn zero(a: Rational, b: Rational) -> Self {
        PiecewiseQuadratic {
            breakpoints: vec![a, b],
            segments: vec![[Rational::zero(), Rational::zero(), Rational::zero()]],
        }
    }

    pub fn domain(&self) -> (&Rational, &Rational) {
        (
            &self.breakpoints[0],
            &self.breakpoints[self.breakpoints.len() - 1],
        )
    }

    fn poly(c: &[Rational; 3], t: &Rational) -> Rational {
        &c[0] + t * (&c[1] + t * &c[2])
    }

    fn antiderivative(c: &[Rational; 3], t: &Rational) -> Rational {
        t * (&c[0] + t * (&c[1] / qi(2) + t * &c[2] / qi(3)))
    }

    /// Value at `t`; at a shared breakpoint the left segment is used.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if t < lo || t > hi {
            return Err(Error::OutOfDomain(format!("t = {}", rational::format(t))));
        }
        let i = self
            .breakpoints
            .windows(2)
            .position(|w| t <= &w[1])
            .unwrap_or(self.segments.len() - 1);
        Ok(Self::poly(&self.segments[i], t))
    }

    /// Limits from the left and right at every interior breakpoint.
    pub fn jumps(&self) -> Vec<(Rational, Rational, Rational)> {
        (1..self.segments.len())
            .map(|i| {
                let t = &self.breakpoints[i];
                (
                    t.clone(),
                    Self::poly(&self.segments[i - 1], t),
                    Self::poly(&self.segments[i], t),
                )
            })
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        self.jumps().iter().all(|(_, l, r)| l == r)
    }

    /// Exact integral over `[a, b]`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if a > b || a < lo || b > hi {
            return Err(Error::OutOfDomain(format!(
                "interval [{}, {}]",
                rational::format(a),
                rational::format(b)
            )));
        }
        let mut total = Rational::zero();
        for (w, c) in self.breakpoints.windows(2).zip(&self.segments) {
            let from = if &w[0] > a { &w[0] } else { a };
            let to = if &w[1] < b { &w[1] } else { b };
            if from < to {
                total += Self::antiderivative(c, to) - Self::antiderivative(c, from);
            }
        }
        Ok(total)
    }

    pub fn integrate_all(&self) -> Rational {
        let (lo, hi) = self.domain();
        self.integrate(&lo.clone(), &hi.clone())
            .expect("own domain")
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        PiecewiseQuadratic {
            breakpoints: self.breakpoints.clone(),
            segments: self
                .segments
                .iter()
                .map(|[a, b, c]| [a * factor, b * factor, c * factor])
                .collect(),
        }
    }
}

impl Serialize for PiecewiseQuadratic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pieces: Vec<serde_json::Value> = self
            .breakpoints
            .windows(2)
            .zip(&self.segments)
            .map(|(w, c)| {
                serde_json::json!({
                    "interval": [rational::format(&w[0]), rational::format(&w[1])],
                    "coefficients": c.iter().map(rational::format).collect::<Vec<_>>(),
                })
            })
            .collect();
        pieces.serialize(s)
    }
}

/// `vol(t) = P(t)^2` on `[0, tau]`.
pub fn volume_function(path: &ZariskiPath) -> Result<PiecewiseQuadratic> {
    let segments = path
        .segments
        .iter()
        .map(|s| s.volume_coefficients(&path.model))
        .collect::<Result<Vec<_>>>()?;
    PiecewiseQuadratic::new(path.breakpoints(), segments)
}

/// `P(t) . E` on `[0, tau]`, per segment.
pub fn flag_degree_profile(path: &ZariskiPath) -> Result<Vec<Affine>> {
    let e = path.flag_class()?;
    path.segments
        .iter()
        .map(|s| s.pair_affine(&path.model, e))
        .collect()
}

/// Checks the path invariants at every breakpoint; returns the first failure.
pub fn check_path(path: &ZariskiPath) -> std::result::Result<(), String> {
    let m = &path.model;
    for seg in &path.segments {
        let support: Vec<&str> = seg.negative_support.iter().map(String::as_str).collect();
        if !support.is_empty()
            && !m
                .is_negative_definite(&support)
                .map_err(|e| e.to_string())?
        {
            return Err(format!("support {support:?} not negative definite"));
        }
        for t in [&seg.t_lo, &seg.t_hi] {
            let p = seg.positive_at(t);
            for c in m.curves() {
                let x = m.pair(&p, &c.class).map_err(|e| e.to_string())?;
                if x.is_negative() {
                    return Err(format!("P({})·{} < 0", rational::format(t), c.label));
                }
                if seg.negative_support.contains(&c.label) && !x.is_zero() {
                    return Err(format!(
                        "P({})·{} != 0 on support",
                        rational::format(t),
                        c.label
                    ));
                }
            }
            for (c, a) in &seg.coefficients {
                if a.eval(t).is_negative() {
                    return Err(format!("negative coefficient of {c}"));
                }
            }
        }
    }
    let vol = volume_function(path).map_err(|e| e.to_string())?;
    if !vol.is_continuous() {
        return Err("volume is discontinuous".into());
    }
    if !vol.eval(&path.tau).map_err(|e| e.to_string())?.is_zero() {
        return Err("volume does not vanish at tau".into());
    }
    let bps = path.breakpoints();
    for w in bps.windows(2) {
        if vol.eval(&w[1]).map_err(|e| e.to_string())?
            > vol.eval(&w[0]).map_err(|e| e.to_string())?
        {
            return Err("volume increases".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn integrate_matches_hand_values() {
        let f = PiecewiseQuadratic::new(
            vec![qi(0), q(3, 10), q(4, 5)],
            vec![[q(2, 5), qi(0), q(-5, 3)], [q(16, 25), q(-8, 5), qi(1)]],
        )
        .unwrap();
        assert!(f.is_continuous());
        assert_eq!(f.integrate(&qi(0), &q(3, 10)).unwrap(), q(21, 200));
        assert_eq!(f.integrate(&q(3, 10), &q(4, 5)).unwrap(), q(1, 24));
        assert!(f.integrate(&qi(0), &qi(1)).is_err());
        assert_eq!(
            PiecewiseQuadratic::zero(qi(0), qi(1)).integrate_all(),
            qi(0)
        );
    }

    #[test]
    fn roots() {
        // (4/5 - t)^2
        let c = [q(16, 25), q(-8, 5), qi(1)];
        assert_eq!(smallest_root_from(&c, &q(3, 10)).unwrap(), Some(q(4, 5)));
        let zero = [qi(0), qi(0), qi(0)];
        assert_eq!(smallest_root_from(&zero, &q(1, 2)).unwrap(), Some(q(1, 2)));
        assert!(smallest_root_from(&[qi(2), qi(0), qi(-1)], &qi(0)).is_err());
    }
}
