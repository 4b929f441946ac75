//! K-stability invariants on top of Zariski paths: `A`, `S`, `beta`,
//! restricted profiles, `S(W; q)`, the flag lower bound for `delta`, the
//! normalized volume screen and alpha-delta arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SurfaceModel;
use crate::rational::{self, qi, Rational};
use crate::zariski::{
    flag_degree_profile, volume_function, zariski_path, Affine, PiecewiseQuadratic, ZariskiPath,
};

/// Local intersection `(C . E)_q`, known exactly or only bounded above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalMultiplicity {
    Exact(#[serde(with = "rational::serde_str")] Rational),
    UpperBound(#[serde(with = "rational::serde_str")] Rational),
}

impl LocalMultiplicity {
    pub fn value(&self) -> &Rational {
        match self {
            LocalMultiplicity::Exact(v) | LocalMultiplicity::UpperBound(v) => v,
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, LocalMultiplicity::UpperBound(_))
    }
}

/// A point on a flag curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagPointSpec {
    pub label: String,
    pub flag_curve: String,
    #[serde(default)]
    pub local_multiplicities: BTreeMap<String, LocalMultiplicity>,
    /// `A_{E,Phi}(q)`; 1 when absent.
    #[serde(
        default,
        rename = "log_discrepancy_on_flag",
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub log_discrepancy: Option<Rational>,
    /// Residual singular point the flag point lies over, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub on_singularity: Option<String>,
    #[serde(default)]
    pub is_generic: bool,
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rational::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&crate::rational::format(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| crate::rational::parse(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl FlagPointSpec {
    pub fn generic(flag: &str) -> Self {
        FlagPointSpec {
            label: "generic".into(),
            flag_curve: flag.to_string(),
            local_multiplicities: BTreeMap::new(),
            log_discrepancy: None,
            on_singularity: None,
            is_generic: true,
        }
    }

    pub fn exact(label: &str, flag: &str, curves: &[(&str, i64)]) -> Self {
        Self::with(label, flag, curves, LocalMultiplicity::Exact)
    }

    pub fn bounded(label: &str, flag: &str, curves: &[(&str, i64)]) -> Self {
        Self::with(label, flag, curves, LocalMultiplicity::UpperBound)
    }

    fn with(
        label: &str,
        flag: &str,
        curves: &[(&str, i64)],
        kind: fn(Rational) -> LocalMultiplicity,
    ) -> Self {
        FlagPointSpec {
            label: label.to_string(),
            flag_curve: flag.to_string(),
            local_multiplicities: curves
                .iter()
                .map(|(c, m)| (c.to_string(), kind(qi(*m))))
                .collect(),
            log_discrepancy: None,
            on_singularity: None,
            is_generic: false,
        }
    }

    pub fn log_discrepancy_on_flag(&self) -> Rational {
        self.log_discrepancy.clone().unwrap_or_else(Rational::one)
    }

    pub fn uses_bounds(&self) -> bool {
        self.local_multiplicities
            .values()
            .any(LocalMultiplicity::is_bound)
    }

    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        let bad = |reason: String| Error::InvalidFlagPoint {
            label: self.label.clone(),
            reason,
        };
        let e = model.class_of(&self.flag_curve)?;
        if self.is_generic && !self.local_multiplicities.is_empty() {
            return Err(bad("a generic point lies on no other tracked curve".into()));
        }
        if let Some(a) = &self.log_discrepancy {
            if !a.is_positive() || a > &Rational::one() {
                return Err(bad(format!(
                    "log discrepancy {} outside (0, 1]",
                    rational::format(a)
                )));
            }
        }
        if self.on_singularity.is_some() && self.log_discrepancy.is_none() {
            return Err(bad(
                "points over a singularity need an explicit log discrepancy".into(),
            ));
        }
        for (c, m) in &self.local_multiplicities {
            if c == &self.flag_curve {
                return Err(bad(
                    "the flag curve cannot carry a local multiplicity".into()
                ));
            }
            let total = model.pair(model.class_of(c)?, e)?;
            if m.value().is_negative() || m.value() > &total {
                return Err(bad(format!(
                    "local multiplicity {} on `{c}` exceeds {c}·{} = {}",
                    rational::format(m.value()),
                    self.flag_curve,
                    rational::format(&total)
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn rename_curve(&mut self, from: &str, to: &str) {
        if self.flag_curve == from {
            self.flag_curve = to.to_string();
        }
        if let Some(m) = self.local_multiplicities.remove(from) {
            self.local_multiplicities.insert(to.to_string(), m);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointMode {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Exact,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "delta_gt_1")]
    DeltaGt1,
    #[serde(rename = "delta_eq_1")]
    DeltaEq1,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::DeltaGt1 => "delta_gt_1",
            Verdict::DeltaEq1 => "delta_eq_1",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// `S(E) = (1/vol) int_0^tau vol(t) dt`.
pub fn s_invariant(path: &ZariskiPath) -> Result<Rational> {
    let vol = volume_function(path)?;
    let v0 = vol.eval(&Rational::zero())?;
    if !v0.is_positive() {
        return Err(Error::NotPseudoeffective);
    }
    Ok(vol.integrate(&Rational::zero(), &path.tau)? / v0)
}

/// `A(E) - S(E)` for the flag's chamber walk from `-K`.
pub fn beta(model: &SurfaceModel, flag: &str) -> Result<Rational> {
    let path = zariski_path(model, flag)?;
    Ok(model.log_discrepancy(flag)? - s_invariant(&path)?)
}

/// `h(t)` for a point and whether a bound entered it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedProfile {
    pub h: PiecewiseQuadratic,
    pub mode: PointMode,
}

/// `h(t) = (P.E) * sum_C coeff_N(C) (C.E)_q + (P.E)^2 / 2`, per chamber.
pub fn restricted_profile(path: &ZariskiPath, q: &FlagPointSpec) -> Result<RestrictedProfile> {
    if q.flag_curve != path.flag {
        return Err(Error::InvalidFlagPoint {
            label: q.label.clone(),
            reason: format!(
                "lies on `{}`, not on the flag `{}`",
                q.flag_curve, path.flag
            ),
        });
    }
    let pe = flag_degree_profile(path)?;
    let half = Rational::new(1.into(), 2.into());
    let mut mode = PointMode::Exact;
    let mut segments = Vec::with_capacity(path.segments.len());
    for (seg, pe) in path.segments.iter().zip(&pe) {
        let mut local = Affine::default();
        for (c, m) in &q.local_multiplicities {
            let coeff = seg.coefficient(c);
            if coeff.is_zero() {
                continue;
            }
            if m.is_bound() && !m.value().is_zero() {
                mode = PointMode::UpperBound;
            }
            local = Affine::new(
                &local.c0 + &coeff.c0 * m.value(),
                &local.c1 + &coeff.c1 * m.value(),
            );
        }
        let a = pe.mul(&local);
        let b = pe.mul(pe);
        segments.push([
            &a[0] + &b[0] * &half,
            &a[1] + &b[1] * &half,
            &a[2] + &b[2] * &half,
        ]);
    }
    Ok(RestrictedProfile {
        h: PiecewiseQuadratic::new(path.breakpoints(), segments)?,
        mode,
    })
}

/// `S(W; q) = (2/vol) int_0^tau h(t) dt`.
pub fn s_w(path: &ZariskiPath, q: &FlagPointSpec) -> Result<(Rational, PointMode)> {
    let profile = restricted_profile(path, q)?;
    let v0 = volume_function(path)?.eval(&Rational::zero())?;
    if !v0.is_positive() {
        return Err(Error::NotPseudoeffective);
    }
    let integral = profile.h.integrate(&Rational::zero(), &path.tau)?;
    Ok((qi(2) * integral / v0, profile.mode))
}

/// One row of a [`DeltaReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointEntry {
    pub point: String,
    #[serde(rename = "S_W", with = "rational::serde_str")]
    pub s_w: Rational,
    pub mode: PointMode,
    #[serde(rename = "A_q", with = "rational::serde_str")]
    pub a_q: Rational,
    #[serde(with = "rational::serde_str")]
    pub quotient: Rational,
}

/// The flag lower bound for `delta_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub flag: String,
    #[serde(rename = "A", with = "rational::serde_str")]
    pub a: Rational,
    #[serde(rename = "S", with = "rational::serde_str")]
    pub s: Rational,
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    #[serde(rename = "A/S", with = "rational::serde_str")]
    pub ratio: Rational,
    pub points: Vec<PointEntry>,
    #[serde(with = "rational::serde_str")]
    pub delta_lower_bound: Rational,
    pub bound_mode: BoundMode,
    pub verdict: Verdict,
}

impl DeltaReport {
    pub fn point(&self, label: &str) -> Option<&PointEntry> {
        self.points.iter().find(|p| p.point == label)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

/// Assembles `A/S` and every `A_q / S(W; q)` for the declared points.
pub fn delta_lower_bound(
    model: &SurfaceModel,
    flag: &str,
    points: &[FlagPointSpec],
) -> Result<DeltaReport> {
    let path = zariski_path(model, flag)?;
    delta_report_for_path(&path, points)
}

pub fn delta_report_for_path(path: &ZariskiPath, points: &[FlagPointSpec]) -> Result<DeltaReport> {
    let model = &path.model;
    let flag = path.flag.as_str();
    if !points.iter().any(|p| p.is_generic && p.flag_curve == flag) {
        return Err(Error::MissingGenericPoint(flag.to_string()));
    }
    for p in points {
        p.validate(model)?;
    }
    let a = model.log_discrepancy(flag)?;
    let s = s_invariant(path)?;
    let ratio = &a / &s;

    let mut entries = points
        .par_iter()
        .map(|p| {
            let (value, mode) = s_w(path, p)?;
            if !value.is_positive() {
                return Err(Error::OutOfDomain(format!(
                    "S(W) of `{}` is not positive",
                    p.label
                )));
            }
            let a_q = p.log_discrepancy_on_flag();
            Ok(PointEntry {
                point: p.label.clone(),
                quotient: &a_q / &value,
                s_w: value,
                mode,
                a_q,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|x, y| x.point.cmp(&y.point));

    let mut bound = ratio.clone();
    for e in &entries {
        if e.quotient < bound {
            bound = e.quotient.clone();
        }
    }
    let bound_mode = if entries.iter().any(|e| e.mode == PointMode::UpperBound) {
        BoundMode::LowerBound
    } else {
        BoundMode::Exact
    };
    let one = Rational::one();
    let exact_binding = ratio == bound
        || entries
            .iter()
            .any(|e| e.mode == PointMode::Exact && e.quotient == bound);
    let verdict = if bound > one {
        Verdict::DeltaGt1
    } else if bound == one && exact_binding {
        Verdict::DeltaEq1
    } else {
        Verdict::Inconclusive
    };
    Ok(DeltaReport {
        flag: flag.to_string(),
        a,
        s,
        tau: path.tau.clone(),
        ratio,
        points: entries,
        delta_lower_bound: bound,
        bound_mode,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiuVerdict {
    ExcludedUnstable,
    Passes,
}

impl fmt::Display for LiuVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiuVerdict::ExcludedUnstable => "excluded_unstable",
            LiuVerdict::Passes => "passes",
        })
    }
}

/// Surface case of the local volume bound `(-K)^2 <= 9/|G|`.
pub fn liu_test(volume: &Rational, group_order: u64) -> LiuVerdict {
    if volume > &Rational::new(9.into(), group_order.max(1).into()) {
        LiuVerdict::ExcludedUnstable
    } else {
        LiuVerdict::Passes
    }
}

/// `((dim+1)/dim * alpha, (dim+1) * alpha)`.
pub fn alpha_delta_bounds(alpha: &Rational, dim: u64) -> (Rational, Rational) {
    let d = dim.max(1) as i64;
    let lower = alpha * Rational::new((d + 1).into(), d.into());
    let upper = alpha * qi(d + 1);
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn liu_boundaries() {
        assert_eq!(liu_test(&q(15, 7), 7), LiuVerdict::ExcludedUnstable);
        assert_eq!(liu_test(&qi(1), 9), LiuVerdict::Passes);
        assert_eq!(liu_test(&qi(9), 1), LiuVerdict::Passes);
    }

    #[test]
    fn alpha_delta_arithmetic() {
        assert_eq!(alpha_delta_bounds(&q(3, 4), 2), (q(9, 8), q(9, 4)));
        assert_eq!(alpha_delta_bounds(&q(2, 3), 2), (qi(1), qi(2)));
        assert_eq!(alpha_delta_bounds(&qi(1), 3), (q(4, 3), qi(4)));
    }

    #[test]
    fn local_multiplicity_json() {
        let m = LocalMultiplicity::UpperBound(qi(7));
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"upper_bound":"7"}"#);
        let back: LocalMultiplicity = serde_json::from_str(r#"{"exact":"2/2"}"#).unwrap();
        assert_eq!(back, LocalMultiplicity::Exact(qi(1)));
    }
}
