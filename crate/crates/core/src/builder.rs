//! Surface construction by recipe: seeds, point blow-ups, weighted (1,1)
//! blow-ups of 1/r(1,1) points and chain contractions, with cyclic quotient
//! singularity bookkeeping.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kstab::FlagPointSpec;
use crate::lattice::{ClassVector, Curve, IntersectionForm, SurfaceModel};
use crate::rational::{self, q, qi, Rational};

/// Label of the basis class pulled back from the seed's hyperplane class.
pub const SEED_CLASS: &str = "l";
/// Label of the vertex singularity of a weighted projective plane seed.
pub const SEED_VERTEX: &str = "O";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "origin", rename_all = "snake_case")]
pub enum SingularityOrigin {
    /// A point of the current model itself; `branches` counts the local
    /// branches of each tracked curve through it.
    Ambient { branches: BTreeMap<String, u64> },
    /// Produced by contracting `curves`, possibly swallowing ambient points.
    Contraction {
        curves: Vec<String>,
        absorbed: Vec<String>,
    },
}

/// A cyclic quotient singularity `1/r(1,a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSingularity {
    pub label: String,
    pub r: u64,
    pub a: u64,
    pub group_order: u64,
    pub resolution_chain: Vec<u64>,
    #[serde(flatten)]
    pub origin: SingularityOrigin,
}

impl QuotientSingularity {
    pub fn new(
        label: impl Into<String>,
        r: u64,
        a: u64,
        origin: SingularityOrigin,
    ) -> Result<Self> {
        let resolution_chain = hj_expand(r, a)?;
        Ok(QuotientSingularity {
            label: label.into(),
            r,
            a,
            group_order: r,
            resolution_chain,
            origin,
        })
    }

    pub fn is_type_11(&self) -> bool {
        self.a == 1
    }

    pub fn contracted_curves(&self) -> &[String] {
        match &self.origin {
            SingularityOrigin::Contraction { curves, .. } => curves,
            SingularityOrigin::Ambient { .. } => &[],
        }
    }

    pub fn branches(&self) -> Option<&BTreeMap<String, u64>> {
        match &self.origin {
            SingularityOrigin::Ambient { branches } => Some(branches),
            SingularityOrigin::Contraction { .. } => None,
        }
    }

    /// Labels of the records carrying the point.
    pub fn location(&self) -> Vec<String> {
        match &self.origin {
            SingularityOrigin::Ambient { branches } => branches.keys().cloned().collect(),
            SingularityOrigin::Contraction { curves, .. } => curves.clone(),
        }
    }

    /// The smaller of `a` and its inverse mod `r`; equal for isomorphic types.
    pub fn normalized_a(&self) -> u64 {
        let inv = mod_inverse(self.a, self.r).unwrap_or(self.a);
        self.a.min(inv)
    }

    pub fn is_isomorphic_to(&self, other: &QuotientSingularity) -> bool {
        self.r == other.r && self.normalized_a() == other.normalized_a()
    }

    fn rename_curve(&mut self, from: &str, to: &str) {
        match &mut self.origin {
            SingularityOrigin::Ambient { branches } => {
                if let Some(k) = branches.remove(from) {
                    branches.insert(to.to_string(), k);
                }
            }
            SingularityOrigin::Contraction { curves, .. } => {
                for c in curves.iter_mut().filter(|c| *c == from) {
                    *c = to.to_string();
                }
            }
        }
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain: Vec<String> = self.resolution_chain.iter().map(u64::to_string).collect();
        write!(
            f,
            "{}: 1/{}(1,{}) chain [{}] at {}",
            self.label,
            self.r,
            self.a,
            chain.join(","),
            self.location().join("+")
        )
    }
}

fn mod_inverse(a: u64, r: u64) -> Option<u64> {
    if r == 1 {
        return Some(0);
    }
    let (a, r) = (a as i128, r as i128);
    let e = a.extended_gcd(&r);
    (e.gcd == 1).then(|| e.x.rem_euclid(r) as u64)
}

/// Hirzebruch-Jung expansion `r/a = [a_1, ..., a_k]`.
pub fn hj_expand(r: u64, a: u64) -> Result<Vec<u64>> {
    if a == 0 || a >= r || r.gcd(&a) != 1 {
        return Err(Error::InvalidContinuedFraction(format!(
            "need coprime 0 < a < r, got r={r}, a={a}"
        )));
    }
    let (mut num, mut den) = (r, a);
    let mut chain = Vec::new();
    while den > 0 {
        let ai = num.div_ceil(den);
        chain.push(ai);
        (num, den) = (den, ai * den - num);
    }
    Ok(chain)
}

/// Evaluates `a_1 - 1/(a_2 - 1/(...))` and returns `(r, a)` in lowest terms.
pub fn hj_evaluate(chain: &[u64]) -> Result<(u64, u64)> {
    if chain.is_empty() {
        return Err(Error::InvalidContinuedFraction("empty chain".into()));
    }
    if let Some(bad) = chain.iter().find(|&&c| c < 2) {
        return Err(Error::InvalidContinuedFraction(format!(
            "entry {bad} is smaller than 2"
        )));
    }
    let (mut num, mut den) = (chain[chain.len() - 1] as u128, 1u128);
    for &ai in chain[..chain.len() - 1].iter().rev() {
        (num, den) = (ai as u128 * num - den, num);
    }
    let g = num.gcd(&den);
    Ok(((num / g) as u64, (den / g) as u64))
}

/// A point to blow up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpec {
    /// Also used as the label of the exceptional curve.
    pub label: String,
    /// Curve label to local multiplicity of the curve at the point.
    #[serde(default)]
    pub incidences: BTreeMap<String, u64>,
    #[serde(default)]
    pub is_general: bool,
    /// Set when the point is a recorded singularity; always rejected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_singularity: Option<String>,
}

impl PointSpec {
    pub fn general(label: impl Into<String>) -> Self {
        PointSpec {
            label: label.into(),
            incidences: BTreeMap::new(),
            is_general: true,
            at_singularity: None,
        }
    }

    pub fn on(label: impl Into<String>, incidences: &[(&str, u64)]) -> Self {
        PointSpec {
            label: label.into(),
            incidences: incidences
                .iter()
                .map(|(c, m)| (c.to_string(), *m))
                .collect(),
            is_general: false,
            at_singularity: None,
        }
    }
}

/// One construction step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecipeStep {
    SeedP2,
    SeedWps {
        n: u64,
    },
    DeclareCurve {
        label: String,
        #[serde(with = "rational::serde_map")]
        class: BTreeMap<String, Rational>,
        /// Singularity label to number of local branches through it.
        #[serde(default)]
        through: BTreeMap<String, u64>,
    },
    Rename {
        from: String,
        to: String,
    },
    BlowUp {
        point: PointSpec,
    },
    WeightedBlowUp11 {
        singularity: String,
        exceptional: String,
    },
    Contract {
        curves: Vec<String>,
    },
    DeclareFlagPoint {
        point: FlagPointSpec,
    },
}

/// A recipe as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeFile {
    pub format_version: String,
    pub name: String,
    pub steps: Vec<RecipeStep>,
}

impl RecipeFile {
    pub const FORMAT_VERSION: &'static str = "1";

    pub fn new(name: impl Into<String>, steps: Vec<RecipeStep>) -> Self {
        RecipeFile {
            format_version: Self::FORMAT_VERSION.to_string(),
            name: name.into(),
            steps,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: RecipeFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.format_version != Self::FORMAT_VERSION {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("unsupported format_version `{}`", file.format_version),
            });
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("recipe serialization cannot fail")
    }

    pub fn build(&self) -> Result<SurfaceModel> {
        Ok(apply_recipe(&self.steps)?.with_name(self.name.clone()))
    }
}

/// The weighted projective plane `P(1,1,n)`; `n = 1` is the plane.
pub fn seed_wps(n: u64) -> Result<SurfaceModel> {
    if n == 0 {
        return Err(Error::InvalidStep {
            index: 0,
            reason: "seed_wps needs n >= 1".into(),
        });
    }
    let n_i = n as i64;
    let form = IntersectionForm::new(vec![vec![q(1, n_i)]])?;
    let canonical = ClassVector(vec![qi(-(n_i + 2))]);
    let mut model = SurfaceModel::new(
        format!("P(1,1,{n})"),
        vec![SEED_CLASS.into()],
        form,
        canonical,
    )?;
    if n >= 2 {
        model.singularities.push(QuotientSingularity::new(
            SEED_VERTEX,
            n,
            1,
            SingularityOrigin::Ambient {
                branches: BTreeMap::new(),
            },
        )?);
    }
    Ok(model)
}

pub fn seed_p2() -> SurfaceModel {
    seed_wps(1).expect("n = 1 is valid").with_name("P2")
}

/// Adds a tracked curve, optionally through ambient singular points.
pub fn declare_curve(
    model: &SurfaceModel,
    label: &str,
    class: &BTreeMap<String, Rational>,
    through: &BTreeMap<String, u64>,
) -> Result<SurfaceModel> {
    let mut out = model.clone();
    let class = out.class_from_basis(class)?;
    for (sing, &k) in through {
        let record = out
            .singularities
            .iter_mut()
            .find(|s| &s.label == sing)
            .ok_or_else(|| Error::UnknownSingularity(sing.clone()))?;
        match &mut record.origin {
            SingularityOrigin::Ambient { branches } if k > 0 => {
                branches.insert(label.to_string(), k);
            }
            _ => {
                return Err(Error::InvalidPoint {
                    label: sing.clone(),
                    reason: "curves can only pass through ambient singular points with k >= 1"
                        .into(),
                })
            }
        }
    }
    out.add_curve(Curve {
        label: label.to_string(),
        class,
        is_irreducible: true,
    })?;
    Ok(out)
}

/// Renames a curve everywhere it is referenced.
pub fn rename_curve(model: &SurfaceModel, from: &str, to: &str) -> Result<SurfaceModel> {
    if model.curve(to).is_ok() {
        return Err(Error::DuplicateLabel(to.to_string()));
    }
    let mut out = model.clone();
    out.curve_mut(from)?.label = to.to_string();
    for c in out.contracted.iter_mut().filter(|c| *c == from) {
        *c = to.to_string();
    }
    for s in &mut out.singularities {
        s.rename_curve(from, to);
    }
    for p in &mut out.flag_points {
        p.rename_curve(from, to);
    }
    Ok(out)
}

/// Blows up a smooth point.
pub fn blow_up(model: &SurfaceModel, p: &PointSpec) -> Result<SurfaceModel> {
    let bad = |reason: String| Error::InvalidPoint {
        label: p.label.clone(),
        reason,
    };
    if let Some(s) = &p.at_singularity {
        return Err(bad(format!(
            "point is the singularity `{s}`; use weighted_blow_up_11"
        )));
    }
    if p.is_general && !p.incidences.is_empty() {
        return Err(bad("a general point lies on no tracked curve".into()));
    }
    if !p.is_general && p.incidences.is_empty() {
        return Err(bad("non-general point without incidences".into()));
    }
    for (c, &m) in &p.incidences {
        model.curve(c)?;
        if m == 0 {
            return Err(bad(format!("zero multiplicity on `{c}`")));
        }
        if model.is_contracted(c) {
            return Err(bad(format!("`{c}` is contracted on this model")));
        }
    }
    let mut out = model.clone();
    let idx = out.push_basis(&p.label, qi(-1))?;
    let e = ClassVector::unit(out.dim(), idx);
    out.canonical = out.canonical.add_scaled(&Rational::one(), &e);
    for (c, &m) in &p.incidences {
        let curve = out.curve_mut(c)?;
        curve.class = curve.class.add_scaled(&-qi(m as i64), &e);
    }
    out.add_curve(Curve {
        label: p.label.clone(),
        class: e,
        is_irreducible: true,
    })?;
    Ok(out)
}

/// Weighted (1,1) blow-up of a recorded `1/r(1,1)` point.
pub fn weighted_blow_up_11(
    model: &SurfaceModel,
    singularity: &str,
    exceptional: &str,
) -> Result<SurfaceModel> {
    let record = model.singularity(singularity)?.clone();
    let branches = match &record.origin {
        SingularityOrigin::Ambient { branches } if record.is_type_11() => branches.clone(),
        _ => {
            return Err(Error::UnsupportedWeightedBlowUp {
                label: record.label.clone(),
                r: record.r,
                a: record.a,
            })
        }
    };
    let r = record.r as i64;
    let mut out = model.clone();
    let idx = out.push_basis(exceptional, qi(-r))?;
    let e = ClassVector::unit(out.dim(), idx);
    out.canonical = out.canonical.add_scaled(&(q(2, r) - Rational::one()), &e);
    for (c, &k) in &branches {
        let curve = out.curve_mut(c)?;
        curve.class = curve.class.add_scaled(&-q(k as i64, r), &e);
    }
    out.add_curve(Curve {
        label: exceptional.to_string(),
        class: e,
        is_irreducible: true,
    })?;
    out.singularities.retain(|s| s.label != singularity);
    Ok(out)
}

/// Contracts a negative definite set of curves forming disjoint chains.
pub fn contract(model: &SurfaceModel, curves: &[&str]) -> Result<SurfaceModel> {
    if curves.is_empty() {
        return Err(Error::DegenerateConfiguration(Vec::new()));
    }
    let mut seen = BTreeSet::new();
    for c in curves {
        model.curve(c)?;
        if !seen.insert(*c) || model.is_contracted(c) {
            return Err(Error::DuplicateLabel(c.to_string()));
        }
    }
    let mut all: Vec<&str> = model.contracted_refs();
    all.extend_from_slice(curves);
    if !model.is_negative_definite(&all)? {
        return Err(Error::NotNegativeDefinite(
            all.iter().map(|c| c.to_string()).collect(),
        ));
    }

    let graph = ResolutionGraph::new(model, curves)?;
    let mut out = model.clone();
    let mut absorbed_all = BTreeSet::new();
    for component in graph.components() {
        let (chain, ordered) = graph.chain_of(&component)?;
        let curve_labels: Vec<String> = ordered
            .iter()
            .filter_map(|v| match v {
                Vertex::Curve(c) => Some(c.clone()),
                Vertex::Ambient(_) => None,
            })
            .collect();
        let absorbed: Vec<String> = ordered
            .iter()
            .filter_map(|v| match v {
                Vertex::Ambient(s) => Some(s.clone()),
                Vertex::Curve(_) => None,
            })
            .collect();
        absorbed_all.extend(absorbed.iter().cloned());
        if chain == [1] {
            // A (-1)-curve away from singular points contracts to a smooth point.
            continue;
        }
        if chain.iter().any(|&a| a < 2) {
            return Err(Error::NonChainContraction(format!(
                "chain {:?} through {} contains a curve with resolved self-intersection > -2",
                chain,
                curve_labels.join("+")
            )));
        }
        let (r, a) = hj_evaluate(&chain)?;
        let label = format!("p[{}]", curve_labels.join("+"));
        out.singularities.push(QuotientSingularity::new(
            label,
            r,
            if r == 1 { 0 } else { a },
            SingularityOrigin::Contraction {
                curves: curve_labels,
                absorbed,
            },
        )?);
    }
    out.singularities
        .retain(|s| !absorbed_all.contains(&s.label));
    out.contracted.extend(curves.iter().map(|c| c.to_string()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Vertex {
    Curve(String),
    Ambient(String),
}

/// Dual graph of the minimal resolution of the contracted locus.
struct ResolutionGraph {
    vertices: Vec<Vertex>,
    self_int: Vec<i64>,
    edges: BTreeMap<(usize, usize), i64>,
}

impl ResolutionGraph {
    fn new(model: &SurfaceModel, curves: &[&str]) -> Result<Self> {
        let mut vertices: Vec<Vertex> = curves
            .iter()
            .map(|c| Vertex::Curve(c.to_string()))
            .collect();
        let ambient: Vec<&QuotientSingularity> = model
            .singularities
            .iter()
            .filter(|s| {
                s.branches()
                    .is_some_and(|b| curves.iter().any(|c| b.contains_key(*c)))
            })
            .collect();
        for s in &ambient {
            if !s.is_type_11() {
                return Err(Error::NonChainContraction(format!(
                    "curve through non-(1,1) point `{}`",
                    s.label
                )));
            }
            vertices.push(Vertex::Ambient(s.label.clone()));
        }
        let branch = |s: &QuotientSingularity, c: &str| -> i64 {
            s.branches().and_then(|b| b.get(c)).copied().unwrap_or(0) as i64
        };
        let integral = |x: Rational, what: String| -> Result<i64> {
            if x.is_integer() {
                Ok(x.to_integer().to_i64().unwrap_or(i64::MAX))
            } else {
                Err(Error::NonChainContraction(format!(
                    "{what} is not integral on the resolution"
                )))
            }
        };

        let nc = curves.len();
        let mut self_int = Vec::with_capacity(vertices.len());
        let mut edges = BTreeMap::new();
        for (i, ci) in curves.iter().enumerate() {
            let mut x = model.self_intersection(ci)?;
            for s in &ambient {
                let k = branch(s, ci);
                x -= q(k * k, s.r as i64);
            }
            self_int.push(integral(x, format!("self-intersection of `{ci}`"))?);
            for (j, cj) in curves.iter().enumerate().skip(i + 1) {
                let mut x = model.pair_curves(ci, cj)?;
                for s in &ambient {
                    x -= q(branch(s, ci) * branch(s, cj), s.r as i64);
                }
                let w = integral(x, format!("intersection of `{ci}` and `{cj}`"))?;
                if w != 0 {
                    edges.insert((i, j), w);
                }
            }
            for (k, s) in ambient.iter().enumerate() {
                let w = branch(s, ci);
                if w != 0 {
                    edges.insert((i, nc + k), w);
                }
            }
        }
        for s in &ambient {
            self_int.push(-(s.r as i64));
        }
        Ok(ResolutionGraph {
            vertices,
            self_int,
            edges,
        })
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Orders a component as a path and returns its negated self-intersections.
    fn chain_of(&self, comp: &[usize]) -> Result<(Vec<u64>, Vec<Vertex>)> {
        let describe = || {
            comp.iter()
                .map(|&v| match &self.vertices[v] {
                    Vertex::Curve(c) | Vertex::Ambient(c) => c.clone(),
                })
                .collect::<Vec<_>>()
                .join("+")
        };
        for (&(a, b), &w) in &self.edges {
            if comp.contains(&a) && (w != 1 || !comp.contains(&b)) {
                return Err(Error::NonChainContraction(format!(
                    "{}: curves meet with multiplicity {w}",
                    describe()
                )));
            }
        }
        let degree = |v: usize| self.neighbours(v).len();
        if comp.iter().any(|&v| degree(v) > 2) {
            return Err(Error::NonChainContraction(format!(
                "{}: branched configuration",
                describe()
            )));
        }
        let edge_count = self.edges.keys().filter(|(a, _)| comp.contains(a)).count();
        if edge_count + 1 != comp.len() {
            return Err(Error::NonChainContraction(format!("{}: cycle", describe())));
        }
        // Start from an end that is a curve, first in input order.
        let ends: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) <= 1).collect();
        let start = ends
            .iter()
            .copied()
            .find(|&v| matches!(self.vertices[v], Vertex::Curve(_)))
            .unwrap_or(ends[0]);
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = self.neighbours(cur).into_iter().find(|&w| w != prev);
            match next {
                Some(w) if order.len() < comp.len() => {
                    order.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        let chain = order
            .iter()
            .map(|&v| {
                let s = -self.self_int[v];
                if s < 1 {
                    Err(Error::NonChainContraction(format!(
                        "{}: non-negative resolved self-intersection",
                        describe()
                    )))
                } else {
                    Ok(s as u64)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((
            chain,
            order
                .into_iter()
                .map(|v| self.vertices[v].clone())
                .collect(),
        ))
    }
}

/// Number of conditions and dimension count for curves on `P(1,1,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveCount {
    pub conditions: u64,
    pub sublinear_dim: u64,
    pub exists: bool,
}

/// Conditions imposed by `num_general` points of multiplicity `mult_general`
/// and `num_line_pts` simple points, against the dimension of the degree
/// `degree` curves whose monomials `z^i f(x,y)` have `i < mult_general`.
pub fn curve_count_check(
    n: u64,
    degree: u64,
    mult_general: u64,
    num_general: u64,
    num_line_pts: u64,
) -> CurveCount {
    let conditions = num_general * mult_general * (mult_general + 1) / 2 + num_line_pts;
    let top = (degree / n.max(1)).min(mult_general.saturating_sub(1));
    let monomials: u64 = (0..=top).map(|i| degree - i * n + 1).sum();
    let sublinear_dim = monomials.saturating_sub(1);
    CurveCount {
        conditions,
        sublinear_dim,
        exists: sublinear_dim >= conditions,
    }
}

/// Applies the steps in order.
pub fn apply_recipe(steps: &[RecipeStep]) -> Result<SurfaceModel> {
    let (first, rest) = steps.split_first().ok_or(Error::EmptyRecipe)?;
    let mut model = match first {
        RecipeStep::SeedP2 => seed_p2(),
        RecipeStep::SeedWps { n } => seed_wps(*n)?,
        _ => {
            return Err(Error::InvalidStep {
                index: 0,
                reason: "a recipe must start with a seed".into(),
            })
        }
    };
    for (i, step) in rest.iter().enumerate() {
        model = apply_step(&model, step).map_err(|e| match e {
            Error::InvalidStep { reason, .. } => Error::InvalidStep {
                index: i + 1,
                reason,
            },
            other => other,
        })?;
    }
    Ok(model)
}

pub fn apply_step(model: &SurfaceModel, step: &RecipeStep) -> Result<SurfaceModel> {
    match step {
        RecipeStep::SeedP2 | RecipeStep::SeedWps { .. } => Err(Error::InvalidStep {
            index: 0,
            reason: "seed after the first step".into(),
        }),
        RecipeStep::DeclareCurve {
            label,
            class,
            through,
        } => declare_curve(model, label, class, through),
        RecipeStep::Rename { from, to } => rename_curve(model, from, to),
        RecipeStep::BlowUp { point } => blow_up(model, point),
        RecipeStep::WeightedBlowUp11 {
            singularity,
            exceptional,
        } => weighted_blow_up_11(model, singularity, exceptional),
        RecipeStep::Contract { curves } => {
            let refs: Vec<&str> = curves.iter().map(String::as_str).collect();
            contract(model, &refs)
        }
        RecipeStep::DeclareFlagPoint { point } => {
            let mut out = model.clone();
            out.add_flag_point(point.clone())?;
            Ok(out)
        }
    }
}

/// Convenience for `declare_curve` steps: `[("l", 4)]` style classes.
pub fn class_map(terms: &[(&str, i64)]) -> BTreeMap<String, Rational> {
    terms.iter().map(|(l, c)| (l.to_string(), qi(*c))).collect()
}

/// Sanity helper used by tests and the catalog: every coefficient is an integer.
pub fn is_integral(v: &ClassVector) -> bool {
    v.0.iter().all(|c| c.is_integer() || c.is_zero())
}

/// `true` when `x` is a negative integer.
pub fn is_negative_integer(x: &Rational) -> bool {
    x.is_integer() && x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hj_small_cases() {
        assert_eq!(hj_expand(3, 1).unwrap(), vec![3]);
        assert_eq!(hj_expand(2, 1).unwrap(), vec![2]);
        assert_eq!(hj_expand(5, 3).unwrap(), vec![2, 3]);
        assert_eq!(hj_evaluate(&[4, 3]).unwrap(), (11, 3));
        assert_eq!(hj_evaluate(&[3, 4]).unwrap(), (11, 4));
        assert_eq!(hj_evaluate(&[3, 3]).unwrap(), (8, 3));
        assert_eq!(hj_evaluate(&[7]).unwrap(), (7, 1));
        assert!(hj_evaluate(&[1, 3]).is_err());
        assert!(hj_expand(6, 3).is_err());
        assert!(hj_expand(3, 3).is_err());
    }

    #[test]
    fn seeds() {
        let p2 = seed_p2();
        assert_eq!(p2.degree().unwrap(), qi(9));
        assert!(p2.singularities().is_empty());
        let s3 = seed_wps(3).unwrap();
        assert_eq!(s3.degree().unwrap(), q(25, 3));
        let s5 = seed_wps(5).unwrap();
        let o = s5.singularity(SEED_VERTEX).unwrap();
        assert_eq!((o.r, o.a, o.resolution_chain.clone()), (5, 1, vec![5]));
    }

    #[test]
    fn general_blow_up_drops_degree_by_one() {
        let m = blow_up(&seed_p2(), &PointSpec::general("e1")).unwrap();
        assert_eq!(m.degree().unwrap(), qi(8));
        let back = contract(&m, &["e1"]).unwrap();
        assert_eq!(back.degree().unwrap(), qi(9));
        assert!(back.singularities().is_empty());
    }

    #[test]
    fn blow_up_rejects_singular_and_contracted_points() {
        let m = seed_wps(3).unwrap();
        let mut p = PointSpec::general("e1");
        p.at_singularity = Some(SEED_VERTEX.into());
        assert!(matches!(blow_up(&m, &p), Err(Error::InvalidPoint { .. })));

        let m = declare_curve(
            &m,
            "L",
            &class_map(&[("l", 1)]),
            &BTreeMap::from([("O".into(), 1)]),
        )
        .unwrap();
        let m = blow_up(&m, &PointSpec::on("e1", &[("L", 1)])).unwrap();
        let m = blow_up(&m, &PointSpec::on("e2", &[("L", 1)])).unwrap();
        let m = contract(&m, &["L"]).unwrap();
        assert!(blow_up(&m, &PointSpec::on("e3", &[("L", 1)])).is_err());
    }

    #[test]
    fn weighted_blow_up_rejects_non_11_points() {
        let m = seed_p2();
        assert!(matches!(
            weighted_blow_up_11(&m, "O", "E"),
            Err(Error::UnknownSingularity(_))
        ));
        let mut m = seed_wps(5).unwrap();
        m.singularities[0] = QuotientSingularity::new(
            "O",
            5,
            2,
            SingularityOrigin::Ambient {
                branches: BTreeMap::new(),
            },
        )
        .unwrap();
        assert!(matches!(
            weighted_blow_up_11(&m, "O", "E"),
            Err(Error::UnsupportedWeightedBlowUp { r: 5, a: 2, .. })
        ));
    }

    #[test]
    fn du_val_weighted_blow_up_is_crepant() {
        let m = weighted_blow_up_11(&seed_wps(2).unwrap(), "O", "E").unwrap();
        let e = m.basis_vector("E").unwrap();
        assert_eq!(m.pair(m.canonical(), &e).unwrap(), qi(0));
    }

    #[test]
    fn curve_counts_match_closed_forms() {
        for n in 2..8 {
            let c = curve_count_check(n, 3 * n + 4, 3, n + 2, 2);
            assert_eq!(c.conditions, 6 * n + 14);
            assert_eq!(c.sublinear_dim, 6 * n + 14);
            assert!(c.exists);
            let c = curve_count_check(n, 4 * n + 5, 4, n + 2, 3);
            assert_eq!(c.conditions, 10 * n + 23);
            assert_eq!(c.sublinear_dim, 10 * n + 23);
        }
        let c = curve_count_check(3, 4, 1, 0, 0);
        assert_eq!(c.conditions, 0);
        assert!(c.exists);
    }

    #[test]
    fn recipe_errors() {
        assert_eq!(apply_recipe(&[]).unwrap_err(), Error::EmptyRecipe);
        assert!(matches!(
            apply_recipe(&[RecipeStep::Contract { curves: vec![] }]),
            Err(Error::InvalidStep { index: 0, .. })
        ));
    }

    #[test]
    fn mod_inverse_works() {
        assert_eq!(mod_inverse(4, 7), Some(2));
        assert_eq!(mod_inverse(3, 8), Some(3));
    }
}
