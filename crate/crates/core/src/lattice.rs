//! Exact linear algebra over a divisor-class space with a symmetric
//! intersection form.
//!
//! A [`SurfaceModel`] keeps everything "upstairs": its basis spans the
//! classes of some partial resolution, and a contracted surface is described
//! by the set of curves it contracts. Downstairs intersection numbers are
//! obtained by orthogonalizing against those curves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::builder::QuotientSingularity;
use crate::error::{Error, Result};
use crate::kstab::FlagPointSpec;
use crate::rational::{self, Rational};

/// Coefficients of a divisor class in the basis of its model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassVector(#[serde(with = "rational::serde_vec")] pub Vec<Rational>);

impl ClassVector {
    pub fn zero(dim: usize) -> Self {
        ClassVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        ClassVector(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rational, other: &ClassVector) -> Self {
        debug_assert_eq!(self.len(), other.len());
        ClassVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }

    /// Pads with zeros up to `dim` (used when the basis grows).
    pub fn extended(&self, dim: usize) -> Self {
        let mut coeffs = self.0.clone();
        coeffs.resize(dim, Rational::zero());
        ClassVector(coeffs)
    }
}

impl<'a> Add<&'a ClassVector> for &'a ClassVector {
    type Output = ClassVector;
    fn add(self, rhs: &ClassVector) -> ClassVector {
        self.add_scaled(&Rational::one(), rhs)
    }
}

impl<'a> Sub<&'a ClassVector> for &'a ClassVector {
    type Output = ClassVector;
    fn sub(self, rhs: &ClassVector) -> ClassVector {
        self.add_scaled(&-Rational::one(), rhs)
    }
}

impl Neg for &ClassVector {
    type Output = ClassVector;
    fn neg(self) -> ClassVector {
        ClassVector(self.0.iter().map(|c| -c).collect())
    }
}

/// Symmetric bilinear form on the basis classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionForm {
    #[serde(with = "rational::serde_matrix")]
    matrix: Vec<Vec<Rational>>,
}

impl IntersectionForm {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        for row in &matrix {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::DegenerateConfiguration(vec![format!(
                        "asymmetric entry ({i},{j})"
                    )]));
                }
            }
        }
        Ok(IntersectionForm { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn pair(&self, u: &ClassVector, v: &ClassVector) -> Result<Rational> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
        }
        let mut total = Rational::zero();
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let row = &self.matrix[i];
            let mut inner = Rational::zero();
            for (j, vj) in v.0.iter().enumerate() {
                if !vj.is_zero() && !row[j].is_zero() {
                    inner += &row[j] * vj;
                }
            }
            total += ui * inner;
        }
        Ok(total)
    }

    /// Adds a basis class orthogonal to all existing ones.
    pub(crate) fn push_orthogonal(&mut self, self_intersection: Rational) {
        for row in &mut self.matrix {
            row.push(Rational::zero());
        }
        let mut last = vec![Rational::zero(); self.matrix.len()];
        last.push(self_intersection);
        self.matrix.push(last);
    }
}

/// A tracked curve: a label and its class. Irreducibility is declared, never
/// proved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub class: ClassVector,
    pub is_irreducible: bool,
}

/// A surface described by its (partial) resolution and the curves contracted
/// on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub(crate) name: String,
    pub(crate) basis: Vec<String>,
    pub(crate) form: IntersectionForm,
    pub(crate) canonical: ClassVector,
    pub(crate) curves: Vec<Curve>,
    pub(crate) contracted: Vec<String>,
    pub(crate) singularities: Vec<QuotientSingularity>,
    pub(crate) flag_points: Vec<FlagPointSpec>,
}

impl SurfaceModel {
    /// A model with the given basis, form and canonical class and nothing else.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        form: IntersectionForm,
        canonical: ClassVector,
    ) -> Result<Self> {
        if form.dim() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: form.dim(),
            });
        }
        if canonical.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: canonical.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for label in &basis {
            if !seen.insert(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(SurfaceModel {
            name: name.into(),
            basis,
            form,
            canonical,
            curves: Vec::new(),
            contracted: Vec::new(),
            singularities: Vec::new(),
            flag_points: Vec::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn canonical(&self) -> &ClassVector {
        &self.canonical
    }

    pub fn anticanonical(&self) -> ClassVector {
        -&self.canonical
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn contracted(&self) -> &[String] {
        &self.contracted
    }

    pub fn singularities(&self) -> &[QuotientSingularity] {
        &self.singularities
    }

    pub fn flag_points(&self) -> &[FlagPointSpec] {
        &self.flag_points
    }

    pub fn basis_index(&self, label: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| Error::UnknownBasisLabel(label.to_string()))
    }

    pub fn basis_vector(&self, label: &str) -> Result<ClassVector> {
        Ok(ClassVector::unit(self.dim(), self.basis_index(label)?))
    }

    pub fn curve(&self, label: &str) -> Result<&Curve> {
        self.curves
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub(crate) fn curve_mut(&mut self, label: &str) -> Result<&mut Curve> {
        self.curves
            .iter_mut()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn class_of(&self, label: &str) -> Result<&ClassVector> {
        Ok(&self.curve(label)?.class)
    }

    pub fn is_contracted(&self, label: &str) -> bool {
        self.contracted.iter().any(|c| c == label)
    }

    pub fn singularity(&self, label: &str) -> Result<&QuotientSingularity> {
        self.singularities
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSingularity(label.to_string()))
    }

    /// Builds a class from `basis label -> coefficient` pairs.
    pub fn class_from_basis(
        &self,
        coefficients: &BTreeMap<String, Rational>,
    ) -> Result<ClassVector> {
        let mut v = ClassVector::zero(self.dim());
        for (label, c) in coefficients {
            v.0[self.basis_index(label)?] += c;
        }
        Ok(v)
    }

    /// Builds a class as a combination of tracked curves.
    pub fn class_from_curves(&self, coefficients: &[(&str, Rational)]) -> Result<ClassVector> {
        let mut v = ClassVector::zero(self.dim());
        for (label, c) in coefficients {
            v = v.add_scaled(c, self.class_of(label)?);
        }
        Ok(v)
    }

    /// Non-zero basis coefficients of `v`, keyed by basis label.
    pub fn express(&self, v: &ClassVector) -> BTreeMap<String, Rational> {
        self.basis
            .iter()
            .zip(&v.0)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l.clone(), c.clone()))
            .collect()
    }

    pub fn pair(&self, u: &ClassVector, v: &ClassVector) -> Result<Rational> {
        self.form.pair(u, v)
    }

    pub fn pair_curves(&self, a: &str, b: &str) -> Result<Rational> {
        self.pair(self.class_of(a)?, self.class_of(b)?)
    }

    pub fn self_intersection(&self, label: &str) -> Result<Rational> {
        self.pair_curves(label, label)
    }

    /// Gram matrix of the listed curves.
    pub fn gram(&self, curves: &[&str]) -> Result<Vec<Vec<Rational>>> {
        let classes = curves
            .iter()
            .map(|c| self.class_of(c))
            .collect::<Result<Vec<_>>>()?;
        classes
            .iter()
            .map(|a| classes.iter().map(|b| self.pair(a, b)).collect())
            .collect()
    }

    /// The unique `v + sum c_i C_i` orthogonal to every listed curve.
    pub fn orthogonalize(&self, v: &ClassVector, curves: &[&str]) -> Result<ClassVector> {
        if curves.is_empty() {
            return Ok(v.clone());
        }
        let gram = self.gram(curves)?;
        let rhs = curves
            .iter()
            .map(|c| Ok(-self.pair(v, self.class_of(c)?)?))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = solve_linear(&gram, &rhs).ok_or_else(|| {
            Error::DegenerateConfiguration(curves.iter().map(|c| c.to_string()).collect())
        })?;
        let mut w = v.clone();
        for (c, label) in coeffs.iter().zip(curves) {
            w = w.add_scaled(c, self.class_of(label)?);
        }
        Ok(w)
    }

    /// Sylvester's criterion on exact leading principal minors.
    pub fn is_negative_definite(&self, curves: &[&str]) -> Result<bool> {
        if curves.is_empty() {
            return Err(Error::DegenerateConfiguration(Vec::new()));
        }
        Ok(is_negative_definite_matrix(&self.gram(curves)?))
    }

    /// Log discrepancies `A_i = 1 + d_i` of the listed (contracted) curves,
    /// where `K_upstairs = pullback(K) + sum d_i C_i`.
    pub fn solve_discrepancies(&self, curves: &[&str]) -> Result<BTreeMap<String, Rational>> {
        let gram = self.gram(curves)?;
        let rhs = curves
            .iter()
            .map(|c| self.pair(&self.canonical, self.class_of(c)?))
            .collect::<Result<Vec<_>>>()?;
        let d = solve_linear(&gram, &rhs).ok_or_else(|| {
            Error::DegenerateConfiguration(curves.iter().map(|c| c.to_string()).collect())
        })?;
        Ok(curves
            .iter()
            .zip(d)
            .map(|(c, di)| (c.to_string(), Rational::one() + di))
            .collect())
    }

    /// Log discrepancy of a curve over the contracted surface; 1 for curves
    /// that survive on it.
    pub fn log_discrepancy(&self, label: &str) -> Result<Rational> {
        self.curve(label)?;
        if !self.is_contracted(label) {
            return Ok(Rational::one());
        }
        let contracted = self.contracted_refs();
        let all = self.solve_discrepancies(&contracted)?;
        Ok(all[label].clone())
    }

    pub(crate) fn contracted_refs(&self) -> Vec<&str> {
        self.contracted.iter().map(String::as_str).collect()
    }

    /// Pullback of the anticanonical class of the contracted surface.
    pub fn anticanonical_pullback(&self) -> Result<ClassVector> {
        self.orthogonalize(&self.anticanonical(), &self.contracted_refs())
    }

    /// Anticanonical degree `(-K)^2` of the contracted surface.
    pub fn degree(&self) -> Result<Rational> {
        let p = self.anticanonical_pullback()?;
        self.pair(&p, &p)
    }

    /// Picard rank of the minimal resolution of the contracted surface.
    pub fn resolution_picard_rank(&self) -> usize {
        let extra: isize = self
            .singularities
            .iter()
            .map(|s| s.resolution_chain.len() as isize - s.contracted_curves().len() as isize)
            .sum();
        (self.dim() as isize + extra) as usize
    }

    /// Singularities of the contracted surface.
    pub fn surface_singularities(&self) -> Vec<&QuotientSingularity> {
        self.singularities.iter().collect()
    }

    pub(crate) fn add_curve(&mut self, curve: Curve) -> Result<()> {
        if self.curves.iter().any(|c| c.label == curve.label) {
            return Err(Error::DuplicateLabel(curve.label));
        }
        if curve.class.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: curve.class.len(),
            });
        }
        self.curves.push(curve);
        Ok(())
    }

    /// Appends an orthogonal basis class and pads every stored vector.
    pub(crate) fn push_basis(&mut self, label: &str, self_intersection: Rational) -> Result<usize> {
        if self.basis.iter().any(|b| b == label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        self.basis.push(label.to_string());
        self.form.push_orthogonal(self_intersection);
        let dim = self.dim();
        self.canonical = self.canonical.extended(dim);
        for c in &mut self.curves {
            c.class = c.class.extended(dim);
        }
        Ok(dim - 1)
    }

    pub(crate) fn add_flag_point(&mut self, point: FlagPointSpec) -> Result<()> {
        if self
            .flag_points
            .iter()
            .any(|p| p.label == point.label && p.flag_curve == point.flag_curve)
        {
            return Err(Error::DuplicateLabel(point.label));
        }
        point.validate(self)?;
        self.flag_points.push(point);
        Ok(())
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {}", self.name)?;
        writeln!(f, "basis: {}", self.basis.join(", "))?;
        writeln!(f, "intersection matrix:")?;
        for row in self.form.rows() {
            let cells: Vec<String> = row.iter().map(rational::format).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        let minus_k = self.anticanonical();
        let terms: Vec<String> = self
            .express(&minus_k)
            .iter()
            .map(|(l, c)| format!("{}*{}", rational::format(c), l))
            .collect();
        writeln!(f, "-K = {}", terms.join(" + "))?;
        match self.degree() {
            Ok(d) => writeln!(f, "(-K)^2 = {}", rational::format(&d))?,
            Err(e) => writeln!(f, "(-K)^2 = <{e}>")?,
        }
        if !self.contracted.is_empty() {
            writeln!(f, "contracted: {}", self.contracted.join(", "))?;
        }
        for s in &self.singularities {
            writeln!(f, "singularity {}", s)?;
        }
        Ok(())
    }
}

/// Solves `a x = b` exactly; `None` when `a` is singular.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Rational::one() / &m[col][col];
        for entry in m[col].iter_mut().skip(col) {
            *entry *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant by exact elimination.
pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Leading principal minors `Δ_1, ..., Δ_n`.
pub fn leading_minors(a: &[Vec<Rational>]) -> Vec<Rational> {
    (1..=a.len())
        .map(|k| {
            let sub: Vec<Vec<Rational>> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Negative definite iff `(-1)^k Δ_k > 0` for every leading minor.
pub fn is_negative_definite_matrix(a: &[Vec<Rational>]) -> bool {
    leading_minors(a).iter().enumerate().all(|(i, d)| {
        if i % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    })
}
