//! Family membership, the volume screen and the classification table.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::recipes::{build_config, ConfigName};
use crate::error::Result;
use crate::kstab::{delta_lower_bound, liu_test, DeltaReport, LiuVerdict, Verdict};
use crate::rational::{self, q, qi, Rational};

/// `(-K)^2 = n + 2 - k + (m+n+2)/(mn-1)`.
pub fn volume_formula(n: u64, m: u64, k: u64) -> Rational {
    let (n, m, k) = (n as i64, m as i64, k as i64);
    qi(n + 2 - k) + q(m + n + 2, m * n - 1)
}

/// Order of the local group at the singular point.
pub fn group_order(n: u64, m: u64) -> u64 {
    n * m - 1
}

/// Largest `k` in the family for `n >= m >= 2`.
pub fn max_k(n: u64, m: u64) -> u64 {
    if matches!((n, m), (2, 2) | (3, 2) | (4, 2)) {
        n + 3
    } else {
        n + 2
    }
}

pub fn in_family(n: u64, m: u64, k: u64) -> bool {
    n >= m && m >= 2 && k <= max_k(n, m)
}

/// Where a triple lands after using `S_{m,n}^{m+j} = S_{n,m}^{n+j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Normalized {
    Standard {
        n: u64,
        m: u64,
        k: u64,
    },
    /// `S_{m,n}^k` with `m < n`, `k < m`: the swapped family.
    Swapped {
        n: u64,
        m: u64,
        k: u64,
    },
    OutOfFamily,
}

pub fn normalize(n: u64, m: u64, k: u64) -> Normalized {
    if n < 2 || m < 2 {
        return Normalized::OutOfFamily;
    }
    if n >= m {
        return if in_family(n, m, k) {
            Normalized::Standard { n, m, k }
        } else {
            Normalized::OutOfFamily
        };
    }
    // n < m: the roles are swapped.
    if k < n {
        return Normalized::Swapped { n: m, m: n, k };
    }
    let k2 = k - n + m;
    if in_family(m, n, k2) {
        Normalized::Standard { n: m, m: n, k: k2 }
    } else {
        Normalized::OutOfFamily
    }
}

/// Triples `n >= m >= 2`, `n + m <= max_sum`, in the family and passing the
/// volume screen.
pub fn solution_set_up_to(max_sum: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut out = BTreeSet::new();
    for n in 2..max_sum {
        for m in 2..=n.min(max_sum - n) {
            for k in 0..=max_k(n, m) {
                if liu_test(&volume_formula(n, m, k), group_order(n, m)) == LiuVerdict::Passes {
                    out.insert((n, m, k));
                }
            }
        }
    }
    out
}

pub fn solution_set() -> BTreeSet<(u64, u64, u64)> {
    solution_set_up_to(24)
}

/// Swapped-family triples `(m, n, k2)`, `k2 <= m - 1`, passing the screen.
pub fn swapped_solution_set_up_to(max_sum: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut out = BTreeSet::new();
    for n in 2..max_sum {
        for m in 2..=n.min(max_sum - n) {
            for k2 in 0..m {
                let vol = qi(m as i64 + 2 - k2 as i64) + q((m + n + 2) as i64, (m * n - 1) as i64);
                if liu_test(&vol, group_order(n, m)) == LiuVerdict::Passes {
                    out.insert((m, n, k2));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Status {
    #[serde(rename = "K-unstable")]
    KUnstable,
    #[serde(rename = "K-stable")]
    KStable,
    #[serde(rename = "strictly K-semistable")]
    StrictlyKSemistable,
    #[serde(rename = "out-of-family")]
    OutOfFamily,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::KUnstable => "K-unstable",
            Status::KStable => "K-stable",
            Status::StrictlyKSemistable => "strictly K-semistable",
            Status::OutOfFamily => "out-of-family",
            Status::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceItem {
    LiuExclusion {
        #[serde(with = "rational::serde_str")]
        volume: Rational,
        group_order: u64,
        #[serde(with = "rational::serde_str")]
        bound: Rational,
    },
    DeltaSingularPoint {
        config: String,
        report: Box<DeltaReport>,
    },
    AlphaBoundAssumption {
        citation: String,
    },
    FiniteAutomorphismAssumption {
        citation: String,
    },
    Literature {
        citation: String,
    },
}

impl EvidenceItem {
    pub fn kind(&self) -> &'static str {
        match self {
            EvidenceItem::LiuExclusion { .. } => "liu_exclusion",
            EvidenceItem::DeltaSingularPoint { .. } => "delta_singular_point",
            EvidenceItem::AlphaBoundAssumption { .. } => "alpha_bound_assumption",
            EvidenceItem::FiniteAutomorphismAssumption { .. } => "finite_automorphism_assumption",
            EvidenceItem::Literature { .. } => "literature",
        }
    }

    /// Short form for tables.
    pub fn summary(&self) -> String {
        match self {
            EvidenceItem::DeltaSingularPoint { config, report } => {
                format!("{}({}:{})", self.kind(), config, report.flag)
            }
            _ => self.kind().to_string(),
        }
    }
}

const ALPHA_CITATION: &str =
    "smooth points: local alpha invariant at least 3/4 from a case analysis of \
non-log-canonical pairs on the resolution, so delta_p >= (3/2) alpha_p > 1";
const AUT_CITATION: &str = "automorphism group of the surface is finite, so K-semistable and not \
K-polystable means strictly K-semistable";

fn literature(n: u64, m: u64, k: u64) -> Option<(Status, &'static str)> {
    if (n, m) != (2, 2) {
        return None;
    }
    Some(match k {
        0..=2 => (Status::KUnstable, "Du Val 1/3(1,2) del Pezzo surfaces of degree >= 4: delta < 1 in the literature"),
        3 => (Status::StrictlyKSemistable, "cubic surface with one A2 point: strictly K-semistable in the literature"),
        _ => (Status::KStable, "Du Val del Pezzo surfaces of degree 1, 2 with one A2 point: K-stable in the literature"),
    })
}

/// Flags whose reports certify the singular point, by triple.
pub fn evidence_plan(n: u64, m: u64, k: u64) -> Vec<(ConfigName, &'static str)> {
    match (n, m, k) {
        (3, 2, 6) => vec![(ConfigName::S326, "L1"), (ConfigName::S326, "E")],
        (4, 2, 7) => vec![(ConfigName::S427, "L1"), (ConfigName::S427, "E")],
        (n, 2, k) if k == n + 2 => vec![
            (ConfigName::Sn2FlagE(n), "E"),
            (ConfigName::SnmN2(n, 2), "L"),
        ],
        (n, 3, k) if k == n + 2 => vec![
            (ConfigName::Sn3FlagE(n), "E"),
            (ConfigName::SnmN2(n, 3), "L"),
        ],
        _ => Vec::new(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub n: u64,
    pub m: u64,
    pub k: u64,
    #[serde(with = "opt_rational")]
    pub volume: Option<Rational>,
    pub status: Status,
    pub evidence: Vec<EvidenceItem>,
}

mod opt_rational {
    use serde::Serializer;

    use crate::rational::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&crate::rational::format(v)),
            None => s.serialize_none(),
        }
    }
}

impl ClassificationRow {
    pub fn evidence_summary(&self) -> String {
        let parts: Vec<String> = self.evidence.iter().map(EvidenceItem::summary).collect();
        parts.join("+")
    }
}

/// Classifies `S_{n,m}^k`.
pub fn classify(n: u64, m: u64, k: u64) -> Result<ClassificationRow> {
    let row = |n, m, k, volume, status, evidence| ClassificationRow {
        n,
        m,
        k,
        volume,
        status,
        evidence,
    };
    match normalize(n, m, k) {
        Normalized::OutOfFamily => Ok(row(n, m, k, None, Status::OutOfFamily, Vec::new())),
        Normalized::Swapped {
            n: big,
            m: small,
            k,
        } => {
            let volume = qi(small as i64 + 2 - k as i64)
                + q((big + small + 2) as i64, (big * small - 1) as i64);
            let order = group_order(big, small);
            let evidence = vec![EvidenceItem::LiuExclusion {
                volume: volume.clone(),
                group_order: order,
                bound: q(9, order as i64),
            }];
            let status = if liu_test(&volume, order) == LiuVerdict::ExcludedUnstable {
                Status::KUnstable
            } else {
                Status::Undetermined
            };
            Ok(row(n, m, k, Some(volume), status, evidence))
        }
        Normalized::Standard { n, m, k } => classify_standard(n, m, k),
    }
}

fn classify_standard(n: u64, m: u64, k: u64) -> Result<ClassificationRow> {
    let volume = volume_formula(n, m, k);
    let order = group_order(n, m);
    let mut out = ClassificationRow {
        n,
        m,
        k,
        volume: Some(volume.clone()),
        status: Status::Undetermined,
        evidence: Vec::new(),
    };
    if let Some((status, citation)) = literature(n, m, k) {
        out.status = status;
        out.evidence.push(EvidenceItem::Literature {
            citation: citation.to_string(),
        });
        return Ok(out);
    }
    if liu_test(&volume, order) == LiuVerdict::ExcludedUnstable {
        out.status = Status::KUnstable;
        out.evidence.push(EvidenceItem::LiuExclusion {
            volume,
            group_order: order,
            bound: q(9, order as i64),
        });
        return Ok(out);
    }
    let plan = evidence_plan(n, m, k);
    if plan.is_empty() {
        return Ok(out);
    }
    let mut verdicts = Vec::new();
    for (config, flag) in plan {
        let built = build_config(config)?;
        let (model, points) = built.flag(flag)?;
        let report = delta_lower_bound(model, flag, &points)?;
        verdicts.push(report.verdict);
        out.evidence.push(EvidenceItem::DeltaSingularPoint {
            config: config.to_string(),
            report: Box::new(report),
        });
    }
    out.evidence.push(EvidenceItem::AlphaBoundAssumption {
        citation: ALPHA_CITATION.to_string(),
    });
    let all_gt = verdicts.iter().all(|v| *v == Verdict::DeltaGt1);
    let some_eq = verdicts.contains(&Verdict::DeltaEq1);
    let none_open = !verdicts.contains(&Verdict::Inconclusive);
    out.status = if all_gt {
        Status::KStable
    } else if some_eq && none_open {
        out.evidence
            .push(EvidenceItem::FiniteAutomorphismAssumption {
                citation: AUT_CITATION.to_string(),
            });
        Status::StrictlyKSemistable
    } else {
        Status::Undetermined
    };
    Ok(out)
}

/// One line of the classification table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableGroup {
    #[serde(rename = "(n,m)")]
    pub pair: String,
    pub k: String,
    pub status: Status,
    pub rows: Vec<ClassificationRow>,
}

impl TableGroup {
    pub fn evidence_summary(&self) -> String {
        let mut seen = Vec::new();
        for row in &self.rows {
            for e in &row.evidence {
                let s = e.summary();
                if !seen.contains(&s) {
                    seen.push(s);
                }
            }
        }
        seen.join("+")
    }
}

/// One table group: `(label, k label, triples)`.
pub type GroupLayout = (String, String, Vec<(u64, u64, u64)>);

pub fn table_layout() -> Vec<GroupLayout> {
    let mut groups = Vec::new();
    let mut large = Vec::new();
    for sum in 8..=12u64 {
        for m in 2..=sum / 2 {
            let n = sum - m;
            for k in 0..=n + 2 {
                large.push((n, m, k));
            }
        }
    }
    groups.push(("n+m≥8".to_string(), "k≤n+2".to_string(), large));
    let range = |n: u64, m: u64, ks: std::ops::RangeInclusive<u64>| {
        ks.map(move |k| (n, m, k)).collect::<Vec<_>>()
    };
    let small: [(u64, u64, u64, u64); 13] = [
        (2, 2, 0, 2),
        (2, 2, 3, 3),
        (2, 2, 4, 5),
        (3, 2, 0, 4),
        (3, 2, 5, 6),
        (4, 2, 0, 5),
        (4, 2, 6, 7),
        (3, 3, 0, 4),
        (3, 3, 5, 5),
        (4, 3, 0, 5),
        (4, 3, 6, 6),
        (5, 2, 0, 6),
        (5, 2, 7, 7),
    ];
    for (n, m, lo, hi) in small {
        let k = if lo == hi {
            lo.to_string()
        } else if lo == 0 {
            format!("k≤{hi}")
        } else {
            (lo..=hi)
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        groups.push((format!("({n},{m})"), k, range(n, m, lo..=hi)));
    }
    groups
}

/// Regenerates the classification table; rows are computed in parallel on
/// the current rayon pool and reassembled in layout order.
pub fn table1() -> Result<Vec<TableGroup>> {
    table_layout()
        .into_iter()
        .map(|(pair, k, triples)| {
            let rows = triples
                .par_iter()
                .map(|&(n, m, k)| classify(n, m, k))
                .collect::<Result<Vec<_>>>()?;
            let mut statuses: Vec<Status> = rows.iter().map(|r| r.status).collect();
            statuses.dedup();
            let status = if statuses.len() == 1 {
                statuses[0]
            } else {
                Status::Undetermined
            };
            Ok(TableGroup {
                pair,
                k,
                status,
                rows,
            })
        })
        .collect()
}

pub fn table1_tsv(groups: &[TableGroup]) -> String {
    let mut out = String::from("(n,m)\tk\tK-stability\tevidence\n");
    for g in groups {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            g.pair,
            g.k,
            g.status,
            g.evidence_summary()
        ));
    }
    out
}

/// Volume of the surface through the builder, for cross-checks.
pub fn builder_volume(n: u64, m: u64, k: u64) -> Result<Rational> {
    let config = build_config(ConfigName::Snm(n, m, k))?;
    config.models[0].1.degree()
}

/// `true` when the volume is positive.
pub fn is_positive_volume(n: u64, m: u64, k: u64) -> bool {
    volume_formula(n, m, k) > Rational::zero()
}
