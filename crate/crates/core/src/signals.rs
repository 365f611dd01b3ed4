//! Structured sparse coefficient vectors: support generators for each
//! structure class, matching validators, and nonzero-value draws.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64, ZERO};
use crate::model::SeededRng;
use crate::support::SupportSet;

/// Zeros between consecutive nonzeros of the default spread class.
pub const DEFAULT_SPREAD_SEPARATION: usize = 8;
/// Minimum index distance between a hybrid singleton and any other nonzero.
pub const HYBRID_MIN_DISTANCE: usize = 8;
/// Index difference between the two members of a pair.
pub const PAIR_OFFSET: usize = 4;
/// Minimum index distance between consecutive pairs.
pub const PAIR_MIN_DISTANCE: usize = 8;

/// Support structure classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StructureSpec {
    /// One run of `k` consecutive indices.
    Clustered,
    /// Consecutive nonzeros separated by at least `min_sep` zeros.
    Spread { min_sep: usize },
    /// A run of `k/2` plus `k/2` singletons far from every other nonzero.
    Hybrid,
    /// `c` runs of `k/c`, at least one zero between runs.
    CClusters { c: usize },
    /// Every other index over a span of `2k − 1`.
    Alternating,
    /// `k/2` pairs `(j, j + 4)`, pairs well apart.
    PairSpread,
    /// Exactly `s` zeros between consecutive nonzeros.
    UniformSeparation { s: usize },
    /// Two runs of `k/2` separated by exactly `s` zeros.
    TwoClusterSeparation { s: usize },
}

impl StructureSpec {
    pub const NAMES: [&'static str; 8] = [
        "clustered",
        "spread",
        "hybrid",
        "c_clusters",
        "alternating",
        "pair_spread",
        "uniform_sep",
        "two_cluster_sep",
    ];

    /// Stable class identifier without parameters.
    pub fn class_name(&self) -> &'static str {
        match self {
            StructureSpec::Clustered => "clustered",
            StructureSpec::Spread { .. } => "spread",
            StructureSpec::Hybrid => "hybrid",
            StructureSpec::CClusters { .. } => "c_clusters",
            StructureSpec::Alternating => "alternating",
            StructureSpec::PairSpread => "pair_spread",
            StructureSpec::UniformSeparation { .. } => "uniform_sep",
            StructureSpec::TwoClusterSeparation { .. } => "two_cluster_sep",
        }
    }

    pub fn spread() -> Self {
        StructureSpec::Spread {
            min_sep: DEFAULT_SPREAD_SEPARATION,
        }
    }

    /// Checks the class's parameter constraints for sparsity `k`.
    pub fn check(&self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::Infeasible("sparsity must be at least 1".into()));
        }
        let even = |what: &str| {
            if k % 2 == 0 {
                Ok(())
            } else {
                Err(Error::Infeasible(format!("{what} needs even k, got {k}")))
            }
        };
        match *self {
            StructureSpec::CClusters { c } => {
                if c == 0 || k % c != 0 {
                    return Err(Error::Infeasible(format!(
                        "c_clusters needs c ≥ 1 dividing k (c={c}, k={k})"
                    )));
                }
                Ok(())
            }
            StructureSpec::Hybrid => even("hybrid"),
            StructureSpec::PairSpread => even("pair_spread"),
            StructureSpec::TwoClusterSeparation { .. } => even("two_cluster_sep"),
            _ => Ok(()),
        }
    }

    /// Items (offset templates) in placement order plus the minimum number
    /// of zeros between consecutive items.
    fn layout(&self, k: usize, rng: &mut SeededRng) -> (Vec<Vec<usize>>, usize) {
        let run = |len: usize| (0..len).collect::<Vec<_>>();
        match *self {
            StructureSpec::Clustered => (vec![run(k)], 0),
            StructureSpec::Spread { min_sep } => (vec![vec![0]; k], min_sep),
            StructureSpec::Hybrid => {
                let half = k / 2;
                let mut items = vec![vec![0]; half];
                let block_slot = rng.random_range(0..=half);
                items.insert(block_slot, run(half));
                (items, HYBRID_MIN_DISTANCE - 1)
            }
            StructureSpec::CClusters { c } => (vec![run(k / c); c], 1),
            StructureSpec::Alternating => (vec![(0..k).map(|i| 2 * i).collect()], 0),
            StructureSpec::PairSpread => (vec![vec![0, PAIR_OFFSET]; k / 2], PAIR_MIN_DISTANCE - 1),
            StructureSpec::UniformSeparation { s } => {
                (vec![(0..k).map(|i| i * (s + 1)).collect()], 0)
            }
            StructureSpec::TwoClusterSeparation { s } => {
                let half = k / 2;
                let template = (0..half).chain(half + s..k + s).collect();
                (vec![template], 0)
            }
        }
    }
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StructureSpec::Spread { min_sep } if min_sep == DEFAULT_SPREAD_SEPARATION => {
                write!(f, "spread")
            }
            StructureSpec::Spread { min_sep } => write!(f, "spread:{min_sep}"),
            StructureSpec::CClusters { c } => write!(f, "c_clusters:{c}"),
            StructureSpec::UniformSeparation { s } => write!(f, "uniform_sep:{s}"),
            StructureSpec::TwoClusterSeparation { s } => write!(f, "two_cluster_sep:{s}"),
            other => write!(f, "{}", other.class_name()),
        }
    }
}

impl FromStr for StructureSpec {
    type Err = Error;

    /// Parses `name` or `name:param`, e.g. `spread:5`, `c_clusters:4`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (s.trim(), None),
        };
        let parse = |default: Option<usize>| -> Result<usize> {
            match (param, default) {
                (Some(p), _) => p
                    .parse()
                    .map_err(|_| Error::Config(format!("bad parameter in '{s}'"))),
                (None, Some(v)) => Ok(v),
                (None, None) => Err(Error::Config(format!("'{name}' needs a ':<n>' parameter"))),
            }
        };
        let no_param = |spec: StructureSpec| match param {
            None => Ok(spec),
            Some(_) => Err(Error::Config(format!("'{name}' takes no parameter"))),
        };
        match name {
            "clustered" => no_param(StructureSpec::Clustered),
            "spread" => Ok(StructureSpec::Spread {
                min_sep: parse(Some(DEFAULT_SPREAD_SEPARATION))?,
            }),
            "hybrid" => no_param(StructureSpec::Hybrid),
            "c_clusters" => Ok(StructureSpec::CClusters { c: parse(None)? }),
            "two_cluster" => no_param(StructureSpec::CClusters { c: 2 }),
            "four_cluster" => no_param(StructureSpec::CClusters { c: 4 }),
            "alternating" => no_param(StructureSpec::Alternating),
            "pair_spread" => no_param(StructureSpec::PairSpread),
            "uniform_sep" => Ok(StructureSpec::UniformSeparation { s: parse(None)? }),
            "two_cluster_sep" => Ok(StructureSpec::TwoClusterSeparation { s: parse(None)? }),
            _ => Err(Error::UnknownName {
                kind: "signal class",
                name: name.to_string(),
                valid: StructureSpec::NAMES.join(", "),
            }),
        }
    }
}

impl TryFrom<String> for StructureSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<StructureSpec> for String {
    fn from(s: StructureSpec) -> String {
        s.to_string()
    }
}

/// Distribution of the nonzero coefficient values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientDistribution {
    /// Real and imaginary parts i.i.d. standard normal.
    #[default]
    ComplexGaussian,
    UnitModulusRandomPhase,
}

/// Draws a support of exactly `k` indices in `[0, d)` following `spec`,
/// uniformly over all placements of the class template.
pub fn generate_support(
    spec: &StructureSpec,
    k: usize,
    d: usize,
    rng: &mut SeededRng,
) -> Result<SupportSet> {
    spec.check(k)?;
    let (items, gap) = spec.layout(k, rng);
    let spans: Vec<usize> = items
        .iter()
        .map(|t| t.last().map_or(0, |&x| x + 1))
        .collect();
    let occupied = spans.iter().sum::<usize>() + gap * (items.len() - 1);
    if occupied > d {
        return Err(Error::Infeasible(format!(
            "{spec} with k={k} needs {occupied} indices but d={d}"
        )));
    }
    let slack = d - occupied;
    let q = items.len();
    // choosing q sorted slots from slack + q positions is a uniform
    // composition of the free zeros around the items
    let mut slots = index::sample(rng, slack + q, q).into_vec();
    slots.sort_unstable();

    let mut indices = Vec::with_capacity(k);
    let mut base = 0;
    for (i, (template, span)) in items.iter().zip(&spans).enumerate() {
        let start = base + slots[i] - i;
        indices.extend(template.iter().map(|&o| start + o));
        base += span + gap;
    }
    Ok(SupportSet::from_indices(indices))
}

/// Maximal runs of consecutive indices as (start, length).
fn runs(s: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &i in s {
        match out.last_mut() {
            Some((start, len)) if *start + *len == i => *len += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

/// Whether `s` is a `k`-sparse support in `[0, d)` matching `spec`'s template.
pub fn validate_support(spec: &StructureSpec, s: &SupportSet, k: usize, d: usize) -> bool {
    if s.len() != k || k == 0 || spec.check(k).is_err() {
        return false;
    }
    if s.max().is_some_and(|m| m >= d) {
        return false;
    }
    let idx = s.as_slice();
    let mut gaps = idx.windows(2).map(|w| w[1] - w[0]);
    match *spec {
        StructureSpec::Clustered => idx[k - 1] - idx[0] == k - 1,
        StructureSpec::Spread { min_sep } => gaps.all(|g| g > min_sep),
        StructureSpec::Alternating => gaps.all(|g| g == 2),
        StructureSpec::UniformSeparation { s } => gaps.all(|g| g == s + 1),
        StructureSpec::TwoClusterSeparation { s } => {
            gaps.enumerate()
                .all(|(i, g)| if i + 1 == k / 2 { g == s + 1 } else { g == 1 })
        }
        StructureSpec::CClusters { c } => {
            let r = runs(idx);
            r.len() == c && r.iter().all(|&(_, len)| len == k / c)
        }
        StructureSpec::PairSpread => {
            idx.chunks(2).all(|p| p[1] - p[0] == PAIR_OFFSET)
                && idx
                    .chunks(2)
                    .collect::<Vec<_>>()
                    .windows(2)
                    .all(|w| w[1][0] - w[0][1] >= PAIR_MIN_DISTANCE)
        }
        StructureSpec::Hybrid => {
            let half = k / 2;
            let r = runs(idx);
            let blocks = r.iter().filter(|&&(_, len)| len == half).count();
            let shape_ok = r.len() == half + 1
                && blocks >= 1
                && r.iter().all(|&(_, len)| len == half || len == 1)
                && (half == 1 || blocks == 1);
            shape_ok
                && r.windows(2)
                    .all(|w| w[1].0 - (w[0].0 + w[0].1 - 1) >= HYBRID_MIN_DISTANCE)
        }
    }
}

/// Length-`d` vector, zero off `s`, i.i.d. draws from `dist` on `s`.
pub fn draw_coefficients(
    s: &SupportSet,
    dist: CoefficientDistribution,
    d: usize,
    rng: &mut SeededRng,
) -> Result<CVec> {
    if let Some(m) = s.max() {
        if m >= d {
            return Err(Error::IndexOutOfRange { index: m, bound: d });
        }
    }
    let mut alpha = vec![ZERO; d];
    for j in s.iter() {
        alpha[j] = loop {
            let z = match dist {
                CoefficientDistribution::ComplexGaussian => C64::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                ),
                CoefficientDistribution::UnitModulusRandomPhase => {
                    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
                }
            };
            if z != ZERO {
                break z;
            }
        };
    }
    Ok(alpha)
}
