//! Approximate signal-space projections: pick `s` atoms of the dictionary
//! that best represent a signal-domain vector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{LinearOperator, C64, ZERO};
use crate::model::Dictionary;
use crate::solvers::{self, SolverConfig};
use crate::support::SupportSet;

/// Inner iteration cap when CoSaMP is used as a projection.
pub const COSAMP_PROJ_MAX_ITER: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    #[serde(rename = "omp")]
    OmpProj,
    #[serde(rename = "cosamp")]
    CosampProj,
    #[serde(rename = "l1")]
    L1Proj,
}

impl ProjectionKind {
    pub const ALL: [ProjectionKind; 3] = [
        ProjectionKind::OmpProj,
        ProjectionKind::CosampProj,
        ProjectionKind::L1Proj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProjectionKind::OmpProj => "omp",
            ProjectionKind::CosampProj => "cosamp",
            ProjectionKind::L1Proj => "l1",
        }
    }
}

impl fmt::Display for ProjectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProjectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "projection",
                name: s.to_string(),
                valid: "omp, cosamp, l1".into(),
            })
    }
}

/// Support of size exactly `s` (capped at `d`) approximating `z` in `D`.
///
/// The chosen solver runs on `D` itself; if it returns fewer than `s`
/// indices the set is topped up with the largest remaining entries of `D*z`.
pub fn sd_project(
    dict: &Dictionary,
    z: &[C64],
    s: usize,
    kind: ProjectionKind,
    cfg: &SolverConfig,
) -> Result<SupportSet> {
    if z.len() != dict.n() {
        return Err(Error::mismatch("sd_project", dict.n(), z.len()));
    }
    if s == 0 {
        return Err(Error::InvalidParameter(
            "projection size must be ≥ 1".into(),
        ));
    }
    let target = s.min(dict.d());
    let support = match kind {
        ProjectionKind::OmpProj | ProjectionKind::CosampProj if s > dict.n() => {
            return Err(Error::InvalidParameter(format!(
                "{kind} projection of size {s} exceeds signal dimension {}",
                dict.n()
            )));
        }
        ProjectionKind::OmpProj => solvers::omp(dict, z, s, cfg)?.support,
        ProjectionKind::CosampProj => {
            let inner = SolverConfig {
                max_iterations: cfg.max_iterations.min(COSAMP_PROJ_MAX_ITER),
                ..cfg.clone()
            };
            solvers::cosamp(dict, z, s, &inner)?.support
        }
        ProjectionKind::L1Proj => {
            let bp = solvers::bp_admm(dict, z, cfg)?;
            let nonzero = bp.alpha.iter().filter(|v| **v != ZERO).count();
            let keep = nonzero.min(target);
            solvers::top_indices(&bp.alpha, keep)
        }
    };
    pad_support(dict, z, support, target)
}

fn pad_support(
    dict: &Dictionary,
    z: &[C64],
    support: SupportSet,
    target: usize,
) -> Result<SupportSet> {
    if support.len() >= target {
        return Ok(support);
    }
    let proxy = dict.apply_adjoint(z)?;
    let mut out = support;
    let missing = target - out.len();
    let mut order: Vec<usize> = (0..proxy.len()).filter(|&j| !out.contains(j)).collect();
    order.sort_by(|&a, &b| {
        proxy[b]
            .norm_sqr()
            .partial_cmp(&proxy[a].norm_sqr())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    out = out.union(&SupportSet::from_indices(order.into_iter().take(missing)));
    Ok(out)
}
