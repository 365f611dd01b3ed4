//! Signal-space CoSaMP and its union-of-projections variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CVec, LinearOperator, C64, ZERO};
use crate::model::{Dictionary, MeasurementMatrix};
use crate::projections::{sd_project, ProjectionKind};
use crate::solvers::{
    scatter, RecoveryResult, SolverConfig, STAGNATION_DELTA, STAGNATION_PATIENCE,
};
use crate::support::SupportSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SscosampConfig {
    pub identify_kind: ProjectionKind,
    pub prune_kind: ProjectionKind,
    pub max_outer_iterations: usize,
    pub residual_tol_rel: f64,
    /// Settings for the inner projection solvers.
    pub inner_cfg: SolverConfig,
}

impl Default for SscosampConfig {
    fn default() -> Self {
        SscosampConfig {
            identify_kind: ProjectionKind::CosampProj,
            prune_kind: ProjectionKind::CosampProj,
            max_outer_iterations: 50,
            residual_tol_rel: 1e-7,
            inner_cfg: SolverConfig::default(),
        }
    }
}

impl SscosampConfig {
    /// Same projection for identification and pruning.
    pub fn with_projection(kind: ProjectionKind) -> Self {
        SscosampConfig {
            identify_kind: kind,
            prune_kind: kind,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UsscosampVariant {
    /// Identification alternates OMP (even iterations) and CoSaMP (odd).
    Alt,
    /// Identification takes the union of OMP and CoSaMP supports.
    Union,
}

impl fmt::Display for UsscosampVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UsscosampVariant::Alt => "alt",
            UsscosampVariant::Union => "union",
        })
    }
}

impl FromStr for UsscosampVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alt" => Ok(UsscosampVariant::Alt),
            "union" => Ok(UsscosampVariant::Union),
            _ => Err(Error::UnknownName {
                kind: "usscosamp variant",
                name: s.to_string(),
                valid: "alt, union".into(),
            }),
        }
    }
}

/// Residual bookkeeping shared by both outer loops.
struct Halting {
    y_norm: f64,
    tol: f64,
    best: f64,
    stalled: usize,
}

impl Halting {
    fn new(y_norm: f64, tol: f64) -> Self {
        Halting {
            y_norm,
            tol,
            best: f64::INFINITY,
            stalled: 0,
        }
    }

    /// Records a residual norm; true when the loop should stop.
    fn update(&mut self, res: f64) -> bool {
        if res < self.best - STAGNATION_DELTA * self.y_norm {
            self.best = res;
            self.stalled = 0;
        } else {
            self.stalled += 1;
        }
        res <= self.tol * self.y_norm || self.stalled >= STAGNATION_PATIENCE
    }
}

struct Problem<'a> {
    a: &'a MeasurementMatrix,
    dict: &'a Dictionary,
    y: &'a [C64],
}

impl Problem<'_> {
    /// Signal `D_T β` with `β = argmin ‖y − A D_T β‖`.
    fn fit_on(&self, t: &SupportSet) -> Result<CVec> {
        let dt = self.dict.columns(t)?;
        let adt = self.a.matrix().matmul(&dt)?;
        let beta = linalg::lstsq(&adt, self.y)?;
        linalg::matvec(&dt, &beta)
    }

    /// Orthogonal projection of `w` onto `range(D_Γ)` as (coefficients, signal).
    fn project(&self, gamma: &SupportSet, w: &[C64]) -> Result<(CVec, CVec)> {
        let dg = self.dict.columns(gamma)?;
        let coef = linalg::lstsq(&dg, w)?;
        let x = linalg::matvec(&dg, &coef)?;
        Ok((coef, x))
    }

    fn residual(&self, x: &[C64]) -> Result<CVec> {
        Ok(linalg::sub(self.y, &linalg::matvec(self.a.matrix(), x)?))
    }

    fn check(&self, k: usize) -> Result<()> {
        if self.a.n() != self.dict.n() {
            return Err(Error::mismatch(
                "sscosamp dictionary",
                self.a.n(),
                self.dict.n(),
            ));
        }
        if self.y.len() != self.a.m() {
            return Err(Error::mismatch(
                "sscosamp measurements",
                self.a.m(),
                self.y.len(),
            ));
        }
        if k == 0 || 2 * k > self.dict.d() {
            return Err(Error::InvalidParameter(format!(
                "sparsity {k} must lie in [1, d/2]"
            )));
        }
        Ok(())
    }

    fn finish(
        &self,
        gamma: SupportSet,
        coef: &[C64],
        x: CVec,
        iterations: usize,
    ) -> Result<RecoveryResult> {
        let alpha_hat = scatter(coef, &gamma, self.dict.d());
        let res = linalg::norm2(&self.residual(&x)?);
        Ok(RecoveryResult {
            alpha_hat,
            x_hat: x,
            support: gamma,
            iterations,
            final_residual_norm: res,
        })
    }

    fn zero(&self) -> RecoveryResult {
        RecoveryResult {
            alpha_hat: vec![ZERO; self.dict.d()],
            x_hat: vec![ZERO; self.dict.n()],
            support: SupportSet::empty(),
            iterations: 1,
            final_residual_norm: 0.0,
        }
    }
}

/// Signal-space CoSaMP: CoSaMP iterations whose identification and pruning
/// steps are replaced by approximate projections onto `k`-term
/// representations in `D`.
pub fn sscosamp(
    a: &MeasurementMatrix,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    cfg: &SscosampConfig,
) -> Result<RecoveryResult> {
    let p = Problem { a, dict, y };
    p.check(k)?;
    let y_norm = linalg::norm2(y);
    if y_norm == 0.0 {
        return Ok(p.zero());
    }
    let mut gamma = SupportSet::empty();
    let mut coef = Vec::new();
    let mut x = vec![ZERO; dict.n()];
    let mut residual = y.to_vec();
    let mut halt = Halting::new(y_norm, cfg.residual_tol_rel);
    let mut iterations = 0;

    while iterations < cfg.max_outer_iterations {
        iterations += 1;
        let v = linalg::adjoint_matvec(a.matrix(), &residual)?;
        let omega = sd_project(dict, &v, 2 * k, cfg.identify_kind, &cfg.inner_cfg)?;
        let t = omega.union(&gamma);
        let w = p.fit_on(&t)?;
        gamma = sd_project(dict, &w, k, cfg.prune_kind, &cfg.inner_cfg)?;
        (coef, x) = p.project(&gamma, &w)?;
        residual = p.residual(&x)?;
        if halt.update(linalg::norm2(&residual)) {
            break;
        }
    }
    p.finish(gamma, &coef, x, iterations)
}

/// Union-of-projections SSCoSaMP. Pruning always unions the OMP and CoSaMP
/// `k`-term supports and the estimate is refit on that union.
pub fn usscosamp(
    a: &MeasurementMatrix,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    variant: UsscosampVariant,
    cfg: &SscosampConfig,
) -> Result<RecoveryResult> {
    let p = Problem { a, dict, y };
    p.check(k)?;
    let y_norm = linalg::norm2(y);
    if y_norm == 0.0 {
        return Ok(p.zero());
    }
    let inner = &cfg.inner_cfg;
    let omp_k = ProjectionKind::OmpProj;
    let cos_k = ProjectionKind::CosampProj;
    let mut gamma = SupportSet::empty();
    let mut coef = Vec::new();
    let mut x = vec![ZERO; dict.n()];
    let mut residual = y.to_vec();
    let mut halt = Halting::new(y_norm, cfg.residual_tol_rel);
    let mut iterations = 0;

    while iterations < cfg.max_outer_iterations {
        let v = linalg::adjoint_matvec(a.matrix(), &residual)?;
        let omega = match variant {
            UsscosampVariant::Alt if iterations % 2 == 0 => {
                sd_project(dict, &v, 2 * k, omp_k, inner)?
            }
            UsscosampVariant::Alt => sd_project(dict, &v, 2 * k, cos_k, inner)?,
            UsscosampVariant::Union => sd_project(dict, &v, 2 * k, omp_k, inner)?
                .union(&sd_project(dict, &v, 2 * k, cos_k, inner)?),
        };
        iterations += 1;
        let t = omega.union(&gamma);
        let w = p.fit_on(&t)?;
        gamma =
            sd_project(dict, &w, k, omp_k, inner)?.union(&sd_project(dict, &w, k, cos_k, inner)?);
        let refit = p.fit_on(&gamma)?;
        (coef, x) = p.project(&gamma, &refit)?;
        residual = p.residual(&x)?;
        if halt.update(linalg::norm2(&residual)) {
            break;
        }
    }
    p.finish(gamma, &coef, x, iterations)
}
