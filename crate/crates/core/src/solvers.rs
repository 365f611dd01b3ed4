//! Synthesis-domain recovery on `Φ = A·D`: OMP, CoSaMP, NOMP, ε-OMP and
//! ℓ1 basis pursuit (ADMM) with least-squares debiasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, LinearOperator, C64, ZERO};
use crate::model::{Composed, Dictionary, MeasurementMatrix};
use crate::support::SupportSet;

/// Consecutive non-improving iterations before an iterative method halts.
pub const STAGNATION_PATIENCE: usize = 3;
/// Minimum relative residual decrease that counts as improvement.
pub const STAGNATION_DELTA: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Halting threshold on `‖r‖₂ / ‖y‖₂`.
    pub residual_tol_rel: f64,
    /// ADMM penalty, relative to the problem's own scale (see [`bp_admm`]).
    pub admm_rho: f64,
    pub admm_max_iter: usize,
    pub admm_tol: f64,
    /// Coefficients below this fraction of the largest are dropped before debiasing.
    pub debias_threshold_rel: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 50,
            residual_tol_rel: 1e-7,
            admm_rho: 1.0,
            admm_max_iter: 3000,
            admm_tol: 1e-7,
            debias_threshold_rel: 1e-4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |x: f64| x.is_finite() && x >= 0.0;
        if self.max_iterations == 0 || self.admm_max_iter == 0 {
            return Err(Error::InvalidParameter(
                "iteration counts must be at least 1".into(),
            ));
        }
        if !tol_ok(self.residual_tol_rel)
            || !tol_ok(self.admm_tol)
            || !tol_ok(self.debias_threshold_rel)
        {
            return Err(Error::InvalidParameter("tolerances must be ≥ 0".into()));
        }
        if !(self.admm_rho > 0.0 && self.admm_rho.is_finite()) {
            return Err(Error::InvalidParameter("admm_rho must be positive".into()));
        }
        Ok(())
    }
}

/// Coefficient-domain output of a solver run on some operator.
#[derive(Clone, Debug)]
pub struct SparseSolution {
    pub alpha: CVec,
    pub support: SupportSet,
    pub iterations: usize,
    pub residual_norm: f64,
    /// `‖y − Φα‖₂` after each iteration.
    pub residual_history: Vec<f64>,
}

impl SparseSolution {
    fn zero(cols: usize, y: &[C64]) -> Self {
        SparseSolution {
            alpha: vec![ZERO; cols],
            support: SupportSet::empty(),
            iterations: 0,
            residual_norm: linalg::norm2(y),
            residual_history: Vec::new(),
        }
    }

    pub fn into_recovery(self, dict: &Dictionary) -> Result<RecoveryResult> {
        let x_hat = dict.apply(&self.alpha)?;
        Ok(RecoveryResult {
            alpha_hat: self.alpha,
            x_hat,
            support: self.support,
            iterations: self.iterations,
            final_residual_norm: self.residual_norm,
        })
    }
}

/// Recovered coefficients and signal.
#[derive(Clone, Debug)]
pub struct RecoveryResult {
    pub alpha_hat: CVec,
    pub x_hat: CVec,
    pub support: SupportSet,
    pub iterations: usize,
    pub final_residual_norm: f64,
}

/// Index of the largest `|v_j|` with `j ∉ exclude`; ties go to the lowest index.
pub(crate) fn argmax_excluding(v: &[C64], exclude: &SupportSet) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, z) in v.iter().enumerate() {
        if exclude.contains(j) {
            continue;
        }
        let mag = z.norm_sqr();
        if best.is_none_or(|(_, b)| mag > b) {
            best = Some((j, mag));
        }
    }
    best.map(|(j, _)| j)
}

/// The `s` indices of largest magnitude (ties to the lowest index).
pub(crate) fn top_indices(v: &[C64], s: usize) -> SupportSet {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| {
        v[b].norm_sqr()
            .partial_cmp(&v[a].norm_sqr())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(s);
    SupportSet::from_indices(order)
}

pub(crate) fn scatter(coef: &[C64], support: &SupportSet, len: usize) -> CVec {
    let mut out = vec![ZERO; len];
    for (c, j) in coef.iter().zip(support.iter()) {
        out[j] = *c;
    }
    out
}

/// Least squares restricted to `support`: returns (coefficients on the
/// support, residual `y − Φ_S β`).
pub(crate) fn restricted_lstsq<M: LinearOperator + ?Sized>(
    phi: &M,
    support: &SupportSet,
    y: &[C64],
) -> Result<(CVec, CVec)> {
    if support.is_empty() {
        return Ok((Vec::new(), y.to_vec()));
    }
    let sub = phi.columns(support)?;
    let coef = linalg::lstsq(&sub, y)?;
    let fit = linalg::matvec(&sub, &coef)?;
    Ok((coef, linalg::sub(y, &fit)))
}

fn check_system<M: LinearOperator + ?Sized>(phi: &M, y: &[C64], k: usize) -> Result<()> {
    if y.len() != phi.nrows() {
        return Err(Error::mismatch("solver measurements", phi.nrows(), y.len()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "sparsity must be at least 1".into(),
        ));
    }
    if k > phi.nrows() {
        return Err(Error::InvalidParameter(format!(
            "sparsity {k} exceeds the {} available rows",
            phi.nrows()
        )));
    }
    Ok(())
}

/// Orthogonal Matching Pursuit: `k` greedy selections of the largest proxy
/// entry `|Φ*r|`, each followed by least squares on the grown support.
pub fn omp<M: LinearOperator + ?Sized>(
    phi: &M,
    y: &[C64],
    k: usize,
    _cfg: &SolverConfig,
) -> Result<SparseSolution> {
    greedy_windows(phi, y, k, 1)
}

/// Shared OMP/NOMP loop; `window == 1` is plain OMP.
fn greedy_windows<M: LinearOperator + ?Sized>(
    phi: &M,
    y: &[C64],
    k: usize,
    window: usize,
) -> Result<SparseSolution> {
    check_system(phi, y, k)?;
    let d = phi.ncols();
    let mut support = SupportSet::empty();
    let mut residual = y.to_vec();
    let mut coef = Vec::new();
    let mut history = Vec::with_capacity(k);
    for _ in 0..k {
        let proxy = phi.apply_adjoint(&residual)?;
        let Some(lambda) = argmax_excluding(&proxy, &support) else {
            break;
        };
        let block = nomp_window(&proxy, lambda, window, d);
        support = support.union(&SupportSet::from_indices(block));
        (coef, residual) = restricted_lstsq(phi, &support, y)?;
        history.push(linalg::norm2(&residual));
    }
    Ok(SparseSolution {
        alpha: scatter(&coef, &support, d),
        residual_norm: linalg::norm2(&residual),
        iterations: history.len(),
        residual_history: history,
        support,
    })
}

/// Window of `w` circularly adjacent indices around `lambda`. Odd `w` is
/// symmetric; even `w` takes `(w−2)/2` per side plus whichever outer
/// neighbour has the larger proxy magnitude (ties to the left).
pub fn nomp_window(proxy: &[C64], lambda: usize, w: usize, d: usize) -> Vec<usize> {
    let wrap = |offset: isize| (lambda as isize + offset).rem_euclid(d as isize) as usize;
    let half = if w % 2 == 1 { (w - 1) / 2 } else { (w - 2) / 2 } as isize;
    let mut out: Vec<usize> = (-half..=half).map(wrap).collect();
    if w % 2 == 0 {
        let edge = (w / 2) as isize;
        let (left, right) = (wrap(-edge), wrap(edge));
        out.push(if proxy[right].norm_sqr() > proxy[left].norm_sqr() {
            right
        } else {
            left
        });
    }
    out
}

/// Compressive Sampling Matching Pursuit with a final debiasing solve.
///
/// Each iteration merges the `2k` largest proxy entries with the current
/// support, solves least squares on the merge and keeps the `k` largest
/// coefficients. Halts on relative residual below `residual_tol_rel`, on
/// [`STAGNATION_PATIENCE`] iterations without improvement, or at
/// `max_iterations`. The lowest-residual support seen is debiased and returned.
pub fn cosamp<M: LinearOperator + ?Sized>(
    phi: &M,
    y: &[C64],
    k: usize,
    cfg: &SolverConfig,
) -> Result<SparseSolution> {
    check_system(phi, y, k)?;
    let d = phi.ncols();
    let y_norm = linalg::norm2(y);
    if y_norm == 0.0 {
        return Ok(SparseSolution::zero(d, y));
    }
    let mut support = SupportSet::empty();
    let mut residual = y.to_vec();
    let mut history = Vec::new();
    let mut best = (f64::INFINITY, SupportSet::empty());
    let mut stalled = 0;

    for _ in 0..cfg.max_iterations {
        let proxy = phi.apply_adjoint(&residual)?;
        let merged = top_indices(&proxy, (2 * k).min(d)).union(&support);
        let (coef, _) = restricted_lstsq(phi, &merged, y)?;
        let full = scatter(&coef, &merged, d);
        support = top_indices(&full, k);
        let kept: CVec = support.iter().map(|j| full[j]).collect();
        let fit = linalg::matvec(&phi.columns(&support)?, &kept)?;
        residual = linalg::sub(y, &fit);
        let res = linalg::norm2(&residual);
        history.push(res);

        if res < best.0 - STAGNATION_DELTA * y_norm {
            best = (res, support.clone());
            stalled = 0;
        } else {
            stalled += 1;
        }
        if res <= cfg.residual_tol_rel * y_norm || stalled >= STAGNATION_PATIENCE {
            break;
        }
    }

    let support = best.1;
    let (coef, residual) = restricted_lstsq(phi, &support, y)?;
    Ok(SparseSolution {
        alpha: scatter(&coef, &support, d),
        residual_norm: linalg::norm2(&residual),
        iterations: history.len(),
        residual_history: history,
        support,
    })
}

/// Neighborly OMP: OMP on `Φ = A·D` that adds a `w`-window of adjacent
/// atoms around each selected index. Requires `1 ≤ w ≤ ⌊m/k⌋`.
pub fn nomp(
    a: &MeasurementMatrix,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    w: usize,
    _cfg: &SolverConfig,
) -> Result<RecoveryResult> {
    let phi = dict.left_multiply(a.matrix())?;
    nomp_on(&phi, dict, y, k, w)
}

pub(crate) fn nomp_on(
    phi: &CMat,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    w: usize,
) -> Result<RecoveryResult> {
    let m = phi.rows();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "sparsity must be at least 1".into(),
        ));
    }
    if w == 0 || w > m / k {
        return Err(Error::InvalidParameter(format!(
            "window {w} must lie in [1, ⌊m/k⌋ = {}]",
            m / k
        )));
    }
    greedy_windows(phi, y, k, w)?.into_recovery(dict)
}

/// Normalised squared correlation of every atom with its best match in `gamma`.
fn extension_scores(dict: &Dictionary, gamma: &SupportSet) -> Result<Vec<f64>> {
    let mut norms = vec![0.0; dict.d()];
    for t in 0..dict.n() {
        for (acc, z) in norms.iter_mut().zip(dict.matrix().row(t)) {
            *acc += z.norm_sqr();
        }
    }
    let mut scores = vec![0.0f64; dict.d()];
    for j in gamma.iter() {
        let corr = linalg::adjoint_matvec(dict.matrix(), &dict.atom(j))?;
        for (i, c) in corr.iter().enumerate() {
            let s = c.norm_sqr() / (norms[i] * norms[j]);
            scores[i] = scores[i].max(s);
        }
        scores[j] = scores[j].max(1.0);
    }
    Ok(scores)
}

/// ε-extension: every atom whose squared normalised correlation with some
/// atom of `gamma` is at least `1 − ε²`.
pub fn eps_extension(dict: &Dictionary, gamma: &SupportSet, eps: f64) -> Result<SupportSet> {
    check_eps(eps)?;
    let threshold = 1.0 - eps * eps;
    let scores = extension_scores(dict, gamma)?;
    Ok(gamma.union(&SupportSet::from_indices(
        (0..dict.d()).filter(|&i| scores[i] >= threshold),
    )))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "ε = {eps} must lie in (0, 1)"
        )))
    }
}

/// ε-OMP: plain OMP for `k` steps, then a single least-squares solve on the
/// ε-extended support. Extensions larger than `m` keep the `m` atoms most
/// correlated with the OMP support (ties to the lowest index).
pub fn eps_omp(
    a: &MeasurementMatrix,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<RecoveryResult> {
    let phi = dict.left_multiply(a.matrix())?;
    eps_omp_on(&phi, dict, y, k, eps, cfg)
}

pub(crate) fn eps_omp_on(
    phi: &CMat,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<RecoveryResult> {
    check_eps(eps)?;
    let base = omp(phi, y, k, cfg)?;
    let threshold = 1.0 - eps * eps;
    let scores = extension_scores(dict, &base.support)?;
    let mut extended: Vec<usize> = (0..dict.d())
        .filter(|&i| scores[i] >= threshold || base.support.contains(i))
        .collect();
    let m = phi.rows();
    if extended.len() > m {
        extended.sort_by(|&p, &q| {
            scores[q]
                .partial_cmp(&scores[p])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(p.cmp(&q))
        });
        extended.truncate(m);
    }
    let support = SupportSet::from_indices(extended);
    let (coef, residual) = restricted_lstsq(phi, &support, y)?;
    SparseSolution {
        alpha: scatter(&coef, &support, dict.d()),
        residual_norm: linalg::norm2(&residual),
        iterations: base.iterations,
        residual_history: base.residual_history,
        support,
    }
    .into_recovery(dict)
}

/// Output of [`bp_admm`].
#[derive(Clone, Debug)]
pub struct BpSolution {
    pub alpha: CVec,
    pub converged: bool,
    pub iterations: usize,
    /// `‖Mα − b‖₂ / ‖b‖₂`.
    pub relative_residual: f64,
}

fn soft_threshold(z: C64, t: f64) -> C64 {
    let mag = z.norm();
    if mag <= t {
        ZERO
    } else {
        z * ((mag - t) / mag)
    }
}

/// Basis pursuit `min ‖α‖₁ s.t. Mα = b` by ADMM on the split `x = z`, with
/// `x` projected onto the affine constraint and `z` soft-thresholded.
///
/// The problem is solved in normalised units: `b` is rescaled so the
/// minimum-ℓ2-norm solution has unit RMS magnitude on its largest entries,
/// which makes `admm_rho` dimensionless. The sparse `z` iterate is returned;
/// the run counts as converged once `‖Mz − b‖ ≤ admm_tol·‖b‖` and `z` has
/// settled to the same relative tolerance.
pub fn bp_admm<M: LinearOperator + ?Sized>(
    op: &M,
    b: &[C64],
    cfg: &SolverConfig,
) -> Result<BpSolution> {
    if b.len() != op.nrows() {
        return Err(Error::mismatch("bp_admm", op.nrows(), b.len()));
    }
    let d = op.ncols();
    let b_norm = linalg::norm2(b);
    if b_norm == 0.0 {
        return Ok(BpSolution {
            alpha: vec![ZERO; d],
            converged: true,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let gram = linalg::Cholesky::new(&op.row_gram())?;
    let lift = |r: &[C64]| op.apply_adjoint(&gram.solve(r));

    let min_norm = lift(b)?;
    let scale = linalg::norm_inf(&min_norm);
    let bs: CVec = b.iter().map(|v| v / scale).collect();
    let bs_norm = b_norm / scale;
    let rho = cfg.admm_rho;
    let shrink = 1.0 / rho;

    // x = v − M*(MM*)⁻¹(Mv − b)
    let project = |v: &[C64]| -> Result<CVec> {
        let mv = op.apply(v)?;
        let r = linalg::sub(&mv, &bs);
        let corr = lift(&r)?;
        Ok(linalg::sub(v, &corr))
    };

    let mut z: CVec = min_norm.iter().map(|v| v / scale).collect();
    let mut u = vec![ZERO; d];
    let mut converged = false;
    let mut iterations = 0;
    let mut rel_res = f64::INFINITY;
    let mut v = vec![ZERO; d];
    for it in 1..=cfg.admm_max_iter {
        iterations = it;
        for ((vi, zi), ui) in v.iter_mut().zip(&z).zip(&u) {
            *vi = zi - ui;
        }
        let x = project(&v)?;
        let mut dz = 0.0;
        let mut primal = 0.0;
        for ((xi, ui), zi) in x.iter().zip(u.iter_mut()).zip(z.iter_mut()) {
            let new_z = soft_threshold(xi + *ui, shrink);
            dz += (new_z - *zi).norm_sqr();
            *ui += xi - new_z;
            primal += (xi - new_z).norm_sqr();
            *zi = new_z;
        }
        let z_norm = linalg::norm2(&z).max(f64::MIN_POSITIVE);
        let settled = primal.sqrt() <= cfg.admm_tol * z_norm && dz.sqrt() <= cfg.admm_tol * z_norm;
        if settled || it % 25 == 0 || it == cfg.admm_max_iter {
            let mz = op.apply(&z)?;
            rel_res = linalg::norm2(&linalg::sub(&mz, &bs)) / bs_norm;
            if settled && rel_res <= cfg.admm_tol {
                converged = true;
                break;
            }
        }
    }
    Ok(BpSolution {
        alpha: z.iter().map(|v| v * scale).collect(),
        converged,
        iterations,
        relative_residual: rel_res,
    })
}

/// ℓ1 recovery: basis pursuit on `Φ = A·D`, then least squares on the (at
/// most `k`) coefficients above `debias_threshold_rel · max|α|`.
pub fn l1_recover(
    a: &MeasurementMatrix,
    dict: &Dictionary,
    y: &[C64],
    k: usize,
    cfg: &SolverConfig,
) -> Result<RecoveryResult> {
    let op = Composed { a, dict };
    check_system(&op, y, k)?;
    let bp = bp_admm(&op, y, cfg)?;
    let support = debias_support(&bp.alpha, k, cfg.debias_threshold_rel);
    let (coef, residual) = restricted_lstsq(&op, &support, y)?;
    SparseSolution {
        alpha: scatter(&coef, &support, dict.d()),
        residual_norm: linalg::norm2(&residual),
        iterations: bp.iterations,
        residual_history: Vec::new(),
        support,
    }
    .into_recovery(dict)
}

fn debias_support(alpha: &[C64], k: usize, threshold_rel: f64) -> SupportSet {
    let peak = linalg::norm_inf(alpha);
    if peak == 0.0 {
        return SupportSet::empty();
    }
    let passing: Vec<C64> = alpha
        .iter()
        .map(|&z| {
            if z.norm() > threshold_rel * peak {
                z
            } else {
                ZERO
            }
        })
        .collect();
    let count = passing.iter().filter(|z| **z != ZERO).count();
    top_indices(&passing, count.min(k))
}
