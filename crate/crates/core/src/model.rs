//! Problem construction: dictionaries, Gaussian measurement matrices,
//! synthesis `x = Dα`, measurement `y = Ax + e`, and the SNR recovery metric.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, LinearOperator, C64, ZERO};
use crate::support::SupportSet;

/// Column norms of a dictionary must be within this of one.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Reconstruction SNR (dB) above which a recovery counts as perfect.
pub const PERFECT_RECOVERY_DB: f64 = 100.0;

/// Deterministic random stream keyed by a master seed and a stream path
/// (experiment, grid index, trial index, ...). Identical keys always give
/// identical draws, independent of which thread draws them.
#[derive(Clone, Debug)]
pub struct SeededRng {
    master_seed: u64,
    stream_path: Vec<u64>,
    inner: ChaCha12Rng,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(master_seed: u64, stream_path: &[u64]) -> Self {
        let mut state = master_seed;
        let mut acc = splitmix64(&mut state);
        for (depth, &p) in stream_path.iter().enumerate() {
            state ^= p.wrapping_add(acc).rotate_left(17 + depth as u32);
            acc = splitmix64(&mut state);
        }
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        SeededRng {
            master_seed,
            stream_path: stream_path.to_vec(),
            inner: ChaCha12Rng::from_seed(seed),
        }
    }

    /// Child stream with `tag` appended to the path.
    pub fn substream(&self, tag: u64) -> SeededRng {
        let mut path = self.stream_path.clone();
        path.push(tag);
        SeededRng::new(self.master_seed, &path)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_path(&self) -> &[u64] {
        &self.stream_path
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// FFT-backed apply for the overcomplete DFT, `D[t, j] = e^{2πi·tj/d}/√n`.
#[derive(Clone)]
struct DftTransform {
    n: usize,
    d: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl DftTransform {
    fn new(n: usize, d: usize) -> Self {
        let mut planner = FftPlanner::new();
        DftTransform {
            n,
            d,
            forward: planner.plan_fft_forward(d),
            inverse: planner.plan_fft_inverse(d),
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    fn synthesize(&self, alpha: &[C64]) -> CVec {
        let mut buf = alpha.to_vec();
        self.inverse.process(&mut buf);
        buf.truncate(self.n);
        buf.iter_mut().for_each(|z| *z *= self.scale);
        buf
    }

    fn analyze(&self, z: &[C64]) -> CVec {
        let mut buf = vec![ZERO; self.d];
        buf[..self.n].copy_from_slice(z);
        self.forward.process(&mut buf);
        buf.iter_mut().for_each(|v| *v *= self.scale);
        buf
    }
}

impl std::fmt::Debug for DftTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DftTransform")
            .field("n", &self.n)
            .field("d", &self.d)
            .finish()
    }
}

/// Synthesis dictionary `D ∈ ℂ^{n×d}` with unit-norm columns.
#[derive(Clone, Debug)]
pub struct Dictionary {
    matrix: CMat,
    oversampling: usize,
    fast: Option<DftTransform>,
    gram: OnceLock<CMat>,
}

impl Dictionary {
    /// Wraps an arbitrary matrix, checking unit column norms and `d = oversampling·n`.
    pub fn new(matrix: CMat, oversampling: usize) -> Result<Self> {
        if oversampling == 0 || matrix.cols() != oversampling * matrix.rows() {
            return Err(Error::mismatch(
                "Dictionary::new",
                oversampling * matrix.rows(),
                matrix.cols(),
            ));
        }
        let mut norms = vec![0.0; matrix.cols()];
        for i in 0..matrix.rows() {
            for (acc, z) in norms.iter_mut().zip(matrix.row(i)) {
                *acc += z.norm_sqr();
            }
        }
        if let Some(j) = norms
            .iter()
            .position(|s| (s.sqrt() - 1.0).abs() > UNIT_NORM_TOL)
        {
            return Err(Error::InvalidParameter(format!(
                "dictionary column {j} has norm {}",
                norms[j].sqrt()
            )));
        }
        Ok(Dictionary {
            matrix,
            oversampling,
            fast: None,
            gram: OnceLock::new(),
        })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn d(&self) -> usize {
        self.matrix.cols()
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    pub fn atom(&self, j: usize) -> CVec {
        self.matrix.column(j)
    }

    /// Whether the FFT fast path is attached.
    pub fn has_fast_transform(&self) -> bool {
        self.fast.is_some()
    }

    /// Copy of this dictionary that always uses dense products.
    pub fn without_fast_transform(&self) -> Dictionary {
        Dictionary {
            fast: None,
            ..self.clone()
        }
    }

    /// `A·D` for a left factor with `n` columns.
    pub fn left_multiply(&self, a: &CMat) -> Result<CMat> {
        if a.cols() != self.n() {
            return Err(Error::mismatch(
                "Dictionary::left_multiply",
                self.n(),
                a.cols(),
            ));
        }
        match &self.fast {
            Some(fft) => {
                let d = self.d();
                let mut data = Vec::with_capacity(a.rows() * d);
                let mut buf = vec![ZERO; d];
                for i in 0..a.rows() {
                    buf.iter_mut().for_each(|z| *z = ZERO);
                    buf[..self.n()].copy_from_slice(a.row(i));
                    fft.inverse.process(&mut buf);
                    data.extend(buf.iter().map(|z| z * fft.scale));
                }
                CMat::new(a.rows(), d, data)
            }
            None => a.matmul(&self.matrix),
        }
    }
}

impl LinearOperator for Dictionary {
    fn nrows(&self) -> usize {
        self.n()
    }

    fn ncols(&self) -> usize {
        self.d()
    }

    fn apply(&self, v: &[C64]) -> Result<CVec> {
        match &self.fast {
            Some(fft) if v.len() == fft.d => Ok(fft.synthesize(v)),
            _ => linalg::matvec(&self.matrix, v),
        }
    }

    fn apply_adjoint(&self, v: &[C64]) -> Result<CVec> {
        match &self.fast {
            Some(fft) if v.len() == fft.n => Ok(fft.analyze(v)),
            _ => linalg::adjoint_matvec(&self.matrix, v),
        }
    }

    fn columns(&self, s: &SupportSet) -> Result<CMat> {
        linalg::select_columns(&self.matrix, s)
    }

    fn row_gram(&self) -> CMat {
        self.gram
            .get_or_init(|| match &self.fast {
                // rows of the DFT frame are orthogonal with squared norm d/n
                Some(_) => {
                    let r = C64::new(self.oversampling as f64, 0.0);
                    CMat::from_fn(self.n(), self.n(), |i, j| if i == j { r } else { ZERO })
                }
                None => self.matrix.row_gram(),
            })
            .clone()
    }
}

/// `n × (oversampling·n)` overcomplete DFT with entries `e^{2πi·tj/d}/√n`.
pub fn build_overcomplete_dft(n: usize, oversampling: usize) -> Result<Dictionary> {
    if n == 0 || oversampling == 0 {
        return Err(Error::InvalidParameter(
            "n and oversampling must be positive".into(),
        ));
    }
    let d = n
        .checked_mul(oversampling)
        .filter(|d| {
            d.checked_mul(n)
                .is_some_and(|total| total <= isize::MAX as usize / 16)
        })
        .ok_or_else(|| Error::InvalidParameter(format!("{n}×{n}·{oversampling} overflows")))?;
    let scale = 1.0 / (n as f64).sqrt();
    // reduce t·j mod d before forming the angle to keep the phase exact
    let matrix = CMat::from_fn(n, d, |t, j| {
        let phase = ((t as u128 * j as u128) % d as u128) as f64;
        C64::from_polar(scale, 2.0 * PI * phase / d as f64)
    });
    Ok(Dictionary {
        matrix,
        oversampling,
        fast: Some(DftTransform::new(n, d)),
        gram: OnceLock::new(),
    })
}

/// Real-valued measurement matrix stored as complex with zero imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementMatrix(CMat);

impl MeasurementMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.data().iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidParameter(
                "measurement matrix must be real".into(),
            ));
        }
        Ok(MeasurementMatrix(matrix))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.rows()
    }

    pub fn n(&self) -> usize {
        self.0.cols()
    }
}

/// `m × n` matrix of i.i.d. standard normal entries drawn row-major from `rng`.
pub fn gaussian_measurement(m: usize, n: usize, rng: &mut SeededRng) -> Result<MeasurementMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    let data: Vec<f64> = (0..m * n)
        .map(|_| StandardNormal.sample(&mut *rng))
        .collect();
    MeasurementMatrix::new(CMat::from_real(m, n, &data)?)
}

/// `x = Dα`.
pub fn synthesize(dict: &Dictionary, alpha: &[C64]) -> Result<CVec> {
    if alpha.len() != dict.d() {
        return Err(Error::mismatch("synthesize", dict.d(), alpha.len()));
    }
    dict.apply(alpha)
}

/// `y = Ax + e`.
pub fn measure(a: &MeasurementMatrix, x: &[C64], noise: &[C64]) -> Result<CVec> {
    if noise.len() != a.m() {
        return Err(Error::mismatch("measure", a.m(), noise.len()));
    }
    let mut y = linalg::matvec(a.matrix(), x)?;
    for (yi, e) in y.iter_mut().zip(noise) {
        *yi += e;
    }
    Ok(y)
}

/// `20·log10(‖x‖₂ / ‖x − x̂‖₂)`; `+∞` for exact recovery.
pub fn snr_db(x: &[C64], xhat: &[C64]) -> Result<f64> {
    if x.len() != xhat.len() {
        return Err(Error::mismatch("snr_db", x.len(), xhat.len()));
    }
    let signal = linalg::norm2(x);
    if signal == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let err = linalg::norm2(&linalg::sub(x, xhat));
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (signal / err).log10())
}

pub fn is_perfect_recovery(x: &[C64], xhat: &[C64]) -> Result<bool> {
    Ok(snr_db(x, xhat)? > PERFECT_RECOVERY_DB)
}

/// The composed sensing operator `Φ = A·D`, applied without forming `Φ`.
pub struct Composed<'a> {
    pub a: &'a MeasurementMatrix,
    pub dict: &'a Dictionary,
}

impl LinearOperator for Composed<'_> {
    fn nrows(&self) -> usize {
        self.a.m()
    }

    fn ncols(&self) -> usize {
        self.dict.d()
    }

    fn apply(&self, v: &[C64]) -> Result<CVec> {
        linalg::matvec(self.a.matrix(), &self.dict.apply(v)?)
    }

    fn apply_adjoint(&self, v: &[C64]) -> Result<CVec> {
        self.dict
            .apply_adjoint(&linalg::adjoint_matvec(self.a.matrix(), v)?)
    }

    fn columns(&self, s: &SupportSet) -> Result<CMat> {
        self.a.matrix().matmul(&self.dict.columns(s)?)
    }

    fn row_gram(&self) -> CMat {
        let a = self.a.matrix();
        let inner = self.dict.row_gram();
        a.matmul(&inner)
            .and_then(|ag| ag.matmul(&a.adjoint()))
            .expect("shapes agree by construction")
    }
}

/// One trial's data: `y = A·D·α + e`.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub a: MeasurementMatrix,
    pub dict: Arc<Dictionary>,
    pub alpha: CVec,
    pub x: CVec,
    pub y: CVec,
    pub noise: CVec,
}

impl ProblemInstance {
    pub fn new(
        a: MeasurementMatrix,
        dict: Arc<Dictionary>,
        alpha: CVec,
        noise: Option<CVec>,
    ) -> Result<Self> {
        if a.n() != dict.n() {
            return Err(Error::mismatch("ProblemInstance::new", dict.n(), a.n()));
        }
        let noise = noise.unwrap_or_else(|| vec![ZERO; a.m()]);
        let x = synthesize(&dict, &alpha)?;
        let y = measure(&a, &x, &noise)?;
        Ok(ProblemInstance {
            a,
            dict,
            alpha,
            x,
            y,
            noise,
        })
    }

    /// Dense `Φ = A·D`.
    pub fn phi(&self) -> Result<CMat> {
        self.dict.left_multiply(self.a.matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, norm2};

    fn dirichlet(n: usize, d: usize, delta: usize) -> f64 {
        if delta % d == 0 {
            return 1.0;
        }
        let x = PI * delta as f64 / d as f64;
        ((n as f64 * x).sin() / (n as f64 * x.sin())).abs()
    }

    #[test]
    fn single_sample_dictionary_is_all_ones() {
        let dict = build_overcomplete_dft(1, 5).unwrap();
        assert_eq!((dict.n(), dict.d()), (1, 5));
        for j in 0..5 {
            assert!((dict.matrix().get(0, j) - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn full_size_dictionary_has_unit_columns() {
        let dict = build_overcomplete_dft(256, 4).unwrap();
        assert_eq!((dict.n(), dict.d()), (256, 1024));
        for j in 0..dict.d() {
            assert!((norm2(&dict.atom(j)) - 1.0).abs() <= UNIT_NORM_TOL);
        }
    }

    #[test]
    fn adjacent_atom_correlations_follow_dirichlet_kernel() {
        let dict = build_overcomplete_dft(256, 4).unwrap();
        let base = dict.atom(100);
        for (delta, expect) in [(1, 0.9003), (3, 0.3001), (4, 0.0)] {
            let got = dot(&base, &dict.atom(100 + delta)).norm();
            assert!((got - dirichlet(256, 1024, delta)).abs() < 1e-6);
            assert!((got - expect).abs() < 1e-4, "delta {delta}: {got}");
        }
    }

    #[test]
    fn all_offsets_match_dirichlet() {
        let dict = build_overcomplete_dft(64, 4).unwrap();
        let base = dict.atom(0);
        for delta in 0..dict.d() {
            let got = dot(&base, &dict.atom(delta)).norm();
            assert!((got - dirichlet(64, 256, delta)).abs() < 1e-6);
        }
    }

    #[test]
    fn fast_transform_matches_dense() {
        let dict = build_overcomplete_dft(32, 4).unwrap();
        let dense = dict.without_fast_transform();
        let mut rng = SeededRng::new(3, &[1]);
        let alpha: CVec = (0..128)
            .map(|_| {
                C64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        let a = dict.apply(&alpha).unwrap();
        let b = dense.apply(&alpha).unwrap();
        assert!(norm2(&linalg::sub(&a, &b)) < 1e-12 * norm2(&b));
        let z = &a;
        let a = dict.apply_adjoint(z).unwrap();
        let b = dense.apply_adjoint(z).unwrap();
        assert!(norm2(&linalg::sub(&a, &b)) < 1e-12 * norm2(&b));

        let meas = gaussian_measurement(10, 32, &mut rng).unwrap();
        let fast = dict.left_multiply(meas.matrix()).unwrap();
        let slow = dense.left_multiply(meas.matrix()).unwrap();
        let diff: f64 = fast
            .data()
            .iter()
            .zip(slow.data())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn gaussian_measurement_is_deterministic_and_standard() {
        let a1 = gaussian_measurement(100, 256, &mut SeededRng::new(42, &[0, 1, 2])).unwrap();
        let a2 = gaussian_measurement(100, 256, &mut SeededRng::new(42, &[0, 1, 2])).unwrap();
        assert_eq!(a1, a2);
        let a3 = gaussian_measurement(100, 256, &mut SeededRng::new(42, &[0, 1, 3])).unwrap();
        assert_ne!(a1, a3);

        let vals: Vec<f64> = a1.matrix().data().iter().map(|z| z.re).collect();
        let count = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / count;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
        assert!(mean.abs() < 0.025, "mean {mean}");
        assert!((0.95..=1.05).contains(&var), "variance {var}");
    }

    #[test]
    fn synthesize_cases() {
        let dict = build_overcomplete_dft(16, 4).unwrap();
        let zero = synthesize(&dict, &vec![ZERO; 64]).unwrap();
        assert!(norm2(&zero) == 0.0);
        let mut e = vec![ZERO; 64];
        e[9] = C64::new(1.0, 0.0);
        let x = synthesize(&dict, &e).unwrap();
        assert!(norm2(&linalg::sub(&x, &dict.atom(9))) < 1e-13);
        assert!(synthesize(&dict, &e[..10]).is_err());

        let mut rng = SeededRng::new(5, &[]);
        let mut alpha = vec![ZERO; 64];
        for j in [1, 7, 8, 20, 33, 40, 50, 63] {
            alpha[j] = C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
        }
        let x = synthesize(&dict, &alpha).unwrap();
        let mut naive = vec![ZERO; 16];
        for (t, v) in naive.iter_mut().enumerate() {
            for (j, a) in alpha.iter().enumerate() {
                *v += dict.matrix().get(t, j) * a;
            }
        }
        assert!((norm2(&x) - norm2(&naive)).abs() < 1e-12);
    }

    #[test]
    fn measure_cases() {
        let a = gaussian_measurement(5, 8, &mut SeededRng::new(1, &[])).unwrap();
        let zeros = vec![ZERO; 8];
        let noise: CVec = (0..5).map(|i| C64::new(i as f64, -1.0)).collect();
        assert_eq!(measure(&a, &zeros, &vec![ZERO; 5]).unwrap(), vec![ZERO; 5]);
        assert_eq!(measure(&a, &zeros, &noise).unwrap(), noise);

        let x: CVec = (0..8).map(|i| C64::new(0.5 * i as f64, 1.0)).collect();
        let y = measure(&a, &x, &noise).unwrap();
        for i in 0..5 {
            let mut expect = noise[i];
            for j in 0..8 {
                expect += a.matrix().get(i, j) * x[j];
            }
            assert!((y[i] - expect).norm() < 1e-12);
        }
        assert!(measure(&a, &x, &noise[..3]).is_err());
        assert!(MeasurementMatrix::new(CMat::identity(2)).is_ok());
        assert!(MeasurementMatrix::new(CMat::from_fn(1, 1, |_, _| C64::new(0.0, 1.0))).is_err());
    }

    #[test]
    fn snr_cases() {
        let x = vec![C64::new(1.0, 0.0), ZERO];
        assert_eq!(snr_db(&x, &x).unwrap(), f64::INFINITY);
        assert!(snr_db(&x, &[ZERO, ZERO]).unwrap().abs() < 1e-15);
        let xhat = vec![C64::new(1.0 - 1e-5, 0.0), ZERO];
        assert!((snr_db(&x, &xhat).unwrap() - 100.0).abs() < 1e-9);
        assert!(matches!(snr_db(&[ZERO], &[ZERO]), Err(Error::ZeroSignal)));
        assert!(snr_db(&x, &x[..1]).is_err());
    }

    #[test]
    fn perfect_recovery_boundary() {
        let x = vec![C64::new(1.0, 0.0)];
        assert!(is_perfect_recovery(&x, &x).unwrap());
        assert!(!is_perfect_recovery(&x, &[ZERO]).unwrap());
        let above = vec![C64::new(0.0, 1e-5 * (1.0 + 1e-9))];
        let below = vec![C64::new(0.0, 1e-5 * (1.0 - 1e-9))];
        let x2 = vec![C64::new(1.0, 0.0), ZERO];
        let xhat = |e: &CVec| vec![C64::new(1.0, 0.0), e[0]];
        assert!(!is_perfect_recovery(&x2, &xhat(&above)).unwrap());
        assert!(is_perfect_recovery(&x2, &xhat(&below)).unwrap());
    }

    #[test]
    fn rng_substreams_are_distinct_and_replayable() {
        let base = SeededRng::new(7, &[1, 2]);
        let mut s1 = base.substream(0);
        let mut s2 = base.substream(1);
        let mut s1b = SeededRng::new(7, &[1, 2, 0]);
        assert_eq!(s1.next_u64(), s1b.next_u64());
        assert_ne!(s1.next_u64(), s2.next_u64());
        assert_ne!(
            SeededRng::new(7, &[1, 2]).next_u64(),
            SeededRng::new(7, &[2, 1]).next_u64()
        );
    }

    #[test]
    fn problem_instance_invariants() {
        let dict = Arc::new(build_overcomplete_dft(32, 4).unwrap());
        let mut rng = SeededRng::new(11, &[]);
        let a = gaussian_measurement(12, 32, &mut rng).unwrap();
        let mut alpha = vec![ZERO; 128];
        alpha[3] = C64::new(1.0, 2.0);
        alpha[70] = C64::new(-0.5, 0.0);
        let p = ProblemInstance::new(a, dict.clone(), alpha.clone(), None).unwrap();
        let x = linalg::matvec(dict.matrix(), &alpha).unwrap();
        assert!(norm2(&linalg::sub(&p.x, &x)) < 1e-12);
        let y = linalg::matvec(p.a.matrix(), &x).unwrap();
        assert!(norm2(&linalg::sub(&p.y, &y)) < 1e-12);
        let phi = p.phi().unwrap();
        let y2 = linalg::matvec(&phi, &alpha).unwrap();
        assert!(norm2(&linalg::sub(&p.y, &y2)) < 1e-11);

        let comp = Composed {
            a: &p.a,
            dict: &dict,
        };
        let y3 = comp.apply(&alpha).unwrap();
        assert!(norm2(&linalg::sub(&p.y, &y3)) < 1e-11);
        let back = comp.apply_adjoint(&p.y).unwrap();
        let back_dense = linalg::adjoint_matvec(&phi, &p.y).unwrap();
        assert!(norm2(&linalg::sub(&back, &back_dense)) < 1e-10);
    }

    #[test]
    fn rejects_bad_dictionaries() {
        assert!(build_overcomplete_dft(0, 4).is_err());
        assert!(build_overcomplete_dft(usize::MAX / 2, 4).is_err());
        assert!(Dictionary::new(CMat::identity(3), 1).is_ok());
        assert!(Dictionary::new(CMat::identity(3), 2).is_err());
        let scaled = CMat::from_fn(2, 2, |i, j| if i == j { C64::new(2.0, 0.0) } else { ZERO });
        assert!(Dictionary::new(scaled, 1).is_err());
    }
}
