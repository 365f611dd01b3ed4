//! Dense complex linear algebra: matrices, products, column selection,
//! pivoted-QR least squares and orthogonal projection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::support::SupportSet;

pub type C64 = Complex64;
pub type CVec = Vec<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Relative diagonal threshold used to decide numerical rank in [`lstsq`].
pub const RANK_TOL: f64 = 1e-10;

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("CMat::new"));
        }
        if data.len() != rows * cols {
            return Err(Error::mismatch("CMat::new", rows * cols, data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("CMat::new"));
        }
        Ok(CMat { rows, cols, data })
    }

    /// Real matrix (zero imaginary parts) from row-major values.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { ZERO })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> CVec {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        if self.cols != other.rows {
            return Err(Error::mismatch("matmul", self.cols, other.rows));
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (t, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(t)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · self*`, the Gram matrix of the rows.
    pub fn row_gram(&self) -> CMat {
        let mut g = CMat::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v = dot(self.row(j), self.row(i));
                g.data[i * self.rows + j] = v;
                g.data[j * self.rows + i] = v.conj();
            }
        }
        g
    }
}

/// Conjugate-linear in the first argument: `Σ conj(a_i)·b_i`.
#[inline]
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    C64::new(re, im)
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_inf(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn sub(a: &[C64], b: &[C64]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn matvec(m: &CMat, v: &[C64]) -> Result<CVec> {
    if m.cols != v.len() {
        return Err(Error::mismatch("matvec", m.cols, v.len()));
    }
    Ok((0..m.rows).map(|i| row_times(m.row(i), v)).collect())
}

#[inline]
fn row_times(row: &[C64], v: &[C64]) -> C64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (x, y) in row.iter().zip(v) {
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
    }
    C64::new(re, im)
}

/// `M* v`, the conjugate-transpose apply.
pub fn adjoint_matvec(m: &CMat, v: &[C64]) -> Result<CVec> {
    if m.rows != v.len() {
        return Err(Error::mismatch("adjoint_matvec", m.rows, v.len()));
    }
    let mut out = vec![ZERO; m.cols];
    for (i, &vi) in v.iter().enumerate() {
        if vi == ZERO {
            continue;
        }
        for (o, &a) in out.iter_mut().zip(m.row(i)) {
            *o += a.conj() * vi;
        }
    }
    Ok(out)
}

/// Columns of `m` indexed by `s`, in ascending index order.
pub fn select_columns(m: &CMat, s: &SupportSet) -> Result<CMat> {
    if s.is_empty() {
        return Err(Error::Empty("select_columns"));
    }
    if let Some(last) = s.max() {
        if last >= m.cols {
            return Err(Error::IndexOutOfRange {
                index: last,
                bound: m.cols,
            });
        }
    }
    let idx = s.as_slice();
    let mut data = Vec::with_capacity(m.rows * idx.len());
    for i in 0..m.rows {
        let row = m.row(i);
        data.extend(idx.iter().map(|&j| row[j]));
    }
    Ok(CMat {
        rows: m.rows,
        cols: idx.len(),
        data,
    })
}

/// One Householder reflector `H = I − β v v*` acting on rows `offset..`.
struct Reflector {
    offset: usize,
    v: Vec<C64>,
    beta: f64,
}

impl Reflector {
    fn apply(&self, x: &mut [C64]) {
        if self.beta == 0.0 {
            return;
        }
        let tail = &mut x[self.offset..];
        let s = dot(&self.v, tail) * self.beta;
        for (t, &v) in tail.iter_mut().zip(&self.v) {
            *t -= v * s;
        }
    }
}

/// Householder QR of a column-major `rows × cols` buffer, optionally with
/// column pivoting. On return the upper triangle of `a` holds R.
struct Householder {
    rows: usize,
    cols: usize,
    a: Vec<C64>,
    reflectors: Vec<Reflector>,
    perm: Vec<usize>,
}

impl Householder {
    fn factor(rows: usize, cols: usize, mut a: Vec<C64>, pivot: bool) -> Self {
        let steps = rows.min(cols);
        let mut perm: Vec<usize> = (0..cols).collect();
        let mut reflectors = Vec::with_capacity(steps);
        for k in 0..steps {
            if pivot {
                let mut best = k;
                let mut best_norm = -1.0;
                for j in k..cols {
                    let col = &a[j * rows + k..(j + 1) * rows];
                    let nrm: f64 = col.iter().map(|z| z.norm_sqr()).sum();
                    if nrm > best_norm {
                        best_norm = nrm;
                        best = j;
                    }
                }
                if best != k {
                    for i in 0..rows {
                        a.swap(k * rows + i, best * rows + i);
                    }
                    perm.swap(k, best);
                }
            }
            let col = &mut a[k * rows + k..(k + 1) * rows];
            let norm = norm2(col);
            let reflector = if norm == 0.0 {
                Reflector {
                    offset: k,
                    v: vec![ZERO; rows - k],
                    beta: 0.0,
                }
            } else {
                let x0 = col[0];
                let phase = if x0.norm() == 0.0 {
                    C64::new(1.0, 0.0)
                } else {
                    x0 / x0.norm()
                };
                let alpha = -phase * norm;
                let mut v = col.to_vec();
                v[0] -= alpha;
                let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                col[0] = alpha;
                for z in col[1..].iter_mut() {
                    *z = ZERO;
                }
                Reflector {
                    offset: k,
                    v,
                    beta: 2.0 / vnorm_sq,
                }
            };
            for j in k + 1..cols {
                reflector.apply(&mut a[j * rows..(j + 1) * rows]);
            }
            reflectors.push(reflector);
        }
        Householder {
            rows,
            cols,
            a,
            reflectors,
            perm,
        }
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> C64 {
        self.a[j * self.rows + i]
    }

    fn rank(&self) -> usize {
        let steps = self.rows.min(self.cols);
        if steps == 0 {
            return 0;
        }
        let lead = self.r(0, 0).norm();
        if lead == 0.0 {
            return 0;
        }
        (0..steps)
            .take_while(|&k| self.r(k, k).norm() > RANK_TOL * lead)
            .count()
    }

    /// `Q* b`.
    fn apply_qt(&self, b: &mut [C64]) {
        for h in &self.reflectors {
            h.apply(b);
        }
    }

    /// `Q x` for `x` of length `rows`.
    fn apply_q(&self, x: &mut [C64]) {
        for h in self.reflectors.iter().rev() {
            h.apply(x);
        }
    }
}

/// Minimum-norm least-squares solution of `min ||b − Mβ||₂` via Householder
/// QR with column pivoting. Columns whose pivot falls below
/// `RANK_TOL·|R[0,0]|` are treated as numerically dependent.
pub fn lstsq(m: &CMat, b: &[C64]) -> Result<CVec> {
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::Empty("lstsq"));
    }
    if m.rows != b.len() {
        return Err(Error::mismatch("lstsq", m.rows, b.len()));
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut a = vec![ZERO; rows * cols];
    for i in 0..rows {
        for (j, &z) in m.row(i).iter().enumerate() {
            a[j * rows + i] = z;
        }
    }
    let qr = Householder::factor(rows, cols, a, true);
    let rank = qr.rank();
    let mut solution = vec![ZERO; cols];
    if rank == 0 {
        return Ok(solution);
    }
    let mut c = b.to_vec();
    qr.apply_qt(&mut c);
    c.truncate(rank);

    let z = if rank == cols {
        back_substitute(&qr, &c)
    } else {
        min_norm_trapezoidal(&qr, rank, &c)
    };
    for (k, &p) in qr.perm.iter().enumerate() {
        solution[p] = z[k];
    }
    Ok(solution)
}

fn back_substitute(qr: &Householder, c: &[C64]) -> CVec {
    let r = c.len();
    let mut z = vec![ZERO; r];
    for i in (0..r).rev() {
        let mut s = c[i];
        for j in i + 1..r {
            s -= qr.r(i, j) * z[j];
        }
        z[i] = s / qr.r(i, i);
    }
    z
}

/// Minimum-norm solution of `R[0..rank, :] z = c` through a second QR of the
/// trapezoid's adjoint: `R_top* = Q₂R₂`, so `z = Q₂ R₂^{-*} c`.
fn min_norm_trapezoidal(qr: &Householder, rank: usize, c: &[C64]) -> CVec {
    let n = qr.cols;
    // column i of R_top* is the conjugated row i of R_top
    let mut at = vec![ZERO; n * rank];
    for i in 0..rank {
        for j in i..n {
            at[i * n + j] = qr.r(i, j).conj();
        }
    }
    let q2 = Householder::factor(n, rank, at, false);
    let mut t = vec![ZERO; n];
    for i in 0..rank {
        let mut s = c[i];
        for j in 0..i {
            s -= q2.r(j, i).conj() * t[j];
        }
        t[i] = s / q2.r(i, i).conj();
    }
    q2.apply_q(&mut t);
    t
}

/// Orthogonal projection of `v` onto `range(M)`, computed as `M·lstsq(M, v)`.
pub fn project_onto_span(m: &CMat, v: &[C64]) -> Result<CVec> {
    let beta = lstsq(m, v)?;
    matvec(m, &beta)
}

/// Cholesky factor of a Hermitian positive-definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    /// Lower triangle, row-major; only the diagonal when `diagonal` is set.
    l: Vec<C64>,
    diagonal: bool,
}

impl Cholesky {
    pub fn new(g: &CMat) -> Result<Self> {
        if g.rows != g.cols {
            return Err(Error::mismatch("Cholesky::new", g.rows, g.cols));
        }
        let n = g.rows;
        let is_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || g.get(i, j) == ZERO));
        if is_diagonal {
            let mut l = Vec::with_capacity(n);
            for i in 0..n {
                let v = g.get(i, i);
                if !(v.re > 0.0) {
                    return Err(Error::InvalidParameter(
                        "Gram matrix is not positive definite".into(),
                    ));
                }
                l.push(C64::new(v.re.sqrt(), 0.0));
            }
            return Ok(Cholesky {
                n,
                l,
                diagonal: true,
            });
        }
        let mut l = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = g.get(i, j);
                for p in 0..j {
                    s -= l[i * n + p] * l[j * n + p].conj();
                }
                if i == j {
                    if !(s.re > 0.0) {
                        return Err(Error::InvalidParameter(
                            "Gram matrix is not positive definite".into(),
                        ));
                    }
                    l[i * n + i] = C64::new(s.re.sqrt(), 0.0);
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(Cholesky {
            n,
            l,
            diagonal: false,
        })
    }

    /// Solves `G x = b`.
    pub fn solve(&self, b: &[C64]) -> CVec {
        let n = self.n;
        if self.diagonal {
            return b
                .iter()
                .zip(&self.l)
                .map(|(v, s)| v / (s.re * s.re))
                .collect();
        }
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for p in 0..i {
                s -= self.l[i * n + p] * y[p];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for p in i + 1..n {
                s -= self.l[p * n + i].conj() * y[p];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}

/// A linear map that the recovery algorithms can apply, adjoint-apply and
/// sub-select. Implemented by dense matrices and by dictionaries with fast
/// transforms.
pub trait LinearOperator: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, v: &[C64]) -> Result<CVec>;
    fn apply_adjoint(&self, v: &[C64]) -> Result<CVec>;
    fn columns(&self, s: &SupportSet) -> Result<CMat>;
    /// `M M*`.
    fn row_gram(&self) -> CMat;
}

impl LinearOperator for CMat {
    fn nrows(&self) -> usize {
        self.rows
    }
    fn ncols(&self) -> usize {
        self.cols
    }
    fn apply(&self, v: &[C64]) -> Result<CVec> {
        matvec(self, v)
    }
    fn apply_adjoint(&self, v: &[C64]) -> Result<CVec> {
        adjoint_matvec(self, v)
    }
    fn columns(&self, s: &SupportSet) -> Result<CMat> {
        select_columns(self, s)
    }
    fn row_gram(&self) -> CMat {
        CMat::row_gram(self)
    }
}
