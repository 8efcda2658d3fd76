//! Fixed-small-dimension complex matrix foundation.
//!
//! Everything downstream is built on dense complex matrices of dimension
//! roughly ≤ 32: adjoints, Hermitian eigensystems with a deterministic
//! ascending ordering, operator norms, projectors and numerical rank.
//! Eigendecomposition is a two-sided complex Jacobi iteration; for these
//! dimensions it is simple, robustly accurate and deterministic.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Global threshold for "equal eigenvalues", applied after scaling by
/// max(1, ‖α‖). Every P_k / Y_k / kernel decision shares this constant so
/// the degeneracy predicates stay consistent with each other.
pub const TAU_GAP: f64 = 1e-8;

/// Scale factor for matrix-identity assertions: tol = 1e-9 · max(1, ‖operand‖).
pub const TOL_EQ: f64 = 1e-9;

/// Symmetry tolerance for accepting a matrix as Hermitian.
pub const TOL_SYM: f64 = 1e-12;

/// Scale-invariant comparison tolerance for an operand of the given norm.
pub fn tol_eq(scale: f64) -> f64 {
    TOL_EQ * scale.max(1.0)
}

/// The shared degeneracy threshold at the given scale.
pub fn gap_threshold(scale: f64) -> f64 {
    TAU_GAP * scale.max(1.0)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(*v, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn neg(&self) -> Self {
        self.scale_re(-1.0)
    }

    /// A + c·I.
    pub fn add_scalar(&self, c: f64) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] += C64::new(c, 0.0);
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest singular value. Equals sup over unit vectors of ‖Mv‖.
    pub fn operator_norm(&self) -> f64 {
        operator_norm(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖A − B‖ in operator norm.
    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).operator_norm()
    }

    /// Hermitian defect ‖M − M†‖_F.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        self.sub(&self.adjoint()).frobenius_norm()
    }

    /// Gaussian elimination inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[(col, col)].norm();
            for r in col + 1..n {
                if a[(r, col)].norm() > best {
                    best = a[(r, col)].norm();
                    pivot = r;
                }
            }
            if best < 1e-300 {
                return Err(Error::NotInvertible("singular matrix in inverse".into()));
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a[(col, j)], a[(pivot, j)]);
                    a[(col, j)] = y;
                    a[(pivot, j)] = x;
                    let (x, y) = (inv[(col, j)], inv[(pivot, j)]);
                    inv[(col, j)] = y;
                    inv[(pivot, j)] = x;
                }
            }
            let d = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= d;
                inv[(col, j)] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let acj = a[(col, j)];
                    let icj = inv[(col, j)];
                    a[(r, j)] -= factor * acj;
                    inv[(r, j)] -= factor * icj;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

// JSON wire format: {"rows":m,"cols":n,"data":[[re,im],...]} row-major.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        let data = self.data.iter().map(|z| [z.re, z.im]).collect();
        Wire { rows: self.rows, cols: self.cols, data, _p: std::marker::PhantomData }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let w = Wire::deserialize(d)?;
        if w.data.len() != w.rows * w.cols {
            return Err(D::Error::custom("matrix data length does not match rows*cols"));
        }
        Ok(ComplexMatrix {
            rows: w.rows,
            cols: w.cols,
            data: w.data.into_iter().map(|[re, im]| C64::new(re, im)).collect(),
        })
    }
}

/// Selfadjoint endomorphism of a Hermitian space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOperator")]
pub struct HermitianOperator {
    pub dim: usize,
    pub matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Wrap a matrix, checking the Hermitian invariant at tol_sym.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows != matrix.cols {
            return Err(Error::InvalidInput("Hermitian operator must be square".into()));
        }
        let scale = matrix.frobenius_norm().max(1.0);
        if matrix.hermitian_defect() > TOL_SYM * scale {
            return Err(Error::InvalidInput("matrix is not Hermitian within tol_sym".into()));
        }
        Ok(Self { dim: matrix.rows, matrix })
    }

    /// Wrap after symmetrizing: (M + M†)/2. For use when the defect is
    /// pure floating-point noise from a known-Hermitian construction.
    pub fn symmetrize(matrix: ComplexMatrix) -> Self {
        let sym = matrix.add(&matrix.adjoint()).scale_re(0.5);
        Self { dim: sym.rows, matrix: sym }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::zeros(dim, dim) }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self { dim: values.len(), matrix: ComplexMatrix::diag(values) }
    }

    pub fn operator_norm(&self) -> f64 {
        self.matrix.operator_norm()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.matrix.dist(&other.matrix)
    }
}

/// Isometric linear map: ambient×rank matrix with θ†θ = I.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrame")]
pub struct IsometryFrame {
    pub ambient: usize,
    pub rank: usize,
    pub matrix: ComplexMatrix,
}

impl IsometryFrame {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let gram = matrix.adjoint().mul(&matrix);
        let defect = gram.sub(&ComplexMatrix::identity(matrix.cols)).operator_norm();
        if defect > tol_eq(1.0) * 10.0 {
            return Err(Error::InvalidInput(format!(
                "frame is not isometric: ‖θ†θ−I‖ = {defect:.3e}"
            )));
        }
        Ok(Self { ambient: matrix.rows, rank: matrix.cols, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { ambient: n, rank: n, matrix: ComplexMatrix::identity(n) }
    }

    /// Standard inclusion ℂ^rank → ℂ^ambient onto the first coordinates.
    pub fn standard_inclusion(ambient: usize, rank: usize) -> Self {
        assert!(rank <= ambient);
        let m = ComplexMatrix::from_fn(ambient, rank, |i, j| {
            if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        Self { ambient, rank, matrix: m }
    }
}

/// Orthogonal projector: π² = π, π† = π, integer trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOperator")]
pub struct Projector {
    pub dim: usize,
    pub matrix: ComplexMatrix,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows != matrix.cols {
            return Err(Error::InvalidInput("projector must be square".into()));
        }
        let tol = tol_eq(matrix.operator_norm().max(1.0)) * 10.0;
        let idem = matrix.mul(&matrix).dist(&matrix);
        let herm = matrix.sub(&matrix.adjoint()).operator_norm();
        let tr = matrix.trace();
        let tr_int = (tr.re - tr.re.round()).abs() + tr.im.abs();
        if idem > tol || herm > tol || tr_int > tol || tr.re.round() < -0.5 {
            return Err(Error::InvalidInput(format!(
                "projector invariants fail: idem {idem:.2e}, herm {herm:.2e}, trace {tr}"
            )));
        }
        Ok(Self { dim: matrix.rows, matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::zeros(dim, dim) }
    }

    pub fn full(dim: usize) -> Self {
        Self { dim, matrix: ComplexMatrix::identity(dim) }
    }

    /// Rank as the rounded trace.
    pub fn trace_rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    /// Complementary projector 1 − π.
    pub fn complement(&self) -> Projector {
        Projector { dim: self.dim, matrix: ComplexMatrix::identity(self.dim).sub(&self.matrix) }
    }
}

// Wire forms used to re-validate invariants on deserialization.
#[derive(Deserialize)]
struct RawOperator {
    #[allow(dead_code)]
    dim: usize,
    matrix: ComplexMatrix,
}

#[derive(Deserialize)]
struct RawFrame {
    #[allow(dead_code)]
    ambient: usize,
    #[allow(dead_code)]
    rank: usize,
    matrix: ComplexMatrix,
}

impl TryFrom<RawOperator> for HermitianOperator {
    type Error = Error;
    fn try_from(raw: RawOperator) -> Result<Self> {
        Self::new(raw.matrix)
    }
}

impl TryFrom<RawOperator> for Projector {
    type Error = Error;
    fn try_from(raw: RawOperator) -> Result<Self> {
        Self::new(raw.matrix)
    }
}

impl TryFrom<RawFrame> for IsometryFrame {
    type Error = Error;
    fn try_from(raw: RawFrame) -> Result<Self> {
        Self::new(raw.matrix)
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: IsometryFrame,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Reassemble Σ f(λ_i)·v_i v_i†.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.vectors.matrix;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fe = f(self.values[k]);
            if fe == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[(i, k)] * v[(j, k)].conj() * fe;
                }
            }
        }
        out
    }

    /// Same with complex-valued scalar function (Cayley transform needs this).
    pub fn assemble_complex(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.vectors.matrix;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fe = f(self.values[k]);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[(i, k)] * v[(j, k)].conj() * fe;
                }
            }
        }
        out
    }

    /// Projector onto the span of eigenvectors with index in `range`.
    pub fn span_projector(&self, range: std::ops::Range<usize>) -> Projector {
        let n = self.dim();
        let v = &self.vectors.matrix;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in range {
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[(i, k)] * v[(j, k)].conj();
                }
            }
        }
        Projector { dim: n, matrix: out }
    }
}

/// Conjugate transpose, as a free function mirroring the operation table.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// U·diag(values)·U† for a square unitary frame: the Hermitian with the
/// frame's columns as eigenvectors and the given eigenvalues.
pub fn assemble_hermitian(frame: &IsometryFrame, values: &[f64]) -> HermitianOperator {
    assert_eq!(frame.ambient, frame.rank);
    assert_eq!(frame.rank, values.len());
    let n = values.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let col = frame.matrix.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * values[k];
            }
        }
    }
    HermitianOperator::symmetrize(out)
}

const JACOBI_SWEEPS: usize = 60;

/// Hermitian eigendecomposition by two-sided complex Jacobi rotations.
///
/// Returns ascending eigenvalues and a unitary whose columns are the
/// corresponding eigenvectors. Deterministic: identical input bits give
/// identical output bits. Within a degenerate cluster the individual
/// vectors are basis choices, but the cluster projector is pinned down.
pub fn hermitian_eig(alpha: &HermitianOperator) -> Result<EigenSystem> {
    let n = alpha.dim;
    if !alpha.matrix.is_finite() {
        return Err(Error::InvalidInput("non-finite entries in eigensolve".into()));
    }
    let scale = alpha.matrix.frobenius_norm().max(1.0);
    if alpha.matrix.hermitian_defect() > TOL_SYM * scale {
        return Err(Error::InvalidInput("eigensolve input is not Hermitian".into()));
    }
    let mut a = alpha.matrix.add(&alpha.matrix.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary J: J[p][p]=c, J[p][q]=s·phase, J[q][p]=-s·conj(phase), J[q][q]=c.
                // Update A <- J† A J and V <- V J on the two affected rows/cols.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * s * phase.conj();
                    a[(i, q)] = aip * s * phase + aiq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c - aqj * s * phase;
                    a[(q, j)] = apj * s * phase.conj() + aqj * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s * phase.conj();
                    v[(i, q)] = vip * s * phase + viq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(EigenSystem { values, vectors: IsometryFrame { ambient: n, rank: n, matrix: vectors } })
}

/// Thin singular value decomposition m = U·diag(s)·V† with s ascending,
/// U of shape rows×cols and V unitary cols×cols (for rows ≥ cols).
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

/// One-sided Jacobi SVD. Chosen over eig(γ†γ)+sqrt because it computes
/// small singular values to absolute accuracy ~ε·‖γ‖ instead of √ε·‖γ‖;
/// the kernel-threshold logic downstream depends on that.
pub fn svd(m: &ComplexMatrix) -> Svd {
    assert!(m.rows >= m.cols, "svd expects rows ≥ cols; transpose first");
    let n = m.cols;
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1e-300);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = C64::new(0.0, 0.0);
                for i in 0..m.rows {
                    app += a[(i, p)].norm_sqr();
                    aqq += a[(i, q)].norm_sqr();
                    apq += a[(i, p)].conj() * a[(i, q)];
                }
                let r = apq.norm();
                if r <= 1e-16 * (app.sqrt() * aqq.sqrt()).max(1e-30 * scale * scale) {
                    continue;
                }
                rotated = true;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..m.rows {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * s * phase.conj();
                    a[(i, q)] = aip * s * phase + aiq * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s * phase.conj();
                    v[(i, q)] = vip * s * phase + viq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut norms: Vec<f64> = (0..n)
        .map(|j| (0..m.rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[i].partial_cmp(&norms[j]).unwrap());
    let mut u = ComplexMatrix::zeros(m.rows, n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut s_sorted = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let norm = norms[src];
        s_sorted.push(norm);
        if norm > 0.0 {
            for i in 0..m.rows {
                u[(i, dst)] = a[(i, src)] / C64::new(norm, 0.0);
            }
        }
        for i in 0..n {
            v_sorted[(i, dst)] = v[(i, src)];
        }
    }
    norms.clear();
    Svd { u, s: s_sorted, v: v_sorted }
}

/// Singular values of a rectangular matrix, ascending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows >= m.cols {
        svd(m).s
    } else {
        svd(&m.adjoint()).s
    }
}

/// Operator norm: the top singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.rows == 0 || m.cols == 0 {
        return 0.0;
    }
    if m.max_abs() == 0.0 {
        return 0.0;
    }
    *singular_values(m).last().unwrap()
}

/// Number of singular values exceeding tol·(top singular value).
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> usize {
    assert!(tol > 0.0, "numerical_rank requires tol > 0");
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let sv = singular_values(m);
    let top = *sv.last().unwrap();
    if top <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

/// Orthogonal projector F·F† onto the image of an isometric frame.
pub fn projector_from_frame(f: &IsometryFrame) -> Result<Projector> {
    let gram = f.matrix.adjoint().mul(&f.matrix);
    let defect = gram.sub(&ComplexMatrix::identity(f.rank)).operator_norm();
    if defect > tol_eq(1.0) * 10.0 {
        return Err(Error::InvalidInput("frame invariant fails in projector_from_frame".into()));
    }
    let p = f.matrix.mul(&f.matrix.adjoint());
    Ok(Projector { dim: f.ambient, matrix: p })
}

/// Deterministic Gram–Schmidt completion: extends the given orthonormal
/// columns to an orthonormal basis of the ambient space by sweeping the
/// standard basis in index order.
pub fn complete_orthonormal(ambient: usize, columns: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = columns.to_vec();
    let mut added = Vec::new();
    for k in 0..ambient {
        if basis.len() >= ambient {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); ambient];
        v[k] = C64::new(1.0, 0.0);
        for b in &basis {
            let proj: C64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for z in v.iter_mut() {
                *z /= C64::new(norm, 0.0);
            }
            basis.push(v.clone());
            added.push(v);
        }
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_of_one_by_one_i() {
        let m = ComplexMatrix::from_rows(&[&[c(0.0, 1.0)]]);
        let a = adjoint(&m);
        assert_eq!(a[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn adjoint_of_identity() {
        let m = ComplexMatrix::identity(3);
        assert_eq!(adjoint(&m), m);
    }

    #[test]
    fn adjoint_of_nilpotent() {
        let m = ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        let a = adjoint(&m);
        assert_eq!(a[(1, 0)], c(1.0, 0.0));
        assert_eq!(a[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn eig_sorts_diagonal() {
        let h = HermitianOperator::diag(&[3.0, 1.0, 2.0]);
        let eig = hermitian_eig(&h).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_known_two_by_two() {
        let h = HermitianOperator::new(ComplexMatrix::from_rows(&[
            &[c(0.0, 0.0), c(1.0, 0.0)],
            &[c(1.0, 0.0), c(0.0, 0.0)],
        ]))
        .unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        // v for eigenvalue -1 is (1,-1)/√2 up to phase.
        let v0 = eig.vectors.matrix.column(0);
        assert!((v0[0].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-10);
        assert!((v0[0] + v0[1]).norm() < 1e-10);
    }

    #[test]
    fn eig_reconstructs_and_matches_charpoly_oracle() {
        // Independent oracle: characteristic polynomial coefficients by
        // Faddeev–LeVerrier, roots by Durand–Kerner.
        let mut rng = crate::harness::TestRng::new(7);
        for _ in 0..20 {
            let h = crate::harness::random_hermitian_with(&mut rng, 4);
            let eig = hermitian_eig(&h).unwrap();
            let recon = eig.assemble(|x| x);
            assert!(recon.dist(&h.matrix) < tol_eq(h.operator_norm()));

            let coeffs = charpoly(&h.matrix);
            let mut roots = durand_kerner(&coeffs);
            roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            for (ev, root) in eig.values.iter().zip(&roots) {
                assert!(root.im.abs() < 1e-7, "complex root from Hermitian charpoly");
                assert!((ev - root.re).abs() < 1e-8, "eig {ev} vs root {}", root.re);
            }
        }
    }

    /// Monic characteristic polynomial coefficients c_0..c_n (ascending powers)
    /// via Faddeev–LeVerrier.
    fn charpoly(a: &ComplexMatrix) -> Vec<C64> {
        let n = a.rows;
        let mut m = ComplexMatrix::zeros(n, n);
        let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        let mut c = C64::new(1.0, 0.0);
        for k in 1..=n {
            m = a.mul(&m);
            for i in 0..n {
                m[(i, i)] += c;
            }
            let am = a.mul(&m);
            c = -am.trace() / C64::new(k as f64, 0.0);
            coeffs[n - k] = c;
        }
        coeffs
    }

    fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
        let n = coeffs.len() - 1;
        let mut roots: Vec<C64> = (0..n)
            .map(|k| C64::new(0.4, 0.9).powu(k as u32 + 1))
            .collect();
        for _ in 0..500 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut denom = C64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = poly_eval(coeffs, roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                break;
            }
        }
        roots
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&ComplexMatrix::diag(&[2.0, -3.0])) - 3.0).abs() < 1e-12);
        let m = ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(2.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!((operator_norm(&m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let mut rng = crate::harness::TestRng::new(11);
        for _ in 0..10 {
            let m = crate::harness::random_matrix_with(&mut rng, 3, 4);
            // Power iteration on m†m, independent of the Jacobi path.
            let gram = m.adjoint().mul(&m);
            let mut v: Vec<C64> = (0..4).map(|i| c(1.0 + i as f64, 0.5)).collect();
            let mut lambda = 0.0;
            for _ in 0..3000 {
                let w = gram.apply(&v);
                let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v = w.into_iter().map(|z| z / norm).collect();
                lambda = norm;
            }
            assert!((operator_norm(&m) - lambda.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&ComplexMatrix::zeros(2, 2), 1e-9), 0);
        assert_eq!(numerical_rank(&ComplexMatrix::identity(3), 1e-9), 3);
        let v = ComplexMatrix::from_rows(&[&[c(1.0, 2.0)], &[c(0.5, -1.0)]]);
        let outer = v.mul(&v.adjoint());
        assert_eq!(numerical_rank(&outer, 1e-9), 1);
    }

    #[test]
    fn projector_from_frame_examples() {
        let e1 = IsometryFrame::standard_inclusion(2, 1);
        let p = projector_from_frame(&e1).unwrap();
        assert!(p.matrix.dist(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-14);
        assert_eq!(p.trace_rank(), 1);

        let full = IsometryFrame::identity(3);
        let p = projector_from_frame(&full).unwrap();
        assert!(p.matrix.dist(&ComplexMatrix::identity(3)) < 1e-14);

        let s = 1.0 / 2f64.sqrt();
        let f = IsometryFrame::new(ComplexMatrix::from_rows(&[&[c(s, 0.0)], &[c(s, 0.0)]])).unwrap();
        let p = projector_from_frame(&f).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.matrix[(i, j)] - c(0.5, 0.0)).norm() < 1e-14);
            }
        }
        // result·F = F
        assert!(p.matrix.mul(&f.matrix).dist(&f.matrix) < 1e-12);
    }

    #[test]
    fn non_isometric_frame_rejected() {
        let bad = ComplexMatrix::from_rows(&[&[c(1.0, 0.0)], &[c(1.0, 0.0)]]);
        assert!(IsometryFrame::new(bad).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let bad = ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(HermitianOperator::new(bad).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = crate::harness::TestRng::new(3);
        let m = crate::harness::random_matrix_with(&mut rng, 4, 4);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).dist(&ComplexMatrix::identity(4)) < 1e-10);
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = ComplexMatrix::from_rows(&[&[c(1.0, -2.0), c(0.0, 3.5)]]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"rows\":1"));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
    }

    proptest! {
        #[test]
        fn adjoint_is_involutive(entries in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 12)) {
            let m = ComplexMatrix::from_fn(3, 4, |i, j| {
                let (re, im) = entries[i * 4 + j];
                c(re, im)
            });
            prop_assert_eq!(adjoint(&adjoint(&m)), m);
        }

        #[test]
        fn eigenvalues_are_lipschitz(seed in 0u64..500) {
            let mut rng = crate::harness::TestRng::new(seed);
            let a = crate::harness::random_hermitian_with(&mut rng, 4);
            let b = crate::harness::random_hermitian_with(&mut rng, 4);
            let ea = hermitian_eig(&a).unwrap().values;
            let eb = hermitian_eig(&b).unwrap().values;
            let d = a.matrix.dist(&b.matrix);
            for j in 0..4 {
                prop_assert!((ea[j] - eb[j]).abs() <= d + 1e-9);
            }
        }
    }
}
