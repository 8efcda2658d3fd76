//! The tower of eigenspace-restricted isometry spaces at the level of
//! points and explicit maps: (α,β) coordinates, the projections π_k, the
//! homeomorphisms q_k/r_k, τ, f_k/g_k, the comparison map χ, the lifts
//! φ̃_k and ℭ_g, suspension maps δ̃_k, the block decomposition of s(V₀),
//! Grassmannian charts, finite-abelian group actions and the explicit
//! null-homotopy families.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::calculus::{lambda_k, log_op, p_k, rho, sigma, sigma_extended};
use crate::error::{Error, Result};
use crate::linalg::{
    gap_threshold, hermitian_eig, numerical_rank, tol_eq, ComplexMatrix, HermitianOperator,
    IsometryFrame, Projector, TAU_GAP,
};

/// A point of the level-k space in (α, β) coordinates: ρ(β) = λ_k(α).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerPoint {
    pub k: usize,
    pub alpha: HermitianOperator,
    pub beta: ComplexMatrix,
}

impl TowerPoint {
    /// Deviation from the defining relation ρ(β) = λ_k(α).
    pub fn invariant_defect(&self) -> f64 {
        let r = rho(&self.beta);
        let l = lambda_k(&self.alpha, self.k).expect("lambda_k in invariant");
        r.dist(&l)
    }

    pub fn d0(&self) -> usize {
        self.alpha.dim
    }

    pub fn d1(&self) -> usize {
        self.beta.rows
    }

    pub fn dist(&self, other: &TowerPoint) -> f64 {
        self.alpha.dist(&other.alpha).max(self.beta.dist(&other.beta))
    }
}

/// A point of the Thom-space model: (W, γ, ψ) with γ out of W and ψ
/// selfadjoint on W⊥, both carried as ambient-supported matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThomPoint {
    pub k: usize,
    pub w: Projector,
    pub gamma: ComplexMatrix,
    pub psi: HermitianOperator,
}

impl ThomPoint {
    /// Deviation from the three support relations.
    pub fn invariant_defect(&self) -> f64 {
        let comp = self.w.complement();
        let g_support = self.gamma.mul(&comp.matrix).operator_norm();
        let psi_kills_w = self.psi.matrix.mul(&self.w.matrix).operator_norm();
        let psi_into_comp = self.w.matrix.mul(&self.psi.matrix).operator_norm();
        g_support.max(psi_kills_w).max(psi_into_comp)
    }

    pub fn dist(&self, other: &ThomPoint) -> f64 {
        self.w
            .matrix
            .dist(&other.w.matrix)
            .max(self.gamma.dist(&other.gamma))
            .max(self.psi.dist(&other.psi))
    }
}

/// Restriction of a Hermitian to the range of a projector, as an
/// ambient-supported matrix: π·m·π.
fn compress(m: &ComplexMatrix, p: &Projector) -> ComplexMatrix {
    p.matrix.mul(m).mul(&p.matrix)
}

/// Eigen-data of ψ viewed on the range of a projector: pairs (eigenvalue,
/// eigenvector) of the compression, ascending, restricted to the range.
fn eig_on_range(m: &HermitianOperator, p: &Projector) -> Vec<(f64, Vec<C64>)> {
    let rank = p.trace_rank();
    if rank == 0 {
        return Vec::new();
    }
    // Eigenvectors of π·m·π + shift·(1−π): the range eigenpairs are those
    // whose vectors live in range(π); the complement is pushed far away.
    let scale = m.operator_norm() + 1.0;
    let shifted = HermitianOperator::symmetrize(
        compress(&m.matrix, p).add(&p.complement().matrix.scale_re(3.0 * scale)),
    );
    let eig = hermitian_eig(&shifted).expect("restricted eigensolve");
    let mut out = Vec::with_capacity(rank);
    for k in 0..rank {
        let v = eig.vectors.matrix.column(k);
        out.push((eig.values[k], v));
    }
    out.truncate(rank);
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Σ f(λ_i) v_i v_i† over supplied eigenpairs.
fn assemble_on(pairs: &[(f64, Vec<C64>)], n: usize, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for (e, v) in pairs {
        let fe = f(*e);
        if fe == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += v[i] * v[j].conj() * fe;
            }
        }
    }
    out
}

/// Top eigenvalue of ψ on the range of p (the paper's e_top(ψ)).
fn e_top_on(m: &HermitianOperator, p: &Projector) -> f64 {
    eig_on_range(m, p).last().map(|(e, _)| *e).unwrap_or(0.0)
}

/// Build a level-k point from (α, θ) with θ a partial isometry whose
/// initial space is P_k(α): β = −θ∘λ_k(α).
pub fn make_tower_point(k: usize, alpha: &HermitianOperator, theta: &ComplexMatrix) -> Result<TowerPoint> {
    let w = p_k(alpha, k)?;
    if w.trace_rank() < k {
        return Err(Error::DegenerateAlpha(format!(
            "P_{k}(α) has dimension {} < {k}",
            w.trace_rank()
        )));
    }
    if theta.cols != alpha.dim {
        return Err(Error::InvalidInput("make_tower_point: θ must map out of V₀".into()));
    }
    let gram = theta.adjoint().mul(theta);
    if gram.dist(&w.matrix) > tol_eq(1.0) * 100.0 {
        return Err(Error::InvalidInput(
            "make_tower_point: θ†θ must be the projector P_k(α)".into(),
        ));
    }
    let l = lambda_k(alpha, k)?;
    Ok(TowerPoint { k, alpha: alpha.clone(), beta: theta.mul(&l.matrix).neg() })
}

/// The top projection π_{d₀}: an honest pair (α, θ) to the level-(d₀−1)
/// point (α, θ|_{P_{d₀−1}(α)}).
pub fn pi_top(alpha: &HermitianOperator, theta: &IsometryFrame) -> Result<TowerPoint> {
    if theta.rank != alpha.dim {
        return Err(Error::InvalidInput("pi_top: θ must be a full isometry on V₀".into()));
    }
    let d0 = alpha.dim;
    let l = lambda_k(alpha, d0 - 1)?;
    Ok(TowerPoint { k: d0 - 1, alpha: alpha.clone(), beta: theta.matrix.mul(&l.matrix).neg() })
}

/// π_k: restrict the isometry part one level down; β′ = σ(β)∘λ_{k−1}(α).
pub fn pi_k(x: &TowerPoint) -> Result<TowerPoint> {
    if x.k == 0 {
        return Err(Error::InvalidInput("pi_k: already at the bottom".into()));
    }
    let polar = sigma(&x.beta);
    let l = lambda_k(&x.alpha, x.k - 1)?;
    Ok(TowerPoint {
        k: x.k - 1,
        alpha: x.alpha.clone(),
        beta: polar.sigma.mul(&l.matrix),
    })
}

/// Membership in the degenerate locus Y_k: dim P_k(α) < k.
pub fn in_y_k(alpha: &HermitianOperator, k: usize) -> Result<bool> {
    if k < 1 || k > alpha.dim {
        return Err(Error::InvalidInput("in_y_k: need 1 ≤ k ≤ d₀".into()));
    }
    Ok(p_k(alpha, k)?.trace_rank() < k)
}

/// q_k: (α, θ) ↦ (P_k(α), −θ∘Exp(α|_{P_k}), −log((e_{d₀−k}(α)−α)|_{P_k⊥})).
pub fn q_k(x: &TowerPoint) -> Result<ThomPoint> {
    let k = x.k;
    let d0 = x.d0();
    if in_y_k(&x.alpha, k)? {
        return Err(Error::DegenerateAlpha("q_k: point lies in Y_k".into()));
    }
    let w = p_k(&x.alpha, k)?;
    let eig = hermitian_eig(&x.alpha)?;
    // θ on P_k(α) is −σ(β); the isometric factor of β.
    let theta = sigma(&x.beta).sigma.neg();
    // Exp(α|_W) supported on W.
    let exp_on_w = assemble_on(
        &eig.values[d0 - k..]
            .iter()
            .cloned()
            .zip((d0 - k..d0).map(|i| eig.vectors.matrix.column(i)))
            .collect::<Vec<_>>(),
        d0,
        f64::exp,
    );
    let gamma = theta.mul(&exp_on_w).neg();
    // ψ = −log((e_{d₀−k}(α) − α)|_{W⊥}).
    let cut = eig.values[d0 - k];
    let low: Vec<(f64, Vec<C64>)> = eig.values[..d0 - k]
        .iter()
        .cloned()
        .zip((0..d0 - k).map(|i| eig.vectors.matrix.column(i)))
        .collect();
    let psi = assemble_on(&low, d0, |e| -((cut - e).ln()));
    Ok(ThomPoint { k, w, gamma, psi: HermitianOperator::symmetrize(psi) })
}

/// Smallest singular value of γ restricted to the range of W.
fn min_singular_on_w(gamma: &ComplexMatrix, w: &Projector) -> f64 {
    let k = w.trace_rank();
    if k == 0 {
        return 0.0;
    }
    let sv = crate::linalg::singular_values(gamma);
    // γ kills W⊥, so its nonzero singular values are those of γ|_W: the
    // top k of the ambient list.
    sv[sv.len() - k]
}

/// r_k: (W, γ, ψ) with γ injective on W back to the tower point.
pub fn r_k(z: &ThomPoint) -> Result<TowerPoint> {
    let k = z.k;
    let d0 = z.w.dim;
    let s_min = min_singular_on_w(&z.gamma, &z.w);
    let sv_top = crate::linalg::singular_values(&z.gamma).last().copied().unwrap_or(0.0);
    if s_min <= gap_threshold(sv_top) {
        return Err(Error::NotInjective("r_k: γ is not injective on W".into()));
    }
    let comp = z.w.complement();
    // α = (log s_min − Exp(−ψ))|_{W⊥} ⊕ log(ρ(γ))|_W.
    let psi_pairs = eig_on_range(&z.psi, &comp);
    let low_block = assemble_on(&psi_pairs, d0, |e| s_min.ln() - (-e).exp());
    let rho_g = rho(&z.gamma);
    let rho_pairs = eig_on_range(&rho_g, &z.w);
    let top_block = assemble_on(&rho_pairs, d0, |e| e.max(1e-300).ln());
    let alpha = HermitianOperator::symmetrize(low_block.add(&top_block));
    // β = σ(γ)∘λ_k(α).
    let l = lambda_k(&alpha, k)?;
    let beta = sigma(&z.gamma).sigma.mul(&l.matrix);
    Ok(TowerPoint { k, alpha, beta })
}

/// τ on level d₀−1: (α, θ) ↦ (e₀(α), −θ∘(α−e₀(α))) = (e₀(α), β).
pub fn tau(x: &TowerPoint) -> Result<(f64, ComplexMatrix)> {
    if x.k + 1 != x.d0() {
        return Err(Error::InvalidInput("tau: defined on level d₀−1".into()));
    }
    let e0 = hermitian_eig(&x.alpha)?.values[0];
    Ok((e0, x.beta.clone()))
}

/// τ⁻¹: (t, δ) ↦ (ρ(δ)+t, δ) for non-injective δ.
pub fn tau_inv(t: f64, delta: &ComplexMatrix) -> Result<TowerPoint> {
    let d0 = delta.cols;
    let sv = crate::linalg::singular_values(delta);
    if sv[0] > gap_threshold(sv[sv.len() - 1]) {
        return Err(Error::InvalidInput("tau_inv: δ must be non-injective".into()));
    }
    let alpha = HermitianOperator::symmetrize(rho(delta).matrix.add_scalar(t));
    Ok(TowerPoint { k: d0 - 1, alpha, beta: delta.clone() })
}

/// f_k: level-(k−1) point off Y_k to (e_{d₀−k}(α), ThomPoint with γ
/// non-injective on W).
pub fn f_k(x: &TowerPoint, k: usize) -> Result<(f64, ThomPoint)> {
    if x.k + 1 != k {
        return Err(Error::InvalidInput("f_k consumes a level-(k−1) point".into()));
    }
    let d0 = x.d0();
    if in_y_k(&x.alpha, k)? {
        return Err(Error::DegenerateAlpha("f_k: point lies in Y_k".into()));
    }
    let w = p_k(&x.alpha, k)?;
    let eig = hermitian_eig(&x.alpha)?;
    let cut = eig.values[d0 - k];
    let gamma = x.beta.mul(&w.matrix);
    let low: Vec<(f64, Vec<C64>)> = eig.values[..d0 - k]
        .iter()
        .cloned()
        .zip((0..d0 - k).map(|i| eig.vectors.matrix.column(i)))
        .collect();
    let psi = HermitianOperator::symmetrize(assemble_on(&low, d0, |e| -((cut - e).ln())));
    Ok((cut, ThomPoint { k, w, gamma, psi }))
}

/// g_k: (t, W, δ, ψ) ↦ ((t−Exp(−ψ))|_{W⊥} ⊕ (ρ(δ)+t)|_W, δ).
pub fn g_k(t: f64, z: &ThomPoint) -> Result<TowerPoint> {
    let d0 = z.w.dim;
    let comp = z.w.complement();
    let psi_pairs = eig_on_range(&z.psi, &comp);
    let low_block = assemble_on(&psi_pairs, d0, |e| t - (-e).exp());
    let rho_d = rho(&z.gamma);
    let rho_pairs = eig_on_range(&rho_d, &z.w);
    let top_block = assemble_on(&rho_pairs, d0, |e| e + t);
    let alpha = HermitianOperator::symmetrize(low_block.add(&top_block));
    Ok(TowerPoint { k: z.k - 1, alpha, beta: z.gamma.clone() })
}

/// χ: injective γ ↦ (e₀(log ρ(γ)), σ(γ)∘(log ρ(γ) − e₀(log ρ(γ)))).
pub fn chi(gamma: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
    if numerical_rank(gamma, TAU_GAP) < gamma.cols || gamma.max_abs() == 0.0 {
        return Err(Error::NotInjective("chi needs an injective argument".into()));
    }
    let log_r = log_op(&rho(gamma))?;
    let e0 = hermitian_eig(&log_r)?.values[0];
    let shifted = log_r.matrix.add_scalar(-e0);
    let out = sigma(gamma).sigma.mul(&shifted);
    Ok((e0, out))
}

/// φ̃_k: (W, γ, ψ) ↦ (ψ|_{W⊥} ⊕ (ρ(γ)+e_top(ψ))|_W, −σ(γ)), with the
/// isometry extended deterministically over Ker γ ∩ W.
pub fn phi_k_map(z: &ThomPoint) -> Result<TowerPoint> {
    let d0 = z.w.dim;
    let k = z.k;
    let comp = z.w.complement();
    let top_psi = e_top_on(&z.psi, &comp);
    let psi_block = compress(&z.psi.matrix, &comp);
    let rho_g = rho(&z.gamma);
    let rho_pairs = eig_on_range(&rho_g, &z.w);
    let w_block = assemble_on(&rho_pairs, d0, |e| e + top_psi);
    let alpha = HermitianOperator::symmetrize(psi_block.add(&w_block));
    // θ = −σ(γ) extended over the kernel inside W; ensure the initial
    // space is all of W before composing with λ_k(α).
    let theta_ext = extend_isometry_over(&z.gamma, &z.w);
    let l = lambda_k(&alpha, k)?;
    Ok(TowerPoint { k, alpha, beta: theta_ext.mul(&l.matrix) })
}

/// σ(γ) extended to an isometry with initial space exactly range(W).
fn extend_isometry_over(gamma: &ComplexMatrix, w: &Projector) -> ComplexMatrix {
    let masked = gamma.mul(&w.matrix);
    let polar = sigma(&masked);
    let rank = polar.sigma_domain.trace_rank();
    if rank == w.trace_rank() {
        return polar.sigma;
    }
    // Kernel of γ inside W: complete with fresh directions.
    let full = sigma_extended(&masked);
    // sigma_extended extends over all of Ker(masked) ⊇ W⊥; mask back to W.
    full.mul(&w.matrix)
}

/// Output of δ̃_k: either the basepoint or a suspension-twisted pair.
#[derive(Debug, Clone)]
pub enum DeltaImage {
    Basepoint,
    Point {
        suspension: f64,
        /// The −Σ twist: orientation flag on the suspension coordinate.
        twisted: bool,
        thom: ThomPoint,
    },
}

/// δ̃_k: collapse to the basepoint on Y_k, otherwise f_k followed by the
/// fibrewise inclusion, carrying the −Σ orientation flag.
pub fn delta_k_map(x: &TowerPoint, k: usize) -> Result<DeltaImage> {
    if x.k + 1 != k {
        return Err(Error::InvalidInput("delta_k consumes a level-(k−1) point".into()));
    }
    if in_y_k(&x.alpha, k)? {
        return Ok(DeltaImage::Basepoint);
    }
    let d0 = x.d0();
    let w = p_k(&x.alpha, k)?;
    let eig = hermitian_eig(&x.alpha)?;
    let cut = eig.values[d0 - k];
    let gamma = x.beta.mul(&w.matrix);
    let low: Vec<(f64, Vec<C64>)> = eig.values[..d0 - k]
        .iter()
        .cloned()
        .zip((0..d0 - k).map(|i| eig.vectors.matrix.column(i)))
        .collect();
    let psi = HermitianOperator::symmetrize(assemble_on(&low, d0, |e| -((cut - e).ln())));
    Ok(DeltaImage::Point {
        suspension: cut,
        twisted: true,
        thom: ThomPoint { k, w, gamma, psi },
    })
}

/// A facial map on the smash D(d₀−k) ∧ D₊(k): evaluates on the pair of
/// ascending tuples (ψ-spectrum, γ-singular-values) and yields a full
/// ascending d₀-tuple.
pub struct SmashFacialMap {
    pub name: String,
    pub d_s: usize,
    pub d_t: usize,
    eval: Box<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>,
}

impl SmashFacialMap {
    pub fn new(
        name: impl Into<String>,
        d_s: usize,
        d_t: usize,
        eval: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), d_s, d_t, eval: Box::new(eval) }
    }

    pub fn apply(&self, s: &[f64], t: &[f64]) -> Vec<f64> {
        (self.eval)(s, t)
    }

    /// The homeomorphism f: (s, t) ↦ (s, s_top + t) underlying φ̃_k.
    pub fn third_facial_homeomorphism(d_s: usize, d_t: usize) -> Self {
        Self::new("thirdfacial", d_s, d_t, |s, t| {
            let s_top = s.last().copied().unwrap_or(0.0);
            let mut out: Vec<f64> = s.to_vec();
            out.extend(t.iter().map(|x| s_top + x));
            out
        })
    }
}

/// ℭ_g: eigendata of (ψ, ρ(γ)) pushed through a facial map on the smash,
/// producing a level-k tower point with isometry part −σ(γ).
pub fn frak_c(g: &SmashFacialMap, z: &ThomPoint) -> Result<TowerPoint> {
    let d0 = z.w.dim;
    let k = z.k;
    if g.d_s + g.d_t != d0 || g.d_t != k {
        return Err(Error::InvalidInput("frak_c: facial map dimensions must match".into()));
    }
    let comp = z.w.complement();
    let psi_pairs = eig_on_range(&z.psi, &comp);
    let rho_g = rho(&z.gamma);
    let rho_pairs = eig_on_range(&rho_g, &z.w);
    let s_in: Vec<f64> = psi_pairs.iter().map(|(e, _)| *e).collect();
    let t_in: Vec<f64> = rho_pairs.iter().map(|(e, _)| e.max(0.0)).collect();
    let out = g.apply(&s_in, &t_in);
    if out.len() != d0 {
        return Err(Error::FacialViolation("frak_c: wrong output arity".into()));
    }
    let out_scale = out.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for w in out.windows(2) {
        if w[0] > w[1] + 1e-9 * out_scale {
            return Err(Error::FacialViolation(format!("frak_c: image not ascending: {out:?}")));
        }
    }
    let mut all_pairs: Vec<(f64, Vec<C64>)> = Vec::with_capacity(d0);
    for (i, (_, v)) in psi_pairs.iter().enumerate() {
        all_pairs.push((out[i], v.clone()));
    }
    for (i, (_, v)) in rho_pairs.iter().enumerate() {
        all_pairs.push((out[g.d_s + i], v.clone()));
    }
    let alpha = HermitianOperator::symmetrize(assemble_on(&all_pairs, d0, |e| e));
    let theta_ext = extend_isometry_over(&z.gamma, &z.w);
    let l = lambda_k(&alpha, k)?;
    Ok(TowerPoint { k, alpha, beta: theta_ext.mul(&l.matrix) })
}

/// The quotient presentation map p: (λ, μ, s, t) ↦ (W, γ, ψ) with
/// W = λ(i(ℂ^k)), γ = −μ∘Δ(t)λ⁻¹|_W, ψ = λΔ(s)λ⁻¹|_{W⊥}.
pub fn presentation_p(
    lambda: &IsometryFrame,
    mu: &IsometryFrame,
    s: &[f64],
    t: &[f64],
) -> Result<ThomPoint> {
    let d0 = lambda.ambient;
    let k = mu.rank;
    if lambda.rank != d0 || s.len() + t.len() != d0 || t.len() != k {
        return Err(Error::InvalidInput("presentation_p: dimension mismatch".into()));
    }
    let d_s = s.len();
    // Last k columns of λ span W.
    let lambda_k_cols = ComplexMatrix::from_fn(d0, k, |i, j| lambda.matrix[(i, d_s + j)]);
    let lambda_s_cols = ComplexMatrix::from_fn(d0, d_s, |i, j| lambda.matrix[(i, j)]);
    let w = Projector::new(lambda_k_cols.mul(&lambda_k_cols.adjoint()))?;
    let delta_t = ComplexMatrix::diag(t);
    let gamma = mu.matrix.mul(&delta_t).mul(&lambda_k_cols.adjoint()).neg();
    let delta_s = ComplexMatrix::diag(s);
    let psi = HermitianOperator::symmetrize(
        lambda_s_cols.mul(&delta_s).mul(&lambda_s_cols.adjoint()),
    );
    Ok(ThomPoint { k, w, gamma, psi })
}

/// The quotient presentation map q: (λ, μ, t′) ↦ (λΔ(t′)λ†, μ∘λ†|_{P_k}).
///
/// The isometry part carries a plus sign: with p's γ = −μ∘Δ(t)λ† one has
/// σ(γ) = −μλ†, so the θ = −σ(γ) characterization of ℭ_g forces θ = +μλ†
/// here, and the square against p closes strictly.
pub fn presentation_q(
    lambda: &IsometryFrame,
    mu: &IsometryFrame,
    t_full: &[f64],
) -> Result<TowerPoint> {
    let d0 = lambda.ambient;
    let k = mu.rank;
    if lambda.rank != d0 || t_full.len() != d0 {
        return Err(Error::InvalidInput("presentation_q: dimension mismatch".into()));
    }
    let d_s = d0 - k;
    let delta = ComplexMatrix::diag(t_full);
    let alpha = HermitianOperator::symmetrize(
        lambda.matrix.mul(&delta).mul(&lambda.matrix.adjoint()),
    );
    let lambda_k_cols = ComplexMatrix::from_fn(d0, k, |i, j| lambda.matrix[(i, d_s + j)]);
    let theta = mu.matrix.mul(&lambda_k_cols.adjoint());
    let l = lambda_k(&alpha, k)?;
    Ok(TowerPoint { k, alpha: alpha.clone(), beta: theta.mul(&l.matrix).neg() })
}

/// Block decomposition of a selfadjoint α against W: the s(W), s(W⊥) and
/// Hom(W, W⊥) components, each ambient-supported.
pub fn decompose_s(
    alpha: &HermitianOperator,
    w: &Projector,
) -> (HermitianOperator, HermitianOperator, ComplexMatrix) {
    let comp = w.complement();
    let on_w = HermitianOperator::symmetrize(compress(&alpha.matrix, w));
    let on_comp = HermitianOperator::symmetrize(compress(&alpha.matrix, &comp));
    let hom = comp.matrix.mul(&alpha.matrix).mul(&w.matrix);
    (on_w, on_comp, hom)
}

/// Inverse of [`decompose_s`]: β ⊕ γ ⊕ (δ + δ†).
pub fn recompose_s(
    on_w: &HermitianOperator,
    on_comp: &HermitianOperator,
    hom: &ComplexMatrix,
) -> HermitianOperator {
    HermitianOperator::symmetrize(
        on_w.matrix.add(&on_comp.matrix).add(hom).add(&hom.adjoint()),
    )
}

/// The chart g′: Hom(W, W⊥) → G′_k(V₀), α ↦ α̂(1+α†α)⁻¹α̂†.
pub fn grassmann_chart(w: &Projector, alpha_hom: &ComplexMatrix) -> Result<Projector> {
    let n = w.dim;
    if alpha_hom.rows != n || alpha_hom.cols != n {
        return Err(Error::InvalidInput("grassmann_chart: ambient-supported Hom expected".into()));
    }
    // α must map W to W⊥.
    let comp = w.complement();
    let masked = comp.matrix.mul(alpha_hom).mul(&w.matrix);
    let hat = w.matrix.add(&masked); // α̂ = 1_W + α on W, kills W⊥
    let gram = hat.adjoint().mul(&hat); // W + α†α supported on W
    let invertible = gram.add(&comp.matrix);
    let inv = invertible.inverse()?;
    let pi = hat.mul(&inv).mul(&hat.adjoint());
    Projector::new(pi)
}

/// The inverse chart g″: π ↦ π₂₁∘(π₁₁)⁻¹ when the W→W block is invertible.
pub fn grassmann_chart_inv(w: &Projector, pi: &Projector) -> Result<ComplexMatrix> {
    let comp = w.complement();
    let p11 = compress(&pi.matrix, w);
    // Invertibility of the W→W block on range W.
    let ambient = p11.add(&comp.matrix);
    let sv = crate::linalg::singular_values(&ambient);
    if sv[0] <= 1e-8 * sv[sv.len() - 1] {
        return Err(Error::OutsideChart("grassmann_chart_inv: W-block singular".into()));
    }
    let inv = ambient.inverse().map_err(|_| {
        Error::OutsideChart("grassmann_chart_inv: W-block singular".into())
    })?;
    let p21 = comp.matrix.mul(&pi.matrix).mul(&w.matrix);
    Ok(p21.mul(&inv).mul(&w.matrix))
}

/// A finite abelian group acting diagonally through characters on V₀ and V₁.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: crate::ktheory::GroupSpec,
    /// Character index (into the group's dual) for each coordinate of V₀.
    pub char_v0: Vec<usize>,
    pub char_v1: Vec<usize>,
}

impl GroupAction {
    /// Diagonal unitary by which a group element acts on V₀.
    pub fn unitary_v0(&self, g: &[u32]) -> ComplexMatrix {
        Self::diagonal(&self.group, &self.char_v0, g)
    }

    pub fn unitary_v1(&self, g: &[u32]) -> ComplexMatrix {
        Self::diagonal(&self.group, &self.char_v1, g)
    }

    fn diagonal(group: &crate::ktheory::GroupSpec, chars: &[usize], g: &[u32]) -> ComplexMatrix {
        let n = chars.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            if i != j {
                return C64::new(0.0, 0.0);
            }
            let tuple = group.unrank(chars[i]);
            let mut phase = 0.0;
            for (f, (&a, &gi)) in group.orders.iter().zip(tuple.iter().zip(g)) {
                phase += 2.0 * std::f64::consts::PI * (a as f64) * (gi as f64) / (*f as f64);
            }
            C64::from_polar(1.0, phase)
        })
    }
}

/// Values the group action can transform.
#[derive(Debug, Clone)]
pub enum Actee {
    Tower(TowerPoint),
    Thom(ThomPoint),
    Matrix(ComplexMatrix),
    Hermitian(HermitianOperator),
}

/// Apply a group element by conjugation: g·α = U₀αU₀†, g·γ = U₁γU₀†.
pub fn act(g: &[u32], value: &Actee, action: &GroupAction) -> Actee {
    let u0 = action.unitary_v0(g);
    let u1 = action.unitary_v1(g);
    match value {
        Actee::Tower(x) => Actee::Tower(TowerPoint {
            k: x.k,
            alpha: HermitianOperator::symmetrize(
                u0.mul(&x.alpha.matrix).mul(&u0.adjoint()),
            ),
            beta: u1.mul(&x.beta).mul(&u0.adjoint()),
        }),
        Actee::Thom(z) => Actee::Thom(ThomPoint {
            k: z.k,
            w: Projector {
                dim: z.w.dim,
                matrix: u0.mul(&z.w.matrix).mul(&u0.adjoint()),
            },
            gamma: u1.mul(&z.gamma).mul(&u0.adjoint()),
            psi: HermitianOperator::symmetrize(u0.mul(&z.psi.matrix).mul(&u0.adjoint())),
        }),
        Actee::Matrix(m) => Actee::Matrix(u1.mul(m).mul(&u0.adjoint())),
        Actee::Hermitian(h) => {
            Actee::Hermitian(HermitianOperator::symmetrize(u0.mul(&h.matrix).mul(&u0.adjoint())))
        }
    }
}

/// Names of the five explicit null-homotopy families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomotopyFamily {
    /// π_{d₀}∘φ_{d₀} deformed through log(ρ(γ)+t).
    Top1,
    /// τ∘π_{d₀} deformed through −θ∘(α−e₀(α)+t).
    Top2,
    /// π_k∘φ_k deformed through ρ(γ)+e_top(ψ)+t on the W block.
    Mid1,
    /// δ_k∘π_k deformed through −θ∘(λ_{k−1}(α)+t)|_{P_k}.
    Mid2,
    /// Σφ_k∘δ_k deformed through the shifted logs.
    Mid3,
}

/// Input/output payloads for the homotopy families.
pub enum HomotopyPoint {
    /// Injective γ (Top1).
    Injective(ComplexMatrix),
    /// Honest top-level pair (Top2).
    Pair(HermitianOperator, IsometryFrame),
    /// Thom point (Mid1).
    Thom(ThomPoint),
    /// Level-k tower point off Y_k (Mid2; k read from the point).
    Tower(TowerPoint),
    /// Level-(k−1) tower point with clean P_k (Mid3), with the target k.
    TowerAt(TowerPoint, usize),
}

pub enum HomotopyImage {
    Tower(TowerPoint),
    /// (suspension coordinate, matrix part) for Top2.
    Suspended(f64, ComplexMatrix),
    /// (suspension coordinate, thom point) for Mid2.
    SuspendedThom(f64, ThomPoint),
    /// (suspension coordinate, tower point) for Mid3.
    SuspendedTower(f64, TowerPoint),
}

impl HomotopyImage {
    /// The operator norm the properness arguments bound; this is the
    /// quantity monitored for unbounded growth.
    pub fn monitored_norm(&self) -> f64 {
        match self {
            HomotopyImage::Tower(x) => x.alpha.operator_norm(),
            HomotopyImage::Suspended(_, m) => m.operator_norm(),
            HomotopyImage::SuspendedThom(_, z) => {
                z.gamma.operator_norm().max(z.psi.operator_norm())
            }
            HomotopyImage::SuspendedTower(_, x) => x.alpha.operator_norm(),
        }
    }
}

/// Evaluate one of the explicit null-homotopy families at time t ≥ 0.
pub fn null_homotopy(family: HomotopyFamily, t: f64, point: &HomotopyPoint) -> Result<HomotopyImage> {
    if t < 0.0 {
        return Err(Error::InvalidInput("null_homotopy: t must be ≥ 0".into()));
    }
    match (family, point) {
        (HomotopyFamily::Top1, HomotopyPoint::Injective(gamma)) => {
            let r = rho(gamma);
            let e0 = hermitian_eig(&r)?.values[0];
            if t + e0 <= 0.0 {
                return Err(Error::InvalidInput("top-1: t + e₀(ρ(γ)) must be positive".into()));
            }
            let shifted = HermitianOperator::symmetrize(r.matrix.add_scalar(t));
            let alpha = log_op(&shifted)?;
            let d0 = gamma.cols;
            let theta = sigma(gamma).sigma.neg();
            let l = lambda_k(&alpha, d0 - 1)?;
            Ok(HomotopyImage::Tower(TowerPoint {
                k: d0 - 1,
                alpha,
                beta: theta.mul(&l.matrix).neg(),
            }))
        }
        (HomotopyFamily::Top2, HomotopyPoint::Pair(alpha, theta)) => {
            let eig = hermitian_eig(alpha)?;
            let e0 = eig.values[0];
            if eig.values[1] - e0 + t <= 0.0 {
                return Err(Error::InvalidInput("top-2: outside the domain U".into()));
            }
            let shifted = alpha.matrix.add_scalar(t - e0);
            Ok(HomotopyImage::Suspended(e0, theta.matrix.mul(&shifted).neg()))
        }
        (HomotopyFamily::Mid1, HomotopyPoint::Thom(z)) => {
            let d0 = z.w.dim;
            let comp = z.w.complement();
            let top_psi = e_top_on(&z.psi, &comp);
            let psi_block = compress(&z.psi.matrix, &comp);
            let rho_g = rho(&z.gamma);
            let rho_pairs = eig_on_range(&rho_g, &z.w);
            let w_block = assemble_on(&rho_pairs, d0, |e| e + top_psi + t);
            let alpha = HermitianOperator::symmetrize(psi_block.add(&w_block));
            let theta_ext = extend_isometry_over(&z.gamma, &z.w);
            let l = lambda_k(&alpha, z.k - 1)?;
            Ok(HomotopyImage::Tower(TowerPoint {
                k: z.k - 1,
                alpha,
                beta: theta_ext.mul(&l.matrix),
            }))
        }
        (HomotopyFamily::Mid2, HomotopyPoint::Tower(x)) => {
            let k = x.k;
            let d0 = x.d0();
            if in_y_k(&x.alpha, k)? {
                return Err(Error::InvalidInput("mid-2: point lies in Y_k".into()));
            }
            let w = p_k(&x.alpha, k)?;
            let eig = hermitian_eig(&x.alpha)?;
            let cut = eig.values[d0 - k];
            // −θ∘(λ_{k−1}(α)+t)|_{P_k}: θ = −σ(β) on P_k.
            let theta = sigma(&x.beta).sigma.neg();
            let lk1 = lambda_k(&x.alpha, k - 1)?;
            let arg = lk1.matrix.add(&w.matrix.scale_re(t)).mul(&w.matrix);
            let gamma = theta.mul(&arg).neg();
            let low: Vec<(f64, Vec<C64>)> = eig.values[..d0 - k]
                .iter()
                .cloned()
                .zip((0..d0 - k).map(|i| eig.vectors.matrix.column(i)))
                .collect();
            let psi = HermitianOperator::symmetrize(assemble_on(&low, d0, |e| -((cut - e).ln())));
            Ok(HomotopyImage::SuspendedThom(cut, ThomPoint { k, w, gamma, psi }))
        }
        (HomotopyFamily::Mid3, HomotopyPoint::TowerAt(x, k)) => {
            let k = *k;
            let d0 = x.d0();
            if x.k + 1 != k {
                return Err(Error::InvalidInput("mid-3 consumes a level-(k−1) point".into()));
            }
            if in_y_k(&x.alpha, k)? {
                return Err(Error::InvalidInput("mid-3: point lies in Y_k".into()));
            }
            let eig = hermitian_eig(&x.alpha)?;
            let j = d0 - k;
            let ej = eig.values[j];
            let gap = ej - eig.values[j - 1];
            if gap + t <= 0.0 {
                return Err(Error::InvalidInput("mid-3: outside the domain U".into()));
            }
            let low: Vec<(f64, Vec<C64>)> = eig.values[..j]
                .iter()
                .cloned()
                .zip((0..j).map(|i| eig.vectors.matrix.column(i)))
                .collect();
            let high: Vec<(f64, Vec<C64>)> = eig.values[j..]
                .iter()
                .cloned()
                .zip((j..d0).map(|i| eig.vectors.matrix.column(i)))
                .collect();
            let low_block = assemble_on(&low, d0, |e| -((ej - e + t).ln()));
            let high_block = assemble_on(&high, d0, |e| e - ej - (gap + t).ln());
            let beta_t = HermitianOperator::symmetrize(low_block.add(&high_block));
            // θ is the incoming isometry on P_{k−1}(α) = P_k(β_t).
            let theta = sigma(&x.beta).sigma.neg();
            let l = lambda_k(&beta_t, k)?;
            Ok(HomotopyImage::SuspendedTower(
                ej,
                TowerPoint { k, alpha: beta_t, beta: theta.mul(&l.matrix).neg() },
            ))
        }
        _ => Err(Error::InvalidInput("null_homotopy: family/point mismatch".into())),
    }
}
