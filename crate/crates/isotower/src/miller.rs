//! The Miller filtration at matrix level: filtration degree, the Γ_k
//! diffeomorphism, the Cayley transform, the restriction map res_k with
//! its dense-chart inverse, the g₀/g₁ homotopy of the splitting comparison
//! and the derivative-at-origin check for the top splitting map.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::calculus::{lambda_k, p_k, rho, sigma};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, numerical_rank, ComplexMatrix, HermitianOperator, IsometryFrame, Projector,
    TAU_GAP,
};
use crate::tower::TowerPoint;

/// A point of the filtered isometry space: an isometry φ: V₀ → V₁ measured
/// against the standard inclusion I (V₀ sits in V₁ as the first d₀
/// coordinates).
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationPoint {
    pub phi: IsometryFrame,
}

impl FiltrationPoint {
    pub fn new(phi: IsometryFrame) -> Self {
        Self { phi }
    }

    pub fn inclusion(&self) -> ComplexMatrix {
        IsometryFrame::standard_inclusion(self.phi.ambient, self.phi.rank).matrix
    }
}

/// Filtration level: numerical rank of φ − I.
pub fn filtration_level(p: &FiltrationPoint) -> usize {
    let diff = p.phi.matrix.sub(&p.inclusion());
    if diff.max_abs() == 0.0 {
        return 0;
    }
    numerical_rank(&diff, TAU_GAP)
}

/// The Γ_k diffeomorphism: (W, ψ) with ψ agreeing with the inclusion on
/// W⊥ maps to ψ − (0_W ⊕ I_{W⊥}); its inverse adds the block back.
pub fn gamma_diffeo(w: &Projector, psi: &IsometryFrame) -> Result<ComplexMatrix> {
    let incl = IsometryFrame::standard_inclusion(psi.ambient, psi.rank).matrix;
    let comp = w.complement();
    let on_comp = psi.matrix.mul(&comp.matrix);
    let incl_comp = incl.mul(&comp.matrix);
    if on_comp.dist(&incl_comp) > 1e-8 * (1.0 + incl_comp.operator_norm()) {
        return Err(Error::InvalidInput(
            "gamma_diffeo: ψ must agree with the inclusion on W⊥".into(),
        ));
    }
    Ok(psi.matrix.sub(&incl_comp))
}

/// Inverse of [`gamma_diffeo`].
pub fn gamma_diffeo_inv(w: &Projector, phi: &ComplexMatrix) -> Result<IsometryFrame> {
    let incl = IsometryFrame::standard_inclusion(phi.rows, phi.cols).matrix;
    let comp = w.complement();
    let psi = phi.add(&incl.mul(&comp.matrix));
    IsometryFrame::new(psi)
}

/// The Cayley transform δ ↦ ((−iδ/2) − 1)/((−iδ/2) + 1), a unitary for
/// every selfadjoint δ.
pub fn cayley(delta: &HermitianOperator) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(delta)?;
    Ok(eig.assemble_complex(|x| {
        let z = C64::new(0.0, -x / 2.0);
        (z - 1.0) / (z + 1.0)
    }))
}

/// Inverse Cayley transform φ ↦ (2/i)(φ+1)(φ−1)⁻¹; requires φ − 1
/// invertible.
pub fn cayley_inv(phi: &ComplexMatrix) -> Result<HermitianOperator> {
    let n = phi.rows;
    if phi.cols != n {
        return Err(Error::InvalidInput("cayley_inv: square input expected".into()));
    }
    let shifted = phi.sub(&ComplexMatrix::identity(n));
    let sv = crate::linalg::singular_values(&shifted);
    if sv[0] <= 1e-10 * sv[sv.len() - 1].max(1.0) {
        return Err(Error::OutsideChart("cayley_inv: φ − 1 is singular".into()));
    }
    let inv = shifted
        .inverse()
        .map_err(|_| Error::OutsideChart("cayley_inv: φ − 1 is singular".into()))?;
    let plus = phi.add(&ComplexMatrix::identity(n));
    // 2/i = −2i.
    let out = plus.mul(&inv).scale(C64::new(0.0, -2.0));
    Ok(HermitianOperator::symmetrize(out))
}

/// res_k: (α, φ) ↦ (α, φ|_{P_k(α)}) in tower coordinates.
pub fn res_k_map(alpha: &HermitianOperator, p: &FiltrationPoint, k: usize) -> Result<TowerPoint> {
    let l = lambda_k(alpha, k)?;
    Ok(TowerPoint { k, alpha: alpha.clone(), beta: p.phi.matrix.mul(&l.matrix).neg() })
}

/// Chart data for the dense-subset inverse: blocks of θ against
/// V₁ = P_k(α) ⊕ P_k(α)⊥ ⊕ V₂.
struct ChartBlocks {
    w: Projector,
    /// θ as an ambient d₁×d₀ matrix killing W⊥.
    theta: ComplexMatrix,
}

fn chart_blocks(x: &TowerPoint, k: usize) -> Result<ChartBlocks> {
    let w = p_k(&x.alpha, k)?;
    if w.trace_rank() < k {
        return Err(Error::OutsideChart("res_k inverse: dim P_k(α) < k".into()));
    }
    // θ = −σ(β) with initial space P_k(α)... at level k the initial space
    // of σ(β) is exactly P_k(α) off Y_k.
    let theta = sigma(&x.beta).sigma.neg();
    Ok(ChartBlocks { w, theta })
}

/// res_k inverse on the dense chart B: assembles the unique isometry φ
/// with rank(φ − I) ≤ k restricting to θ on P_k(α).
///
/// With θ₁ = P_W∘θ|_W (the V₀-part of θ landing back in W), the chart
/// condition is that θ₁ − I is invertible on W; then ξ := (θ₁†−I)⁻¹θ₂†
/// and the W⊥-columns of φ are ((θ₁−I)ξ, θ₂ξ + I, θ₃ξ).
pub fn res_k_inverse_on_b(x: &TowerPoint, k: usize) -> Result<FiltrationPoint> {
    let d0 = x.d0();
    let d1 = x.d1();
    let blocks = chart_blocks(x, k)?;
    let w = &blocks.w;
    let comp = w.complement();
    let incl = IsometryFrame::standard_inclusion(d1, d0).matrix;
    // Projections of V₁ onto the V₀-part and the V₂-part.
    let proj_v0 = incl.adjoint();

    // Ambient-supported blocks (all treated as maps between coordinate
    // subspaces of V₀ or V₁).
    let theta_v0 = proj_v0.mul(&blocks.theta); // d0×d0, kills W⊥
    let theta1 = w.matrix.mul(&theta_v0).mul(&w.matrix);
    let theta2 = comp.matrix.mul(&theta_v0).mul(&w.matrix);

    // Invertibility of θ₁ − I on W.
    let theta1_minus = theta1.sub(&w.matrix);
    let ambient = theta1_minus.add(&comp.matrix);
    let sv = crate::linalg::singular_values(&ambient);
    if sv[0] <= 1e-8 * sv[sv.len() - 1].max(1.0) {
        return Err(Error::OutsideChart("res_k inverse: θ₁ − I is singular on W".into()));
    }
    let inv_dag = ambient
        .adjoint()
        .inverse()
        .map_err(|_| Error::OutsideChart("res_k inverse: θ₁ − I is singular on W".into()))?;
    // ξ = (θ₁† − I)⁻¹ θ₂†: W⊥ → W (ambient-supported).
    let xi = w.matrix.mul(&inv_dag).mul(&theta2.adjoint()).mul(&comp.matrix);

    // φ columns: on W it is θ itself; on W⊥ the triple (ξ₁, ξ₂, ξ₃).
    let xi1 = theta1_minus.mul(&xi); // (θ₁−I)ξ : W⊥ → W
    let xi2 = theta2.mul(&xi).add(&comp.matrix); // θ₂ξ + I_{W⊥}
    let xi2_in_v1 = incl.mul(&xi1.add(&xi2));
    let theta3 = blocks.theta.sub(&incl.mul(&theta_v0)); // V₂-part of θ
    let xi3 = theta3.mul(&xi);
    let phi_mat = blocks.theta.mul(&w.matrix).add(&xi2_in_v1).add(&xi3);
    let phi = IsometryFrame::new(phi_mat)
        .map_err(|_| Error::OutsideChart("res_k inverse: assembled φ is not isometric".into()))?;
    Ok(FiltrationPoint::new(phi))
}

/// The g₀/g₁ homotopy of the splitting comparison: at time t the W-block
/// is f(ρ(tα+β), t) + t(e_top(ψ)+1) with f(x,t) = ∫₁ˣ u^{t−1} du, the
/// off-diagonal carries (1−t)α, and ψ sits on W⊥. Returns the selfadjoint
/// part of the homotopy.
pub fn g0_g1_homotopy(t: f64, z: &crate::tower::ThomPoint) -> Result<HermitianOperator> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput("g0_g1_homotopy: t must lie in [0,1]".into()));
    }
    let d0 = z.w.dim;
    let comp = z.w.complement();
    let incl = IsometryFrame::standard_inclusion(z.gamma.rows, d0).matrix;
    // Decompose γ = α_h + β_h: α_h is the component into W⊥ ⊂ V₀,
    // β_h the component into W ⊕ V₂ = V₁ \ W⊥.
    let gamma_v0 = incl.adjoint().mul(&z.gamma);
    let alpha_h_v0 = comp.matrix.mul(&gamma_v0); // W → W⊥ inside V₀
    let alpha_h = incl.mul(&alpha_h_v0);
    let beta_h = z.gamma.sub(&alpha_h);

    let rho_beta = rho(&beta_h);
    let e0_beta = eig_on_w(&rho_beta, &z.w).first().map(|(e, _)| *e).unwrap_or(0.0);
    if t + e0_beta <= 0.0 {
        return Err(Error::InvalidInput("g0_g1_homotopy: t + e₀(ρ(β)) must be positive".into()));
    }
    let mix = alpha_h.scale_re(t).add(&beta_h);
    let rho_mix = rho(&mix);
    let pairs = eig_on_w(&rho_mix, &z.w);
    let f = |x: f64, t: f64| -> f64 {
        if t == 0.0 {
            x.max(1e-300).ln()
        } else {
            (x.powf(t) - 1.0) / t
        }
    };
    let e_top_psi = eig_on_w(&z.psi, &comp).last().map(|(e, _)| *e).unwrap_or(0.0);
    let mut w_block = ComplexMatrix::zeros(d0, d0);
    for (e, v) in &pairs {
        let val = f(e.max(0.0), t) + t * (e_top_psi + 1.0);
        for i in 0..d0 {
            for j in 0..d0 {
                w_block[(i, j)] += v[i] * v[j].conj() * val;
            }
        }
    }
    let off = alpha_h_v0.scale_re(1.0 - t);
    let psi_block = comp.matrix.mul(&z.psi.matrix).mul(&comp.matrix);
    Ok(HermitianOperator::symmetrize(
        w_block.add(&psi_block).add(&off).add(&off.adjoint()),
    ))
}

/// Eigen-pairs of a Hermitian restricted to the range of a projector.
fn eig_on_w(m: &HermitianOperator, p: &Projector) -> Vec<(f64, Vec<C64>)> {
    let rank = p.trace_rank();
    if rank == 0 {
        return Vec::new();
    }
    let scale = m.operator_norm() + 1.0;
    let shifted = HermitianOperator::symmetrize(
        p.matrix
            .mul(&m.matrix)
            .mul(&p.matrix)
            .add(&p.complement().matrix.scale_re(3.0 * scale)),
    );
    let eig = hermitian_eig(&shifted).expect("restricted eigensolve");
    (0..rank)
        .map(|k| (eig.values[k], eig.vectors.matrix.column(k)))
        .collect()
}

/// Result of the finite-difference derivative check.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeReport {
    pub dim: usize,
    pub step: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Central finite-difference Jacobian of (δ, α) ↦ −Cayley(δ)·Exp(α) at
/// (0, 0), compared against the identity under the canonical splitting
/// End(V₀) = s(V₀) ⊕ i·s(V₀).
pub fn top_splitting_derivative_check(d0: usize, h: f64) -> Result<DerivativeReport> {
    if !(1e-6..=1e-3).contains(&h) {
        return Err(Error::InvalidInput("derivative check: h must lie in [1e-6, 1e-3]".into()));
    }
    let embed = |delta: &HermitianOperator, alpha: &HermitianOperator| -> ComplexMatrix {
        let c = cayley(delta).expect("cayley");
        let e = crate::calculus::exp_op(alpha);
        c.mul(&e.matrix).neg()
    };
    // Real basis of s(V₀).
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for i in 0..d0 {
        let mut m = ComplexMatrix::zeros(d0, d0);
        m[(i, i)] = C64::new(1.0, 0.0);
        basis.push(m);
    }
    let s = 1.0 / 2f64.sqrt();
    for i in 0..d0 {
        for j in i + 1..d0 {
            let mut re = ComplexMatrix::zeros(d0, d0);
            re[(i, j)] = C64::new(s, 0.0);
            re[(j, i)] = C64::new(s, 0.0);
            basis.push(re);
            let mut im = ComplexMatrix::zeros(d0, d0);
            im[(i, j)] = C64::new(0.0, s);
            im[(j, i)] = C64::new(0.0, -s);
            basis.push(im);
        }
    }
    // Split A ∈ End(V₀) into (X, Y) with A = X + iY, X and Y selfadjoint.
    let split = |a: &ComplexMatrix| -> (ComplexMatrix, ComplexMatrix) {
        let x = a.add(&a.adjoint()).scale_re(0.5);
        let y = a.sub(&a.adjoint()).scale(C64::new(0.0, -0.5));
        (x, y)
    };
    let zero = HermitianOperator::zero(d0);
    let mut max_dev = 0.0f64;
    for b in &basis {
        // δ-direction: expected derivative is (X, Y) = (0, b).
        let plus = embed(&HermitianOperator::symmetrize(b.scale_re(h)), &zero);
        let minus = embed(&HermitianOperator::symmetrize(b.scale_re(-h)), &zero);
        let fd = plus.sub(&minus).scale_re(1.0 / (2.0 * h));
        let (x, y) = split(&fd);
        max_dev = max_dev.max(x.operator_norm()).max(y.sub(b).operator_norm());
        // α-direction: expected derivative is (X, Y) = (b, 0).
        let plus = embed(&zero, &HermitianOperator::symmetrize(b.scale_re(h)));
        let minus = embed(&zero, &HermitianOperator::symmetrize(b.scale_re(-h)));
        let fd = plus.sub(&minus).scale_re(1.0 / (2.0 * h));
        let (x, y) = split(&fd);
        max_dev = max_dev.max(x.sub(b).operator_norm()).max(y.operator_norm());
    }
    let tolerance = 10.0 * h;
    Ok(DerivativeReport { dim: d0, step: h, max_deviation: max_dev, tolerance, passed: max_dev <= tolerance })
}
