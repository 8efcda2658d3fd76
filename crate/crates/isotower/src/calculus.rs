//! The standard functional calculus: scalar functions applied to spectra,
//! polar data ρ/σ, the homeomorphism κ onto injective maps, and the
//! eigenspace constructions P_k and λ_k.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    complete_orthonormal, gap_threshold, hermitian_eig, numerical_rank, ComplexMatrix,
    HermitianOperator, IsometryFrame, Projector, TAU_GAP,
};

/// Domain tag for a scalar function; the spectrum is checked against the
/// tag before any evaluation happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Reals,
    NonNegative,
    Positive,
}

/// A scalar function applied through the spectrum of a selfadjoint operator.
pub struct ScalarFunction {
    pub name: &'static str,
    pub domain: Domain,
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl ScalarFunction {
    pub fn new(
        name: &'static str,
        domain: Domain,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { name, domain, f: Box::new(f) }
    }

    pub fn exp() -> Self {
        Self::new("exp", Domain::Reals, f64::exp)
    }

    pub fn log() -> Self {
        Self::new("log", Domain::Positive, f64::ln)
    }

    pub fn sqrt() -> Self {
        Self::new("sqrt", Domain::NonNegative, |x| x.max(0.0).sqrt())
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn check(&self, x: f64, scale: f64) -> Result<()> {
        let slack = gap_threshold(scale);
        let ok = match self.domain {
            Domain::Reals => true,
            Domain::NonNegative => x >= -slack,
            Domain::Positive => x > slack,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "eigenvalue {x:.6e} outside domain of {}",
                self.name
            )))
        }
    }
}

/// f(α): same eigenvectors, eigenvalues mapped through f.
pub fn apply_to_spectrum(f: &ScalarFunction, alpha: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = hermitian_eig(alpha)?;
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for &e in &eig.values {
        f.check(e, scale)?;
    }
    // Clamp into the domain before evaluating so that tolerated boundary
    // noise (a -1e-14 eigenvalue under sqrt) cannot produce NaN.
    let clamp = |x: f64| match f.domain {
        Domain::Reals => x,
        Domain::NonNegative | Domain::Positive => x.max(0.0),
    };
    Ok(HermitianOperator::symmetrize(eig.assemble(|x| f.eval(clamp(x)))))
}

/// Matrix exponential of a selfadjoint operator.
pub fn exp_op(alpha: &HermitianOperator) -> HermitianOperator {
    apply_to_spectrum(&ScalarFunction::exp(), alpha).expect("exp is total")
}

/// Matrix logarithm of a strictly positive selfadjoint operator.
pub fn log_op(alpha: &HermitianOperator) -> Result<HermitianOperator> {
    apply_to_spectrum(&ScalarFunction::log(), alpha)
}

/// Polar data of γ: ρ = (γ†γ)^{1/2}, the isometric factor σ and the
/// projector onto (Ker γ)⊥ on which σ is isometric.
pub struct PolarData {
    pub rho: HermitianOperator,
    pub sigma_domain: Projector,
    pub sigma: ComplexMatrix,
}

/// ρ(γ) = (γ†γ)^{1/2}, assembled as V·Σ·V† from a one-sided Jacobi SVD so
/// that near-kernel singular values carry ~ε·‖γ‖ absolute error.
pub fn rho(gamma: &ComplexMatrix) -> HermitianOperator {
    let n = gamma.cols;
    let dec = crate::linalg::svd(gamma);
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let s = dec.s[k];
        if s == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += dec.v[(i, k)] * dec.v[(j, k)].conj() * s;
            }
        }
    }
    HermitianOperator::symmetrize(out)
}

/// Polar decomposition γ = σ∘ρ(γ) with σ isometric on (Ker γ)⊥.
///
/// σ is materialized as a full matrix that kills Ker γ; its restriction to
/// the image of `sigma_domain` is the paper's isometry.
pub fn sigma(gamma: &ComplexMatrix) -> PolarData {
    let n = gamma.cols;
    let dec = crate::linalg::svd(gamma);
    let top = dec.s.last().copied().unwrap_or(0.0);
    let thresh = gap_threshold(top);

    let mut sigma_mat = ComplexMatrix::zeros(gamma.rows, n);
    let mut dom = ComplexMatrix::zeros(n, n);
    let mut rho_mat = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let s = dec.s[k];
        for i in 0..n {
            for j in 0..n {
                rho_mat[(i, j)] += dec.v[(i, k)] * dec.v[(j, k)].conj() * s;
            }
        }
        if s <= thresh {
            continue;
        }
        for i in 0..gamma.rows {
            for j in 0..n {
                sigma_mat[(i, j)] += dec.u[(i, k)] * dec.v[(j, k)].conj();
            }
        }
        for i in 0..n {
            for j in 0..n {
                dom[(i, j)] += dec.v[(i, k)] * dec.v[(j, k)].conj();
            }
        }
    }
    PolarData {
        rho: HermitianOperator::symmetrize(rho_mat),
        sigma_domain: Projector { dim: n, matrix: dom },
        sigma: sigma_mat,
    }
}

/// σ(γ) extended over Ker γ to a genuine isometry by deterministic
/// Gram–Schmidt completion against the standard basis of the target.
pub fn sigma_extended(gamma: &ComplexMatrix) -> ComplexMatrix {
    let n = gamma.cols;
    let dec = crate::linalg::svd(gamma);
    let top = dec.s.last().copied().unwrap_or(0.0);
    let thresh = gap_threshold(top);

    let mut image_cols: Vec<Vec<C64>> = Vec::new();
    let mut kernel_vs: Vec<Vec<C64>> = Vec::new();
    let mut out = ComplexMatrix::zeros(gamma.rows, n);
    for k in 0..n {
        let v = dec.v.column(k);
        if dec.s[k] <= thresh {
            kernel_vs.push(v);
        } else {
            let m = dec.u.column(k);
            for i in 0..gamma.rows {
                for j in 0..n {
                    out[(i, j)] += m[i] * v[j].conj();
                }
            }
            image_cols.push(m);
        }
    }
    let fresh = complete_orthonormal(gamma.rows, &image_cols);
    for (v, m) in kernel_vs.iter().zip(fresh.iter()) {
        for i in 0..gamma.rows {
            for j in 0..n {
                out[(i, j)] += m[i] * v[j].conj();
            }
        }
    }
    out
}

/// κ(α, θ) = −θ∘Exp(α): the homeomorphism onto injective maps.
pub fn kappa(alpha: &HermitianOperator, theta: &IsometryFrame) -> Result<ComplexMatrix> {
    if alpha.dim != theta.rank {
        return Err(Error::InvalidInput("kappa: dim α must equal rank θ".into()));
    }
    let e = exp_op(alpha);
    Ok(theta.matrix.mul(&e.matrix).neg())
}

/// κ⁻¹(γ) = (log ρ(γ), −σ(γ)) for injective γ.
pub fn kappa_inv(gamma: &ComplexMatrix) -> Result<(HermitianOperator, IsometryFrame)> {
    if numerical_rank(gamma, TAU_GAP) < gamma.cols || gamma.max_abs() == 0.0 {
        return Err(Error::NotInjective("kappa_inv needs an injective argument".into()));
    }
    let r = rho(gamma);
    let log_r = log_op(&r)?;
    let polar = sigma(gamma);
    let frame = IsometryFrame::new(polar.sigma.neg())?;
    Ok((log_r, frame))
}

/// Cut index for P_k: the first position m ≥ d−k with a clean gap
/// (or m = d for the zero projector; m = 0 means the full space).
fn p_k_cut(values: &[f64], k: usize) -> usize {
    let d = values.len();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thresh = gap_threshold(scale);
    for m in (d - k)..=d {
        if m == 0 || m == d {
            return m;
        }
        if values[m] - values[m - 1] > thresh {
            return m;
        }
    }
    d
}

/// P_k(α): projector onto the largest direct sum of top eigenspaces of α
/// with total dimension ≤ k.
pub fn p_k(alpha: &HermitianOperator, k: usize) -> Result<Projector> {
    let d = alpha.dim;
    if k > d {
        return Err(Error::InvalidInput(format!("P_k: k = {k} exceeds dim = {d}")));
    }
    if k == 0 {
        return Ok(Projector::zero(d));
    }
    let eig = hermitian_eig(alpha)?;
    let m = p_k_cut(&eig.values, k);
    Ok(eig.span_projector(m..d))
}

/// λ_k(α) = max(0, α − e_{d−k−1}(α)), the PSD operator supported on P_k(α).
///
/// For k = d the cut eigenvalue e_{−1} does not exist; the convention here
/// takes e_{−1} := e_0, so λ_d(α) = α − e_0(α).
pub fn lambda_k(alpha: &HermitianOperator, k: usize) -> Result<HermitianOperator> {
    let d = alpha.dim;
    if k > d {
        return Err(Error::InvalidInput(format!("lambda_k: k = {k} exceeds dim = {d}")));
    }
    let eig = hermitian_eig(alpha)?;
    let cut = if k == d { eig.values[0] } else { eig.values[d - k - 1] };
    Ok(HermitianOperator::symmetrize(eig.assemble(|x| (x - cut).max(0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{random_hermitian_with, random_matrix_with, TestRng};
    use crate::linalg::tol_eq;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = HermitianOperator::zero(3);
        let e = exp_op(&z);
        assert!(e.matrix.dist(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn square_matches_matrix_product() {
        let a = HermitianOperator::new(ComplexMatrix::from_rows(&[
            &[C64::new(2.0, 0.0), C64::new(1.0, 0.0)],
            &[C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
        ]))
        .unwrap();
        let sq = apply_to_spectrum(&ScalarFunction::new("square", Domain::Reals, |x| x * x), &a).unwrap();
        let direct = a.matrix.mul(&a.matrix);
        assert!(sq.matrix.dist(&direct) < tol_eq(direct.operator_norm()));
    }

    #[test]
    fn log_exp_inverse_on_random_hermitian() {
        let mut rng = TestRng::new(42);
        for _ in 0..20 {
            let a = random_hermitian_with(&mut rng, 4);
            let back = log_op(&exp_op(&a)).unwrap();
            assert!(back.dist(&a) < tol_eq(a.operator_norm()));
        }
    }

    #[test]
    fn log_of_nonpositive_is_domain_error() {
        let a = HermitianOperator::diag(&[-1.0, 2.0]);
        assert!(matches!(log_op(&a), Err(Error::DomainError(_))));
        let zero = HermitianOperator::diag(&[0.0, 2.0]);
        assert!(matches!(log_op(&zero), Err(Error::DomainError(_))));
    }

    #[test]
    fn rho_examples() {
        let m = ComplexMatrix::diag(&[-2.0]);
        assert!((rho(&m).matrix[(0, 0)].re - 2.0).abs() < 1e-12);

        let theta = crate::harness::haar_isometry(5, 3, 9);
        let r = rho(&theta.matrix);
        assert!(r.matrix.dist(&ComplexMatrix::identity(3)) < 1e-10);

        let g = ComplexMatrix::from_rows(&[
            &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        let r = rho(&g);
        let square = r.matrix.mul(&r.matrix);
        assert!(square.dist(&g.adjoint().mul(&g)) < 1e-10);
    }

    #[test]
    fn rho_kernel_matches_gamma_kernel() {
        let g = ComplexMatrix::diag(&[0.0, 3.0]);
        let r = rho(&g);
        assert_eq!(numerical_rank(&r.matrix, TAU_GAP), numerical_rank(&g, TAU_GAP));
    }

    #[test]
    fn sigma_examples() {
        // γ = c·I, c > 0: σ = I.
        let g = ComplexMatrix::diag(&[2.5, 2.5]);
        let p = sigma(&g);
        assert!(p.sigma.dist(&ComplexMatrix::identity(2)) < 1e-12);

        // γ = diag(0,3): domain = span(e₂), σ(e₂) = e₂.
        let g = ComplexMatrix::diag(&[0.0, 3.0]);
        let p = sigma(&g);
        assert!(p.sigma_domain.matrix.dist(&ComplexMatrix::diag(&[0.0, 1.0])) < 1e-12);
        assert!((p.sigma[(1, 1)] - C64::new(1.0, 0.0)).norm() < 1e-12);

        // random injective 3x5... the spec means 5x3 (injective needs rows ≥ cols).
        let mut rng = TestRng::new(5);
        let g = random_matrix_with(&mut rng, 5, 3);
        let p = sigma(&g);
        let gram = p.sigma.adjoint().mul(&p.sigma);
        assert!(gram.dist(&ComplexMatrix::identity(3)) < 1e-9);
        let recomposed = p.sigma.mul(&p.rho.matrix);
        assert!(recomposed.dist(&g) < tol_eq(g.operator_norm()));
    }

    #[test]
    fn rho_preserves_vector_norms() {
        let mut rng = TestRng::new(8);
        let g = random_matrix_with(&mut rng, 4, 3);
        let r = rho(&g);
        for _ in 0..10 {
            let v: Vec<C64> = (0..3).map(|_| rng.complex_gaussian()).collect();
            let n1: f64 = g.apply(&v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let n2: f64 = r.matrix.apply(&v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((n1 - n2).abs() < 1e-9 * n1.max(1.0));
        }
    }

    #[test]
    fn kappa_examples_and_round_trip() {
        // (0, I) ↦ −I.
        let z = HermitianOperator::zero(3);
        let id = IsometryFrame::identity(3);
        let g = kappa(&z, &id).unwrap();
        assert!(g.dist(&ComplexMatrix::identity(3).neg()) < 1e-14);

        // (I, θ₀) ↦ −e·θ₀.
        let mut rng = TestRng::new(13);
        let theta = crate::harness::haar_isometry(5, 3, 21);
        let one = HermitianOperator::diag(&[1.0, 1.0, 1.0]);
        let g = kappa(&one, &theta).unwrap();
        assert!(g.dist(&theta.matrix.scale_re(-std::f64::consts::E)) < 1e-12);

        // Round trip on random (α, θ).
        for _ in 0..10 {
            let alpha = random_hermitian_with(&mut rng, 3);
            let theta = crate::harness::haar_isometry_with(&mut rng, 5, 3);
            let g = kappa(&alpha, &theta).unwrap();
            let (a2, t2) = kappa_inv(&g).unwrap();
            assert!(a2.dist(&alpha) < tol_eq(alpha.operator_norm()) * 10.0);
            assert!(t2.matrix.dist(&theta.matrix) < 1e-9);
        }
    }

    #[test]
    fn kappa_inv_rejects_noninjective() {
        let g = ComplexMatrix::diag(&[0.0, 1.0]);
        assert!(matches!(kappa_inv(&g), Err(Error::NotInjective(_))));
        // γ = −I ↦ (0, I).
        let (a, t) = kappa_inv(&ComplexMatrix::identity(2).neg()).unwrap();
        assert!(a.operator_norm() < 1e-12);
        assert!(t.matrix.dist(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn p_k_examples() {
        let a = HermitianOperator::diag(&[0.0, 1.0, 2.0]);
        let p = p_k(&a, 1).unwrap();
        assert!(p.matrix.dist(&ComplexMatrix::diag(&[0.0, 0.0, 1.0])) < 1e-12);
        assert_eq!(p.trace_rank(), 1);

        // Repeated top eigenvalue forces dim < k.
        let a = HermitianOperator::diag(&[0.0, 1.0, 1.0]);
        let p = p_k(&a, 1).unwrap();
        assert_eq!(p.trace_rank(), 0);

        assert_eq!(p_k(&a, 0).unwrap().trace_rank(), 0);
        assert_eq!(p_k(&a, 3).unwrap().trace_rank(), 3);
    }

    #[test]
    fn p_k_is_monotone_in_k() {
        let mut rng = TestRng::new(77);
        for _ in 0..10 {
            let a = random_hermitian_with(&mut rng, 5);
            for k in 1..=5 {
                let small = p_k(&a, k - 1).unwrap();
                let big = p_k(&a, k).unwrap();
                // image inclusion: big∘small = small.
                assert!(big.matrix.mul(&small.matrix).dist(&small.matrix) < 1e-9);
            }
        }
    }

    #[test]
    fn lambda_k_examples() {
        let a = HermitianOperator::diag(&[0.0, 1.0, 3.0]);
        let l = lambda_k(&a, 1).unwrap();
        assert!(l.matrix.dist(&ComplexMatrix::diag(&[0.0, 0.0, 2.0])) < 1e-12);

        // k = d₀−1 gives α − e₀(α).
        let mut rng = TestRng::new(4);
        let a = random_hermitian_with(&mut rng, 4);
        let l = lambda_k(&a, 3).unwrap();
        let e0 = hermitian_eig(&a).unwrap().values[0];
        assert!(l.matrix.dist(&a.matrix.add_scalar(-e0)) < tol_eq(a.operator_norm()));

        // Repeated cut eigenvalue: rank < k.
        let a = HermitianOperator::diag(&[0.0, 1.0, 1.0, 2.0]);
        let l = lambda_k(&a, 2).unwrap();
        assert_eq!(numerical_rank(&l.matrix, TAU_GAP), 1);
    }

    #[test]
    fn cluster_stability_of_functional_calculus() {
        // α built from an explicit degenerate spectrum; f(α) must agree with
        // the construction unitary's assembly even though the solver may pick
        // a different basis inside the cluster.
        let mut rng = TestRng::new(99);
        for _ in 0..10 {
            let u = crate::harness::haar_isometry_with(&mut rng, 4, 4);
            let t = [0.5, 0.5, 0.5, 2.0];
            let mut alpha = ComplexMatrix::zeros(4, 4);
            for k in 0..4 {
                let col = u.matrix.column(k);
                for i in 0..4 {
                    for j in 0..4 {
                        alpha[(i, j)] += col[i] * col[j].conj() * t[k];
                    }
                }
            }
            let alpha = HermitianOperator::symmetrize(alpha);
            let f = ScalarFunction::new("cube", Domain::Reals, |x| x * x * x);
            let via_solver = apply_to_spectrum(&f, &alpha).unwrap();
            let mut via_construction = ComplexMatrix::zeros(4, 4);
            for k in 0..4 {
                let col = u.matrix.column(k);
                for i in 0..4 {
                    for j in 0..4 {
                        via_construction[(i, j)] += col[i] * col[j].conj() * t[k].powi(3);
                    }
                }
            }
            assert!(via_solver.matrix.dist(&via_construction) < tol_eq(via_construction.operator_norm()) * 10.0);
        }
    }
}
