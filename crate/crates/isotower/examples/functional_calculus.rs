//! Applying scalar functions through spectra, polar data and the
//! homeomorphism κ between (selfadjoint, isometry) pairs and injective
//! maps.

use isotower::calculus::{self, Domain, ScalarFunction};
use isotower::harness::{haar_isometry, random_hermitian, random_matrix_with, TestRng};
use isotower::linalg::hermitian_eig;

fn main() {
    let alpha = random_hermitian(4, 7);
    let eig = hermitian_eig(&alpha).unwrap();
    println!("α is a random 4×4 Hermitian with spectrum {:?}", eig.values);

    // f(α) has the same eigenvectors and mapped eigenvalues.
    let square = ScalarFunction::new("square", Domain::Reals, |x| x * x);
    let alpha_sq = calculus::apply_to_spectrum(&square, &alpha).unwrap();
    let direct = alpha.matrix.mul(&alpha.matrix);
    println!(
        "‖(x↦x²)(α) − α·α‖ = {:.2e} (functional calculus vs matrix product)",
        alpha_sq.matrix.dist(&direct)
    );

    // Exp and log are mutually inverse homeomorphisms s(V) ≅ s₊₊(V).
    let back = calculus::log_op(&calculus::exp_op(&alpha)).unwrap();
    println!("‖log(Exp(α)) − α‖ = {:.2e}", back.dist(&alpha));

    // Polar data: γ = σ(γ)∘ρ(γ) with σ isometric on (Ker γ)⊥.
    let mut rng = TestRng::new(21);
    let gamma = random_matrix_with(&mut rng, 5, 3);
    let polar = calculus::sigma(&gamma);
    println!(
        "polar recomposition ‖σρ − γ‖ = {:.2e}, σ†σ restricted to the domain projector",
        polar.sigma.mul(&polar.rho.matrix).dist(&gamma)
    );

    // κ(α,θ) = −θ·Exp(α) is invertible on injective maps.
    let alpha3 = random_hermitian(3, 8);
    let theta = haar_isometry(5, 3, 9);
    let injective = calculus::kappa(&alpha3, &theta).unwrap();
    let (alpha_back, theta_back) = calculus::kappa_inv(&injective).unwrap();
    println!(
        "κ round trip: ‖α−α'‖ = {:.2e}, ‖θ−θ'‖ = {:.2e}",
        alpha_back.dist(&alpha3),
        theta_back.matrix.dist(&theta.matrix)
    );

    // P_k and λ_k: the largest top-eigenspace sum of dimension ≤ k and
    // the PSD operator supported on it.
    let spread = isotower::HermitianOperator::diag(&[0.0, 1.0, 1.0, 3.0]);
    for k in 0..=4 {
        let p = calculus::p_k(&spread, k).unwrap();
        println!("dim P_{k}(diag(0,1,1,3)) = {}", p.trace_rank());
    }
    let l = calculus::lambda_k(&spread, 1).unwrap();
    println!("λ₁(diag(0,1,1,3)) = diag(0,0,0,2): ‖defect‖ = {:.2e}",
        l.matrix.dist(&isotower::ComplexMatrix::diag(&[0.0, 0.0, 0.0, 2.0])));
}
