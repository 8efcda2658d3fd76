//! The Miller filtration: rank levels, the Γ_k difference coordinates,
//! the Cayley transform, and the dense-chart inverse of the restriction
//! map res_k.

use isotower::harness::{haar_isometry, random_hermitian};
use isotower::linalg::{ComplexMatrix, HermitianOperator, IsometryFrame};
use isotower::miller::{
    cayley, cayley_inv, filtration_level, gamma_diffeo, res_k_inverse_on_b, res_k_map,
    top_splitting_derivative_check, FiltrationPoint,
};
use isotower::Projector;

fn main() {
    // Filtration level is the rank of φ − I.
    let id = FiltrationPoint::new(IsometryFrame::identity(3));
    let neg = FiltrationPoint::new(IsometryFrame::new(ComplexMatrix::identity(3).neg()).unwrap());
    println!("level(I) = {}, level(−I) = {}", filtration_level(&id), filtration_level(&neg));

    // Γ_k coordinates: subtract the inclusion block on W⊥.
    let w = Projector::new(ComplexMatrix::diag(&[1.0, 0.0, 0.0])).unwrap();
    let section = IsometryFrame::new(ComplexMatrix::diag(&[-1.0, 1.0, 1.0])).unwrap();
    let diff = gamma_diffeo(&w, &section).unwrap();
    println!("Γ_k difference of the section point: first diagonal entry {}", diff[(0, 0)]);

    // Cayley transform: selfadjoints to unitaries, with round trip.
    let delta = random_hermitian(3, 5);
    let u = cayley(&delta).unwrap();
    let unitary_defect = u.adjoint().mul(&u).dist(&ComplexMatrix::identity(3));
    let back = cayley_inv(&u).unwrap();
    println!(
        "cayley: unitarity defect {:.2e}, round-trip defect {:.2e}",
        unitary_defect,
        back.dist(&delta)
    );
    println!("cayley(0) = −1: entry {}", cayley(&HermitianOperator::zero(1)).unwrap()[(0, 0)]);

    // res_k and its inverse on the dense chart B.
    let d0 = 3;
    let d1 = 5;
    let k = 2;
    let alpha = random_hermitian(d0, 6);
    let phi = FiltrationPoint::new(haar_isometry(d1, d0, 7));
    println!("level of a random isometry: {}", filtration_level(&phi));
    let x = res_k_map(&alpha, &phi, k).unwrap();
    match res_k_inverse_on_b(&x, k) {
        Ok(assembled) => {
            let gram = assembled.phi.matrix.adjoint().mul(&assembled.phi.matrix);
            println!(
                "chart-B inverse: Θ†Θ = I to {:.2e}, rank(Θ−I) = {}, res round trip {:.2e}",
                gram.dist(&ComplexMatrix::identity(d0)),
                filtration_level(&assembled),
                res_k_map(&alpha, &assembled, k).unwrap().dist(&x)
            );
        }
        Err(e) => println!("sample fell outside chart B: {e}"),
    }

    // The top splitting map has the identity as derivative at the origin.
    let report = top_splitting_derivative_check(2, 1e-4).unwrap();
    println!(
        "derivative of (δ,α) ↦ −Cayley(δ)·Exp(α) at 0: max deviation {:.2e} (tolerance {:.0e})",
        report.max_deviation, report.tolerance
    );
}
