//! The tower at the level of points: (α,β) coordinates, the projections
//! π_k, the homeomorphisms q_k/r_k and f_k/g_k off the degenerate locus,
//! τ at the top, and the comparison map χ.

use isotower::calculus;
use isotower::harness::{
    haar_isometry, random_hermitian, random_thom_point, random_tower_point, TestRng,
};
use isotower::tower;

fn main() {
    let mut rng = TestRng::new(11);
    let d0 = 4;
    let d1 = 6;

    // A level-2 point and its Thom-space coordinates.
    let x = random_tower_point(&mut rng, d0, d1, 2);
    println!("level-{} point: invariant ρ(β) = λ_k(α) holds to {:.2e}", x.k, x.invariant_defect());
    let z = tower::q_k(&x).unwrap();
    println!(
        "q_k lands on (W, γ, ψ) with dim W = {}, support defect {:.2e}",
        z.w.trace_rank(),
        z.invariant_defect()
    );
    let back = tower::r_k(&z).unwrap();
    println!("r_k∘q_k deviation: {:.2e}", back.dist(&x));

    // f_k/g_k: the suspension coordinates one level down.
    let x1 = random_tower_point(&mut rng, d0, d1, 1);
    if !tower::in_y_k(&x1.alpha, 2).unwrap() {
        let (t, zf) = tower::f_k(&x1, 2).unwrap();
        let back = tower::g_k(t, &zf).unwrap();
        println!("f_2 suspension coordinate e_{{d0-k}}(α) = {t:.4}; g_2∘f_2 deviation {:.2e}", back.dist(&x1));
    }

    // Y_k: the degenerate locus where dim P_k(α) < k.
    let scalar = isotower::HermitianOperator::diag(&[0.5, 0.5, 0.5]);
    println!("c·I lies in Y_1: {}", tower::in_y_k(&scalar, 1).unwrap());

    // π composition down the whole tower is the projection (β ends at 0).
    let alpha = random_hermitian(d0, 3);
    let theta = haar_isometry(d1, d0, 4);
    let mut y = tower::pi_top(&alpha, &theta).unwrap();
    while y.k > 0 {
        y = tower::pi_k(&y).unwrap();
    }
    println!("after π_{{d0}}∘…∘π_1: ‖β‖ = {:.2e}", y.beta.operator_norm());

    // The χ square: τ∘π_{d0} = χ∘κ strictly.
    let gamma = calculus::kappa(&alpha, &theta).unwrap();
    let (t_chi, m_chi) = tower::chi(&gamma).unwrap();
    let (t_tau, m_tau) = tower::tau(&tower::pi_top(&alpha, &theta).unwrap()).unwrap();
    println!(
        "χ square: |e₀ difference| = {:.2e}, matrix difference {:.2e}",
        (t_chi - t_tau).abs(),
        m_chi.dist(&m_tau)
    );

    // φ̃_k agrees with the functional-calculus lift ℭ_f.
    let z = random_thom_point(&mut rng, d0, d1, 2, true);
    let lift = tower::phi_k_map(&z).unwrap();
    let g = tower::SmashFacialMap::third_facial_homeomorphism(d0 - 2, 2);
    let via_c = tower::frak_c(&g, &z).unwrap();
    println!("φ̃_k vs ℭ_f: {:.2e}", lift.dist(&via_c));

    // δ̃_k collapses Y_k and otherwise records the f_k data with a twist.
    match tower::delta_k_map(&tower::pi_k(&lift).unwrap(), 2).unwrap() {
        tower::DeltaImage::Basepoint => println!("δ̃_2 hit the basepoint"),
        tower::DeltaImage::Point { suspension, twisted, .. } => {
            println!("δ̃_2 suspension coordinate {suspension:.4}, −Σ twist flag {twisted}")
        }
    }
}
