//! The explicit null-homotopy families: each composite along the tower is
//! deformed to infinity, reproducing the composite exactly at t = 0 and
//! escaping every compact set as t grows.

use isotower::calculus;
use isotower::harness::{
    haar_isometry, random_hermitian, random_thom_point, random_tower_point,
    tower_point_with_gap, TestRng,
};
use isotower::miller;
use isotower::tower::{self, HomotopyFamily, HomotopyImage, HomotopyPoint};

fn norm_at(family: HomotopyFamily, t: f64, p: &HomotopyPoint) -> f64 {
    tower::null_homotopy(family, t, p).unwrap().monitored_norm()
}

fn main() {
    let mut rng = TestRng::new(31);
    let alpha = random_hermitian(3, 1);
    let theta = haar_isometry(4, 3, 2);
    let gamma = calculus::kappa(&alpha, &theta).unwrap();

    // top-1 deforms π_{d₀}∘φ_{d₀} through log(ρ(γ)+t).
    let composite = tower::pi_top(&alpha, &theta).unwrap();
    let p = HomotopyPoint::Injective(gamma);
    if let HomotopyImage::Tower(x) = tower::null_homotopy(HomotopyFamily::Top1, 0.0, &p).unwrap() {
        println!("top-1 endpoint deviation: {:.2e}", x.dist(&composite));
    }
    println!(
        "top-1 norm along the ray: t=0 → {:.3}, t=1e3 → {:.3}",
        norm_at(HomotopyFamily::Top1, 0.0, &p),
        norm_at(HomotopyFamily::Top1, 1e3, &p)
    );

    // top-2 deforms τ∘π_{d₀} through −θ∘(α−e₀(α)+t).
    let p = HomotopyPoint::Pair(alpha.clone(), theta.clone());
    println!(
        "top-2 norm growth: {:.3} → {:.3}",
        norm_at(HomotopyFamily::Top2, 0.0, &p),
        norm_at(HomotopyFamily::Top2, 1e3, &p)
    );

    // mid-1 deforms π_k∘φ_k on Thom points.
    let z = random_thom_point(&mut rng, 4, 5, 2, true);
    let p = HomotopyPoint::Thom(z);
    println!(
        "mid-1 norm growth: {:.3} → {:.3}",
        norm_at(HomotopyFamily::Mid1, 0.0, &p),
        norm_at(HomotopyFamily::Mid1, 1e3, &p)
    );

    // mid-2 deforms δ_k∘π_k on level-k points off Y_k.
    let x = random_tower_point(&mut rng, 4, 5, 2);
    let p = HomotopyPoint::Tower(x);
    println!(
        "mid-2 norm growth: {:.3} → {:.3}",
        norm_at(HomotopyFamily::Mid2, 0.0, &p),
        norm_at(HomotopyFamily::Mid2, 1e3, &p)
    );

    // mid-3 deforms Σφ_k∘δ_k; on the gap-pinned 2-dimensional stratum
    // both output eigenvalues are −log(gap + t).
    let x = tower_point_with_gap(&mut rng, 2, 3, 1, 0.9);
    let down = tower::pi_k(&x).unwrap();
    let p = HomotopyPoint::TowerAt(down, 1);
    println!(
        "mid-3 norm growth at gap 0.9: {:.3} → {:.3}",
        norm_at(HomotopyFamily::Mid3, 0.0, &p),
        norm_at(HomotopyFamily::Mid3, 1e3, &p)
    );

    // The splitting-comparison homotopy g₀ ≃ g₁ of the subrepresentation
    // story: t = 1 reproduces the φ̃_k selfadjoint part.
    let z = random_thom_point(&mut rng, 4, 6, 2, true);
    let at_one = miller::g0_g1_homotopy(1.0, &z).unwrap();
    let expected = tower::phi_k_map(&z).unwrap().alpha;
    println!("g₀/g₁ homotopy at t=1 vs φ̃_k: {:.2e}", at_one.dist(&expected));
}
