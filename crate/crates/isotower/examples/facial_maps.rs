//! The eigenvalue model D(d), facial maps and the extended functional
//! calculus operators 𝔄_f and 𝔅_f, plus the hat construction.

use isotower::facial::{
    check_facial, eta, frak_a, frak_b, hat, mu, nu, AscTuple, FacialMapSpec, Variant,
};
use isotower::harness::{haar_isometry, random_matrix_with, TestRng};

fn main() {
    // Facialness is a sampled property: the identity passes, a coordinate
    // swap is caught with a witness.
    let id = FacialMapSpec::identity(3, Variant::Plain);
    println!("identity on D(3) facial: {}", check_facial(&id, 400, 1).passed());
    let swap = FacialMapSpec::coordinate_swap(3);
    let bad = check_facial(&swap, 400, 2);
    println!(
        "coordinate swap facial: {} (first witness: {:?})",
        bad.passed(),
        bad.violations.first().map(|v| &v.reason)
    );

    // η reads the spectrum, ν rebuilds an operator with prescribed one.
    let u = haar_isometry(4, 4, 3);
    let t = AscTuple::Finite(vec![-1.0, 0.25, 0.5, 2.0]);
    let alpha = nu(&u, &t).unwrap();
    println!("η(ν(U,t)) = {:?}", eta(&alpha).values().unwrap());

    // 𝔄_f acts through the spectrum: the commuting square against ν.
    let f = FacialMapSpec::square_positive(4);
    let t_pos = AscTuple::Finite(vec![0.25, 0.5, 1.0, 2.0]);
    let psd = nu(&u, &t_pos).unwrap();
    let (fa, _) = frak_a(&f, &psd).unwrap();
    let rhs = nu(&u, &f.apply(&t_pos).tuple).unwrap();
    println!("𝔄 square defect: {:.2e}", fa.dist(&rhs));

    // 𝔅_f acts through singular values; the square against μ.
    let mut rng = TestRng::new(5);
    let theta = haar_isometry(6, 4, 8);
    let m = mu(&theta, &psd).unwrap();
    let (lhs, _) = frak_b(&f, &m).unwrap();
    let rhs = mu(&theta, &fa).unwrap();
    println!("𝔅 square defect: {:.2e}", lhs.dist(&rhs));

    // The hat construction lifts a D₊(2) map to D₊(d+1) by interpolation.
    let sq2 = FacialMapSpec::square_positive(2);
    let lifted = hat(&sq2, 2).unwrap();
    let image = lifted.apply(&AscTuple::Finite(vec![1.0, 2.0, 3.0]));
    println!("hat(square)(1,2,3) = {:?} (expected (1,5,9))", image.tuple.values().unwrap());
    println!("hat output facial: {}", check_facial(&lifted, 400, 4).passed());

    let gamma = random_matrix_with(&mut rng, 6, 4);
    let (doubled, _) = frak_b(&FacialMapSpec::doubling(4), &gamma).unwrap();
    println!("𝔅(doubling) scales: ‖out − 2γ‖ = {:.2e}", doubled.dist(&gamma.scale_re(2.0)));
}
