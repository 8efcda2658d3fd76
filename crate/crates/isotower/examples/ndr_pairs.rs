//! The explicit NDR pairs: the half disc retracting to its semicircle,
//! the conformal transport to (D₊(2), D₀(2)), the Hom-space pair built
//! through the functional calculus, and the cofibre comparison map.

use isotower::facial::AscTuple;
use isotower::ndr::{
    check_ndr_axioms, cofibre_r, halfdisc_u, ndr_d2, ndr_halfdisc, ndr_hom, phi_conformal,
    phi_inverse,
};
use num_complex::Complex64 as C64;

fn main() {
    // φ carries (D₊(2), D₀(2)) onto (half disc, semicircle).
    println!("φ(0,0) = {}", phi_conformal(&AscTuple::Finite(vec![0.0, 0.0])));
    println!("φ(0,1) = {}", phi_conformal(&AscTuple::Finite(vec![0.0, 1.0])));
    println!("φ(t,t) is real: φ(0.8,0.8) = {}", phi_conformal(&AscTuple::Finite(vec![0.8, 0.8])));
    println!("φ⁻¹(i) = {:?}", phi_inverse(C64::new(0.0, 1.0)));
    println!("φ⁻¹(−1) = {:?} (the basepoint)", phi_inverse(C64::new(-1.0, 0.0)));

    // u″ on the half disc.
    println!("u″ at radius 0.75: {}", halfdisc_u(C64::from_polar(0.75, 1.0)).unwrap());

    // Axioms 3–6 on sampled points for all three pairs.
    for report in [
        check_ndr_axioms(&ndr_halfdisc(), 500, 1),
        check_ndr_axioms(&ndr_d2(), 500, 2),
        check_ndr_axioms(&ndr_hom(3, 4).unwrap(), 200, 3),
    ] {
        println!(
            "pair {:<10} axioms 3-6 over {} trials: {} violations",
            report.pair,
            report.trials,
            report.violations.len()
        );
    }

    // A corrupted u is caught by condition 6 with a witness.
    let mut broken = ndr_halfdisc();
    broken.u = Box::new(|z| (isotower::ndr::halfdisc_u(*z).unwrap() + 0.1).min(1.0));
    let report = check_ndr_axioms(&broken, 200, 4);
    println!(
        "fault-injected pair: {} violations, e.g. {:?}",
        report.violations.len(),
        report.violations.first().map(|v| v.condition)
    );

    // The cofibre comparison map r(x) = (u(x), h₀(x)).
    let pair = ndr_halfdisc();
    let z = C64::from_polar(0.8, 1.1);
    let (u, h0) = cofibre_r(&pair, &z);
    println!("r({z:.3}) = ({u:.3}, {h0:.3}): u = 2−2r and the retraction to the semicircle");
}
