//! Winding-number degrees of the facial maps that classify the
//! comparison maps up to facial homotopy.

use isotower::facial::{builtin, degree_on_diagonal, degree_on_plane, DiagonalMap};

fn main() {
    // Controls.
    println!("degree(identity)   = {:?}", degree_on_diagonal(&builtin::identity()));
    println!("degree(reflection) = {:?}", degree_on_diagonal(&builtin::reflection()));

    // The facial map g with 𝔅_g = χ and the NDR collapse map e both have
    // degree 1 on the diagonal circle — this is what makes e ≃ χ and
    // closes the top cofibre triangle.
    println!("degree(chi-g)      = {:?}", degree_on_diagonal(&builtin::chi_g()));
    println!("degree(ndr-e)      = {:?}", degree_on_diagonal(&builtin::ndr_e()));

    // The two smash-product maps of the lifting argument carry their
    // degree on an S²; computed as a local planar winding.
    let (name, f) = builtin::lift_g_plane();
    println!("degree(lift-g)     = {:?}", degree_on_plane(name, f, (0.3, -0.2), 0.4));
    let (name, f) = builtin::lift_fbar_plane();
    println!("degree(lift-fbar)  = {:?}", degree_on_plane(name, f, (0.1, 0.2), 0.3));

    // Degree is invariant under orientation-preserving reparameterization
    // of the circle (the log/exp identifications).
    let g = builtin::chi_g();
    let reparam = DiagonalMap::new("chi-g-reparam", move |t| g.eval(t * t * t + t));
    println!("degree(chi-g ∘ monotone reparam) = {:?}", degree_on_diagonal(&reparam));

    // A double cover winds twice.
    let double = DiagonalMap::new("double-angle", |t| {
        // angle doubling through the tangent identification
        let phi = 2.0 * t.atan();
        let doubled = 2.0 * phi;
        let wrapped = (doubled + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI)
            - std::f64::consts::PI;
        if (wrapped.abs() - std::f64::consts::PI).abs() < 1e-12 {
            isotower::facial::CompactReal::Infinity
        } else {
            isotower::facial::CompactReal::Finite((wrapped / 2.0).tan())
        }
    });
    println!("degree(angle doubling) = {:?}", degree_on_diagonal(&double));
}
