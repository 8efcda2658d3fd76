//! Exact representation-ring K-theory: f_V polynomials, residues, the
//! vanishing theorem and its Klein-four counterexample, restriction
//! kernels and the Koszul complex carried by the tower.

use isotower::ktheory::*;

fn main() {
    // f_V over Z/3: sum-over-exterior-powers equals the product form.
    let z3 = GroupSpec::new(vec![3]).unwrap();
    let v = Representation::new(&z3, vec![1, 2]).unwrap(); // ω ⊕ ω²
    println!("f_{{ω⊕ω²}}(T) = {}", f_v(&v));
    println!("product form:  {}", f_v_product_form(&v));

    // Residues over Z/2: non-subrep detected by T⁰.
    let z2 = GroupSpec::new(vec![2]).unwrap();
    let one = Representation::new(&z2, vec![0]).unwrap();
    let sigma = Representation::new(&z2, vec![1]).unwrap();
    let r = residue(&RepPoly::constant(RepElement::one(&z2)), &one, &sigma).unwrap();
    println!("residue(1; V0=1, V1=σ) = {r}");

    // Subrepresentation: every residue vanishes and the Koszul complex is
    // zero; the tower report records the verdict.
    let v0 = Representation::new(&z3, vec![1]).unwrap();
    let v1 = Representation::new(&z3, vec![0, 1]).unwrap();
    let (_, report) = tower_koszul(&v0, &v1).unwrap();
    println!(
        "Z/3, V0=ω ≤ V1=1⊕ω: all x_j zero {}, subrep {}, d²=0 {}",
        report.all_zero, report.subrep, report.d_squared_zero
    );

    // The Klein-four counterexample: all residues vanish although V0 is
    // not a summand — (1−a)(1−b)(1−ab) = 0 exactly in the group ring.
    let klein = GroupSpec::new(vec![2, 2]).unwrap();
    let a = RepElement::character(&klein, 1);
    let b = RepElement::character(&klein, 2);
    let ab = RepElement::character(&klein, 3);
    let onek = RepElement::one(&klein);
    let product = onek.sub(&a).mul(&onek.sub(&b)).mul(&onek.sub(&ab));
    println!("(1−a)(1−b)(1−ab) over Z/2×Z/2 = {product}");
    let v0 = Representation::new(&klein, vec![0]).unwrap();
    let v1 = Representation::new(&klein, vec![1, 2, 3]).unwrap();
    let (_, report) = tower_koszul(&v0, &v1).unwrap();
    println!(
        "Z/2×Z/2, V0=1, V1=a⊕b⊕ab: all x_j zero {}, subrep {} — the converse of the vanishing theorem fails here",
        report.all_zero, report.subrep
    );

    // Restriction kernel as an integer lattice: free of rank one over
    // K⁰(PV₀), generated by f_{V₁}·T^j.
    let trivial = GroupSpec::trivial();
    let c1 = Representation::new(&trivial, vec![0]).unwrap();
    let c2 = Representation::new(&trivial, vec![0, 0]).unwrap();
    let kernel = restriction_kernel_check(&c1, &c2).unwrap();
    println!(
        "trivial G, V0=C, V1=C²: kernel lattice rank {} matches f_{{V1}}·T^j: {}",
        kernel.kernel_rank, kernel.matches_free_rank_one
    );

    // A Koszul complex on an explicit sequence, d² = 0 exactly.
    let xs = vec![
        RepElement::character(&klein, 1).sub(&RepElement::one(&klein)),
        RepElement::character(&klein, 2).sub(&RepElement::one(&klein)),
    ];
    let complex = koszul_build(xs).unwrap();
    println!(
        "Koszul complex on (a−1, b−1): rank {}, d²=0 {}",
        complex.rank,
        koszul_d_squared_is_zero(&complex)
    );
}
