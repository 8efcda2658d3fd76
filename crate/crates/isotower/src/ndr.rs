//! Explicit NDR pairs: the half-disc retraction, the conformal map φ, the
//! induced pair on D₊(2), the Hom-space pair assembled through the
//! functional calculus, an axiom checker and the cofibre comparison map.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::facial::{hat, AscTuple, FacialImage, FacialMapSpec, Variant};
use crate::linalg::{gap_threshold, ComplexMatrix};

/// Margin used when testing the strict inequality u(x) < 1; points closer
/// than this to the boundary are not meaningful counterexamples.
pub const STRICT_MARGIN: f64 = 1e-6;

/// u″ on the upper half disc: min(1, 2−2r).
pub fn halfdisc_u(z: C64) -> Result<f64> {
    check_halfdisc(z)?;
    Ok((2.0 - 2.0 * z.norm()).min(1.0))
}

/// h″_t on the upper half disc: radius ↦ min(1, (2−t)r), angle fixed.
pub fn halfdisc_h(t: f64, z: C64) -> Result<C64> {
    check_halfdisc(z)?;
    let r = z.norm();
    if r == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let new_r = ((2.0 - t) * r).min(1.0);
    Ok(z / C64::new(r, 0.0) * C64::new(new_r, 0.0))
}

fn check_halfdisc(z: C64) -> Result<()> {
    if z.norm() > 1.0 + 1e-12 || z.im < -1e-12 {
        Err(Error::InvalidInput(format!("point {z} outside the upper half disc")))
    } else {
        Ok(())
    }
}

/// The conformal identification φ: (D₊(2), D₀(2)) → (half disc, semicircle),
/// φ(t₀,t₁) = (i − (t₁+it₀)²)/(i + (t₁+it₀)²); INF ↦ −1.
pub fn phi_conformal(t: &AscTuple) -> C64 {
    let v = match t.values() {
        Some(v) => v,
        None => return C64::new(-1.0, 0.0),
    };
    assert_eq!(v.len(), 2, "phi_conformal acts on D₊(2)");
    let w = C64::new(v[1], v[0]);
    let w2 = w * w;
    let i = C64::new(0.0, 1.0);
    (i - w2) / (i + w2)
}

/// Inverse of φ: principal square root with nonnegative real part, then
/// coordinates sorted ascending; z = −1 returns the basepoint.
pub fn phi_inverse(z: C64) -> AscTuple {
    if (z + C64::new(1.0, 0.0)).norm() < 1e-14 {
        return AscTuple::Inf;
    }
    let i = C64::new(0.0, 1.0);
    let w2 = i * (C64::new(1.0, 0.0) - z) / (C64::new(1.0, 0.0) + z);
    let mut w = w2.sqrt();
    if w.re < 0.0 {
        w = -w;
    }
    let mut pair = [w.im.max(0.0), w.re.max(0.0)];
    if pair[0] > pair[1] {
        pair.swap(0, 1);
    }
    AscTuple::Finite(pair.to_vec())
}

/// u′ on D₊(2): u″∘φ.
pub fn u_prime(t0: f64, t1: f64) -> f64 {
    let z = phi_conformal(&AscTuple::Finite(vec![t0, t1]));
    (2.0 - 2.0 * z.norm()).min(1.0).max(0.0)
}

/// h′_t on D₊(2): φ⁻¹∘h″_t∘φ.
pub fn h_prime(t: f64, point: &AscTuple) -> AscTuple {
    match point.values() {
        Some(_) => {
            let z = phi_conformal(point);
            let moved = halfdisc_h(t, z).expect("φ lands in the half disc");
            phi_inverse(moved)
        }
        None => AscTuple::Inf,
    }
}

/// h′_t wrapped as a facial self-map of D₊(2).
pub fn h_prime_facial(t: f64) -> FacialMapSpec {
    FacialMapSpec::new(format!("h'_{t:.3}"), 2, 2, Variant::Positive, move |p| {
        FacialImage::tuple(h_prime(t, p))
    })
}

/// One failed axiom instance.
#[derive(Debug, Clone, Serialize)]
pub struct NdrViolation {
    pub condition: u8,
    pub witness: String,
}

/// Result of sampling the NDR axioms.
#[derive(Debug, Clone, Serialize)]
pub struct NdrReport {
    pub pair: String,
    pub trials: usize,
    pub violations: Vec<NdrViolation>,
}

impl NdrReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An NDR pair with its sampling data, generic over the point type.
pub struct NdrPair<P> {
    pub name: String,
    pub u: Box<dyn Fn(&P) -> f64 + Send + Sync>,
    pub h: Box<dyn Fn(f64, &P) -> P + Send + Sync>,
    pub membership: Box<dyn Fn(&P) -> bool + Send + Sync>,
    pub dist: Box<dyn Fn(&P, &P) -> f64 + Send + Sync>,
    /// General points of X (mixed interior/boundary strata).
    pub sampler: Box<dyn Fn(&mut crate::harness::TestRng) -> P + Send + Sync>,
    /// Points of the subspace A.
    pub member_sampler: Box<dyn Fn(&mut crate::harness::TestRng) -> P + Send + Sync>,
    pub describe: Box<dyn Fn(&P) -> String + Send + Sync>,
}

/// Check NDR axioms 3–6 on sampled points.
pub fn check_ndr_axioms<P>(pair: &NdrPair<P>, trials: usize, seed: u64) -> NdrReport {
    let mut rng = crate::harness::TestRng::new(seed);
    let mut violations = Vec::new();
    let tol = 1e-8;

    for i in 0..trials {
        let x = (pair.sampler)(&mut rng);
        // 3: h₁ = id.
        let moved = (pair.h)(1.0, &x);
        let d = (pair.dist)(&moved, &x);
        if d > tol {
            violations.push(NdrViolation {
                condition: 3,
                witness: format!("h₁ moved {} by {d:.3e}", (pair.describe)(&x)),
            });
        }
        // 5: u(x) < 1 ⟹ h₀(x) ∈ A, tested away from the boundary.
        let u = (pair.u)(&x);
        if u < 1.0 - STRICT_MARGIN {
            let retracted = (pair.h)(0.0, &x);
            if !(pair.membership)(&retracted) {
                violations.push(NdrViolation {
                    condition: 5,
                    witness: format!(
                        "u = {u:.6} < 1 but h₀({}) = {} is not in A",
                        (pair.describe)(&x),
                        (pair.describe)(&retracted)
                    ),
                });
            }
        }
        // 6, outward: u(x) ≈ 0 ⟹ x ∈ A.
        if u < 1e-9 && !(pair.membership)(&x) {
            violations.push(NdrViolation {
                condition: 6,
                witness: format!("u = {u:.3e} but {} not in A", (pair.describe)(&x)),
            });
        }

        // A-point checks: 4 (h_t fixes A) and 6 (u vanishes on A).
        let a = (pair.member_sampler)(&mut rng);
        let t = (i as f64) / (trials.max(1) as f64);
        let moved = (pair.h)(t, &a);
        let d = (pair.dist)(&moved, &a);
        if d > tol {
            violations.push(NdrViolation {
                condition: 4,
                witness: format!("h_{t:.2} moved A-point {} by {d:.3e}", (pair.describe)(&a)),
            });
        }
        let ua = (pair.u)(&a);
        if ua > tol {
            violations.push(NdrViolation {
                condition: 6,
                witness: format!("u({}) = {ua:.3e} ≠ 0 on A", (pair.describe)(&a)),
            });
        }
    }
    NdrReport { pair: pair.name.clone(), trials, violations }
}

/// The cofibre comparison map r: x ↦ (u(x), h₀(x)).
pub fn cofibre_r<P>(pair: &NdrPair<P>, x: &P) -> (f64, P) {
    ((pair.u)(x), (pair.h)(0.0, x))
}

/// The half-disc pair (X, Y): upper half disc retracting to the semicircle.
pub fn ndr_halfdisc() -> NdrPair<C64> {
    NdrPair {
        name: "halfdisc".into(),
        u: Box::new(|z| halfdisc_u(*z).expect("sampled in domain")),
        h: Box::new(|t, z| halfdisc_h(t, *z).expect("sampled in domain")),
        membership: Box::new(|z| (z.norm() - 1.0).abs() < 1e-9),
        dist: Box::new(|a, b| (a - b).norm()),
        sampler: Box::new(|rng| {
            // interior, near-boundary and exact-boundary strata
            let stratum = rng.below(4);
            let r = match stratum {
                0 => rng.uniform(0.0, 1.0),
                1 => rng.uniform(0.45, 0.55),
                2 => 1.0,
                _ => rng.uniform(0.9, 1.0),
            };
            let theta = rng.uniform(0.0, std::f64::consts::PI);
            C64::from_polar(r, theta)
        }),
        member_sampler: Box::new(|rng| {
            C64::from_polar(1.0, rng.uniform(0.0, std::f64::consts::PI))
        }),
        describe: Box::new(|z| format!("{z:.4}")),
    }
}

/// The (D₊(2), D₀(2)) pair induced through φ.
pub fn ndr_d2() -> NdrPair<AscTuple> {
    NdrPair {
        name: "d2".into(),
        u: Box::new(|t| match t.values() {
            Some(v) => u_prime(v[0], v[1]),
            None => 1.0,
        }),
        h: Box::new(|t, p| h_prime(t, p)),
        membership: Box::new(|t| match t.values() {
            Some(v) => v[0].abs() < 1e-8 * v[1].abs().max(1.0),
            None => true,
        }),
        dist: Box::new(|a, b| match (a.values(), b.values()) {
            (Some(x), Some(y)) => {
                ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt()
                    / (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            }
            (None, None) => 0.0,
            _ => f64::INFINITY,
        }),
        sampler: Box::new(|rng| {
            let stratum = rng.below(4);
            let mut pair = match stratum {
                0 => [rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)],
                1 => [0.0, rng.uniform(0.0, 2.0)],
                2 => {
                    let t = rng.uniform(0.0, 2.0);
                    [t, t]
                }
                _ => [rng.uniform(0.0, 8.0), rng.uniform(0.0, 8.0)],
            };
            if pair[0] > pair[1] {
                pair.swap(0, 1);
            }
            AscTuple::Finite(pair.to_vec())
        }),
        member_sampler: Box::new(|rng| AscTuple::Finite(vec![0.0, rng.uniform(0.0, 3.0)])),
        describe: Box::new(|t| format!("{t:?}")),
    }
}

/// A point of the compactified Hom space S^{Hom}: a matrix or the
/// basepoint at infinity.
pub type HomPoint = Option<ComplexMatrix>;

/// The Hom-space pair: the compactification of d1×d0 matrices retracting
/// to the non-injective locus, with u from the extreme singular values and
/// h_t = 𝔅 of the hatted h′_t. The basepoint belongs to the subspace and
/// is absorbing under the retraction.
pub fn ndr_hom(d0: usize, d1: usize) -> Result<NdrPair<HomPoint>> {
    if d0 < 1 || d1 < d0 {
        return Err(Error::InvalidInput("ndr_hom needs d1 ≥ d0 ≥ 1".into()));
    }
    let u = move |gamma: &HomPoint| -> f64 {
        match gamma {
            None => 0.0,
            Some(g) => {
                let sv = crate::linalg::singular_values(g);
                u_prime(sv[0], sv[sv.len() - 1])
            }
        }
    };
    let h = move |t: f64, gamma: &HomPoint| -> HomPoint {
        let g = gamma.as_ref()?;
        let sv = crate::linalg::singular_values(g);
        if d0 == 1 {
            // hat is vacuous at a single coordinate: h′_t drives the lone
            // singular value along the diagonal of D₊(2).
            let s = sv[0];
            return match h_prime(t, &AscTuple::Finite(vec![s, s])) {
                AscTuple::Inf => None,
                AscTuple::Finite(v) => {
                    if s > 1e-300 {
                        Some(g.scale_re(v[0] / s))
                    } else {
                        Some(g.clone())
                    }
                }
            };
        }
        let lifted = hat(&h_prime_facial(t), d0 - 1).expect("hat of h'_t");
        // The lifted map collapses to the basepoint exactly when h′_t does
        // on the extreme singular values.
        if lifted.apply(&AscTuple::Finite(sv)).tuple == AscTuple::Inf {
            return None;
        }
        let (out, _) = crate::facial::frak_b(&lifted, g).expect("frak_b of hatted h'_t");
        Some(out)
    };
    Ok(NdrPair {
        name: format!("hom({d0},{d1})"),
        u: Box::new(u),
        h: Box::new(h),
        membership: Box::new(move |gamma| match gamma {
            None => true,
            Some(g) => {
                let sv = crate::linalg::singular_values(g);
                sv[0] <= gap_threshold(sv[sv.len() - 1])
            }
        }),
        dist: Box::new(|a, b| match (a, b) {
            (None, None) => 0.0,
            (Some(x), Some(y)) => x.dist(y) / (1.0 + x.operator_norm().max(y.operator_norm())),
            _ => f64::INFINITY,
        }),
        sampler: Box::new(move |rng| {
            let stratum = rng.below(3);
            let mut m = crate::harness::random_matrix_with(rng, d1, d0);
            if stratum == 1 {
                // force non-injectivity: kill the first column
                let killer = ComplexMatrix::from_fn(d0, d0, |i, j| {
                    if i == j && i != 0 {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                m = m.mul(&killer);
            } else if stratum == 2 {
                m = m.scale_re(rng.uniform(0.01, 3.0));
            }
            Some(m)
        }),
        member_sampler: Box::new(move |rng| {
            let m = crate::harness::random_matrix_with(rng, d1, d0);
            let killer = ComplexMatrix::from_fn(d0, d0, |i, j| {
                if i == j && i != 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            Some(m.mul(&killer))
        }),
        describe: Box::new(|m| match m {
            None => "∞".into(),
            Some(m) => format!(
                "matrix {}x{} with σ = {:?}",
                m.rows,
                m.cols,
                crate::linalg::singular_values(m)
            ),
        }),
    })
}
