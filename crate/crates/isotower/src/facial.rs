//! The eigenvalue-model spaces D(d) and D₊(d), facial maps between them,
//! the quotient maps η/ν/μ, the extended operators 𝔄_f and 𝔅_f, the
//! hat-construction lifting D₊(2) maps to D₊(d+1), and degree computation
//! by winding numbers on the diagonal circle.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{gap_threshold, hermitian_eig, ComplexMatrix, HermitianOperator, IsometryFrame};

/// A point of the eigenvalue model: an ascending tuple, or the basepoint.
#[derive(Debug, Clone, PartialEq)]
pub enum AscTuple {
    Finite(Vec<f64>),
    Inf,
}

impl AscTuple {
    pub fn finite(values: Vec<f64>) -> Result<Self> {
        for w in values.windows(2) {
            if w[0] > w[1] + 1e-12 * w[0].abs().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "tuple is not nondecreasing: {values:?}"
                )));
            }
        }
        Ok(AscTuple::Finite(values))
    }

    pub fn values(&self) -> Option<&[f64]> {
        match self {
            AscTuple::Finite(v) => Some(v),
            AscTuple::Inf => None,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            AscTuple::Finite(v) => v.first().map_or(true, |&t| t >= -1e-12),
            AscTuple::Inf => true,
        }
    }
}

/// Variant tag describing which model a facial map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Self-map of D(d).
    Plain,
    /// Self-map of D₊(d), required to preserve the zero face D₀(d).
    Positive,
    /// Map out of D₊(d)/D₀(d) (basepoint when t₀ = 0).
    PositiveModZero,
    /// Map into a suspension: carries an extra real factor.
    SuspensionTarget,
}

/// Image of a facial evaluation: a tuple plus an optional suspension factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FacialImage {
    pub tuple: AscTuple,
    pub suspension: Option<f64>,
}

impl FacialImage {
    pub fn tuple(t: AscTuple) -> Self {
        Self { tuple: t, suspension: None }
    }
}

type Evaluator = Arc<dyn Fn(&AscTuple) -> FacialImage + Send + Sync>;

/// A facial map given by an evaluator plus a variant tag; facialness is a
/// sampled property checked by [`check_facial`], not a construction-time
/// guarantee.
#[derive(Clone)]
pub struct FacialMapSpec {
    pub name: String,
    pub d_in: usize,
    pub d_out: usize,
    pub variant: Variant,
    eval: Evaluator,
}

impl FacialMapSpec {
    pub fn new(
        name: impl Into<String>,
        d_in: usize,
        d_out: usize,
        variant: Variant,
        eval: impl Fn(&AscTuple) -> FacialImage + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), d_in, d_out, variant, eval: Arc::new(eval) }
    }

    pub fn apply(&self, t: &AscTuple) -> FacialImage {
        match t {
            AscTuple::Inf => FacialImage::tuple(AscTuple::Inf),
            _ => (self.eval)(t),
        }
    }

    /// Identity on D(d) or D₊(d).
    pub fn identity(d: usize, variant: Variant) -> Self {
        Self::new("identity", d, d, variant, |t| FacialImage::tuple(t.clone()))
    }

    /// t ↦ t + c·(1,…,1).
    pub fn shift(d: usize, c: f64) -> Self {
        Self::new("shift", d, d, Variant::Plain, move |t| match t.values() {
            Some(v) => FacialImage::tuple(AscTuple::Finite(v.iter().map(|x| x + c).collect())),
            None => FacialImage::tuple(AscTuple::Inf),
        })
    }

    /// Coordinatewise square on D₊(d).
    pub fn square_positive(d: usize) -> Self {
        Self::new("square", d, d, Variant::Positive, |t| match t.values() {
            Some(v) => FacialImage::tuple(AscTuple::Finite(v.iter().map(|x| x * x).collect())),
            None => FacialImage::tuple(AscTuple::Inf),
        })
    }

    /// t ↦ 2t on D₊(d).
    pub fn doubling(d: usize) -> Self {
        Self::new("doubling", d, d, Variant::Positive, |t| match t.values() {
            Some(v) => FacialImage::tuple(AscTuple::Finite(v.iter().map(|x| 2.0 * x).collect())),
            None => FacialImage::tuple(AscTuple::Inf),
        })
    }

    /// Collapse to the bottom coordinate: t ↦ (t₀,…,t₀).
    pub fn collapse_to_bottom(d: usize, variant: Variant) -> Self {
        Self::new("collapse-to-bottom", d, d, variant, |t| match t.values() {
            Some(v) => FacialImage::tuple(AscTuple::Finite(vec![v[0]; v.len()])),
            None => FacialImage::tuple(AscTuple::Inf),
        })
    }

    /// A deliberately non-facial control: swaps the extreme coordinates.
    pub fn coordinate_swap(d: usize) -> Self {
        Self::new("coordinate-swap", d, d, Variant::Plain, |t| match t.values() {
            Some(v) => {
                let mut out = v.to_vec();
                out.reverse();
                FacialImage::tuple(AscTuple::Finite(out))
            }
            None => FacialImage::tuple(AscTuple::Inf),
        })
    }
}

/// One failed sample from a facial check.
#[derive(Debug, Clone, Serialize)]
pub struct FacialViolationRecord {
    pub input: Vec<f64>,
    pub output: Option<Vec<f64>>,
    pub reason: String,
}

/// Report from sampling the facial conditions.
#[derive(Debug, Clone, Serialize)]
pub struct FacialReport {
    pub map: String,
    pub samples: usize,
    pub grid: String,
    pub violations: Vec<FacialViolationRecord>,
}

impl FacialReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sample random and boundary-stratified tuples and check that the map
/// preserves ascending order, faces, the zero face (positive variants)
/// and the basepoint.
pub fn check_facial(f: &FacialMapSpec, samples: usize, seed: u64) -> FacialReport {
    let mut rng = crate::harness::TestRng::new(seed);
    let mut violations = Vec::new();
    let d = f.d_in;
    let positive = matches!(f.variant, Variant::Positive | Variant::PositiveModZero);

    let record = |input: &[f64], image: &FacialImage, reason: String| {
        let output = image.tuple.values().map(|v| v.to_vec());
        FacialViolationRecord { input: input.to_vec(), output, reason }
    };

    for trial in 0..samples {
        // Stratified sampling: interior points, forced face coincidences,
        // forced zero face, and scaled-up points.
        let mut t: Vec<f64> = (0..d).map(|_| rng.uniform(-3.0, 3.0)).collect();
        if positive {
            for x in t.iter_mut() {
                *x = x.abs();
            }
        }
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        match trial % 4 {
            1 if d >= 2 => {
                let i = rng.below(d - 1);
                t[i + 1] = t[i]; // land on face F_i
            }
            2 if positive => {
                t[0] = 0.0; // land on the zero face
            }
            3 => {
                for x in t.iter_mut() {
                    *x *= 10.0;
                }
            }
            _ => {}
        }
        let input = AscTuple::Finite(t.clone());
        let image = f.apply(&input);
        let out = match image.tuple.values() {
            Some(v) => v.to_vec(),
            // Based maps may collapse finite points to the basepoint, and
            // the basepoint lies in every compactified face.
            None => continue,
        };
        let scale = out.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for w in out.windows(2) {
            if w[0] > w[1] + 1e-9 * scale {
                violations.push(record(&t, &image, format!("output not ascending: {out:?}")));
                break;
            }
        }
        if positive {
            if out.first().map_or(false, |&x| x < -1e-9 * scale) {
                violations.push(record(&t, &image, "positive variant left D₊".into()));
            }
            if t[0].abs() < 1e-13 && out.first().map_or(false, |&x| x.abs() > 1e-9 * scale) {
                violations.push(record(&t, &image, "zero face not preserved".into()));
            }
        }
        if f.d_in == f.d_out {
            for i in 0..d.saturating_sub(1) {
                if (t[i] - t[i + 1]).abs() < 1e-13 && (out[i] - out[i + 1]).abs() > 1e-9 * scale {
                    violations.push(record(&t, &image, format!("face F_{i} not preserved")));
                }
            }
        }
    }
    // The basepoint must be absorbing.
    if f.apply(&AscTuple::Inf).tuple != AscTuple::Inf {
        violations.push(FacialViolationRecord {
            input: vec![],
            output: None,
            reason: "INF not mapped to INF".into(),
        });
    }
    FacialReport {
        map: f.name.clone(),
        samples,
        grid: "uniform[-3,3] sorted; strata: face F_i coincidence (trial%4==1), zero face (trial%4==2), 10x dilation (trial%4==3); plus INF".into(),
        violations,
    }
}

/// η(α): the ascending eigenvalue tuple.
pub fn eta(alpha: &HermitianOperator) -> AscTuple {
    let eig = hermitian_eig(alpha).expect("eta eigensolve");
    AscTuple::Finite(eig.values)
}

/// ν(U, t) = U·Δ(t)·U†: Hermitian with spectrum exactly t.
pub fn nu(frame: &IsometryFrame, t: &AscTuple) -> Result<HermitianOperator> {
    let values = t
        .values()
        .ok_or_else(|| Error::InvalidInput("nu: INF input".into()))?;
    if frame.ambient != frame.rank || frame.rank != values.len() {
        return Err(Error::InvalidInput("nu: frame must be square unitary matching t".into()));
    }
    let delta = ComplexMatrix::diag(values);
    Ok(HermitianOperator::symmetrize(
        frame.matrix.mul(&delta).mul(&frame.matrix.adjoint()),
    ))
}

/// μ(θ, α) = −θ∘α for PSD α.
pub fn mu(theta: &IsometryFrame, alpha: &HermitianOperator) -> Result<ComplexMatrix> {
    if theta.rank != alpha.dim {
        return Err(Error::InvalidInput("mu: rank θ must equal dim α".into()));
    }
    let eig = hermitian_eig(alpha)?;
    let scale = alpha.operator_norm();
    if eig.values.first().map_or(false, |&e| e < -gap_threshold(scale)) {
        return Err(Error::InvalidInput("mu: α must be PSD".into()));
    }
    Ok(theta.matrix.mul(&alpha.matrix).neg())
}

/// 𝔄_f(α): eigenvalues pushed through the facial map, eigenvectors kept.
pub fn frak_a(f: &FacialMapSpec, alpha: &HermitianOperator) -> Result<(HermitianOperator, Option<f64>)> {
    if f.d_in != alpha.dim {
        return Err(Error::InvalidInput("frak_a: dimension mismatch".into()));
    }
    let eig = hermitian_eig(alpha)?;
    let scale = alpha.operator_norm();
    if matches!(f.variant, Variant::Positive | Variant::PositiveModZero)
        && eig.values.first().map_or(false, |&e| e < -gap_threshold(scale))
    {
        return Err(Error::InvalidInput("frak_a: positive variant needs PSD input".into()));
    }
    let clamped: Vec<f64> = if matches!(f.variant, Variant::Positive | Variant::PositiveModZero) {
        eig.values.iter().map(|&e| e.max(0.0)).collect()
    } else {
        eig.values.clone()
    };
    let image = f.apply(&AscTuple::Finite(clamped));
    let out = match image.tuple.values() {
        Some(v) => v.to_vec(),
        None => return Err(Error::FacialViolation("frak_a: image is the basepoint".into())),
    };
    let out_scale = out.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for w in out.windows(2) {
        if w[0] > w[1] + 1e-9 * out_scale {
            return Err(Error::FacialViolation(format!("frak_a: image not ascending: {out:?}")));
        }
    }
    let n = alpha.dim;
    let v = &eig.vectors.matrix;
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += v[(i, k)] * v[(j, k)].conj() * out[k];
            }
        }
    }
    Ok((HermitianOperator::symmetrize(m), image.suspension))
}

/// 𝔅_f(γ): singular values pushed through the facial map, singular frames kept.
pub fn frak_b(f: &FacialMapSpec, gamma: &ComplexMatrix) -> Result<(ComplexMatrix, Option<f64>)> {
    if f.d_in != gamma.cols {
        return Err(Error::InvalidInput("frak_b: cols(γ) must equal d_in".into()));
    }
    if !matches!(f.variant, Variant::Positive | Variant::PositiveModZero) {
        return Err(Error::InvalidInput("frak_b: needs a positive-variant facial map".into()));
    }
    let gram = HermitianOperator::symmetrize(gamma.adjoint().mul(gamma));
    let eig = hermitian_eig(&gram)?;
    let svals: Vec<f64> = eig.values.iter().map(|&e| e.max(0.0).sqrt()).collect();
    let top = svals.last().copied().unwrap_or(0.0);
    let thresh = gap_threshold(top);

    let image = f.apply(&AscTuple::Finite(svals.clone()));
    let out = match image.tuple.values() {
        Some(v) => v.to_vec(),
        None => return Err(Error::FacialViolation("frak_b: image is the basepoint".into())),
    };
    let out_scale = out.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for w in out.windows(2) {
        if w[0] > w[1] + 1e-9 * out_scale {
            return Err(Error::FacialViolation(format!("frak_b: image not ascending: {out:?}")));
        }
    }
    let n = gamma.cols;
    let mut m = ComplexMatrix::zeros(gamma.rows, n);
    for k in 0..n {
        let s = svals[k];
        if s <= thresh {
            // kernel direction: facialness forces the image coordinate to 0
            continue;
        }
        let v = eig.vectors.matrix.column(k);
        let mk: Vec<C64> = gamma.apply(&v).into_iter().map(|z| z / C64::new(s, 0.0)).collect();
        for i in 0..gamma.rows {
            for j in 0..n {
                m[(i, j)] += mk[i] * v[j].conj() * out[k];
            }
        }
    }
    Ok((m, image.suspension))
}

/// The hat construction: lift a facial self-map of D₊(2) to D₊(d+1) by
/// affine interpolation between the images of the extreme coordinates.
pub fn hat(f2: &FacialMapSpec, d: usize) -> Result<FacialMapSpec> {
    if f2.d_in != 2 || f2.d_out != 2 {
        return Err(Error::InvalidInput("hat: input map must act on D₊(2)".into()));
    }
    let inner = f2.clone();
    let name = format!("hat({})", f2.name);
    Ok(FacialMapSpec::new(name, d + 1, d + 1, Variant::Positive, move |t| {
        let v = match t.values() {
            Some(v) => v,
            None => return FacialImage::tuple(AscTuple::Inf),
        };
        let t0 = v[0];
        let td = v[v.len() - 1];
        let image = inner.apply(&AscTuple::Finite(vec![t0, td]));
        let pair = match image.tuple.values() {
            Some(p) => p.to_vec(),
            None => return FacialImage::tuple(AscTuple::Inf),
        };
        let g = pair[0];
        let h = pair[1] - pair[0];
        let span = td - t0;
        let out: Vec<f64> = v
            .iter()
            .map(|&ti| if span > 0.0 { g + (ti - t0) / span * h } else { g })
            .collect();
        FacialImage { tuple: AscTuple::Finite(out), suspension: image.suspension }
    }))
}

/// A point of the compactified real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompactReal {
    Finite(f64),
    Infinity,
}

/// A circle self-map presented through the compactified line, with the
/// angle identification φ = 2·atan(t) and ∞ at angle π.
pub struct DiagonalMap {
    pub name: String,
    f: Box<dyn Fn(f64) -> CompactReal + Send + Sync>,
}

impl DiagonalMap {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> CompactReal + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Box::new(f) }
    }

    pub fn eval(&self, t: f64) -> CompactReal {
        (self.f)(t)
    }
}

fn angle_of(c: CompactReal) -> f64 {
    match c {
        CompactReal::Finite(t) => 2.0 * t.atan(),
        CompactReal::Infinity => std::f64::consts::PI,
    }
}

const DEGREE_BASE_SAMPLES: usize = 4096;
const DEGREE_MAX_DOUBLINGS: usize = 6;

/// Winding number of the circle self-map induced on the diagonal.
///
/// The input circle is traversed once through the angle parameterization;
/// angle increments are accumulated and must total an integer multiple of
/// 2π within 0.01. On failure the resolution is doubled a few times before
/// giving up.
pub fn degree_on_diagonal(map: &DiagonalMap) -> Result<i64> {
    let mut samples = DEGREE_BASE_SAMPLES;
    let mut last_err = String::new();
    for _ in 0..=DEGREE_MAX_DOUBLINGS {
        match winding_once(map, samples) {
            Ok(w) => {
                let rounded = w.round();
                if (w - rounded).abs() <= 0.01 {
                    return Ok(rounded as i64);
                }
                last_err = format!("winding {w:.4} not near an integer at {samples} samples");
            }
            Err(e) => last_err = e,
        }
        samples *= 2;
    }
    Err(Error::ResolutionError(last_err))
}

fn winding_once(map: &DiagonalMap, samples: usize) -> std::result::Result<f64, String> {
    use std::f64::consts::PI;
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let mut first: Option<f64> = None;
    for i in 0..=samples {
        let phi = -PI + 2.0 * PI * (i as f64) / (samples as f64);
        // Avoid the exact poles of tan.
        let phi = phi.clamp(-PI + 1e-9, PI - 1e-9);
        let t = (phi / 2.0).tan();
        let psi = angle_of(map.eval(t));
        if let Some(p) = prev {
            let mut diff = psi - p;
            while diff > PI {
                diff -= 2.0 * PI;
            }
            while diff < -PI {
                diff += 2.0 * PI;
            }
            total += diff;
        } else {
            first = Some(psi);
        }
        prev = Some(psi);
    }
    // Close the loop back to the first sample.
    let (Some(p), Some(f)) = (prev, first) else {
        return Err("no samples".into());
    };
    let mut diff = f - p;
    while diff > PI {
        diff -= 2.0 * PI;
    }
    while diff < -PI {
        diff += 2.0 * PI;
    }
    total += diff;
    Ok(total / (2.0 * PI))
}

/// Local degree of an almost-everywhere injective self-map of the plane:
/// the winding of the image of a small circle around the image of its
/// center. This is the S²-degree for the smash-product facial maps.
pub fn degree_on_plane(
    name: &str,
    f: impl Fn(f64, f64) -> (f64, f64),
    center: (f64, f64),
    radius: f64,
) -> Result<i64> {
    use std::f64::consts::PI;
    let mut samples = DEGREE_BASE_SAMPLES;
    let base = f(center.0, center.1);
    for _ in 0..=DEGREE_MAX_DOUBLINGS {
        let mut total = 0.0;
        let mut prev: Option<f64> = None;
        let mut first: Option<f64> = None;
        for i in 0..=samples {
            let phi = 2.0 * PI * (i as f64) / (samples as f64);
            let p = f(center.0 + radius * phi.cos(), center.1 + radius * phi.sin());
            let angle = (p.1 - base.1).atan2(p.0 - base.0);
            if let Some(pr) = prev {
                let mut diff = angle - pr;
                while diff > PI {
                    diff -= 2.0 * PI;
                }
                while diff < -PI {
                    diff += 2.0 * PI;
                }
                total += diff;
            } else {
                first = Some(angle);
            }
            prev = Some(angle);
        }
        let (Some(p), Some(fst)) = (prev, first) else {
            return Err(Error::ResolutionError(format!("{name}: no samples")));
        };
        let mut diff = fst - p;
        while diff > PI {
            diff -= 2.0 * PI;
        }
        while diff < -PI {
            diff += 2.0 * PI;
        }
        total += diff;
        let w = total / (2.0 * PI);
        if (w - w.round()).abs() <= 0.01 {
            return Ok(w.round() as i64);
        }
        samples *= 2;
    }
    Err(Error::ResolutionError(format!("{name}: winding did not settle")))
}

/// The builtin diagonal maps whose degrees the theory pins down.
pub mod builtin {
    use super::*;
    use crate::ndr;

    /// Identity control: degree 1.
    pub fn identity() -> DiagonalMap {
        DiagonalMap::new("identity", |t| CompactReal::Finite(t))
    }

    /// Reflection control t ↦ −t on D(1): degree −1.
    pub fn reflection() -> DiagonalMap {
        DiagonalMap::new("reflection", |t| CompactReal::Finite(-t))
    }

    /// Diagonal restriction of the facial map g with 𝔅_g = χ: on the
    /// diagonal (e^t,…,e^t) the suspension coordinate is log(e^t) = t.
    pub fn chi_g() -> DiagonalMap {
        DiagonalMap::new("chi-g", |t| {
            let x = t.exp();
            // g(x,…,x) = (log x) ∧ (0,…,0); circle coordinate is log x.
            CompactReal::Finite(x.ln())
        })
    }

    /// Diagonal restriction of the map f building the NDR collapse e:
    /// t ↦ (u′(e^t, e^t)) ∧ ĥ′₀(…) with the suspension coordinate read
    /// through the logit identification of (0,1) with the line. The image
    /// is the basepoint when u′ hits an end of [0,1] or when the
    /// retraction component lands on the basepoint of the disc model
    /// (which happens on the far branch of the diagonal).
    pub fn ndr_e() -> DiagonalMap {
        DiagonalMap::new("ndr-e", |t| {
            let x = t.exp();
            let u = ndr::u_prime(x, x);
            if u >= 1.0 || u <= 0.0 {
                return CompactReal::Infinity;
            }
            let retracted = ndr::h_prime(0.0, &AscTuple::Finite(vec![x, x]));
            match retracted {
                AscTuple::Inf => CompactReal::Infinity,
                AscTuple::Finite(_) => CompactReal::Finite((u / (1.0 - u)).ln()),
            }
        })
    }

    /// The planar map underlying the lift comparison g′ (s,t)↦(t−e^{−s},−s).
    pub fn lift_g_plane() -> (&'static str, impl Fn(f64, f64) -> (f64, f64)) {
        ("lift-g", |s: f64, t: f64| (t - (-s).exp(), -s))
    }

    /// The planar map underlying f̄: in the natural coordinates of both
    /// sides this is the identity.
    pub fn lift_fbar_plane() -> (&'static str, impl Fn(f64, f64) -> (f64, f64)) {
        // f̄(s,t) = (s, s_top + t) read through (u, log(v−u)) coordinates.
        ("lift-fbar", |s: f64, tau: f64| {
            let t = tau.exp();
            let u = s;
            let v = s + t;
            (u, (v - u).ln())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{haar_isometry_with, random_hermitian_with, TestRng};
    use crate::linalg::tol_eq;

    #[test]
    fn check_facial_accepts_identity_and_collapse() {
        let id = FacialMapSpec::identity(3, Variant::Plain);
        assert!(check_facial(&id, 200, 1).passed());
        let collapse = FacialMapSpec::collapse_to_bottom(3, Variant::Plain);
        assert!(check_facial(&collapse, 200, 2).passed());
    }

    #[test]
    fn check_facial_rejects_swap() {
        let swap = FacialMapSpec::coordinate_swap(3);
        let report = check_facial(&swap, 200, 3);
        assert!(!report.passed());
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn eta_examples() {
        let a = HermitianOperator::diag(&[2.0, 0.0, 1.0]);
        assert_eq!(eta(&a), AscTuple::Finite(vec![0.0, 1.0, 2.0]));
        let c = HermitianOperator::diag(&[1.5, 1.5]);
        assert_eq!(eta(&c).values().unwrap(), &[1.5, 1.5]);
    }

    #[test]
    fn nu_eta_round_trip() {
        let mut rng = TestRng::new(17);
        for _ in 0..10 {
            let u = haar_isometry_with(&mut rng, 4, 4);
            let mut t: Vec<f64> = (0..4).map(|_| rng.uniform(-2.0, 2.0)).collect();
            t.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let alpha = nu(&u, &AscTuple::Finite(t.clone())).unwrap();
            let back = eta(&alpha);
            for (a, b) in back.values().unwrap().iter().zip(&t) {
                assert!((a - b).abs() < 1e-10);
            }
        }
        assert!(matches!(
            nu(&IsometryFrame::identity(2), &AscTuple::Inf),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn mu_recomposition() {
        let mut rng = TestRng::new(23);
        let theta = haar_isometry_with(&mut rng, 5, 3);
        let a = random_hermitian_with(&mut rng, 3);
        let psd = crate::calculus::apply_to_spectrum(
            &crate::calculus::ScalarFunction::new("abs", crate::calculus::Domain::Reals, f64::abs),
            &a,
        )
        .unwrap();
        let m = mu(&theta, &psd).unwrap();
        let r = crate::calculus::rho(&m);
        assert!(r.dist(&psd) < tol_eq(psd.operator_norm()) * 10.0);
        // non-PSD rejected
        let neg = HermitianOperator::diag(&[-1.0, 0.0, 1.0]);
        assert!(mu(&theta, &neg).is_err());
    }

    #[test]
    fn frak_a_examples() {
        let mut rng = TestRng::new(31);
        let a = random_hermitian_with(&mut rng, 3);
        // shift
        let (shifted, _) = frak_a(&FacialMapSpec::shift(3, 2.5), &a).unwrap();
        assert!(shifted.matrix.dist(&a.matrix.add_scalar(2.5)) < 1e-9);
        // collapse to bottom
        let (collapsed, _) = frak_a(&FacialMapSpec::collapse_to_bottom(3, Variant::Plain), &a).unwrap();
        let e0 = hermitian_eig(&a).unwrap().values[0];
        assert!(collapsed.matrix.dist(&ComplexMatrix::identity(3).scale_re(e0)) < 1e-9);
        // square on PSD
        let psd = crate::calculus::rho(&a.matrix);
        let (squared, _) = frak_a(&FacialMapSpec::square_positive(3), &psd).unwrap();
        assert!(squared.matrix.dist(&psd.matrix.mul(&psd.matrix)) < tol_eq(squared.operator_norm()) * 10.0);
    }

    #[test]
    fn frak_a_commutes_with_nu_and_eta() {
        let mut rng = TestRng::new(37);
        let f = FacialMapSpec::square_positive(4);
        for _ in 0..10 {
            let u = haar_isometry_with(&mut rng, 4, 4);
            let mut t: Vec<f64> = (0..4).map(|_| rng.uniform(0.0, 2.0)).collect();
            t.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let alpha = nu(&u, &AscTuple::Finite(t.clone())).unwrap();
            let (lhs, _) = frak_a(&f, &alpha).unwrap();
            let ft = f.apply(&AscTuple::Finite(t.clone()));
            let rhs = nu(&u, &ft.tuple).unwrap();
            assert!(lhs.dist(&rhs) < tol_eq(rhs.operator_norm()) * 10.0);
            // η∘𝔄_f = f∘η
            let eta_lhs = eta(&lhs);
            for (a, b) in eta_lhs.values().unwrap().iter().zip(ft.tuple.values().unwrap()) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn frak_b_examples_and_square() {
        let mut rng = TestRng::new(41);
        let gamma = crate::harness::random_matrix_with(&mut rng, 5, 3);
        let (same, _) = frak_b(&FacialMapSpec::identity(3, Variant::Positive), &gamma).unwrap();
        assert!(same.dist(&gamma) < tol_eq(gamma.operator_norm()) * 10.0);
        let (doubled, _) = frak_b(&FacialMapSpec::doubling(3), &gamma).unwrap();
        assert!(doubled.dist(&gamma.scale_re(2.0)) < tol_eq(gamma.operator_norm()) * 10.0);

        // 𝔅 square: frak_b(f, μ(θ,α)) = μ(θ, frak_a(f,α)).
        let f = FacialMapSpec::square_positive(3);
        let theta = haar_isometry_with(&mut rng, 5, 3);
        let psd = crate::calculus::rho(&crate::harness::random_matrix_with(&mut rng, 3, 3));
        let m = mu(&theta, &psd).unwrap();
        let (lhs, _) = frak_b(&f, &m).unwrap();
        let (fa, _) = frak_a(&f, &psd).unwrap();
        let rhs = mu(&theta, &fa).unwrap();
        assert!(lhs.dist(&rhs) < tol_eq(rhs.operator_norm()) * 10.0);
    }

    #[test]
    fn frak_b_noninjective_kernel_is_preserved() {
        // γ non-injective, f preserving D₀ ⇒ Ker γ ⊆ Ker frak_b(f,γ).
        let gamma = ComplexMatrix::diag(&[0.0, 3.0]);
        let (out, _) = frak_b(&FacialMapSpec::square_positive(2), &gamma).unwrap();
        let e1 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let image = out.apply(&e1);
        assert!(image.iter().map(|z| z.norm()).sum::<f64>() < 1e-10);
    }

    #[test]
    fn hat_examples() {
        // identity lifts to identity.
        let id2 = FacialMapSpec::identity(2, Variant::Positive);
        let lifted = hat(&id2, 3).unwrap();
        let t = AscTuple::Finite(vec![0.5, 1.0, 2.0, 4.0]);
        assert_eq!(lifted.apply(&t).tuple.values().unwrap(), &[0.5, 1.0, 2.0, 4.0]);

        // square: (1,2,3) ↦ (1,5,9).
        let sq = FacialMapSpec::square_positive(2);
        let lifted = hat(&sq, 2).unwrap();
        let out = lifted.apply(&AscTuple::Finite(vec![1.0, 2.0, 3.0]));
        let v = out.tuple.values().unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 5.0).abs() < 1e-12 && (v[2] - 9.0).abs() < 1e-12);

        // INF absorbing.
        assert_eq!(lifted.apply(&AscTuple::Inf).tuple, AscTuple::Inf);

        // hat outputs stay facial for d ≤ 6.
        for d in 2..=6 {
            let lifted = hat(&sq, d - 1).unwrap();
            assert!(check_facial(&lifted, 300, d as u64).passed());
        }
    }

    #[test]
    fn degree_builtin_controls() {
        assert_eq!(degree_on_diagonal(&builtin::identity()).unwrap(), 1);
        assert_eq!(degree_on_diagonal(&builtin::reflection()).unwrap(), -1);
    }

    #[test]
    fn degree_of_paper_maps() {
        assert_eq!(degree_on_diagonal(&builtin::chi_g()).unwrap(), 1);
        assert_eq!(degree_on_diagonal(&builtin::ndr_e()).unwrap(), 1);
        let (name, f) = builtin::lift_g_plane();
        assert_eq!(degree_on_plane(name, f, (0.3, -0.2), 0.4).unwrap(), 1);
        let (name, f) = builtin::lift_fbar_plane();
        assert_eq!(degree_on_plane(name, f, (0.1, 0.2), 0.3).unwrap(), 1);
    }

    #[test]
    fn unresolvable_degree_is_an_error() {
        // A map that cannot be sampled never settles near an integer.
        let bad = DiagonalMap::new("nan", |_| CompactReal::Finite(f64::NAN));
        assert!(matches!(degree_on_diagonal(&bad), Err(Error::ResolutionError(_))));
    }

    #[test]
    fn frak_a_rejects_non_facial_images() {
        let mut rng = TestRng::new(43);
        let a = random_hermitian_with(&mut rng, 3);
        let swap = FacialMapSpec::coordinate_swap(3);
        assert!(matches!(frak_a(&swap, &a), Err(Error::FacialViolation(_))));
    }

    #[test]
    fn degree_invariant_under_reparameterization() {
        // Precomposing with an orientation-preserving homeomorphism of the
        // line (the log/exp identification) leaves the degree alone.
        let g = builtin::chi_g();
        let reparam = DiagonalMap::new("chi-g-reparam", move |t| g.eval(t * t * t + t));
        assert_eq!(degree_on_diagonal(&reparam).unwrap(), 1);
        let e = builtin::ndr_e();
        let reparam = DiagonalMap::new("ndr-e-reparam", move |t| e.eval(t * t * t + t));
        assert_eq!(degree_on_diagonal(&reparam).unwrap(), 1);
    }
}
