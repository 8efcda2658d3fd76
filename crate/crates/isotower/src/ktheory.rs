//! Exact representation-ring computations for finite abelian groups:
//! R(G) arithmetic, the characteristic polynomials f_V, exterior powers,
//! Laurent-quotient reduction, the residue map, subrepresentation
//! detection, the restriction-kernel lattice check and Koszul complexes.
//!
//! Everything in this module is exact integer arithmetic; there are no
//! floating-point tolerances.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Desk-scale bounds for the exhaustive lattice computations.
const MAX_GROUP_ORDER: usize = 6;
const MAX_TOTAL_DIM: usize = 6;

/// A finite abelian group presented as a product of cyclic groups; its
/// characters are exponent tuples mod the orders, ranked in mixed radix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub orders: Vec<u32>,
}

impl GroupSpec {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.iter().any(|&n| n == 0) {
            return Err(Error::InvalidInput("cyclic order must be positive".into()));
        }
        Ok(Self { orders })
    }

    pub fn trivial() -> Self {
        Self { orders: Vec::new() }
    }

    /// |G| = |Ĝ|.
    pub fn order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    /// Rank of a character tuple in mixed radix.
    pub fn rank(&self, tuple: &[u32]) -> usize {
        assert_eq!(tuple.len(), self.orders.len());
        let mut idx = 0usize;
        for (a, n) in tuple.iter().zip(&self.orders) {
            idx = idx * (*n as usize) + (*a % n) as usize;
        }
        idx
    }

    pub fn unrank(&self, mut idx: usize) -> Vec<u32> {
        let mut tuple = vec![0u32; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            let n = self.orders[i] as usize;
            tuple[i] = (idx % n) as u32;
            idx /= n;
        }
        tuple
    }

    /// Product of two characters (indices), componentwise mod orders.
    pub fn char_mul(&self, a: usize, b: usize) -> usize {
        let ta = self.unrank(a);
        let tb = self.unrank(b);
        let sum: Vec<u32> = ta
            .iter()
            .zip(&tb)
            .zip(&self.orders)
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        self.rank(&sum)
    }

    pub fn char_inv(&self, a: usize) -> usize {
        let ta = self.unrank(a);
        let inv: Vec<u32> = ta.iter().zip(&self.orders).map(|(x, n)| (n - x) % n).collect();
        self.rank(&inv)
    }

    /// All group elements (for evaluation / iteration).
    pub fn elements(&self) -> Vec<Vec<u32>> {
        (0..self.order()).map(|i| self.unrank(i)).collect()
    }
}

/// An element of R(G): an integer combination of characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepElement {
    pub group: GroupSpec,
    /// Coefficient on the character of each rank; length |Ĝ|.
    pub coeffs: Vec<i64>,
}

impl RepElement {
    pub fn zero(group: &GroupSpec) -> Self {
        Self { group: group.clone(), coeffs: vec![0; group.order()] }
    }

    pub fn one(group: &GroupSpec) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[group.rank(&vec![0; group.orders.len()])] = 1;
        e
    }

    /// The class of a single character.
    pub fn character(group: &GroupSpec, idx: usize) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[idx] = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// Convolution product in the group ring of the dual.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        let n = self.group.order();
        let mut out = vec![0i64; n];
        for a in 0..n {
            if self.coeffs[a] == 0 {
                continue;
            }
            for b in 0..n {
                if other.coeffs[b] == 0 {
                    continue;
                }
                out[self.group.char_mul(a, b)] += self.coeffs[a] * other.coeffs[b];
            }
        }
        Self { group: self.group.clone(), coeffs: out }
    }

    /// Inverse of a unit: ±[χ] inverts to ±[χ⁻¹]; anything else fails.
    pub fn unit_inverse(&self) -> Result<Self> {
        let support: Vec<usize> =
            (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect();
        if support.len() != 1 || self.coeffs[support[0]].abs() != 1 {
            return Err(Error::NotInvertible(format!("{self} is not a unit ±[χ]")));
        }
        let idx = support[0];
        let sign = self.coeffs[idx];
        let mut out = Self::zero(&self.group);
        out.coeffs[self.group.char_inv(idx)] = sign;
        Ok(out)
    }
}

impl fmt::Display for RepElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let tuple = self.group.unrank(i);
            let chi = if tuple.iter().all(|&x| x == 0) {
                "1".to_string()
            } else {
                format!("χ{tuple:?}")
            };
            if first {
                write!(f, "{c}·{chi}")?;
                first = false;
            } else if c < 0 {
                write!(f, " − {}·{chi}", -c)?;
            } else {
                write!(f, " + {c}·{chi}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A polynomial over R(G) in ascending powers of T.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepPoly {
    pub group: GroupSpec,
    pub coeffs: Vec<RepElement>,
}

impl RepPoly {
    pub fn zero(group: &GroupSpec) -> Self {
        Self { group: group.clone(), coeffs: Vec::new() }
    }

    pub fn constant(e: RepElement) -> Self {
        Self { group: e.group.clone(), coeffs: vec![e] }
    }

    pub fn monomial(group: &GroupSpec, degree: usize) -> Self {
        let mut coeffs = vec![RepElement::zero(group); degree + 1];
        coeffs[degree] = RepElement::one(group);
        Self { group: group.clone(), coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn is_monic(&self) -> bool {
        match self.degree() {
            Some(d) => self.coeffs[d] == RepElement::one(&self.group),
            None => false,
        }
    }

    pub fn coeff(&self, i: usize) -> RepElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RepElement::zero(&self.group))
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self { group: self.group.clone(), coeffs }.trim()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Self { group: self.group.clone(), coeffs }.trim()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.group);
        }
        let mut coeffs =
            vec![RepElement::zero(&self.group); self.coeffs.len() + other.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self { group: self.group.clone(), coeffs }.trim()
    }

    pub fn scale(&self, e: &RepElement) -> Self {
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(e)).collect(),
        }
        .trim()
    }

    /// Remainder mod a monic divisor (exact long division).
    pub fn rem_monic(&self, modulus: &Self) -> Self {
        let m = modulus.degree().expect("monic modulus has a degree");
        assert!(modulus.is_monic(), "rem_monic needs a monic modulus");
        let mut r = self.clone().trim();
        while let Some(d) = r.degree() {
            if d < m {
                break;
            }
            let lead = r.coeffs[d].clone();
            // r -= lead·T^{d−m}·modulus
            for i in 0..=m {
                let t = lead.mul(&modulus.coeff(i));
                r.coeffs[d - m + i] = r.coeffs[d - m + i].sub(&t);
            }
            r = r.trim();
        }
        r
    }
}

impl fmt::Display for RepPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(format!("({c})"));
            } else if i == 1 {
                parts.push(format!("({c})·T"));
            } else {
                parts.push(format!("({c})·T^{i}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A representation of a finite abelian group: a multiset of characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub group: GroupSpec,
    /// Character ranks, sorted.
    pub chars: Vec<usize>,
}

impl Representation {
    pub fn new(group: &GroupSpec, mut chars: Vec<usize>) -> Result<Self> {
        let order = group.order();
        if chars.iter().any(|&c| c >= order) {
            return Err(Error::InvalidInput("character index out of range".into()));
        }
        chars.sort_unstable();
        Ok(Self { group: group.clone(), chars })
    }

    pub fn dim(&self) -> usize {
        self.chars.len()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut chars = self.chars.clone();
        chars.extend_from_slice(&other.chars);
        chars.sort_unstable();
        Self { group: self.group.clone(), chars }
    }
}

/// λ^k(V): the k-th elementary symmetric polynomial in V's characters.
pub fn exterior_power(v: &Representation, k: usize) -> RepElement {
    let group = &v.group;
    if k == 0 {
        return RepElement::one(group);
    }
    if k > v.dim() {
        return RepElement::zero(group);
    }
    // Build Π(1 + x·[L_i]) degree by degree; e_k is the x^k coefficient.
    let mut es: Vec<RepElement> = vec![RepElement::zero(group); k + 1];
    es[0] = RepElement::one(group);
    for &line in &v.chars {
        let l = RepElement::character(group, line);
        for j in (1..=k).rev() {
            let bump = es[j - 1].mul(&l);
            es[j] = es[j].add(&bump);
        }
    }
    es[k].clone()
}

/// f_V(T) = Σ T^{d−k}(−1)^k λ^k(V), monic of degree d = dim V.
pub fn f_v(v: &Representation) -> RepPoly {
    let d = v.dim();
    let group = &v.group;
    let mut coeffs = vec![RepElement::zero(group); d + 1];
    for k in 0..=d {
        let mut e = exterior_power(v, k);
        if k % 2 == 1 {
            e = e.neg();
        }
        coeffs[d - k] = e;
    }
    RepPoly { group: group.clone(), coeffs }
}

/// Product form Π(T − [L_i]); exactly equal to [`f_v`].
pub fn f_v_product_form(v: &Representation) -> RepPoly {
    let group = &v.group;
    let mut acc = RepPoly::constant(RepElement::one(group));
    for &line in &v.chars {
        let factor = RepPoly {
            group: group.clone(),
            coeffs: vec![RepElement::character(group, line).neg(), RepElement::one(group)],
        };
        acc = acc.mul(&factor);
    }
    acc
}

/// f_{V⊕W} = f_V·f_W, exactly.
pub fn f_product_check(v: &Representation, w: &Representation) -> bool {
    f_v(&v.direct_sum(w)) == f_v(v).mul(&f_v(w))
}

/// A Laurent polynomial over R(G): coefficients for powers T^{low..}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub low: i64,
    pub poly: RepPoly,
}

impl LaurentPoly {
    pub fn from_poly(p: RepPoly) -> Self {
        Self { low: 0, poly: p }
    }
}

/// Canonical remainder of a Laurent polynomial modulo a monic polynomial
/// whose constant term is a unit: negative powers are cleared through the
/// relation T⁻¹ = −c₀⁻¹(c₁ + c₂T + … + T^{m−1}).
pub fn laurent_reduce(g: &LaurentPoly, modulus: &RepPoly) -> Result<RepPoly> {
    let m = modulus
        .degree()
        .ok_or_else(|| Error::InvalidInput("laurent_reduce: zero modulus".into()))?;
    if !modulus.is_monic() {
        return Err(Error::InvalidInput("laurent_reduce: modulus must be monic".into()));
    }
    let group = &modulus.group;
    let c0_inv = modulus.coeff(0).unit_inverse()?;
    let reduced = if g.low >= 0 {
        // Plain polynomial, possibly shifted up.
        let mut shifted = vec![RepElement::zero(group); g.low as usize];
        shifted.extend(g.poly.coeffs.iter().cloned());
        RepPoly { group: group.clone(), coeffs: shifted }.rem_monic(modulus)
    } else {
        // T⁻¹ as a polynomial of degree m−1.
        let mut t_inv_coeffs = vec![RepElement::zero(group); m];
        for i in 1..=m {
            t_inv_coeffs[i - 1] = modulus.coeff(i).mul(&c0_inv).neg();
        }
        let t_inv = RepPoly { group: group.clone(), coeffs: t_inv_coeffs };
        let mut t_inv_pow = RepPoly::constant(RepElement::one(group));
        for _ in 0..(-g.low) {
            t_inv_pow = t_inv_pow.mul(&t_inv).rem_monic(modulus);
        }
        g.poly.mul(&t_inv_pow).rem_monic(modulus)
    };
    Ok(reduced)
}

/// The residue map: the coefficient of T^{d₀−1} in g·f_{V₁} mod f_{V₀}
/// (the total residue of g·f_{V₁}/f_{V₀} dT over the roots of f_{V₀}).
///
/// If V₀ ≤ V₁ this vanishes for every g. The converse holds for cyclic
/// groups but not in general: see the Klein-four counterexample in the
/// tests, where (1−a)(1−b)(1−ab) = 0 in the group ring.
pub fn residue(g: &RepPoly, v0: &Representation, v1: &Representation) -> Result<RepElement> {
    if v0.dim() < 1 || v1.dim() < v0.dim() {
        return Err(Error::InvalidInput("residue: need dim V₁ ≥ dim V₀ ≥ 1".into()));
    }
    let f0 = f_v(v0);
    let f1 = f_v(v1);
    let product = g.mul(&f1);
    let rem = laurent_reduce(&LaurentPoly::from_poly(product), &f0)?;
    Ok(rem.coeff(v0.dim() - 1))
}

/// Independent residue route: the coefficient of T^{−1} in the formal
/// Laurent expansion of g·f_{V₁}/f_{V₀} at infinity, via exact series
/// inversion of the monic denominator.
pub fn residue_via_series(g: &RepPoly, v0: &Representation, v1: &Representation) -> Result<RepElement> {
    if v0.dim() < 1 || v1.dim() < v0.dim() {
        return Err(Error::InvalidInput("residue: need dim V₁ ≥ dim V₀ ≥ 1".into()));
    }
    let group = &v0.group;
    let d0 = v0.dim();
    let f0 = f_v(v0);
    let numerator = g.mul(&f_v(v1));
    let n = match numerator.degree() {
        Some(n) => n,
        None => return Ok(RepElement::zero(group)),
    };
    if n + 1 < d0 {
        return Ok(RepElement::zero(group));
    }
    // 1/f₀ = T^{−d₀} Σ_k b_k T^{−k}, b₀ = 1,
    // b_k = −Σ_{j=1..min(k,d₀)} c_{d₀−j} b_{k−j}.
    let kmax = n + 1 - d0;
    let mut b = vec![RepElement::zero(group); kmax + 1];
    b[0] = RepElement::one(group);
    for k in 1..=kmax {
        let mut acc = RepElement::zero(group);
        for j in 1..=k.min(d0) {
            acc = acc.add(&f0.coeff(d0 - j).mul(&b[k - j]));
        }
        b[k] = acc.neg();
    }
    // Coefficient of T^{−1}: Σ_i N_i·b_{i−d₀+1} over i ≥ d₀−1.
    let mut out = RepElement::zero(group);
    for i in (d0 - 1)..=n {
        out = out.add(&numerator.coeff(i).mul(&b[i + 1 - d0]));
    }
    Ok(out)
}

/// Character-multiset inclusion.
pub fn is_subrep(v0: &Representation, v1: &Representation) -> bool {
    let mut pool = v1.chars.clone();
    for c in &v0.chars {
        match pool.iter().position(|x| x == c) {
            Some(i) => {
                pool.remove(i);
            }
            None => return false,
        }
    }
    true
}

// ------------------------------------------------------------------
// Integer lattice machinery (Hermite-style row reduction over ℤ).
// ------------------------------------------------------------------

/// Row-style Hermite normal form over ℤ with i128 arithmetic. Returns the
/// canonical form with zero rows removed.
pub fn hnf(rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let mut m = rows;
    if m.is_empty() {
        return m;
    }
    let cols = m[0].len();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        // Euclidean elimination in this column below pivot_row.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m.len() {
                if m[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) => {
                            if m[r][col].abs() < m[b][col].abs() {
                                Some(r)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            let pivot_val = m[pivot_row][col];
            for r in pivot_row + 1..m.len() {
                if m[r][col] != 0 {
                    let q = m[r][col].div_euclid(pivot_val);
                    for c in 0..cols {
                        m[r][c] -= q * m[pivot_row][c];
                    }
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m.len() && m[pivot_row][col] != 0 {
            // Normalize the pivot positive and reduce the rows above.
            if m[pivot_row][col] < 0 {
                for c in 0..cols {
                    m[pivot_row][c] = -m[pivot_row][c];
                }
            }
            let pivot_val = m[pivot_row][col];
            for r in 0..pivot_row {
                let q = m[r][col].div_euclid(pivot_val);
                if q != 0 {
                    for c in 0..cols {
                        m[r][c] -= q * m[pivot_row][c];
                    }
                }
            }
            pivot_row += 1;
        }
        if pivot_row >= m.len() {
            break;
        }
    }
    m.retain(|row| row.iter().any(|&x| x != 0));
    m
}

/// Basis of the integer kernel {x : Mx = 0} of a ℤ-matrix (rows × cols),
/// as rows of a saturated lattice basis. Computed by row-reducing [Mᵀ | I]
/// over ℤ: rows whose leading block vanishes carry kernel vectors.
pub fn integer_kernel(m: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    let rows = m.len();
    let total = rows + cols;
    // Build [Mᵀ | I]: one row per column of M.
    let mut work: Vec<Vec<i128>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut row = Vec::with_capacity(total);
        for i in 0..rows {
            row.push(m[i][j]);
        }
        for k in 0..cols {
            row.push(if k == j { 1 } else { 0 });
        }
        work.push(row);
    }
    // Hermite-style reduction restricted to the leading block.
    let mut pivot_row = 0usize;
    for col in 0..rows {
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..work.len() {
                if work[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) if work[r][col].abs() < work[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            work.swap(pivot_row, b);
            let pivot_val = work[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..work.len() {
                if work[r][col] != 0 {
                    let q = work[r][col].div_euclid(pivot_val);
                    for c in 0..total {
                        let sub = q * work[pivot_row][c];
                        work[r][c] -= sub;
                    }
                    if work[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < work.len() && work[pivot_row][col] != 0 {
            pivot_row += 1;
        }
        if pivot_row >= work.len() {
            break;
        }
    }
    work.iter()
        .skip(pivot_row)
        .filter(|row| row[..rows].iter().all(|&x| x == 0))
        .map(|row| row[rows..].to_vec())
        .collect()
}

/// Outcome of the restriction-kernel lattice comparison.
#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub group: GroupSpec,
    pub v0_chars: Vec<usize>,
    pub v1_chars: Vec<usize>,
    pub kernel_rank: usize,
    pub expected_rank: usize,
    pub matches_free_rank_one: bool,
    pub degenerate: bool,
    /// HNF basis of the computed kernel, flattened lattice coordinates.
    pub kernel_basis: Vec<Vec<i64>>,
    /// HNF basis of the lattice generated by χ·T^j·f_{V₁}.
    pub expected_basis: Vec<Vec<i64>>,
}

/// Lattice coordinates of a polynomial class: characters × T-powers,
/// T-major ordering, degree < deg_bound.
fn poly_to_lattice(p: &RepPoly, deg_bound: usize) -> Vec<i128> {
    let g = p.group.order();
    let mut out = vec![0i128; g * deg_bound];
    for (i, c) in p.coeffs.iter().enumerate() {
        assert!(i < deg_bound, "unreduced polynomial in lattice embedding");
        for (j, &x) in c.coeffs.iter().enumerate() {
            out[i * g + j] = x as i128;
        }
    }
    out
}

/// Kernel-of-restriction check: the kernel of the restriction
/// R(G)[T,T⁻¹]/(f_{V₀}f_{V₁}) → R(G)[T,T⁻¹]/(f_{V₁}) equals the lattice
/// generated by {χ·T^j·f_{V₁}: χ ∈ Ĝ, 0 ≤ j < d₀}, i.e. is free of rank
/// one over K⁰(PV₀).
pub fn restriction_kernel_check(v0: &Representation, v1: &Representation) -> Result<KernelReport> {
    let group = &v0.group;
    if group.order() > MAX_GROUP_ORDER || v0.dim() + v1.dim() > MAX_TOTAL_DIM {
        return Err(Error::TooLarge("restriction kernel check beyond desk scale".into()));
    }
    if v0.dim() == 0 {
        // Degenerate: f_{V₀} = 1 and the source ring is R[T±]/f_{V₁};
        // the restriction is the identity... the kernel is everything in
        // the quotient by f_{V₁}·f_{V₀} = f_{V₁}: report and return.
        return Ok(KernelReport {
            group: group.clone(),
            v0_chars: vec![],
            v1_chars: v1.chars.clone(),
            kernel_rank: 0,
            expected_rank: 0,
            matches_free_rank_one: false,
            degenerate: true,
            kernel_basis: vec![],
            expected_basis: vec![],
        });
    }
    let d0 = v0.dim();
    let d1 = v1.dim();
    let g_order = group.order();
    let f0 = f_v(v0);
    let f1 = f_v(v1);
    let modulus_big = f0.mul(&f1);
    let source_rank = g_order * (d0 + d1);
    let target_dim = g_order * d1;

    // Matrix of the reduction map on the lattice basis χ·T^i.
    let mut m: Vec<Vec<i128>> = vec![vec![0i128; source_rank]; target_dim];
    for i in 0..(d0 + d1) {
        for chi in 0..g_order {
            let basis_poly = RepPoly::monomial(group, i).scale(&RepElement::character(group, chi));
            let image = basis_poly.rem_monic(&f1);
            let coords = poly_to_lattice(&image, d1);
            let col = i * g_order + chi;
            for (row, &val) in coords.iter().enumerate() {
                m[row][col] = val;
            }
        }
    }
    let kernel = integer_kernel(&m, source_rank);
    let kernel_hnf = hnf(kernel);

    // Expected generators: χ·T^j·f_{V₁} reduced mod f₀f₁.
    let mut expected: Vec<Vec<i128>> = Vec::new();
    for j in 0..d0 {
        for chi in 0..g_order {
            let gen = RepPoly::monomial(group, j)
                .scale(&RepElement::character(group, chi))
                .mul(&f1)
                .rem_monic(&modulus_big);
            expected.push(poly_to_lattice(&gen, d0 + d1));
        }
    }
    let expected_hnf = hnf(expected);

    let matches = kernel_hnf == expected_hnf;
    let to_i64 = |m: &[Vec<i128>]| -> Vec<Vec<i64>> {
        m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    };
    Ok(KernelReport {
        group: group.clone(),
        v0_chars: v0.chars.clone(),
        v1_chars: v1.chars.clone(),
        kernel_rank: kernel_hnf.len(),
        expected_rank: expected_hnf.len(),
        matches_free_rank_one: matches && kernel_hnf.len() == g_order * d0,
        degenerate: false,
        kernel_basis: to_i64(&kernel_hnf),
        expected_basis: to_i64(&expected_hnf),
    })
}

/// The Koszul complex on a sequence x₁..x_r: K_i free on sorted index
/// subsets, d₁(e_j) = x_j and the alternating contraction in general.
///
/// Serializes with every ring element flattened to its integer
/// coefficient vector over the character basis, so differentials appear
/// as nested integer arrays.
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub group: GroupSpec,
    pub rank: usize,
    pub xs: Vec<RepElement>,
    /// differentials[i] is d_{i+1}: K_{i+1} → K_i as a matrix of
    /// RepElements indexed (row: target subset, col: source subset).
    pub differentials: Vec<Vec<Vec<RepElement>>>,
}

impl Serialize for KoszulComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            group: &'a GroupSpec,
            rank: usize,
            xs: Vec<&'a Vec<i64>>,
            differentials: Vec<Vec<Vec<&'a Vec<i64>>>>,
        }
        let wire = Wire {
            group: &self.group,
            rank: self.rank,
            xs: self.xs.iter().map(|x| &x.coeffs).collect(),
            differentials: self
                .differentials
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(|e| &e.coeffs).collect()).collect())
                .collect(),
        };
        wire.serialize(s)
    }
}

/// Sorted index subsets of {0..r−1} of the given size, lexicographic.
fn subsets(r: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, r: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..r {
            current.push(i);
            rec(i + 1, r, size, current, out);
            current.pop();
        }
    }
    rec(0, r, size, &mut current, &mut out);
    out
}

/// Build the complex and verify d² = 0 exactly.
pub fn koszul_build(xs: Vec<RepElement>) -> Result<KoszulComplex> {
    let r = xs.len();
    let group = xs
        .first()
        .map(|x| x.group.clone())
        .unwrap_or_else(GroupSpec::trivial);
    let mut differentials = Vec::new();
    for i in 1..=r {
        let sources = subsets(r, i);
        let targets = subsets(r, i - 1);
        let mut matrix =
            vec![vec![RepElement::zero(&group); sources.len()]; targets.len().max(1)];
        for (col, s) in sources.iter().enumerate() {
            for (pos, &j) in s.iter().enumerate() {
                let mut reduced = s.clone();
                reduced.remove(pos);
                let row = targets.iter().position(|t| *t == reduced).unwrap_or(0);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let term = if sign > 0 { xs[j].clone() } else { xs[j].neg() };
                matrix[row][col] = matrix[row][col].add(&term);
            }
        }
        differentials.push(matrix);
    }
    let complex = KoszulComplex { group, rank: r, xs, differentials };
    if !koszul_d_squared_is_zero(&complex) {
        return Err(Error::InvalidInput("Koszul build produced d² ≠ 0".into()));
    }
    Ok(complex)
}

/// d_{i}∘d_{i+1} = 0 for every consecutive pair, exactly.
pub fn koszul_d_squared_is_zero(complex: &KoszulComplex) -> bool {
    let group = &complex.group;
    for i in 1..complex.differentials.len() {
        let d_lo = &complex.differentials[i - 1]; // K_i -> K_{i-1}
        let d_hi = &complex.differentials[i]; // K_{i+1} -> K_i
        let rows = d_lo.len();
        let mids = d_hi.len();
        let cols = if mids > 0 { d_hi[0].len() } else { 0 };
        for r in 0..rows {
            for c in 0..cols {
                let mut acc = RepElement::zero(group);
                for m in 0..mids {
                    if m < d_lo[r].len() {
                        acc = acc.add(&d_lo[r][m].mul(&d_hi[m][c]));
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Verdict of the tower-to-Koszul comparison for one (V₀, V₁).
#[derive(Debug, Clone, Serialize)]
pub struct TowerKoszulReport {
    pub xs: Vec<RepElement>,
    pub all_zero: bool,
    pub subrep: bool,
    pub d_squared_zero: bool,
    pub consistent: bool,
}

/// Build the Koszul complex on x_j = residue(T^j) and report whether the
/// differentials vanish exactly when V₀ ≤ V₁.
pub fn tower_koszul(v0: &Representation, v1: &Representation) -> Result<(KoszulComplex, TowerKoszulReport)> {
    let group = &v0.group;
    if group.order() > MAX_GROUP_ORDER || v0.dim() + v1.dim() > MAX_TOTAL_DIM {
        return Err(Error::TooLarge("tower_koszul beyond desk scale".into()));
    }
    let d0 = v0.dim();
    let mut xs = Vec::with_capacity(d0);
    for j in 0..d0 {
        xs.push(residue(&RepPoly::monomial(group, j), v0, v1)?);
    }
    let complex = koszul_build(xs.clone())?;
    let all_zero = xs.iter().all(|x| x.is_zero());
    let subrep = is_subrep(v0, v1);
    let d_squared = koszul_d_squared_is_zero(&complex);
    let report = TowerKoszulReport {
        xs,
        all_zero,
        subrep,
        d_squared_zero: d_squared,
        consistent: all_zero == subrep && d_squared,
    };
    Ok((complex, report))
}

/// All multisets of the given size over 0..n (for exhaustive grids).
pub fn char_multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i, n, left - 1, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}
