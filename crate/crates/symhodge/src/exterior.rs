//! Multilinear symplectic algebra on a Darboux space.
//!
//! `SymplecticSpace { n }` is Q^2n with the standard form ω = Σ eⁱ∧fⁱ; basis
//! covectors are ordered (e¹, f¹, e², f², …) and identified with mask bits
//! (0, 1, 2, 3, …).  On top of the plain exterior algebra this module supplies
//! the musical isomorphisms, the ω-pairing on every grade, the symplectic star
//! (computed from its defining property u∧★v = ω(u,v)·ωⁿ/n! by an exact linear
//! solve, not a closed formula), and the Lefschetz sl₂ triple.
//!
//! Model complexes reuse all of this pointwise: their frames are Darboux
//! frames, so the fibrewise star and Poisson contraction live here.

use crate::linalg::{rat_int, PivotOrder, RatMatrix, Rational};
use crate::masks;
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("operands live on different symplectic spaces")]
    SpaceMismatch,
    #[error("expected grade {expected}, got grade {got}")]
    GradeMismatch { expected: usize, got: usize },
    #[error("operand is not homogeneous")]
    NotHomogeneous,
}

/// The standard symplectic vector space of dimension 2n with a fixed Darboux
/// basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticSpace {
    n: usize,
}

/// Sparse element of the exterior algebra of covectors, Λ(Q^2n)*.
///
/// May be inhomogeneous; grade-sensitive operators act on the graded parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiform {
    n: usize,
    terms: BTreeMap<u32, Rational>,
}

/// Sparse element of the exterior algebra of vectors, Λ(Q^2n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multivector {
    n: usize,
    terms: BTreeMap<u32, Rational>,
}

fn insert_term(terms: &mut BTreeMap<u32, Rational>, mask: u32, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    let entry = terms.entry(mask).or_insert_with(Rational::zero);
    *entry += coeff;
    if entry.is_zero() {
        terms.remove(&mask);
    }
}

fn wedge_terms(
    a: &BTreeMap<u32, Rational>,
    b: &BTreeMap<u32, Rational>,
) -> BTreeMap<u32, Rational> {
    let mut out = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((m, s)) = masks::merge(*ma, *mb) {
                insert_term(&mut out, m, ca * cb * rat_int(s as i64));
            }
        }
    }
    out
}

impl Multiform {
    pub fn zero(n: usize) -> Self {
        Multiform { n, terms: BTreeMap::new() }
    }

    /// The scalar 1 (grade 0).
    pub fn one(n: usize) -> Self {
        Multiform::from_mask(n, 0, rat_int(1))
    }

    pub fn from_mask(n: usize, mask: u32, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        insert_term(&mut terms, mask, coeff);
        Multiform { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    /// Grade when homogeneous, `None` for 0 or mixed elements.
    pub fn grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|m| masks::grade(*m));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// Split into homogeneous pieces, ascending by grade.
    pub fn graded_parts(&self) -> BTreeMap<usize, Multiform> {
        let mut out: BTreeMap<usize, Multiform> = BTreeMap::new();
        for (m, c) in &self.terms {
            let part = out.entry(masks::grade(*m)).or_insert_with(|| Multiform::zero(self.n));
            insert_term(&mut part.terms, *m, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Multiform) -> Multiform {
        assert_eq!(self.n, other.n, "space mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            insert_term(&mut terms, *m, c.clone());
        }
        Multiform { n: self.n, terms }
    }

    pub fn sub(&self, other: &Multiform) -> Multiform {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Multiform {
        self.scale(&rat_int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Multiform {
        if c.is_zero() {
            return Multiform::zero(self.n);
        }
        Multiform { n: self.n, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn wedge(&self, other: &Multiform) -> Multiform {
        assert_eq!(self.n, other.n, "space mismatch");
        Multiform { n: self.n, terms: wedge_terms(&self.terms, &other.terms) }
    }
}

impl Multivector {
    pub fn zero(n: usize) -> Self {
        Multivector { n, terms: BTreeMap::new() }
    }

    pub fn from_mask(n: usize, mask: u32, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        insert_term(&mut terms, mask, coeff);
        Multivector { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|m| masks::grade(*m));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        assert_eq!(self.n, other.n, "space mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            insert_term(&mut terms, *m, c.clone());
        }
        Multivector { n: self.n, terms }
    }

    pub fn scale(&self, c: &Rational) -> Multivector {
        if c.is_zero() {
            return Multivector::zero(self.n);
        }
        Multivector { n: self.n, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn wedge(&self, other: &Multivector) -> Multivector {
        assert_eq!(self.n, other.n, "space mismatch");
        Multivector { n: self.n, terms: wedge_terms(&self.terms, &other.terms) }
    }
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1 && n <= 15, "half-dimension out of supported range");
        SymplecticSpace { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Basis covector eⁱ = mask bit 2(i−1), for i in 1..=n.
    pub fn e(&self, i: usize) -> Multiform {
        assert!(1 <= i && i <= self.n);
        Multiform::from_mask(self.n, 1 << (2 * (i - 1)), rat_int(1))
    }

    /// Basis covector fⁱ = mask bit 2(i−1)+1, for i in 1..=n.
    pub fn f(&self, i: usize) -> Multiform {
        assert!(1 <= i && i <= self.n);
        Multiform::from_mask(self.n, 1 << (2 * (i - 1) + 1), rat_int(1))
    }

    /// Basis vector Xᵢ dual to eⁱ.
    pub fn x(&self, i: usize) -> Multivector {
        assert!(1 <= i && i <= self.n);
        Multivector::from_mask(self.n, 1 << (2 * (i - 1)), rat_int(1))
    }

    /// Basis vector Yᵢ dual to fⁱ.
    pub fn y(&self, i: usize) -> Multivector {
        assert!(1 <= i && i <= self.n);
        Multivector::from_mask(self.n, 1 << (2 * (i - 1) + 1), rat_int(1))
    }

    /// ω = Σᵢ eⁱ∧fⁱ.
    pub fn omega(&self) -> Multiform {
        let mut out = Multiform::zero(self.n);
        for i in 0..self.n {
            out = out.add(&Multiform::from_mask(self.n, 0b11 << (2 * i), rat_int(1)));
        }
        out
    }

    /// The Poisson bivector π = ω♯ = Σᵢ Xᵢ∧Yᵢ.
    pub fn poisson_bivector(&self) -> Multivector {
        let mut out = Multivector::zero(self.n);
        for i in 0..self.n {
            out = out.add(&Multivector::from_mask(self.n, 0b11 << (2 * i), rat_int(1)));
        }
        out
    }

    /// ωⁿ/n!, the normalized top form e¹∧f¹∧…∧eⁿ∧fⁿ.
    pub fn top(&self) -> Multiform {
        Multiform::from_mask(self.n, (1u32 << (2 * self.n)) - 1, rat_int(1))
    }

    /// Flat: v ↦ v♭, defined by ⟨v♭, w⟩ = ω(v, w).  On the basis,
    /// Xᵢ♭ = fⁱ and Yᵢ♭ = −eⁱ.
    pub fn flat(&self, v: &Multivector) -> Result<Multiform, ExteriorError> {
        if v.grade().map_or(!v.is_zero(), |g| g != 1) {
            return Err(ExteriorError::GradeMismatch { expected: 1, got: v.grade().unwrap_or(0) });
        }
        let mut out = Multiform::zero(self.n);
        for (m, c) in v.terms() {
            let i = m.trailing_zeros() as usize;
            let (mate, sign) = if i % 2 == 0 { (i + 1, 1) } else { (i - 1, -1) };
            out = out.add(&Multiform::from_mask(self.n, 1 << mate, c * rat_int(sign)));
        }
        Ok(out)
    }

    /// Sharp: the inverse of flat.  On the basis, (eⁱ)♯ = −Yᵢ and (fⁱ)♯ = Xᵢ.
    pub fn sharp(&self, u: &Multiform) -> Result<Multivector, ExteriorError> {
        if u.grade().map_or(!u.is_zero(), |g| g != 1) {
            return Err(ExteriorError::GradeMismatch { expected: 1, got: u.grade().unwrap_or(0) });
        }
        let mut out = Multivector::zero(self.n);
        for (m, c) in u.terms() {
            let i = m.trailing_zeros() as usize;
            let (mate, sign) = if i % 2 == 0 { (i + 1, -1) } else { (i - 1, 1) };
            out = out.add(&Multivector::from_mask(self.n, 1 << mate, c * rat_int(sign)));
        }
        Ok(out)
    }

    /// ω on covectors: ω(u, w) := ω(u♯, w♯); ±1 exactly on Darboux mates.
    fn omega_on_basis_covectors(&self, p: usize, q: usize) -> Rational {
        if p / 2 == q / 2 && p != q {
            if p % 2 == 0 {
                rat_int(1)
            } else {
                rat_int(-1)
            }
        } else {
            rat_int(0)
        }
    }

    /// The grade-k pairing ω(v₁∧…∧v_k, w₁∧…∧w_k) = det[ω(vᵢ, wⱼ)], extended
    /// bilinearly.  Antisymmetric in odd grade, symmetric in even grade, and
    /// nondegenerate on every grade.
    pub fn pairing_omega(&self, u: &Multiform, w: &Multiform) -> Result<Rational, ExteriorError> {
        let (gu, gw) = match (u.grade(), w.grade()) {
            (Some(a), Some(b)) => (a, b),
            // Zero pairs with anything as 0; mixed grades are caller bugs.
            _ if u.is_zero() || w.is_zero() => return Ok(rat_int(0)),
            _ => return Err(ExteriorError::NotHomogeneous),
        };
        if gu != gw {
            return Err(ExteriorError::GradeMismatch { expected: gu, got: gw });
        }
        let mut total = Rational::zero();
        for (mu, cu) in u.terms() {
            let iu: Vec<usize> = masks::bits(mu).collect();
            for (mw, cw) in w.terms() {
                let iw: Vec<usize> = masks::bits(mw).collect();
                let gram = RatMatrix::from_rows(
                    iu.iter()
                        .map(|&p| iw.iter().map(|&q| self.omega_on_basis_covectors(p, q)).collect())
                        .collect(),
                );
                total += cu * cw * gram.det();
            }
        }
        Ok(total)
    }

    /// Interior product by a multivector, with ι(a∧b) = ι(b)∘ι(a).
    pub fn iota(&self, a: &Multivector, u: &Multiform) -> Multiform {
        let mut out = Multiform::zero(self.n);
        for (ma, ca) in a.terms() {
            let mut part = u.clone();
            // ι(q₁∧…∧q_g) = ι(q_g)∘…∘ι(q₁): apply lowest index first.
            for q in masks::bits(ma) {
                let mut next = Multiform::zero(self.n);
                for (mu, cu) in part.terms() {
                    if let Some((m, s)) = masks::contract(mu, q) {
                        next = next.add(&Multiform::from_mask(self.n, m, cu * rat_int(s as i64)));
                    }
                }
                part = next;
            }
            out = out.add(&part.scale(ca));
        }
        out
    }

    /// Symplectic star, solved grade-by-grade from u∧★v = ω(u,v)·ωⁿ/n!
    /// ranging over the full basis of the complementary grade.
    pub fn star(&self, v: &Multiform) -> Multiform {
        let mut out = Multiform::zero(self.n);
        for (k, part) in v.graded_parts() {
            out = out.add(&self.star_homogeneous(&part, k));
        }
        out
    }

    fn star_homogeneous(&self, v: &Multiform, k: usize) -> Multiform {
        let dim = self.dim();
        let test_masks = masks::masks_of_grade(dim, k);
        let unknown_masks = masks::masks_of_grade(dim, dim - k);
        let full = (1u32 << dim) - 1;
        let mut m = RatMatrix::zero(test_masks.len(), unknown_masks.len());
        let mut rhs = Vec::with_capacity(test_masks.len());
        for (r, &tm) in test_masks.iter().enumerate() {
            for (c, &um) in unknown_masks.iter().enumerate() {
                if let Some((merged, s)) = masks::merge(tm, um) {
                    debug_assert_eq!(merged, full);
                    m.set(r, c, rat_int(s as i64));
                }
            }
            let basis = Multiform::from_mask(self.n, tm, rat_int(1));
            rhs.push(self.pairing_omega(&basis, v).expect("homogeneous by construction"));
        }
        let x = m.solve(&rhs, PivotOrder::Forward).expect("defining system is nondegenerate");
        let mut out = Multiform::zero(self.n);
        for (c, &um) in unknown_masks.iter().enumerate() {
            out = out.add(&Multiform::from_mask(self.n, um, x[c].clone()));
        }
        out
    }

    /// L = ε(ω), wedging with the symplectic form.
    pub fn wedge_omega(&self, u: &Multiform) -> Multiform {
        self.omega().wedge(u)
    }

    /// Λ = ι(π), contraction with the Poisson bivector.
    pub fn contract_poisson(&self, u: &Multiform) -> Multiform {
        self.iota(&self.poisson_bivector(), u)
    }

    /// A = [Λ, L], built from the commutator (the scalar value n−k on grade k
    /// is a theorem about this operator, not its definition here).
    pub fn a_operator(&self, u: &Multiform) -> Multiform {
        self.contract_poisson(&self.wedge_omega(u)).sub(&self.wedge_omega(&self.contract_poisson(u)))
    }

    /// Lefschetz decomposition u = Σⱼ ωʲ/j!·… : returns pairs (j, pⱼ) with
    /// each pⱼ primitive (Λpⱼ = 0) and u = Σⱼ Lʲ(pⱼ).  Zero parts are omitted.
    pub fn primitive_decompose(&self, u: &Multiform) -> Vec<(usize, Multiform)> {
        let Some(k) = u.grade() else {
            assert!(u.is_zero(), "primitive decomposition needs a homogeneous input");
            return Vec::new();
        };
        let dim = self.dim();
        let k_masks = masks::masks_of_grade(dim, k);
        let chart: BTreeMap<u32, usize> = k_masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let coords = |f: &Multiform| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); k_masks.len()];
            for (m, c) in f.terms() {
                v[chart[&m]] = c.clone();
            }
            v
        };
        // Unknowns: coefficients on a kernel basis of Λ in each grade k−2j.
        let mut columns: Vec<Vec<Rational>> = Vec::new();
        let mut column_forms: Vec<(usize, Multiform)> = Vec::new();
        let mut j = 0;
        while 2 * j <= k {
            let g = k - 2 * j;
            let g_masks = masks::masks_of_grade(dim, g);
            let target_masks = masks::masks_of_grade(dim, g.saturating_sub(2));
            let tchart: BTreeMap<u32, usize> =
                target_masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut lam = RatMatrix::zero(target_masks.len(), g_masks.len());
            for (c, &gm) in g_masks.iter().enumerate() {
                let img = self.contract_poisson(&Multiform::from_mask(self.n, gm, rat_int(1)));
                for (m, v) in img.terms() {
                    lam.set(tchart[&m], c, v.clone());
                }
            }
            for ker in lam.kernel() {
                let mut p = Multiform::zero(self.n);
                for (c, &gm) in g_masks.iter().enumerate() {
                    p = p.add(&Multiform::from_mask(self.n, gm, ker[c].clone()));
                }
                let mut lifted = p.clone();
                for _ in 0..j {
                    lifted = self.wedge_omega(&lifted);
                }
                columns.push(coords(&lifted));
                column_forms.push((j, p));
            }
            j += 1;
        }
        let m = RatMatrix::from_columns(columns, k_masks.len());
        let x = m
            .solve(&coords(u), PivotOrder::Forward)
            .expect("Lefschetz decomposition always exists on a symplectic space");
        let mut parts: BTreeMap<usize, Multiform> = BTreeMap::new();
        for (idx, (j, p)) in column_forms.iter().enumerate() {
            if x[idx].is_zero() {
                continue;
            }
            let acc = parts.entry(*j).or_insert_with(|| Multiform::zero(self.n));
            *acc = acc.add(&p.scale(&x[idx]));
        }
        parts.into_iter().filter(|(_, p)| !p.is_zero()).collect()
    }
}

/// Embed a form on the left factor into Λ(V₁ ⊕ V₂)*.
pub fn embed_left(u: &Multiform, n_right: usize) -> Multiform {
    let n = u.n() + n_right;
    let mut out = Multiform::zero(n);
    for (m, c) in u.terms() {
        out = out.add(&Multiform::from_mask(n, m, c.clone()));
    }
    out
}

/// Embed a form on the right factor into Λ(V₁ ⊕ V₂)*, shifting its basis
/// indices past the left factor's.
pub fn embed_right(u: &Multiform, n_left: usize) -> Multiform {
    let n = n_left + u.n();
    let mut out = Multiform::zero(n);
    for (m, c) in u.terms() {
        out = out.add(&Multiform::from_mask(n, m << (2 * n_left), c.clone()));
    }
    out
}

/// Star of a split form via the factor stars: (−1)^(k₁k₂)·(★₁u₁)∧(★₂u₂) on
/// V₁ ⊕ V₂.  Inputs must be homogeneous.
pub fn direct_sum_star(
    s1: &SymplecticSpace,
    u1: &Multiform,
    s2: &SymplecticSpace,
    u2: &Multiform,
) -> Multiform {
    let k1 = u1.grade().unwrap_or(0);
    let k2 = u2.grade().unwrap_or(0);
    let sign = if (k1 * k2) % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    let left = embed_left(&s1.star(u1), s2.n());
    let right = embed_right(&s2.star(u2), s1.n());
    left.wedge(&right).scale(&sign)
}

/// The reordered variant (★₂u₂)∧(★₁u₁); equal to `direct_sum_star` and to the
/// star computed directly on the sum space.
pub fn direct_sum_star_swapped(
    s1: &SymplecticSpace,
    u1: &Multiform,
    s2: &SymplecticSpace,
    u2: &Multiform,
) -> Multiform {
    let left = embed_left(&s1.star(u1), s2.n());
    let right = embed_right(&s2.star(u2), s1.n());
    right.wedge(&left)
}

/// JSON shape of a multiform: basis terms as sorted index lists with exact
/// numerator/denominator strings.
#[derive(Debug, Serialize, Deserialize)]
pub struct MultiformDto {
    pub n: usize,
    pub terms: Vec<MultiformTermDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MultiformTermDto {
    pub idx: Vec<usize>,
    pub num: String,
    pub den: String,
}

impl Multiform {
    pub fn to_dto(&self) -> MultiformDto {
        MultiformDto {
            n: self.n,
            terms: self
                .terms()
                .map(|(m, c)| MultiformTermDto {
                    idx: masks::bits(m).collect(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_dto(dto: &MultiformDto) -> Result<Multiform, String> {
        let mut out = Multiform::zero(dto.n);
        for t in &dto.terms {
            let mut mask = 0u32;
            for &i in &t.idx {
                if i >= 2 * dto.n {
                    return Err(format!("basis index {i} out of range for n={}", dto.n));
                }
                if mask & (1 << i) != 0 {
                    return Err(format!("repeated basis index {i}"));
                }
                mask |= 1 << i;
            }
            let num: num::BigInt = t.num.parse().map_err(|e| format!("bad numerator: {e}"))?;
            let den: num::BigInt = t.den.parse().map_err(|e| format!("bad denominator: {e}"))?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            out = out.add(&Multiform::from_mask(dto.n, mask, Rational::new(num, den)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    /// Brute-force determinant by permutation expansion — an oracle
    /// independent of the elimination code.
    fn perm_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut total = Rational::zero();
        permute(&mut idx, 0, &mut |perm, sign| {
            let mut prod = rat_int(sign);
            for (i, &j) in perm.iter().enumerate() {
                prod *= &m[i][j];
            }
            total += prod;
        });
        total
    }

    fn permute(idx: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize], i64)) {
        let n = idx.len();
        if k == n {
            let mut sign = 1i64;
            for i in 0..n {
                for j in (i + 1)..n {
                    if idx[i] > idx[j] {
                        sign = -sign;
                    }
                }
            }
            visit(idx, sign);
            return;
        }
        for i in k..n {
            idx.swap(k, i);
            permute(idx, k + 1, visit);
            idx.swap(k, i);
        }
    }

    fn basis_forms(s: &SymplecticSpace, k: usize) -> Vec<Multiform> {
        masks::masks_of_grade(s.dim(), k)
            .into_iter()
            .map(|m| Multiform::from_mask(s.n(), m, rat_int(1)))
            .collect()
    }

    #[test]
    fn flat_matches_defining_system_2x2() {
        // Oracle for n=1: solve ⟨v♭, w⟩ = ω(v, w) by hand.  With dual pairing
        // the identity matrix, v♭'s coordinates are (ω(v,X), ω(v,Y)); for
        // v = X that is (0, 1) = f¹, for v = Y it is (−1, 0) = −e¹.
        let s = SymplecticSpace::new(1);
        assert_eq!(s.flat(&s.x(1)).unwrap(), s.f(1));
        assert_eq!(s.flat(&s.y(1)).unwrap(), s.e(1).neg());
        // Round trips both ways, for n up to 3.
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            for i in 1..=n {
                assert_eq!(s.sharp(&s.flat(&s.x(i)).unwrap()).unwrap(), s.x(i));
                assert_eq!(s.sharp(&s.flat(&s.y(i)).unwrap()).unwrap(), s.y(i));
                assert_eq!(s.flat(&s.sharp(&s.e(i)).unwrap()).unwrap(), s.e(i));
                assert_eq!(s.flat(&s.sharp(&s.f(i)).unwrap()).unwrap(), s.f(i));
            }
        }
    }

    #[test]
    fn flat_rejects_higher_grades() {
        let s = SymplecticSpace::new(1);
        let bivec = s.x(1).wedge(&s.y(1));
        assert!(matches!(s.flat(&bivec), Err(ExteriorError::GradeMismatch { .. })));
    }

    #[test]
    fn pairing_on_darboux_mates() {
        let s = SymplecticSpace::new(2);
        assert_eq!(s.pairing_omega(&s.e(1), &s.f(1)).unwrap(), rat_int(1));
        assert_eq!(s.pairing_omega(&s.e(1), &s.e(1)).unwrap(), rat_int(0));
        assert_eq!(s.pairing_omega(&s.e(1), &s.f(2)).unwrap(), rat_int(0));
        assert!(s.pairing_omega(&s.e(1), &s.e(1).wedge(&s.f(1))).is_err());
    }

    #[test]
    fn pairing_symmetry_by_grade_parity() {
        // Antisymmetric on odd grades, symmetric on even grades.
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            for k in 0..=s.dim() {
                let basis = basis_forms(&s, k);
                for u in &basis {
                    for w in &basis {
                        let a = s.pairing_omega(u, w).unwrap();
                        let b = s.pairing_omega(w, u).unwrap();
                        if k % 2 == 0 {
                            assert_eq!(a, b);
                        } else {
                            assert_eq!(a, -b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_nondegenerate_every_grade() {
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            for k in 0..=s.dim() {
                let basis = basis_forms(&s, k);
                let gram = RatMatrix::from_rows(
                    basis
                        .iter()
                        .map(|u| basis.iter().map(|w| s.pairing_omega(u, w).unwrap()).collect())
                        .collect(),
                );
                assert_eq!(gram.rank(), basis.len(), "degenerate pairing at n={n}, k={k}");
            }
        }
    }

    #[test]
    fn top_pairing_against_brute_force_determinant() {
        // ω-pairing of the normalized volume with itself, cross-checked by a
        // permutation-expansion determinant.
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            let top_idx: Vec<usize> = (0..2 * n).collect();
            let gram: Vec<Vec<Rational>> = top_idx
                .iter()
                .map(|&p| top_idx.iter().map(|&q| s.omega_on_basis_covectors(p, q)).collect())
                .collect();
            let expected = perm_det(&gram);
            assert_eq!(s.pairing_omega(&s.top(), &s.top()).unwrap(), expected);
            assert_eq!(expected, rat_int(1));
        }
    }

    #[test]
    fn adjointness_of_wedge_and_contraction() {
        // ω(u∧x, y) = −ω(x, ι(u♯)y) for covectors u, exhaustively on bases.
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            let covectors: Vec<Multiform> =
                (1..=n).flat_map(|i| [s.e(i), s.f(i)]).collect();
            for k in 0..s.dim() {
                let xs = basis_forms(&s, k);
                let ys = basis_forms(&s, k + 1);
                for u in &covectors {
                    let sharp_u = s.sharp(u).unwrap();
                    for x in &xs {
                        let ux = u.wedge(x);
                        for y in &ys {
                            let lhs = s.pairing_omega(&ux, y).unwrap();
                            let rhs = -s.pairing_omega(x, &s.iota(&sharp_u, y)).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn iota_convention_on_bivectors() {
        // ι(a∧b) = ι(b)∘ι(a): for π's single term X∧Y on n=1, contracting
        // e∧f gives ι(Y)(ι(X)(e∧f)) = ι(Y)(f) = 1.
        let s = SymplecticSpace::new(1);
        let pi = s.poisson_bivector();
        assert_eq!(s.iota(&pi, &s.omega()), Multiform::one(1));
        // And ι(X)(e∧f) = f, the intermediate step.
        assert_eq!(s.iota(&s.x(1), &s.omega()), s.f(1));
    }

    #[test]
    fn star_small_examples() {
        let s = SymplecticSpace::new(1);
        assert_eq!(s.star(&Multiform::one(1)), s.top());
        assert_eq!(s.star(&s.e(1)), s.e(1));
        assert_eq!(s.star(&s.f(1)), s.f(1));
        assert_eq!(s.star(&s.top()), Multiform::one(1));
    }

    #[test]
    fn star_is_an_involution() {
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            for k in 0..=s.dim() {
                for b in basis_forms(&s, k) {
                    assert_eq!(s.star(&s.star(&b)), b, "★★ ≠ id at n={n}, k={k}");
                }
            }
        }
    }

    #[test]
    fn star_fixes_omega_powers() {
        // ★(ωᵏ/k!) = ω^(n−k)/(n−k)!.
        for n in 1..=3usize {
            let s = SymplecticSpace::new(n);
            let mut pow = Multiform::one(n);
            let mut fact = rat_int(1);
            let mut powers = vec![pow.clone()];
            for k in 1..=n {
                pow = s.wedge_omega(&pow);
                fact *= rat_int(k as i64);
                powers.push(pow.scale(&fact.recip()));
            }
            for k in 0..=n {
                assert_eq!(s.star(&powers[k]), powers[n - k], "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn direct_sum_star_both_variants() {
        // Both split formulas agree with the star computed on the sum space,
        // exhaustively over basis pairs for n₁+n₂ ≤ 3.
        for (n1, n2) in [(1, 1), (1, 2), (2, 1)] {
            let s1 = SymplecticSpace::new(n1);
            let s2 = SymplecticSpace::new(n2);
            let sum = SymplecticSpace::new(n1 + n2);
            for k1 in 0..=s1.dim() {
                for k2 in 0..=s2.dim() {
                    for u1 in basis_forms(&s1, k1) {
                        for u2 in basis_forms(&s2, k2) {
                            let split = embed_left(&u1, n2).wedge(&embed_right(&u2, n1));
                            let direct = sum.star(&split);
                            assert_eq!(direct_sum_star(&s1, &u1, &s2, &u2), direct);
                            assert_eq!(direct_sum_star_swapped(&s1, &u1, &s2, &u2), direct);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn a_operator_is_scalar_n_minus_k() {
        for n in 1..=3usize {
            let s = SymplecticSpace::new(n);
            for k in 0..=s.dim() {
                for b in basis_forms(&s, k) {
                    let expected = b.scale(&rat_int(n as i64 - k as i64));
                    assert_eq!(s.a_operator(&b), expected, "n={n}, k={k}");
                }
            }
            // Spot values: A(1) = n, A(top) = −n·top, A(e¹) = (n−1)e¹.
            assert_eq!(s.a_operator(&Multiform::one(n)), Multiform::one(n).scale(&rat_int(n as i64)));
            assert_eq!(s.a_operator(&s.top()), s.top().scale(&rat_int(-(n as i64))));
            assert_eq!(s.a_operator(&s.e(1)), s.e(1).scale(&rat_int(n as i64 - 1)));
        }
    }

    #[test]
    fn sl2_commutation_relations() {
        // [A, L] = −2L and [A, Λ] = 2Λ on every basis element.
        for n in 1..=3 {
            let s = SymplecticSpace::new(n);
            for k in 0..=s.dim() {
                for b in basis_forms(&s, k) {
                    let al = s.a_operator(&s.wedge_omega(&b)).sub(&s.wedge_omega(&s.a_operator(&b)));
                    assert_eq!(al, s.wedge_omega(&b).scale(&rat_int(-2)));
                    let alam =
                        s.a_operator(&s.contract_poisson(&b)).sub(&s.contract_poisson(&s.a_operator(&b)));
                    assert_eq!(alam, s.contract_poisson(&b).scale(&rat_int(2)));
                }
            }
        }
    }

    #[test]
    fn primitive_decomposition_reassembles() {
        for n in 1..=3usize {
            let s = SymplecticSpace::new(n);
            for k in 0..=s.dim() {
                for b in basis_forms(&s, k) {
                    let parts = s.primitive_decompose(&b);
                    let mut total = Multiform::zero(n);
                    for (j, p) in &parts {
                        assert!(s.contract_poisson(p).is_zero(), "component not primitive");
                        let mut lifted = p.clone();
                        for _ in 0..*j {
                            lifted = s.wedge_omega(&lifted);
                        }
                        total = total.add(&lifted);
                    }
                    assert_eq!(total, b);
                }
            }
        }
    }

    #[test]
    fn primitive_decomposition_of_omega() {
        // ω = L(1): a single layer at j = 1 with primitive part 1.
        let s = SymplecticSpace::new(2);
        let parts = s.primitive_decompose(&s.omega());
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, 1);
        assert_eq!(parts[0].1, Multiform::one(2));
        // e¹∧f¹ = (e¹∧f¹ − ω/2) + L(1/2) on n = 2.
        let e1f1 = s.e(1).wedge(&s.f(1));
        let parts = s.primitive_decompose(&e1f1);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 0);
        assert_eq!(parts[0].1, e1f1.sub(&s.omega().scale(&rat(1, 2))));
        assert_eq!(parts[1].0, 1);
        assert_eq!(parts[1].1, Multiform::one(2).scale(&rat(1, 2)));
    }

    #[test]
    fn multiform_json_roundtrip() {
        let s = SymplecticSpace::new(2);
        let u = s.e(1).wedge(&s.f(2)).scale(&rat(-3, 7)).add(&s.omega());
        let json = serde_json::to_string(&u.to_dto()).unwrap();
        let back = Multiform::from_dto(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, u);
        // Malformed input is rejected.
        let bad = MultiformDto {
            n: 1,
            terms: vec![MultiformTermDto { idx: vec![5], num: "1".into(), den: "1".into() }],
        };
        assert!(Multiform::from_dto(&bad).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn arb_form(n: usize) -> impl Strategy<Value = Multiform> {
        let dim = 2 * n;
        proptest::collection::vec((0u32..(1 << dim), -5i64..=5, 1i64..=3), 0..5).prop_map(
            move |terms| {
                let mut f = Multiform::zero(n);
                for (m, num, den) in terms {
                    f = f.add(&Multiform::from_mask(n, m, rat(num, den)));
                }
                f
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn wedge_is_associative(a in arb_form(2), b in arb_form(2), c in arb_form(2)) {
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        }

        #[test]
        fn wedge_is_graded_commutative(n in 1usize..=3, k1 in 0usize..=6, k2 in 0usize..=6, seed in any::<u64>()) {
            let s = SymplecticSpace::new(n);
            let dim = s.dim();
            if k1 > dim || k2 > dim { return Ok(()); }
            // Deterministic pseudo-random homogeneous picks.
            let pick = |k: usize, salt: u64| {
                let ms = masks::masks_of_grade(dim, k);
                let mut f = Multiform::zero(n);
                for (i, m) in ms.iter().enumerate() {
                    let c = ((seed ^ salt).wrapping_mul(6364136223846793005).wrapping_add(i as u64) >> 33) % 7;
                    f = f.add(&Multiform::from_mask(n, *m, rat_int(c as i64 - 3)));
                }
                f
            };
            let u = pick(k1, 1);
            let w = pick(k2, 2);
            let sign = if (k1 * k2) % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            prop_assert_eq!(u.wedge(&w), w.wedge(&u).scale(&sign));
        }

        #[test]
        fn star_involution_on_random_forms(u in arb_form(3)) {
            let s = SymplecticSpace::new(3);
            prop_assert_eq!(s.star(&s.star(&u)), u);
        }
    }
}
