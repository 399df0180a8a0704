//! Graded forms with coefficients in an exact ring.
//!
//! A model complex is Λ(frame) ⊗ R for a coefficient ring R (rationals,
//! trigonometric polynomials, polynomials in z).  `Form<C>` keeps one R-value
//! per frame mask; `Chart` flattens a set of forms onto a finite Q-basis
//! (frame mask × coefficient key) so kernels and solves can run in `linalg`.

use crate::linalg::{RatMatrix, Rational};
use crate::masks;
use num::Zero;
use std::collections::BTreeMap;
use std::fmt::Debug;

/// Exact coefficient ring with a canonical Q-basis.
pub trait Coefficient: Clone + PartialEq + Eq + Debug {
    /// Canonical basis key; ordering fixes every enumeration downstream.
    type Key: Ord + Clone + Debug;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Expansion on the canonical basis; no zero coefficients, keys strictly
    /// ascending.
    fn decompose(&self) -> Vec<(Self::Key, Rational)>;
    fn from_term(key: &Self::Key, c: &Rational) -> Self;
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self, String>;
}

/// Render a Q-linear combination of atoms ("z^2", "cos 2π(x1)", …) with
/// signs folded into the separators; an empty atom stands for the unit.
pub(crate) fn join_signed(parts: &[(Rational, String)]) -> String {
    use num::{One, Signed};
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, atom)) in parts.iter().enumerate() {
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        if atom.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(atom);
        } else {
            out.push_str(&format!("{mag}·{atom}"));
        }
    }
    out
}

/// Constant coefficients: the ring is Q itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstCoeff(pub Rational);

impl std::fmt::Display for ConstCoeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", join_signed(&[(self.0.clone(), String::new())]))
    }
}

impl Coefficient for ConstCoeff {
    type Key = ();

    fn zero() -> Self {
        ConstCoeff(Rational::zero())
    }

    fn one() -> Self {
        ConstCoeff(Rational::from_integer(1.into()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        ConstCoeff(&self.0 + &other.0)
    }

    fn neg(&self) -> Self {
        ConstCoeff(-self.0.clone())
    }

    fn mul(&self, other: &Self) -> Self {
        ConstCoeff(&self.0 * &other.0)
    }

    fn scale(&self, c: &Rational) -> Self {
        ConstCoeff(&self.0 * c)
    }

    fn decompose(&self) -> Vec<((), Rational)> {
        if self.0.is_zero() {
            Vec::new()
        } else {
            vec![((), self.0.clone())]
        }
    }

    fn from_term(_key: &(), c: &Rational) -> Self {
        ConstCoeff(c.clone())
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "num": self.0.numer().to_string(), "den": self.0.denom().to_string() })
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let num: num::BigInt = v
            .get("num")
            .and_then(|x| x.as_str())
            .ok_or("missing num")?
            .parse()
            .map_err(|e| format!("bad num: {e}"))?;
        let den: num::BigInt = v
            .get("den")
            .and_then(|x| x.as_str())
            .ok_or("missing den")?
            .parse()
            .map_err(|e| format!("bad den: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(ConstCoeff(Rational::new(num, den)))
    }
}

/// Sparse graded form over a 2n-dimensional frame with coefficients in C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form<C: Coefficient> {
    n: usize,
    terms: BTreeMap<u32, C>,
}

impl<C: Coefficient> Form<C> {
    pub fn zero(n: usize) -> Self {
        Form { n, terms: BTreeMap::new() }
    }

    pub fn from_part(n: usize, mask: u32, coeff: C) -> Self {
        let mut f = Form::zero(n);
        f.insert(mask, coeff);
        f
    }

    /// Grade-0 form holding a single ring element.
    pub fn from_function(n: usize, coeff: C) -> Self {
        Form::from_part(n, 0, coeff)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, mask: u32, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            None => {
                self.terms.insert(mask, coeff);
            }
            Some(existing) => {
                let sum = existing.add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(mask, sum);
                }
            }
        }
    }

    pub fn coeff(&self, mask: u32) -> C {
        self.terms.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &C)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|m| masks::grade(*m));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn graded_parts(&self) -> BTreeMap<usize, Form<C>> {
        let mut out: BTreeMap<usize, Form<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(masks::grade(*m)).or_insert_with(|| Form::zero(self.n)).insert(*m, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Form<C>) -> Form<C> {
        assert_eq!(self.n, other.n, "frame mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form<C>) -> Form<C> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form<C> {
        Form { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Form<C> {
        if r.is_zero() {
            return Form::zero(self.n);
        }
        Form { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, c.scale(r))).collect() }
    }

    pub fn scale_coeff(&self, c: &C) -> Form<C> {
        let mut out = Form::zero(self.n);
        for (m, v) in &self.terms {
            out.insert(*m, v.mul(c));
        }
        out
    }

    pub fn wedge(&self, other: &Form<C>) -> Form<C> {
        assert_eq!(self.n, other.n, "frame mismatch");
        let mut out = Form::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, s)) = masks::merge(*ma, *mb) {
                    let prod = ca.mul(cb);
                    out.insert(m, if s < 0 { prod.neg() } else { prod });
                }
            }
        }
        out
    }

    /// Replace each frame mask by a constant-coefficient image (a fibrewise
    /// linear operator such as the star), keeping coefficients.
    pub fn map_frame(&self, image: impl Fn(u32) -> crate::exterior::Multiform) -> Form<C> {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            for (m2, r) in image(*m).terms() {
                out.insert(m2, c.scale(r));
            }
        }
        out
    }

    /// All (mask, key, value) triples of the flattened Q-expansion.
    pub fn support(&self) -> Vec<(u32, C::Key, Rational)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for (k, v) in c.decompose() {
                out.push((*m, k, v));
            }
        }
        out
    }
}

/// A finite Q-basis of (frame mask, coefficient key) slots covering a family
/// of forms, with deterministic ordering.
#[derive(Debug, Clone)]
pub struct Chart<K: Ord + Clone> {
    keys: Vec<(u32, K)>,
    index: BTreeMap<(u32, K), usize>,
}

impl<K: Ord + Clone + Debug> Chart<K> {
    pub fn from_forms<'a, C>(forms: impl IntoIterator<Item = &'a Form<C>>) -> Self
    where
        C: Coefficient<Key = K> + 'a,
    {
        let mut set: BTreeMap<(u32, K), ()> = BTreeMap::new();
        for f in forms {
            for (m, k, _) in f.support() {
                set.insert((m, k), ());
            }
        }
        let keys: Vec<(u32, K)> = set.into_keys().collect();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Chart { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Coordinates of a form, or `None` when its support leaves the chart.
    pub fn coords<C>(&self, f: &Form<C>) -> Option<Vec<Rational>>
    where
        C: Coefficient<Key = K>,
    {
        let mut v = vec![Rational::zero(); self.keys.len()];
        for (m, k, val) in f.support() {
            let i = self.index.get(&(m, k))?;
            v[*i] = val;
        }
        Some(v)
    }
}

/// Columns = chart coordinates of `images`; panics if the chart misses them.
pub fn operator_matrix<C: Coefficient>(
    images: &[Form<C>],
    chart: &Chart<C::Key>,
) -> RatMatrix {
    let cols = images
        .iter()
        .map(|f| chart.coords(f).expect("chart must cover all operator images"))
        .collect();
    RatMatrix::from_columns(cols, chart.len())
}

/// Σᵢ coeffs[i]·basis[i].
pub fn combine<C: Coefficient>(basis: &[Form<C>], coeffs: &[Rational]) -> Form<C> {
    assert_eq!(basis.len(), coeffs.len(), "coefficient count mismatch");
    let n = basis.first().map_or(0, Form::n);
    let mut out = Form::zero(n);
    for (b, c) in basis.iter().zip(coeffs) {
        out = out.add(&b.scale(c));
    }
    out
}
