//! Flat symplectic tori T² and T⁴ with trigonometric-polynomial coefficients.
//!
//! Coordinates have period 1 and the frame covector j is dxⱼ, with Darboux
//! pairs (x₂ᵢ, x₂ᵢ₊₁) and ω = Σ dx₂ᵢ∧dx₂ᵢ₊₁.  Coefficients live in the span
//! of cos(2π k·x) and sin(2π k·x) over integer frequency vectors k, kept
//! canonical by forcing the first nonzero frequency component positive.  The
//! differential is normalized so that d sin_k = Σⱼ kⱼ cos_k dxⱼ — the 2π of
//! the period-1 coordinates is absorbed once and for all, which keeps every
//! coefficient rational and rescales nothing but the overall grading of d.

use crate::form::{Coefficient, Form};
use crate::linalg::{rat, Rational};
use crate::masks;
use crate::models::{random_rational, FibreOps, ModelComplex, VectorField};
use num::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Frequency vectors are fixed-width; tori of dimension < 4 use a zero tail.
pub const MAX_VARS: usize = 4;
pub type Freq = [i64; MAX_VARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Trig {
    Cos,
    Sin,
}

/// Canonical basis key: the constant (zero-frequency cosine) sorts first,
/// then frequency, then cosine before sine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrigKey {
    pub freq: Freq,
    pub kind: Trig,
}

impl TrigKey {
    pub fn constant() -> Self {
        TrigKey { freq: [0; MAX_VARS], kind: Trig::Cos }
    }

    pub fn is_constant(&self) -> bool {
        self.freq.iter().all(|&k| k == 0)
    }
}

impl Ord for TrigKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (!self.is_constant(), self.freq, self.kind).cmp(&(
            !other.is_constant(),
            other.freq,
            other.kind,
        ))
    }
}

impl PartialOrd for TrigKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Put a raw (frequency, kind) pair into canonical position; returns the key
/// and the sign picked up, or `None` for the identically-zero sin(0).
fn canonicalize(mut freq: Freq, kind: Trig) -> Option<(TrigKey, i8)> {
    match freq.iter().find(|&&k| k != 0) {
        None => match kind {
            Trig::Cos => Some((TrigKey::constant(), 1)),
            Trig::Sin => None,
        },
        Some(&first) => {
            if first < 0 {
                for k in freq.iter_mut() {
                    *k = -*k;
                }
                let sign = if kind == Trig::Sin { -1 } else { 1 };
                Some((TrigKey { freq, kind }, sign))
            } else {
                Some((TrigKey { freq, kind }, 1))
            }
        }
    }
}

/// Finite Q-linear combination of canonical trigonometric basis functions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrigPoly {
    terms: BTreeMap<TrigKey, Rational>,
}

impl std::fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<(Rational, String)> = self
            .terms
            .iter()
            .map(|(k, c)| (c.clone(), trig_atom(k)))
            .collect();
        write!(f, "{}", crate::form::join_signed(&parts))
    }
}

/// "cos 2π(x1 − 2y1)" for the key, or the empty atom for the constant.
fn trig_atom(key: &TrigKey) -> String {
    if key.freq.iter().all(|&f| f == 0) {
        return String::new();
    }
    let names = ["x1", "y1", "x2", "y2"];
    let mut arg = String::new();
    for (v, &f) in key.freq.iter().enumerate() {
        if f == 0 {
            continue;
        }
        if arg.is_empty() {
            if f < 0 {
                arg.push('-');
            }
        } else {
            arg.push_str(if f < 0 { " - " } else { " + " });
        }
        if f.abs() != 1 {
            arg.push_str(&f.abs().to_string());
        }
        arg.push_str(names[v]);
    }
    let kind = match key.kind {
        Trig::Cos => "cos",
        Trig::Sin => "sin",
    };
    format!("{kind} 2π({arg})")
}

impl TrigPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = TrigPoly::default();
        p.add_term([0; MAX_VARS], Trig::Cos, c);
        p
    }

    pub fn cos(freq: Freq) -> Self {
        let mut p = TrigPoly::default();
        p.add_term(freq, Trig::Cos, Rational::one());
        p
    }

    pub fn sin(freq: Freq) -> Self {
        let mut p = TrigPoly::default();
        p.add_term(freq, Trig::Sin, Rational::one());
        p
    }

    pub fn add_term(&mut self, freq: Freq, kind: Trig, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some((key, sign)) = canonicalize(freq, kind) {
            let c = if sign < 0 { -c } else { c };
            let entry = self.terms.entry(key).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(&key);
            }
        }
    }

    /// Derivative in coordinate j, in units where d sin_k = kⱼ cos_k dxⱼ.
    pub fn derivative(&self, j: usize) -> TrigPoly {
        let mut out = TrigPoly::default();
        for (key, c) in &self.terms {
            let kj = Rational::from_integer(key.freq[j].into());
            match key.kind {
                Trig::Cos => out.add_term(key.freq, Trig::Sin, -(c * &kj)),
                Trig::Sin => out.add_term(key.freq, Trig::Cos, c * &kj),
            }
        }
        out
    }

    /// Torus integral with normalized volume: only the constant term survives.
    pub fn mean(&self) -> Rational {
        self.terms.get(&TrigKey::constant()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Pointwise value at x (coordinates in periods), for numeric oracles.
    pub fn eval(&self, x: &[f64; MAX_VARS]) -> f64 {
        let mut sum = 0.0;
        for (key, c) in &self.terms {
            let phase = 2.0
                * std::f64::consts::PI
                * key.freq.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum::<f64>();
            let basis = match key.kind {
                Trig::Cos => phase.cos(),
                Trig::Sin => phase.sin(),
            };
            let cf = c.numer().to_string().parse::<f64>().unwrap()
                / c.denom().to_string().parse::<f64>().unwrap();
            sum += cf * basis;
        }
        sum
    }
}

impl Coefficient for TrigPoly {
    type Key = TrigKey;

    fn zero() -> Self {
        TrigPoly::default()
    }

    fn one() -> Self {
        TrigPoly::constant(Rational::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.freq, k.kind, c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        TrigPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        // Product-to-sum: every product of two basis functions is a half-sum
        // over the frequency sum and difference.
        let mut out = TrigPoly::default();
        let half = rat(1, 2);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let c = ca * cb * &half;
                let mut sum = [0i64; MAX_VARS];
                let mut diff = [0i64; MAX_VARS];
                for i in 0..MAX_VARS {
                    sum[i] = ka.freq[i] + kb.freq[i];
                    diff[i] = ka.freq[i] - kb.freq[i];
                }
                match (ka.kind, kb.kind) {
                    (Trig::Cos, Trig::Cos) => {
                        out.add_term(diff, Trig::Cos, c.clone());
                        out.add_term(sum, Trig::Cos, c);
                    }
                    (Trig::Sin, Trig::Sin) => {
                        out.add_term(diff, Trig::Cos, c.clone());
                        out.add_term(sum, Trig::Cos, -c);
                    }
                    (Trig::Sin, Trig::Cos) => {
                        out.add_term(diff, Trig::Sin, c.clone());
                        out.add_term(sum, Trig::Sin, c);
                    }
                    (Trig::Cos, Trig::Sin) => {
                        out.add_term(sum, Trig::Sin, c.clone());
                        out.add_term(diff, Trig::Sin, -c);
                    }
                }
            }
        }
        out
    }

    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return TrigPoly::default();
        }
        TrigPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    fn decompose(&self) -> Vec<(TrigKey, Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c.clone())).collect()
    }

    fn from_term(key: &TrigKey, c: &Rational) -> Self {
        let mut p = TrigPoly::default();
        p.add_term(key.freq, key.kind, c.clone());
        p
    }

    fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let width = k
                    .freq
                    .iter()
                    .rposition(|&f| f != 0)
                    .map_or(0, |i| i + 1);
                serde_json::json!({
                    "freq": &k.freq[..width],
                    "kind": match k.kind { Trig::Cos => "cos", Trig::Sin => "sin" },
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        serde_json::json!({ "trig": terms })
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let terms = v
            .get("trig")
            .and_then(|t| t.as_array())
            .ok_or("missing trig array")?;
        let mut out = TrigPoly::default();
        for t in terms {
            let freq_arr = t.get("freq").and_then(|f| f.as_array()).ok_or("missing freq")?;
            if freq_arr.len() > MAX_VARS {
                return Err(format!("frequency vector longer than {MAX_VARS}"));
            }
            let mut freq = [0i64; MAX_VARS];
            for (i, f) in freq_arr.iter().enumerate() {
                freq[i] = f.as_i64().ok_or("freq entries must be integers")?;
            }
            let kind = match t.get("kind").and_then(|k| k.as_str()) {
                Some("cos") => Trig::Cos,
                Some("sin") => Trig::Sin,
                _ => return Err("kind must be \"cos\" or \"sin\"".into()),
            };
            let num: num::BigInt = t
                .get("num")
                .and_then(|x| x.as_str())
                .ok_or("missing num")?
                .parse()
                .map_err(|e| format!("bad num: {e}"))?;
            let den: num::BigInt = t
                .get("den")
                .and_then(|x| x.as_str())
                .ok_or("missing den")?
                .parse()
                .map_err(|e| format!("bad den: {e}"))?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            out.add_term(freq, kind, Rational::new(num, den));
        }
        Ok(out)
    }
}

/// Flat torus of dimension 2n with the standard symplectic frame.
pub struct Torus {
    fibre: FibreOps,
    name: &'static str,
    freq_cap: i64,
}

/// n = 1 gives T² (frequency window ±2), n = 2 gives T⁴ (window ±1).
pub fn flat_torus(n: usize) -> Torus {
    let (name, freq_cap) = match n {
        1 => ("flat-torus-2", 2),
        2 => ("flat-torus-4", 1),
        _ => panic!("flat torus models are provided for n = 1 and n = 2"),
    };
    Torus { fibre: FibreOps::new(n), name, freq_cap }
}

impl Torus {
    fn vars(&self) -> usize {
        2 * self.fibre.space().n()
    }

    /// All canonical keys with every frequency component in [-cap, cap],
    /// constants first.
    fn keys_within(&self, cap: i64) -> Vec<TrigKey> {
        let vars = self.vars();
        let mut keys = vec![TrigKey::constant()];
        let mut freq = [0i64; MAX_VARS];
        for f in freq.iter_mut().take(vars) {
            *f = -cap;
        }
        loop {
            if freq.iter().find(|&&k| k != 0).is_some_and(|&first| first > 0) {
                keys.push(TrigKey { freq, kind: Trig::Cos });
                keys.push(TrigKey { freq, kind: Trig::Sin });
            }
            // Odometer over the frequency box.
            let mut j = 0;
            loop {
                if j == vars {
                    keys.sort();
                    return keys;
                }
                if freq[j] < cap {
                    freq[j] += 1;
                    break;
                }
                freq[j] = -cap;
                j += 1;
            }
        }
    }

    /// Canonical keys appearing in the hints, closed under both kinds, plus
    /// the constant.  Every operator here preserves the frequency orbit, so
    /// this is a complete solve window for hint-supported right-hand sides.
    fn keys_from_hints(&self, hints: &[&Form<TrigPoly>]) -> Vec<TrigKey> {
        let mut set: BTreeMap<Freq, ()> = BTreeMap::new();
        set.insert([0; MAX_VARS], ());
        for h in hints {
            for (_, key, _) in h.support() {
                set.insert(key.freq, ());
            }
        }
        let mut keys = Vec::new();
        for freq in set.into_keys() {
            if freq.iter().all(|&k| k == 0) {
                keys.push(TrigKey::constant());
            } else {
                keys.push(TrigKey { freq, kind: Trig::Cos });
                keys.push(TrigKey { freq, kind: Trig::Sin });
            }
        }
        keys.sort();
        keys
    }

    fn basis_for_keys(&self, k: usize, keys: &[TrigKey]) -> Vec<Form<TrigPoly>> {
        let mut out = Vec::new();
        for mask in masks::masks_of_grade(self.vars(), k) {
            for key in keys {
                out.push(Form::from_part(
                    self.fibre.space().n(),
                    mask,
                    TrigPoly::from_term(key, &Rational::one()),
                ));
            }
        }
        out
    }
}

impl ModelComplex for Torus {
    type Coeff = TrigPoly;

    fn name(&self) -> &'static str {
        self.name
    }

    fn frame_labels(&self) -> Vec<&'static str> {
        let all = ["dx1", "dy1", "dx2", "dy2"];
        all[..self.vars()].to_vec()
    }

    fn fibre(&self) -> &FibreOps {
        &self.fibre
    }

    fn lefschetz_expected(&self) -> bool {
        true
    }

    fn d(&self, f: &Form<TrigPoly>) -> Form<TrigPoly> {
        let mut out = Form::zero(f.n());
        for (mask, c) in f.terms() {
            for j in 0..self.vars() {
                if let Some((m, s)) = masks::merge(1 << j, mask) {
                    let dc = c.derivative(j);
                    out.insert(m, if s < 0 { dc.neg() } else { dc });
                }
            }
        }
        out
    }

    fn integrate(&self, f: &Form<TrigPoly>) -> Rational {
        let full = (1u32 << self.vars()) - 1;
        f.coeff(full).mean()
    }

    fn grade_basis(&self, k: usize) -> Vec<Form<TrigPoly>> {
        self.basis_for_keys(k, &self.keys_within(self.freq_cap))
    }

    fn solve_basis(&self, k: usize, hints: &[&Form<TrigPoly>]) -> Vec<Form<TrigPoly>> {
        self.basis_for_keys(k, &self.keys_from_hints(hints))
    }

    fn random_form(&self, k: usize, rng: &mut ChaCha8Rng) -> Form<TrigPoly> {
        let masks = masks::masks_of_grade(self.vars(), k);
        let mut out = Form::zero(self.fibre.space().n());
        for _ in 0..rng.gen_range(1..=3) {
            let mask = masks[rng.gen_range(0..masks.len())];
            let mut freq = [0i64; MAX_VARS];
            for f in freq.iter_mut().take(self.vars()) {
                *f = rng.gen_range(-self.freq_cap..=self.freq_cap);
            }
            let kind = if rng.gen_bool(0.5) { Trig::Cos } else { Trig::Sin };
            let mut p = TrigPoly::default();
            p.add_term(freq, kind, random_rational(rng));
            out.insert(mask, p);
        }
        out
    }

    fn random_function(&self, rng: &mut ChaCha8Rng) -> Form<TrigPoly> {
        self.random_form(0, rng)
    }

    fn hamiltonian_field(&self, f: &Form<TrigPoly>) -> VectorField<TrigPoly> {
        assert!(f.is_zero() || f.grade() == Some(0), "hamiltonian field of a function");
        let c = f.coeff(0);
        let mut field = Vec::new();
        for i in 0..self.fibre.space().n() {
            // sharp(dx₂ᵢ) = −Y_{i+1}, sharp(dx₂ᵢ₊₁) = X_{i+1}.
            let dx_even = c.derivative(2 * i);
            let dx_odd = c.derivative(2 * i + 1);
            if !dx_odd.is_zero() {
                field.push((2 * i, dx_odd));
            }
            if !dx_even.is_zero() {
                field.push((2 * i + 1, dx_even.neg()));
            }
        }
        field
    }

    fn invariant_ok(&self, f: &Form<TrigPoly>) -> bool {
        f.support()
            .iter()
            .all(|(_, key, _)| key.freq[self.vars()..].iter().all(|&k| k == 0))
    }
}
