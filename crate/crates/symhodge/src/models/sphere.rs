//! The unit sphere with its rotation-invariant area form.
//!
//! In cylindrical coordinates (z, θ) — height and angle, θ of period 1 — the
//! area form is ω = dz∧dθ, with total area 2.  The rotation-invariant
//! subcomplex has coefficients that are polynomials in z alone; a dθ-term is
//! admissible only when its coefficient carries the factor (1−z²), which is
//! what smoothness across the poles demands of an invariant 1-form.  The
//! frame is Darboux: e¹ = dz, f¹ = dθ.  The circle action rotates θ with
//! generating field −∂θ scaled so that ι(ξ)dθ = −1, and its moment map is z.

use crate::form::{Coefficient, Form};
use crate::linalg::Rational;
use crate::models::{random_rational, FibreOps, GroupData, ModelComplex, VectorField};
use num::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Dense univariate polynomial in z with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyZ {
    /// coeffs[i] multiplies z^i; trailing zeros are trimmed.
    coeffs: Vec<Rational>,
}

impl std::fmt::Display for PolyZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<(Rational, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| {
                let atom = match p {
                    0 => String::new(),
                    1 => "z".to_string(),
                    _ => format!("z^{p}"),
                };
                (c.clone(), atom)
            })
            .collect();
        write!(f, "{}", crate::form::join_signed(&parts))
    }
}

impl PolyZ {
    pub fn constant(c: Rational) -> Self {
        let mut p = PolyZ { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn z() -> Self {
        PolyZ::monomial(1, Rational::one())
    }

    pub fn monomial(pow: usize, c: Rational) -> Self {
        if c.is_zero() {
            return PolyZ::default();
        }
        let mut coeffs = vec![Rational::zero(); pow + 1];
        coeffs[pow] = c;
        PolyZ { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, pow: usize) -> Rational {
        self.coeffs.get(pow).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn derivative(&self) -> PolyZ {
        let mut out = PolyZ::default();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out = out.add(&PolyZ::monomial(i - 1, c * Rational::from_integer(i.into())));
        }
        out
    }

    /// ∫₋₁¹ p(z) dz.
    pub fn integral_sym(&self) -> Rational {
        let mut total = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                total += c * crate::linalg::rat(2, (i + 1) as i64);
            }
        }
        total
    }

    /// Quotient q with self = (1−z²)·q, when the factor divides exactly.
    pub fn divide_by_pole_weight(&self) -> Option<PolyZ> {
        let mut rem = self.clone();
        let mut quot = PolyZ::default();
        while let Some(deg) = rem.degree() {
            if deg < 2 {
                return None;
            }
            // Leading term of (1−z²) is −z².
            let t = PolyZ::monomial(deg - 2, -rem.coeff(deg));
            let weight = PolyZ::constant(Rational::one()).add(&PolyZ::monomial(2, -Rational::one()));
            rem = rem.add(&t.mul(&weight).neg());
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let mut sum = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let cf = c.numer().to_string().parse::<f64>().unwrap()
                / c.denom().to_string().parse::<f64>().unwrap();
            sum += cf * z.powi(i as i32);
        }
        sum
    }
}

impl Coefficient for PolyZ {
    type Key = usize;

    fn zero() -> Self {
        PolyZ::default()
    }

    fn one() -> Self {
        PolyZ::constant(Rational::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        let mut p = PolyZ { coeffs };
        p.trim();
        p
    }

    fn neg(&self) -> Self {
        PolyZ { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyZ::default();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = PolyZ { coeffs };
        p.trim();
        p
    }

    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PolyZ::default();
        }
        PolyZ { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    fn decompose(&self) -> Vec<(usize, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }

    fn from_term(key: &usize, c: &Rational) -> Self {
        PolyZ::monomial(*key, c.clone())
    }

    fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .decompose()
            .into_iter()
            .map(|(i, c)| {
                serde_json::json!({
                    "pow": i,
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        serde_json::json!({ "poly": terms })
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let terms = v.get("poly").and_then(|t| t.as_array()).ok_or("missing poly array")?;
        let mut out = PolyZ::default();
        for t in terms {
            let pow = t.get("pow").and_then(|p| p.as_u64()).ok_or("missing pow")? as usize;
            if pow > 64 {
                return Err("polynomial degree out of range".into());
            }
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
            out = out.add(&PolyZ::monomial(pow, Rational::new(num, den)));
        }
        Ok(out)
    }
}

const DZ: u32 = 0b01;
const DTHETA: u32 = 0b10;
const TOP: u32 = 0b11;

/// The rotation-invariant complex of the unit sphere.
pub struct Sphere {
    fibre: FibreOps,
    /// Default z-degree window for grade bases.
    cap: usize,
    group: GroupData<PolyZ>,
}

pub fn sphere_s1() -> Sphere {
    sphere_s1_with_window(8)
}

pub fn sphere_s1_with_window(cap: usize) -> Sphere {
    assert!(cap >= 2, "window must admit the pole-weight factor");
    let group = GroupData {
        field: vec![(1, PolyZ::constant(-Rational::one()))],
        moment: Form::from_function(1, PolyZ::z()),
    };
    Sphere { fibre: FibreOps::new(1), cap, group }
}

impl Sphere {
    /// A dθ-coefficient must factor through (1−z²); this rebuilds the factor.
    fn pole_weight() -> PolyZ {
        PolyZ::constant(Rational::one()).add(&PolyZ::monomial(2, -Rational::one()))
    }

    fn basis_for_cap(&self, k: usize, cap: usize) -> Vec<Form<PolyZ>> {
        let mut out = Vec::new();
        let mono = |pow: usize| PolyZ::monomial(pow, Rational::one());
        match k {
            0 => {
                for j in 0..=cap + 1 {
                    out.push(Form::from_function(1, mono(j)));
                }
            }
            1 => {
                for j in 0..=cap {
                    out.push(Form::from_part(1, DZ, mono(j)));
                }
                for j in 0..cap {
                    out.push(Form::from_part(1, DTHETA, Self::pole_weight().mul(&mono(j))));
                }
            }
            2 => {
                for j in 0..=cap {
                    out.push(Form::from_part(1, TOP, mono(j)));
                }
            }
            _ => {}
        }
        out
    }

    fn random_poly(rng: &mut ChaCha8Rng, maxdeg: usize) -> PolyZ {
        let mut p = PolyZ::default();
        for _ in 0..rng.gen_range(1..=3) {
            let pow = rng.gen_range(0..=maxdeg);
            p = p.add(&PolyZ::monomial(pow, random_rational(rng)));
        }
        p
    }
}

impl ModelComplex for Sphere {
    type Coeff = PolyZ;

    fn name(&self) -> &'static str {
        "sphere-s1"
    }

    fn frame_labels(&self) -> Vec<&'static str> {
        vec!["dz", "dθ"]
    }

    fn fibre(&self) -> &FibreOps {
        &self.fibre
    }

    fn lefschetz_expected(&self) -> bool {
        true
    }

    fn d(&self, f: &Form<PolyZ>) -> Form<PolyZ> {
        // Coefficients depend on z only, so d = dz ∧ ∂_z; dz is the frame
        // covector of lowest index, hence no reordering sign.
        let mut out = Form::zero(1);
        for (mask, c) in f.terms() {
            if mask & DZ == 0 {
                out.insert(mask | DZ, c.derivative());
            }
        }
        out
    }

    fn integrate(&self, f: &Form<PolyZ>) -> Rational {
        // The angular integral contributes a factor of 1 (period-1 θ).
        f.coeff(TOP).integral_sym()
    }

    fn grade_basis(&self, k: usize) -> Vec<Form<PolyZ>> {
        self.basis_for_cap(k, self.cap)
    }

    fn solve_basis(&self, k: usize, hints: &[&Form<PolyZ>]) -> Vec<Form<PolyZ>> {
        let hint_deg = hints
            .iter()
            .flat_map(|h| h.support())
            .map(|(_, pow, _)| pow)
            .max()
            .unwrap_or(0);
        self.basis_for_cap(k, self.cap.max(hint_deg + 4))
    }

    fn random_form(&self, k: usize, rng: &mut ChaCha8Rng) -> Form<PolyZ> {
        let mut out = Form::zero(1);
        match k {
            0 => out.insert(0, Self::random_poly(rng, 4)),
            1 => {
                out.insert(DZ, Self::random_poly(rng, 3));
                out.insert(DTHETA, Self::pole_weight().mul(&Self::random_poly(rng, 2)));
            }
            2 => out.insert(TOP, Self::random_poly(rng, 4)),
            _ => {}
        }
        out
    }

    fn random_function(&self, rng: &mut ChaCha8Rng) -> Form<PolyZ> {
        self.random_form(0, rng)
    }

    fn hamiltonian_field(&self, f: &Form<PolyZ>) -> VectorField<PolyZ> {
        assert!(f.is_zero() || f.grade() == Some(0), "hamiltonian field of a function");
        // df = f′dz and sharp(dz) = −Y₁, so v_f rides the dθ-dual frame
        // vector with coefficient −f′.
        let fp = f.coeff(0).derivative();
        if fp.is_zero() {
            Vec::new()
        } else {
            vec![(1, fp.neg())]
        }
    }

    fn invariant_ok(&self, f: &Form<PolyZ>) -> bool {
        f.terms()
            .all(|(m, c)| m != DTHETA || c.divide_by_pole_weight().is_some() || c.is_zero())
    }

    fn group_data(&self) -> Option<&GroupData<PolyZ>> {
        Some(&self.group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_int};
    use crate::models::form_from_json;
    use rand::SeedableRng;

    #[test]
    fn polynomial_arithmetic_matches_numeric_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = Sphere::random_poly(&mut rng, 5);
            let b = Sphere::random_poly(&mut rng, 5);
            for t in 0..5 {
                let z = -0.9 + 0.45 * t as f64;
                let prod = a.mul(&b).eval_f64(z);
                assert!((prod - a.eval_f64(z) * b.eval_f64(z)).abs() < 1e-9);
                let h = 1e-6;
                let numeric = (a.eval_f64(z + h) - a.eval_f64(z - h)) / (2.0 * h);
                assert!((a.derivative().eval_f64(z) - numeric).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn symmetric_integral_oracle() {
        // ∫₋₁¹ z² dz = 2/3, odd powers vanish.
        assert_eq!(PolyZ::monomial(2, rat_int(1)).integral_sym(), rat(2, 3));
        assert_eq!(PolyZ::monomial(3, rat_int(5)).integral_sym(), rat_int(0));
        assert_eq!(PolyZ::constant(rat_int(1)).integral_sym(), rat_int(2));
    }

    #[test]
    fn pole_weight_division() {
        let g = PolyZ::monomial(1, rat_int(3)).add(&PolyZ::constant(rat(1, 2)));
        let b = Sphere::pole_weight().mul(&g);
        assert_eq!(b.divide_by_pole_weight(), Some(g));
        assert_eq!(PolyZ::z().divide_by_pole_weight(), None);
        assert_eq!(PolyZ::monomial(2, rat_int(1)).divide_by_pole_weight(), None);
    }

    #[test]
    fn d_squares_to_zero_and_closes_the_window() {
        let s = sphere_s1();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 0..=2 {
            let a = s.random_form(k, &mut rng);
            assert!(s.d(&s.d(&a)).is_zero());
            assert!(s.invariant_ok(&s.d(&a)), "d leaves the invariant complex at grade {k}");
            assert!(s.invariant_ok(&s.delta(&a)), "δ leaves the invariant complex at grade {k}");
        }
        // The default windows are closed under both d and δ.
        for k in 0..=2usize {
            let basis = s.grade_basis(k);
            if k < 2 {
                let chart = crate::form::Chart::from_forms(s.grade_basis(k + 1).iter());
                for b in &basis {
                    assert!(chart.coords(&s.d(b)).is_some(), "d escapes window at grade {k}");
                }
            }
            if k > 0 {
                let chart = crate::form::Chart::from_forms(s.grade_basis(k - 1).iter());
                for b in &basis {
                    assert!(chart.coords(&s.delta(b)).is_some(), "δ escapes window at grade {k}");
                }
            }
        }
    }

    #[test]
    fn both_codifferential_routes_agree() {
        let s = sphere_s1();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for k in 0..=2 {
            for _ in 0..6 {
                let a = s.random_form(k, &mut rng);
                assert_eq!(s.delta(&a), s.delta_poisson(&a), "routes differ at grade {k}");
                assert!(s.delta(&s.delta(&a)).is_zero());
            }
        }
    }

    #[test]
    fn codifferential_spot_values() {
        let s = sphere_s1();
        // δ(b dθ) = b′ and δ(a dz) = 0.
        let b = Sphere::pole_weight();
        let one_form = Form::from_part(1, DTHETA, b.clone());
        assert_eq!(s.delta(&one_form), Form::from_function(1, b.derivative()));
        let adz = Form::from_part(1, DZ, PolyZ::z());
        assert!(s.delta(&adz).is_zero());
        // δ(fω) = −df for functions f: the symplectic star exchanges the
        // two descriptions of multiplication by ω.
        let f = PolyZ::monomial(3, rat(2, 5));
        let f_omega = Form::from_part(1, TOP, f.clone());
        assert_eq!(s.delta(&f_omega), Form::from_part(1, DZ, f.derivative().neg()));
    }

    #[test]
    fn codifferential_is_a_twisted_derivation() {
        let s = sphere_s1();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in 0..=2 {
            for _ in 0..5 {
                let f = s.random_function(&mut rng);
                let alpha = s.random_form(k, &mut rng);
                assert!(s.delta_leibniz_defect(&f, &alpha).is_zero(), "defect at grade {k}");
            }
        }
    }

    #[test]
    fn area_and_means() {
        let s = sphere_s1();
        assert_eq!(s.volume(), rat_int(2));
        let z2 = Form::from_function(1, PolyZ::monomial(2, rat_int(1)));
        assert_eq!(s.mean(&z2), rat(1, 3));
        // Height has mean zero: it is a codifferential.
        let z = Form::from_function(1, PolyZ::z());
        assert_eq!(s.function_integral(&z), rat_int(0));
    }

    #[test]
    fn moment_map_generates_the_rotation() {
        let s = sphere_s1();
        let gd = s.group_data().unwrap();
        // dφ = ι(ξ)ω for the moment map φ = z.
        let lhs = s.d(&gd.moment);
        let rhs = s.iota_field(&gd.field, &s.omega_form());
        assert_eq!(lhs, rhs);
        // And φ = z is exactly the Hamiltonian of the field.
        assert_eq!(s.hamiltonian_field(&gd.moment), gd.field);
    }

    #[test]
    fn window_sizes() {
        let s = sphere_s1_with_window(4);
        assert_eq!(s.grade_basis(0).len(), 6); // 1..z⁵
        assert_eq!(s.grade_basis(1).len(), 5 + 4);
        assert_eq!(s.grade_basis(2).len(), 5);
        let deep_hint = Form::from_function(1, PolyZ::monomial(9, rat_int(1)));
        assert_eq!(s.solve_basis(0, &[&deep_hint]).len(), 15); // cap 13 ⇒ degree ≤ 14
    }

    #[test]
    fn json_rejects_bare_angular_terms() {
        let s = sphere_s1();
        let good = Form::from_part(1, DTHETA, Sphere::pole_weight());
        let v = crate::models::form_to_json(&good);
        assert_eq!(form_from_json(&s, &v).unwrap(), good);
        let bad = serde_json::json!({
            "grade": 1,
            "terms": [ { "coeff": { "poly": [ { "pow": 0, "num": "1", "den": "1" } ] }, "frame": [1] } ]
        });
        assert!(form_from_json(&s, &bad).is_err());
    }
}
