//! Constant-coefficient complexes defined by structure tables, and the
//! four-dimensional nilmanifold that breaks hard-Lefschetz expectations.
//!
//! A structure table assigns to each frame covector a constant 2-form, its
//! exterior derivative; d extends as a degree-1 derivation.  The constructor
//! rejects tables whose derivation fails d² = 0, or whose symplectic frame
//! form is not closed.  Cohomology of such a complex computes the de Rham
//! cohomology of the corresponding compact homogeneous space.

use crate::form::{Coefficient, ConstCoeff, Form};
use crate::linalg::Rational;
use crate::masks;
use crate::models::{random_rational, FibreOps, ModelComplex, ModelError, VectorField};
use num::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct CEComplex {
    fibre: FibreOps,
    name: &'static str,
    /// d of each frame covector, indexed by frame position.
    d_gen: Vec<Form<ConstCoeff>>,
    lefschetz: bool,
}

impl CEComplex {
    pub fn new(
        name: &'static str,
        n: usize,
        d_gen: Vec<Form<ConstCoeff>>,
        lefschetz: bool,
    ) -> Result<Self, ModelError> {
        if d_gen.len() != 2 * n {
            return Err(ModelError::InvalidStructure(format!(
                "structure table needs {} entries, got {}",
                2 * n,
                d_gen.len()
            )));
        }
        for (q, img) in d_gen.iter().enumerate() {
            if !img.is_zero() && img.grade() != Some(2) {
                return Err(ModelError::InvalidStructure(format!(
                    "d of frame covector {q} must be a 2-form"
                )));
            }
        }
        let model = CEComplex { fibre: FibreOps::new(n), name, d_gen, lefschetz };
        // A derivation squares to zero everywhere iff it does on generators.
        for q in 0..2 * n {
            let gen = Form::from_part(n, 1 << q, ConstCoeff::one());
            if !model.d(&model.d(&gen)).is_zero() {
                return Err(ModelError::InvalidStructure(format!(
                    "structure table violates d² = 0 on frame covector {q}"
                )));
            }
        }
        if !model.d(&model.omega_form()).is_zero() {
            return Err(ModelError::InvalidStructure(
                "the symplectic frame form is not closed".into(),
            ));
        }
        if model.volume() != Rational::one() {
            return Err(ModelError::InvalidStructure(
                "normalized volume must be 1 on the frame".into(),
            ));
        }
        Ok(model)
    }
}

/// The standard 4-dimensional nilmanifold: frame (α, γ, β, τ) in storage
/// order with the single relation dγ = α∧β, and ω = α∧γ + β∧τ.  Its first
/// cohomology is 3-dimensional — odd — which forces the failure of both the
/// hard Lefschetz property and the existence of harmonic representatives.
pub fn kodaira_thurston() -> CEComplex {
    let n = 2;
    let mut d_gen = vec![Form::zero(n); 4];
    // Frames: 0 = α, 1 = γ, 2 = β, 3 = τ; α∧β occupies bits {0, 2}.
    d_gen[1] = Form::from_part(n, 0b0101, ConstCoeff::one());
    CEComplex::new("kodaira-thurston", n, d_gen, false)
        .expect("the nilmanifold structure table is consistent")
}

impl ModelComplex for CEComplex {
    type Coeff = ConstCoeff;

    fn name(&self) -> &'static str {
        self.name
    }

    fn frame_labels(&self) -> Vec<&'static str> {
        vec!["α", "γ", "β", "τ"]
    }

    fn fibre(&self) -> &FibreOps {
        &self.fibre
    }

    fn lefschetz_expected(&self) -> bool {
        self.lefschetz
    }

    fn d(&self, f: &Form<ConstCoeff>) -> Form<ConstCoeff> {
        let n = self.half_dim();
        let mut out = Form::zero(n);
        for (mask, c) in f.terms() {
            for q in masks::bits(mask) {
                if self.d_gen[q].is_zero() {
                    continue;
                }
                // d(x_{q₁}∧…∧x_{q_k}) picks up the parity of the slot; the
                // 2-form image then commutes freely to the front.
                let (rest, sign) = masks::contract(mask, q).expect("bit is present");
                let scaled = if sign < 0 { c.neg() } else { c.clone() };
                let term = self.d_gen[q].wedge(&Form::from_part(n, rest, scaled));
                out = out.add(&term);
            }
        }
        out
    }

    fn integrate(&self, f: &Form<ConstCoeff>) -> Rational {
        let full = (1u32 << (2 * self.half_dim())) - 1;
        f.coeff(full).0
    }

    fn grade_basis(&self, k: usize) -> Vec<Form<ConstCoeff>> {
        masks::masks_of_grade(2 * self.half_dim(), k)
            .into_iter()
            .map(|m| Form::from_part(self.half_dim(), m, ConstCoeff::one()))
            .collect()
    }

    fn solve_basis(&self, k: usize, _hints: &[&Form<ConstCoeff>]) -> Vec<Form<ConstCoeff>> {
        self.grade_basis(k)
    }

    fn random_form(&self, k: usize, rng: &mut ChaCha8Rng) -> Form<ConstCoeff> {
        let masks = masks::masks_of_grade(2 * self.half_dim(), k);
        let mut out = Form::zero(self.half_dim());
        for _ in 0..rng.gen_range(1..=3) {
            let mask = masks[rng.gen_range(0..masks.len())];
            out.insert(mask, ConstCoeff(random_rational(rng)));
        }
        out
    }

    fn random_function(&self, rng: &mut ChaCha8Rng) -> Form<ConstCoeff> {
        Form::from_function(self.half_dim(), ConstCoeff(random_rational(rng)))
    }

    fn hamiltonian_field(&self, f: &Form<ConstCoeff>) -> VectorField<ConstCoeff> {
        assert!(f.is_zero() || f.grade() == Some(0), "hamiltonian field of a function");
        // Functions on the frame are constants; their gradient vanishes.
        Vec::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat_int;
    use rand::SeedableRng;

    #[test]
    fn structure_table_validation() {
        let n = 2;
        // dβ = −γ∧β together with dγ = α∧τ breaks d² = 0.
        let mut bad = vec![Form::zero(n); 4];
        bad[2] = Form::from_part(n, 0b0110, ConstCoeff(rat_int(-1)));
        bad[1] = Form::from_part(n, 0b1001, ConstCoeff::one());
        assert!(matches!(
            CEComplex::new("bad", n, bad, false),
            Err(ModelError::InvalidStructure(msg)) if msg.contains("d² = 0")
        ));
        // dτ = α∧γ keeps d² = 0 but opens the symplectic form.
        let mut unsympl = vec![Form::zero(n); 4];
        unsympl[3] = Form::from_part(n, 0b0011, ConstCoeff::one());
        assert!(matches!(
            CEComplex::new("bad", n, unsympl, false),
            Err(ModelError::InvalidStructure(msg)) if msg.contains("not closed")
        ));
        // Wrong arity.
        assert!(CEComplex::new("bad", n, vec![Form::zero(n); 3], false).is_err());
    }

    #[test]
    fn nilmanifold_derivative_spot_values() {
        let kt = kodaira_thurston();
        let gamma = Form::from_part(2, 0b0010, ConstCoeff::one());
        // dγ = α∧β.
        assert_eq!(kt.d(&gamma), Form::from_part(2, 0b0101, ConstCoeff::one()));
        // d(γ∧τ) = α∧β∧τ, the mixed term the derivation rule must produce.
        let gt = Form::from_part(2, 0b1010, ConstCoeff::one());
        assert_eq!(kt.d(&gt), Form::from_part(2, 0b1101, ConstCoeff::one()));
        // α, β, τ are closed.
        for q in [0usize, 2, 3] {
            assert!(kt.d(&Form::from_part(2, 1 << q, ConstCoeff::one())).is_zero());
        }
    }

    #[test]
    fn d_is_a_derivation_squaring_to_zero() {
        let kt = kodaira_thurston();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..=4usize {
            let a = kt.random_form(k, &mut rng);
            let b = kt.random_form(1, &mut rng);
            assert!(kt.d(&kt.d(&a)).is_zero());
            let lhs = kt.d(&a.wedge(&b));
            let da_b = kt.d(&a).wedge(&b);
            let a_db = a.wedge(&kt.d(&b));
            let rhs = if k % 2 == 0 { da_b.add(&a_db) } else { da_b.sub(&a_db) };
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn symplectic_normalizations() {
        let kt = kodaira_thurston();
        assert!(kt.d(&kt.omega_form()).is_zero());
        assert_eq!(kt.volume(), rat_int(1));
        assert_eq!(kt.integrate(&kt.omega_form().wedge(&kt.omega_form())), rat_int(2));
    }

    #[test]
    fn codifferential_routes_agree_and_one_forms_are_coclosed() {
        let kt = kodaira_thurston();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for k in 0..=4 {
            for _ in 0..5 {
                let a = kt.random_form(k, &mut rng);
                assert_eq!(kt.delta(&a), kt.delta_poisson(&a), "routes differ at grade {k}");
                assert!(kt.delta(&kt.delta(&a)).is_zero());
            }
        }
        // Every frame 1-form is coclosed; failure of harmonic representatives
        // must therefore sit in higher grades.
        for q in 0..4usize {
            let e = Form::from_part(2, 1 << q, ConstCoeff::one());
            assert!(kt.delta(&e).is_zero(), "frame covector {q} not coclosed");
        }
    }

    #[test]
    fn grade_basis_matches_binomials() {
        let kt = kodaira_thurston();
        for (k, dim) in [(0usize, 1usize), (1, 4), (2, 6), (3, 4), (4, 1)] {
            assert_eq!(kt.grade_basis(k).len(), dim);
        }
    }
}
