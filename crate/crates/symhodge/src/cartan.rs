//! The Cartan complex of a circle action: polynomial forms in one
//! equivariant parameter u of degree 2, with the twisted differential
//! d_G = d + ∂ where ∂ multiplies by u and contracts with the generating
//! vector field.  Built on top of any model that carries group data.

use std::collections::{BTreeMap, BTreeSet};

use crate::form::{Coefficient, Form};
use crate::linalg::{rat, rat_int, PivotOrder, RatMatrix, Rational, Subspace};
use crate::models::{form_from_json, form_to_json, GroupData, ModelComplex, ModelError};
use crate::solvers::{ExactnessRoute, SolveError};
use num::Zero;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// A polynomial in u with form coefficients, graded by total degree
/// 2·(u-exponent) + form grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqForm<C: Coefficient> {
    n: usize,
    terms: BTreeMap<u32, Form<C>>,
}

impl<C: Coefficient> EqForm<C> {
    pub fn zero(n: usize) -> Self {
        EqForm { n, terms: BTreeMap::new() }
    }

    pub fn from_form(f: &Form<C>) -> Self {
        let mut out = EqForm::zero(f.n());
        out.insert(0, f.clone());
        out
    }

    pub fn term(exp: u32, f: &Form<C>) -> Self {
        let mut out = EqForm::zero(f.n());
        out.insert(exp, f.clone());
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate a coefficient form at the given u-exponent.
    pub fn insert(&mut self, exp: u32, f: Form<C>) {
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(|| Form::zero(self.n));
        *entry = entry.add(&f);
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// The coefficient form at u^exp (zero when absent).
    pub fn coefficient(&self, exp: u32) -> Form<C> {
        self.terms.get(&exp).cloned().unwrap_or_else(|| Form::zero(self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &Form<C>)> {
        self.terms.iter()
    }

    pub fn max_u_exponent(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, f) in &other.terms {
            out.insert(*e, f.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = EqForm::zero(self.n);
        for (e, f) in &self.terms {
            out.insert(*e, f.neg());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = EqForm::zero(self.n);
        for (e, f) in &self.terms {
            out.insert(*e, f.scale(c));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = EqForm::zero(self.n);
        for (e1, f1) in &self.terms {
            for (e2, f2) in &other.terms {
                out.insert(e1 + e2, f1.wedge(f2));
            }
        }
        out
    }

    /// Total degree when homogeneous, counting u with weight 2.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for (e, f) in &self.terms {
            for k in f.graded_parts().keys() {
                let total = 2 * (*e as usize) + k;
                match deg {
                    None => deg = Some(total),
                    Some(d) if d != total => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    /// Split into homogeneous pieces by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, EqForm<C>> {
        let mut out: BTreeMap<usize, EqForm<C>> = BTreeMap::new();
        for (e, f) in &self.terms {
            for (k, part) in f.graded_parts() {
                out.entry(2 * (*e as usize) + k)
                    .or_insert_with(|| EqForm::zero(self.n))
                    .insert(*e, part);
            }
        }
        out
    }

    fn support(&self) -> Vec<(u32, u32, C::Key, Rational)> {
        let mut out = Vec::new();
        for (e, f) in &self.terms {
            for (mask, key, value) in f.support() {
                out.push((*e, mask, key, value));
            }
        }
        out
    }
}

/// A flat coordinate system over the scalar slots (u-exponent, frame mask,
/// coefficient key) touched by a family of equivariant forms.
struct EqChart<K: Ord + Clone> {
    keys: Vec<(u32, u32, K)>,
    index: BTreeMap<(u32, u32, K), usize>,
}

impl<K: Ord + Clone> EqChart<K> {
    fn from_eqforms<'a, C>(forms: impl IntoIterator<Item = &'a EqForm<C>>) -> Self
    where
        C: Coefficient<Key = K> + 'a,
    {
        let mut set = BTreeSet::new();
        for f in forms {
            for (e, mask, key, _) in f.support() {
                set.insert((e, mask, key));
            }
        }
        let keys: Vec<_> = set.into_iter().collect();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        EqChart { keys, index }
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn coords<C: Coefficient<Key = K>>(&self, f: &EqForm<C>) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.keys.len()];
        for (e, mask, key, value) in f.support() {
            let slot = self.index.get(&(e, mask, key))?;
            v[*slot] = value;
        }
        Some(v)
    }
}

fn eq_combine<C: Coefficient>(basis: &[EqForm<C>], coeffs: &[Rational]) -> EqForm<C> {
    let n = basis.first().map_or(0, EqForm::n);
    let mut out = EqForm::zero(n);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&b.scale(c));
        }
    }
    out
}

fn eq_operator_matrix<C: Coefficient>(
    images: &[EqForm<C>],
    chart: &EqChart<C::Key>,
) -> RatMatrix {
    let cols: Vec<Vec<Rational>> = images
        .iter()
        .map(|f| chart.coords(f).expect("chart must cover every operator image"))
        .collect();
    RatMatrix::from_columns(cols, chart.len())
}

fn eq_joint_kernel<C: Coefficient>(image_sets: &[Vec<EqForm<C>>]) -> Vec<Vec<Rational>> {
    let cols = image_sets.first().map_or(0, Vec::len);
    let charts: Vec<EqChart<C::Key>> =
        image_sets.iter().map(|imgs| EqChart::from_eqforms(imgs.iter())).collect();
    let rows = charts.iter().map(EqChart::len).sum();
    let mut m = RatMatrix::zero(rows, cols);
    let mut offset = 0;
    for (imgs, chart) in image_sets.iter().zip(&charts) {
        for (i, f) in imgs.iter().enumerate() {
            let coords = chart.coords(f).expect("chart covers its own forms");
            for (r, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(offset + r, i, v);
                }
            }
        }
        offset += chart.len();
    }
    m.kernel()
}

fn eq_solve_in_window<C: Coefficient>(
    window: &[EqForm<C>],
    images: &[EqForm<C>],
    rhs: &EqForm<C>,
    order: PivotOrder,
) -> Option<EqForm<C>> {
    let chart = EqChart::from_eqforms(images.iter().chain(std::iter::once(rhs)));
    let m = eq_operator_matrix(images, &chart);
    let b = chart.coords(rhs).expect("chart covers the right-hand side");
    let x = m.solve(&b, order)?;
    Some(eq_combine(window, &x))
}

/// The Cartan complex of a model with a circle action.
pub struct Cartan<'a, M: ModelComplex> {
    model: &'a M,
    group: &'a GroupData<M::Coeff>,
    /// Total degrees are truncated at this bound (u-degree ≤ bound/2).
    pub degree_bound: usize,
}

pub const DEFAULT_DEGREE_BOUND: usize = 6;

impl<'a, M: ModelComplex> Cartan<'a, M> {
    pub fn new(model: &'a M) -> Result<Self, SolveError> {
        Self::with_degree_bound(model, DEFAULT_DEGREE_BOUND)
    }

    pub fn with_degree_bound(model: &'a M, degree_bound: usize) -> Result<Self, SolveError> {
        let group = model.group_data().ok_or(SolveError::NoGroupData)?;
        Ok(Cartan { model, group, degree_bound })
    }

    pub fn model(&self) -> &M {
        self.model
    }

    pub fn moment(&self) -> Form<M::Coeff> {
        self.group.moment.clone()
    }

    /// The standard equivariant extension ω + u·φ of the symplectic form.
    pub fn omega_g(&self) -> EqForm<M::Coeff> {
        let mut out = EqForm::from_form(&self.model.omega_form());
        out.insert(1, self.group.moment.clone());
        out
    }

    /// The horizontal piece: d applied to every u-coefficient.
    pub fn d_vert(&self, a: &EqForm<M::Coeff>) -> EqForm<M::Coeff> {
        let mut out = EqForm::zero(a.n());
        for (e, f) in a.terms() {
            out.insert(*e, self.model.d(f));
        }
        out
    }

    /// The twist: ∂(u^i ⊗ α) = −u^{i+1} ⊗ ι(ξ)α.
    pub fn partial(&self, a: &EqForm<M::Coeff>) -> EqForm<M::Coeff> {
        let mut out = EqForm::zero(a.n());
        for (e, f) in a.terms() {
            out.insert(e + 1, self.model.iota_field(&self.group.field, f).neg());
        }
        out
    }

    /// The equivariant differential d_G = d + ∂; raises total degree by 1.
    pub fn d_g(&self, a: &EqForm<M::Coeff>) -> EqForm<M::Coeff> {
        self.d_vert(a).add(&self.partial(a))
    }

    /// The Koszul boundary extended u-linearly; lowers total degree by 1.
    pub fn delta_equiv(&self, a: &EqForm<M::Coeff>) -> EqForm<M::Coeff> {
        let mut out = EqForm::zero(a.n());
        for (e, f) in a.terms() {
            out.insert(*e, self.model.delta(f));
        }
        out
    }

    /// Evaluation at u = 0: the cochain-level projection back to plain forms.
    pub fn projection_p(&self, a: &EqForm<M::Coeff>) -> Form<M::Coeff> {
        a.coefficient(0)
    }

    /// Basis of the total-degree-k slice: u^i ⊗ (grade k−2i window).
    pub fn grade_basis(&self, k: usize) -> Vec<EqForm<M::Coeff>> {
        let mut out = Vec::new();
        for i in 0..=(k / 2) as u32 {
            let j = k - 2 * i as usize;
            for f in self.model.grade_basis(j) {
                out.push(EqForm::term(i, &f));
            }
        }
        out
    }

    /// Like `grade_basis` but widened around the coefficient forms of the
    /// hints, so preimage searches cannot silently miss a solution.
    pub fn solve_basis(
        &self,
        k: usize,
        hints: &[&EqForm<M::Coeff>],
    ) -> Vec<EqForm<M::Coeff>> {
        let coefficient_hints: Vec<Form<M::Coeff>> = hints
            .iter()
            .flat_map(|h| h.terms().map(|(_, f)| f.clone()))
            .collect();
        let refs: Vec<&Form<M::Coeff>> = coefficient_hints.iter().collect();
        let mut out = Vec::new();
        for i in 0..=(k / 2) as u32 {
            let j = k - 2 * i as usize;
            for f in self.model.solve_basis(j, &refs) {
                out.push(EqForm::term(i, &f));
            }
        }
        out
    }

    /// Random homogeneous element of total degree k.
    pub fn random_eqform(&self, k: usize, rng: &mut ChaCha8Rng) -> EqForm<M::Coeff> {
        let mut out = EqForm::zero(self.model.half_dim());
        for i in 0..=(k / 2) as u32 {
            let j = k - 2 * i as usize;
            out.insert(i, self.model.random_form(j, rng));
        }
        out
    }

    /// Kernel/image quotient of d_G at total degree k.
    pub fn equivariant_cohomology(&self, k: usize) -> EqCohomologyBasis<M::Coeff> {
        let window = self.grade_basis(k);
        let images: Vec<_> = window.iter().map(|f| self.d_g(f)).collect();
        let cycles: Vec<EqForm<M::Coeff>> = eq_joint_kernel(&[images])
            .iter()
            .map(|v| eq_combine(&window, v))
            .collect();
        let boundary_span: Vec<EqForm<M::Coeff>> = if k == 0 {
            Vec::new()
        } else {
            let refs: Vec<&EqForm<M::Coeff>> = window.iter().collect();
            self.solve_basis(k - 1, &refs)
                .iter()
                .map(|w| self.d_g(w))
                .filter(|f| !f.is_zero())
                .collect()
        };
        quotient(k, cycles, boundary_span)
    }

    /// Kernel/image quotient of the u-linear Koszul boundary at degree k.
    pub fn delta_homology(&self, k: usize) -> EqCohomologyBasis<M::Coeff> {
        let window = self.grade_basis(k);
        let images: Vec<_> = window.iter().map(|f| self.delta_equiv(f)).collect();
        let cycles: Vec<EqForm<M::Coeff>> = eq_joint_kernel(&[images])
            .iter()
            .map(|v| eq_combine(&window, v))
            .collect();
        let refs: Vec<&EqForm<M::Coeff>> = window.iter().collect();
        let boundary_span: Vec<EqForm<M::Coeff>> = self
            .solve_basis(k + 1, &refs)
            .iter()
            .map(|w| self.delta_equiv(w))
            .filter(|f| !f.is_zero())
            .collect();
        quotient(k, cycles, boundary_span)
    }

    /// Dimensions predicted by equivariant formality: H_G ≅ H(M) ⊗ Q[u]
    /// as graded vector spaces.
    pub fn formality_prediction(&self, k: usize) -> usize {
        let mut total = 0;
        for i in 0..=(k / 2) {
            let j = k - 2 * i;
            if j <= self.model.top_grade() {
                total +=
                    crate::solvers::cohomology(self.model, j, crate::solvers::Differential::D)
                        .dim();
            }
        }
        total
    }

    /// Exhaustively check ∂δ = −δ∂ and d_Gδ = −δd_G on every window
    /// element of every total degree up to the bound.
    pub fn anticommute_check(&self) -> AnticommuteReport {
        let mut checked = 0;
        for k in 0..=self.degree_bound {
            for f in self.grade_basis(k) {
                let lhs1 = self.partial(&self.delta_equiv(&f));
                let rhs1 = self.delta_equiv(&self.partial(&f)).neg();
                if lhs1 != rhs1 {
                    return AnticommuteReport { checked, ok: false };
                }
                let lhs2 = self.d_g(&self.delta_equiv(&f));
                let rhs2 = self.delta_equiv(&self.d_g(&f)).neg();
                if lhs2 != rhs2 {
                    return AnticommuteReport { checked, ok: false };
                }
                checked += 1;
            }
        }
        AnticommuteReport { checked, ok: true }
    }

    /// For each degree, do d and ∂ induce the zero map on δ-homology?
    /// Both vanishing for every class is the formality mechanism.
    pub fn induced_maps_on_delta_homology(&self) -> Vec<InducedMapRow> {
        let mut rows = Vec::new();
        for k in 0..=self.degree_bound.saturating_sub(1) {
            let here = self.delta_homology(k);
            let above = self.delta_homology(k + 1);
            let mut d_vanishes = true;
            let mut partial_vanishes = true;
            for rep in &here.reps {
                let dv = self.d_vert(rep);
                if !dv.is_zero() && above.is_zero_class(&dv) != Some(true) {
                    d_vanishes = false;
                }
                let pv = self.partial(rep);
                if !pv.is_zero() && above.is_zero_class(&pv) != Some(true) {
                    partial_vanishes = false;
                }
            }
            rows.push(InducedMapRow { degree: k, classes: here.dim(), d_vanishes, partial_vanishes });
        }
        rows
    }

    /// Extend a closed invariant form to an equivariantly closed one by the
    /// chain recursion dζ_j = ι(ξ)ζ_{j−1}, without canonicity constraints.
    pub fn zeta_chain_extend(
        &self,
        alpha: &Form<M::Coeff>,
    ) -> Result<EqForm<M::Coeff>, SolveError> {
        if !self.model.d(alpha).is_zero() {
            return Err(SolveError::NotClosed);
        }
        let mut out = EqForm::from_form(alpha);
        let mut prev = alpha.clone();
        let mut exp = 1u32;
        loop {
            let rhs = self.model.iota_field(&self.group.field, &prev);
            if rhs.is_zero() {
                break;
            }
            let g = rhs.grade().expect("nonzero contraction has a grade");
            if g == 0 {
                return Err(SolveError::Insoluble);
            }
            let window = self.model.solve_basis(g - 1, &[&prev, &rhs]);
            let images: Vec<_> = window.iter().map(|w| self.model.d(w)).collect();
            let zeta = solve_window_forms(&window, &images, &rhs, PivotOrder::Forward)
                .ok_or(SolveError::Insoluble)?;
            out.insert(exp, zeta.clone());
            prev = zeta;
            exp += 1;
        }
        assert!(self.d_g(&out).is_zero(), "substitution check: extension must be d_G-closed");
        Ok(out)
    }

    /// The canonical extension: each higher coefficient is taken coexact
    /// (δ of something, or mean-free in degree zero), which pins the class.
    pub fn canonical_section(
        &self,
        alpha: &Form<M::Coeff>,
        order: PivotOrder,
    ) -> Result<SectionCertificate<M::Coeff>, SolveError> {
        if !self.model.d(alpha).is_zero() {
            return Err(SolveError::NotClosed);
        }
        let mut out = EqForm::from_form(alpha);
        let mut chi = Vec::new();
        let mut prev = alpha.clone();
        let mut exp = 1u32;
        loop {
            let rhs = self.model.iota_field(&self.group.field, &prev);
            if rhs.is_zero() {
                break;
            }
            let g = rhs.grade().expect("nonzero contraction has a grade");
            let zeta = if g == 1 {
                // Degree-zero coefficient: solve dζ = rhs, then remove the
                // Liouville mean so that ζ is a Koszul boundary.
                let window = self.model.solve_basis(0, &[&prev, &rhs]);
                let images: Vec<_> = window.iter().map(|w| self.model.d(w)).collect();
                let raw = solve_window_forms(&window, &images, &rhs, order)
                    .ok_or(SolveError::Insoluble)?;
                let mean = self.model.mean(&raw);
                if !mean.is_zero() {
                    chi.push((exp, mean.clone()));
                }
                let ones = crate::models::const_form::<M::Coeff>(
                    &crate::exterior::Multiform::one(self.model.half_dim()),
                );
                raw.sub(&ones.scale(&mean))
            } else {
                // Higher degree: take ζ = δβ directly, solving dδβ = rhs.
                let window = self.model.solve_basis(g, &[&prev, &rhs]);
                let images: Vec<_> =
                    window.iter().map(|w| self.model.d(&self.model.delta(w))).collect();
                let beta = solve_window_forms(&window, &images, &rhs, order)
                    .ok_or(SolveError::Insoluble)?;
                self.model.delta(&beta)
            };
            out.insert(exp, zeta.clone());
            prev = zeta;
            exp += 1;
        }
        assert!(self.d_g(&out).is_zero(), "substitution check: section must be d_G-closed");
        Ok(SectionCertificate { alpha_g: out, chi })
    }

    /// The canonical extension data for the square of the symplectic class:
    /// the moment chain φ₀, φ₁, the scalar obstruction χ₁ (a Liouville
    /// mean), the next potential φ₂, and the assembled representative
    /// ω² + 2δ(ω∧φ₁)·u + 2δφ₂·u² certified equivariantly closed.
    pub fn omega_squared_section(
        &self,
        order: PivotOrder,
    ) -> Result<OmegaSquaredSection<M::Coeff>, SolveError> {
        let omega = self.model.omega_form();
        let phi0 = self.group.moment.clone();

        // φ₁ with δφ₁ = φ₀.
        let window = self.model.solve_basis(1, &[&phi0]);
        let images: Vec<_> = window.iter().map(|w| self.model.delta(w)).collect();
        let phi1 = solve_window_forms(&window, &images, &phi0, order)
            .ok_or(SolveError::Insoluble)?;

        // The u²-coefficient source ½φ₀² − ∂φ₁; its mean is the obstruction.
        let half = rat(1, 2);
        let partial_phi1 = self.model.iota_field(&self.group.field, &phi1).neg();
        let source = phi0.wedge(&phi0).scale(&half).sub(&partial_phi1);
        let chi1 = self.model.mean(&source);
        let ones = crate::models::const_form::<M::Coeff>(&crate::exterior::Multiform::one(
            self.model.half_dim(),
        ));
        let reduced = source.sub(&ones.scale(&chi1));

        // φ₂ with δφ₂ = ½φ₀² − ∂φ₁ − χ₁.
        let window = self.model.solve_basis(1, &[&reduced]);
        let images: Vec<_> = window.iter().map(|w| self.model.delta(w)).collect();
        let phi2 = solve_window_forms(&window, &images, &reduced, order)
            .ok_or(SolveError::Insoluble)?;

        let two = rat_int(2);
        let mut rep = EqForm::from_form(&omega.wedge(&omega));
        rep.insert(1, self.model.delta(&omega.wedge(&phi1)).scale(&two));
        rep.insert(2, self.model.delta(&phi2).scale(&two));
        assert!(
            self.d_g(&rep).is_zero(),
            "substitution check: assembled representative must be d_G-closed"
        );
        Ok(OmegaSquaredSection { phi0, phi1, chi1, phi2, rep })
    }

    /// Solve α = d_G δ β for an equivariantly closed, coclosed α that is
    /// d_G-exact or δ-exact; handles each homogeneous piece separately.
    pub fn dg_delta_solve(
        &self,
        alpha: &EqForm<M::Coeff>,
    ) -> Result<EqDdeltaCertificate<M::Coeff>, SolveError> {
        if alpha.is_zero() {
            return Ok(EqDdeltaCertificate {
                beta: EqForm::zero(alpha.n()),
                routes: Vec::new(),
            });
        }
        if !self.d_g(alpha).is_zero() {
            return Err(SolveError::NotClosed);
        }
        if !self.delta_equiv(alpha).is_zero() {
            return Err(SolveError::NotCoclosed);
        }
        let mut beta = EqForm::zero(alpha.n());
        let mut routes = Vec::new();
        for (k, part) in alpha.homogeneous_parts() {
            let route = self.eq_exactness_route(&part, k).ok_or(SolveError::NotExactOrCoexact)?;
            let window = self.solve_basis(k, &[&part]);
            let images: Vec<_> =
                window.iter().map(|w| self.d_g(&self.delta_equiv(w))).collect();
            let b = eq_solve_in_window(&window, &images, &part, PivotOrder::Forward)
                .ok_or(SolveError::Insoluble)?;
            beta = beta.add(&b);
            routes.push((k, route));
        }
        assert_eq!(
            self.d_g(&self.delta_equiv(&beta)),
            *alpha,
            "substitution check: d_Gδβ must reproduce the input"
        );
        Ok(EqDdeltaCertificate { beta, routes })
    }

    fn eq_exactness_route(&self, part: &EqForm<M::Coeff>, k: usize) -> Option<ExactnessRoute> {
        if k > 0 {
            let below = self.solve_basis(k - 1, &[part]);
            let images: Vec<_> = below.iter().map(|w| self.d_g(w)).collect();
            if eq_solve_in_window(&below, &images, part, PivotOrder::Forward).is_some() {
                return Some(ExactnessRoute::Exact);
            }
        }
        let above = self.solve_basis(k + 1, &[part]);
        let images: Vec<_> = above.iter().map(|w| self.delta_equiv(w)).collect();
        if eq_solve_in_window(&above, &images, part, PivotOrder::Forward).is_some() {
            return Some(ExactnessRoute::Coexact);
        }
        None
    }

    /// Draw random β₀, set α = d_Gδβ₀, and require the solver to recover
    /// some β; retries the draw when the seeded α degenerates to zero.
    pub fn seeded_dg_delta_suite(
        &self,
        grades: &[usize],
        per_grade: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<crate::solvers::SeededStats, (usize, EqForm<M::Coeff>)> {
        let mut stats = crate::solvers::SeededStats { attempted: 0, solved: 0 };
        for &k in grades {
            for _ in 0..per_grade {
                let mut alpha = EqForm::zero(self.model.half_dim());
                for _ in 0..10 {
                    let beta0 = self.random_eqform(k, rng);
                    alpha = self.d_g(&self.delta_equiv(&beta0));
                    if !alpha.is_zero() {
                        break;
                    }
                }
                stats.attempted += 1;
                match self.dg_delta_solve(&alpha) {
                    Ok(_) => stats.solved += 1,
                    Err(_) => return Err((k, alpha)),
                }
            }
        }
        Ok(stats)
    }

    /// The failure of multiplicativity: [ω_G]^{n+1} is nonzero while the
    /// canonical extension of [ω]^{n+1} represents zero.
    pub fn non_multiplicativity_witness(&self) -> Result<NonMultWitness, SolveError> {
        let n = self.model.half_dim();
        let omega_g = self.omega_g();
        let mut power = EqForm::from_form(&crate::models::const_form::<M::Coeff>(
            &crate::exterior::Multiform::one(n),
        ));
        for _ in 0..=n {
            power = power.wedge(&omega_g);
        }
        let degree = 2 * (n + 1);
        let basis = self.equivariant_cohomology(degree);
        let power_coords =
            basis.class_coords(&power).expect("powers of ω_G are equivariantly closed");

        let mut base_power = crate::models::const_form::<M::Coeff>(
            &crate::exterior::Multiform::one(n),
        );
        let omega = self.model.omega_form();
        for _ in 0..=n {
            base_power = base_power.wedge(&omega);
        }
        let section = self.canonical_section(&base_power, PivotOrder::Forward)?;
        let section_coords = basis
            .class_coords(&section.alpha_g)
            .expect("the canonical extension is equivariantly closed");
        let distinct = power_coords != section_coords;
        Ok(NonMultWitness { degree, power: power_coords, section: section_coords, distinct })
    }
}

/// Solve op(x) = rhs over plain forms (same pattern as the solver layer,
/// but with a caller-chosen pivot order).
fn solve_window_forms<C: Coefficient>(
    window: &[Form<C>],
    images: &[Form<C>],
    rhs: &Form<C>,
    order: PivotOrder,
) -> Option<Form<C>> {
    let chart = crate::form::Chart::from_forms(images.iter().chain(std::iter::once(rhs)));
    let m = crate::form::operator_matrix(images, &chart);
    let b = chart.coords(rhs).expect("chart covers the right-hand side");
    let x = m.solve(&b, order)?;
    Some(crate::form::combine(window, &x))
}

fn quotient<C: Coefficient>(
    grade: usize,
    cycles: Vec<EqForm<C>>,
    boundary_span: Vec<EqForm<C>>,
) -> EqCohomologyBasis<C> {
    let chart = EqChart::from_eqforms(cycles.iter().chain(boundary_span.iter()));
    let mut seen = Subspace::empty(chart.len());
    for b in &boundary_span {
        seen.insert(&chart.coords(b).expect("chart covers boundaries"));
    }
    let mut reps = Vec::new();
    for z in cycles {
        if seen.insert(&chart.coords(&z).expect("chart covers cycles")) {
            reps.push(z);
        }
    }
    EqCohomologyBasis { grade, reps, boundary_span }
}

/// A computed equivariant quotient basis at one total degree.
pub struct EqCohomologyBasis<C: Coefficient> {
    pub grade: usize,
    pub reps: Vec<EqForm<C>>,
    boundary_span: Vec<EqForm<C>>,
}

impl<C: Coefficient> EqCohomologyBasis<C> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn class_coords(&self, f: &EqForm<C>) -> Option<Vec<Rational>> {
        let mut generators: Vec<EqForm<C>> = self.reps.clone();
        generators.extend(self.boundary_span.iter().cloned());
        let chart = EqChart::from_eqforms(generators.iter().chain(std::iter::once(f)));
        let m = eq_operator_matrix(&generators, &chart);
        let b = chart.coords(f).expect("chart covers the queried form");
        let x = m.solve(&b, PivotOrder::Forward)?;
        Some(x[..self.reps.len()].to_vec())
    }

    pub fn is_zero_class(&self, f: &EqForm<C>) -> Option<bool> {
        Some(self.class_coords(f)?.iter().all(|c| c.is_zero()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticommuteReport {
    pub checked: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMapRow {
    pub degree: usize,
    pub classes: usize,
    pub d_vanishes: bool,
    pub partial_vanishes: bool,
}

pub struct SectionCertificate<C: Coefficient> {
    pub alpha_g: EqForm<C>,
    /// Liouville means removed along the way, keyed by u-exponent.
    pub chi: Vec<(u32, Rational)>,
}

pub struct OmegaSquaredSection<C: Coefficient> {
    pub phi0: Form<C>,
    pub phi1: Form<C>,
    pub chi1: Rational,
    pub phi2: Form<C>,
    pub rep: EqForm<C>,
}

#[derive(Debug)]
pub struct EqDdeltaCertificate<C: Coefficient> {
    pub beta: EqForm<C>,
    pub routes: Vec<(usize, ExactnessRoute)>,
}

/// Class coordinates, in the same equivariant basis, of [ω_G]^{n+1} and of
/// the canonical extension of [ω^{n+1}].
#[derive(Debug, Clone)]
pub struct NonMultWitness {
    pub degree: usize,
    pub power: Vec<Rational>,
    pub section: Vec<Rational>,
    pub distinct: bool,
}

/// Human-readable rendering: "(ω-part) + u·(…) + u^2·(…)".
pub fn render_eqform<M: ModelComplex>(model: &M, a: &EqForm<M::Coeff>) -> String
where
    M::Coeff: std::fmt::Display,
{
    if a.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = a
        .terms()
        .map(|(e, f)| {
            let body = crate::models::render_form(model, f);
            match e {
                0 => body,
                1 => format!("u·({body})"),
                _ => format!("u^{e}·({body})"),
            }
        })
        .collect();
    parts.join(" + ")
}

pub fn eqform_to_json<C: Coefficient>(a: &EqForm<C>, poly_degree_bound: usize) -> Value {
    let terms: Vec<Value> = a
        .terms()
        .map(|(e, f)| json!({ "u_exps": [e], "form": form_to_json(f) }))
        .collect();
    json!({ "poly_degree_bound": poly_degree_bound, "terms": terms })
}

pub fn eqform_from_json<M: ModelComplex>(
    model: &M,
    v: &Value,
) -> Result<EqForm<M::Coeff>, ModelError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ModelError::BadForm("equivariant form must be a JSON object".into()))?;
    let bound = obj
        .get("poly_degree_bound")
        .and_then(Value::as_u64)
        .ok_or_else(|| ModelError::BadForm("missing integer poly_degree_bound".into()))?;
    if bound > 64 {
        return Err(ModelError::BadForm("poly_degree_bound is unreasonably large".into()));
    }
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| ModelError::BadForm("missing terms array".into()))?;
    let mut out = EqForm::zero(model.half_dim());
    for t in terms {
        let exps = t
            .get("u_exps")
            .and_then(Value::as_array)
            .ok_or_else(|| ModelError::BadForm("term missing u_exps".into()))?;
        if exps.len() != 1 {
            return Err(ModelError::BadForm(
                "u_exps must list exactly one exponent for a circle action".into(),
            ));
        }
        let e = exps[0]
            .as_u64()
            .ok_or_else(|| ModelError::BadForm("u exponent must be a nonnegative integer".into()))?;
        if e > bound {
            return Err(ModelError::BadForm("u exponent exceeds poly_degree_bound".into()));
        }
        let form_value = t
            .get("form")
            .ok_or_else(|| ModelError::BadForm("term missing its form".into()))?;
        let f = form_from_json(model, form_value)?;
        out.insert(e as u32, f);
    }
    Ok(out)
}
