//! Hodge-theoretic solvers over model complexes.
//!
//! Everything here reduces an existence statement to an exact linear solve
//! over a finite window of the model: cohomology as a kernel/image quotient,
//! harmonic representatives, the dδ-equation, and contraction solves.  Every
//! output is re-verified by substitution before being returned; insolubility
//! inside a window is conclusive because the model's solve windows are closed
//! under the relevant operators and contain all potential preimages.

use crate::form::{combine, Chart, Coefficient, Form};
use crate::linalg::{PivotOrder, RatMatrix, Rational, Subspace};
use crate::models::ModelComplex;
use num::Zero;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("input form is not closed")]
    NotClosed,
    #[error("input form is not coclosed")]
    NotCoclosed,
    #[error("input form is neither exact nor coexact")]
    NotExactOrCoexact,
    #[error("no solution exists in the verification window")]
    Insoluble,
    #[error("model carries no group action data")]
    NoGroupData,
}

/// Which complex a quotient is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Differential {
    /// Ordinary cohomology of d.
    D,
    /// Homology of the Koszul boundary δ.
    Delta,
    /// d-cohomology of the subcomplex ker δ.
    DOnDeltaKernel,
}

impl Differential {
    pub fn label(self) -> &'static str {
        match self {
            Differential::D => "d",
            Differential::Delta => "delta",
            Differential::DOnDeltaKernel => "d-on-delta-kernel",
        }
    }
}

/// A computed quotient basis at one grade: independent representatives plus
/// a spanning set of the boundary space, kept for membership queries.
pub struct CohomologyBasis<C: Coefficient> {
    pub model_name: &'static str,
    pub grade: usize,
    pub differential: Differential,
    pub reps: Vec<Form<C>>,
    boundary_span: Vec<Form<C>>,
}

impl<C: Coefficient> CohomologyBasis<C> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle's class in the representative basis; `None`
    /// when the form is not a cycle of this window (or leaves it).
    pub fn class_coords(&self, f: &Form<C>) -> Option<Vec<Rational>> {
        let mut generators: Vec<Form<C>> = self.reps.clone();
        generators.extend(self.boundary_span.iter().cloned());
        let chart = Chart::from_forms(generators.iter().chain(std::iter::once(f)));
        let m = crate::form::operator_matrix(&generators, &chart);
        let b = chart.coords(f).expect("chart covers the queried form");
        let x = m.solve(&b, PivotOrder::Forward)?;
        Some(x[..self.reps.len()].to_vec())
    }

    /// Whether a cycle represents the zero class.
    pub fn is_zero_class(&self, f: &Form<C>) -> Option<bool> {
        Some(self.class_coords(f)?.iter().all(Zero::is_zero))
    }
}

fn hint_refs<C: Coefficient>(window: &[Form<C>]) -> Vec<&Form<C>> {
    window.iter().collect()
}

/// Coefficient vectors over the window killed by every listed operator.
fn joint_kernel<C: Coefficient>(image_sets: &[Vec<Form<C>>]) -> Vec<Vec<Rational>> {
    let cols = image_sets.first().map_or(0, Vec::len);
    let charts: Vec<Chart<C::Key>> =
        image_sets.iter().map(|imgs| Chart::from_forms(imgs.iter())).collect();
    let rows = charts.iter().map(Chart::len).sum();
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

/// Solve op(x) = rhs with x constrained to the span of `window`, given the
/// images op(window[i]); returns the assembled solution.
fn solve_in_window<C: Coefficient>(
    window: &[Form<C>],
    images: &[Form<C>],
    rhs: &Form<C>,
    order: PivotOrder,
) -> Option<Form<C>> {
    let chart = Chart::from_forms(images.iter().chain(std::iter::once(rhs)));
    let m = crate::form::operator_matrix(images, &chart);
    let b = chart.coords(rhs).expect("chart covers the right-hand side");
    let x = m.solve(&b, order)?;
    Some(combine(window, &x))
}

/// Kernel/image quotient of the chosen differential at grade k, over the
/// model's default window (cycles) and a hint-sized window (boundaries).
pub fn cohomology<M: ModelComplex>(
    model: &M,
    k: usize,
    differential: Differential,
) -> CohomologyBasis<M::Coeff> {
    let window = model.grade_basis(k);

    let cycle_vectors = match differential {
        Differential::D => {
            let images: Vec<_> = window.iter().map(|f| model.d(f)).collect();
            joint_kernel(&[images])
        }
        Differential::Delta => {
            let images: Vec<_> = window.iter().map(|f| model.delta(f)).collect();
            joint_kernel(&[images])
        }
        Differential::DOnDeltaKernel => {
            let d_images: Vec<_> = window.iter().map(|f| model.d(f)).collect();
            let delta_images: Vec<_> = window.iter().map(|f| model.delta(f)).collect();
            joint_kernel(&[d_images, delta_images])
        }
    };
    let cycles: Vec<Form<M::Coeff>> =
        cycle_vectors.iter().map(|v| combine(&window, v)).collect();

    let hints = hint_refs(&window);
    let boundary_span: Vec<Form<M::Coeff>> = match differential {
        Differential::D => {
            if k == 0 {
                Vec::new()
            } else {
                model.solve_basis(k - 1, &hints).iter().map(|w| model.d(w)).collect()
            }
        }
        Differential::Delta => model
            .solve_basis(k + 1, &hints)
            .iter()
            .map(|w| model.delta(w))
            .collect(),
        Differential::DOnDeltaKernel => {
            if k == 0 {
                Vec::new()
            } else {
                // Boundaries come only from coclosed potentials.
                let below = model.solve_basis(k - 1, &hints);
                let delta_images: Vec<_> = below.iter().map(|f| model.delta(f)).collect();
                joint_kernel(&[delta_images])
                    .iter()
                    .map(|v| model.d(&combine(&below, v)))
                    .collect()
            }
        }
    };
    let boundary_span: Vec<Form<M::Coeff>> =
        boundary_span.into_iter().filter(|f| !f.is_zero()).collect();

    // Greedy quotient: a cycle represents a new class when it grows the span.
    let chart = Chart::from_forms(cycles.iter().chain(boundary_span.iter()));
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

    CohomologyBasis { model_name: model.name(), grade: k, differential, reps, boundary_span }
}

#[derive(Debug, Clone)]
pub struct LefschetzStep {
    pub k: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub iso: bool,
}

#[derive(Debug, Clone)]
pub struct LefschetzReport {
    pub steps: Vec<LefschetzStep>,
    pub all_iso: bool,
}

/// Rank of cupping with ω^k from grade n−k to grade n+k, for every k ≤ n.
pub fn strong_lefschetz_check<M: ModelComplex>(model: &M) -> LefschetzReport {
    let n = model.half_dim();
    let omega = model.omega_form();
    let mut steps = Vec::new();
    for k in 0..=n {
        let source = cohomology(model, n - k, Differential::D);
        let target = cohomology(model, n + k, Differential::D);
        let mut power = crate::models::const_form::<M::Coeff>(&crate::exterior::Multiform::one(n));
        for _ in 0..k {
            power = power.wedge(&omega);
        }
        let columns: Vec<Vec<Rational>> = source
            .reps
            .iter()
            .map(|r| {
                target
                    .class_coords(&power.wedge(r))
                    .expect("cup product of a cycle stays a cycle in the window")
            })
            .collect();
        let m = RatMatrix::from_columns(columns, target.dim());
        let rank = m.rank();
        let iso = rank == source.dim() && source.dim() == target.dim();
        steps.push(LefschetzStep {
            k,
            source_dim: source.dim(),
            target_dim: target.dim(),
            rank,
            iso,
        });
    }
    let all_iso = steps.iter().all(|s| s.iso);
    LefschetzReport { steps, all_iso }
}

/// A closed-and-coclosed representative together with the correction that
/// produced it: harmonic = input − d(correction).
#[derive(Debug)]
pub struct HarmonicWitness<C: Coefficient> {
    pub harmonic: Form<C>,
    pub correction: Form<C>,
}

/// Find a harmonic form in the class of γ by solving δdη = δγ.
pub fn harmonic_representative<M: ModelComplex>(
    model: &M,
    gamma: &Form<M::Coeff>,
) -> Result<HarmonicWitness<M::Coeff>, SolveError> {
    if !model.d(gamma).is_zero() {
        return Err(SolveError::NotClosed);
    }
    let rhs = model.delta(gamma);
    if rhs.is_zero() {
        return Ok(HarmonicWitness {
            harmonic: gamma.clone(),
            correction: Form::zero(gamma.n()),
        });
    }
    let k = gamma.grade().expect("nonzero closed form has a grade");
    let window = if k == 0 { Vec::new() } else { model.solve_basis(k - 1, &[gamma, &rhs]) };
    let images: Vec<_> = window.iter().map(|w| model.delta(&model.d(w))).collect();
    let eta = solve_in_window(&window, &images, &rhs, PivotOrder::Forward)
        .ok_or(SolveError::Insoluble)?;
    let harmonic = gamma.sub(&model.d(&eta));
    assert!(model.d(&harmonic).is_zero(), "substitution check: result must stay closed");
    assert!(model.delta(&harmonic).is_zero(), "substitution check: result must be coclosed");
    Ok(HarmonicWitness { harmonic, correction: eta })
}

/// How the exactness precondition of the dδ-solve was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactnessRoute {
    Exact,
    Coexact,
}

#[derive(Debug)]
pub struct DdeltaCertificate<C: Coefficient> {
    pub beta: Form<C>,
    pub route: ExactnessRoute,
}

/// Solve α = dδβ for a closed, coclosed α that is exact or coexact.
pub fn ddelta_solve<M: ModelComplex>(
    model: &M,
    alpha: &Form<M::Coeff>,
) -> Result<DdeltaCertificate<M::Coeff>, SolveError> {
    if alpha.is_zero() {
        return Ok(DdeltaCertificate { beta: Form::zero(alpha.n()), route: ExactnessRoute::Exact });
    }
    if !model.d(alpha).is_zero() {
        return Err(SolveError::NotClosed);
    }
    if !model.delta(alpha).is_zero() {
        return Err(SolveError::NotCoclosed);
    }
    let k = alpha.grade().expect("nonzero form with grade");
    let route = exactness_route(model, alpha, k).ok_or(SolveError::NotExactOrCoexact)?;

    let window = model.solve_basis(k, &[alpha]);
    let images: Vec<_> = window.iter().map(|w| model.d(&model.delta(w))).collect();
    let beta = solve_in_window(&window, &images, alpha, PivotOrder::Forward)
        .ok_or(SolveError::Insoluble)?;
    assert_eq!(
        model.d(&model.delta(&beta)),
        *alpha,
        "substitution check: dδβ must reproduce the input"
    );
    Ok(DdeltaCertificate { beta, route })
}

fn exactness_route<M: ModelComplex>(
    model: &M,
    alpha: &Form<M::Coeff>,
    k: usize,
) -> Option<ExactnessRoute> {
    if k > 0 {
        let below = model.solve_basis(k - 1, &[alpha]);
        let images: Vec<_> = below.iter().map(|w| model.d(w)).collect();
        if solve_in_window(&below, &images, alpha, PivotOrder::Forward).is_some() {
            return Some(ExactnessRoute::Exact);
        }
    }
    let above = model.solve_basis(k + 1, &[alpha]);
    let images: Vec<_> = above.iter().map(|w| model.delta(w)).collect();
    if solve_in_window(&above, &images, alpha, PivotOrder::Forward).is_some() {
        return Some(ExactnessRoute::Coexact);
    }
    None
}

/// A harmonic, exact form on which the dδ-equation is insoluble — the
/// obstruction witness on models without the Lefschetz property.
pub struct DdeltaCounterexample<C: Coefficient> {
    pub grade: usize,
    pub alpha: Form<C>,
}

/// Search every grade for a closed, coclosed, exact form outside im(dδ),
/// then greedily minimize its support.
pub fn ddelta_counterexample<M: ModelComplex>(model: &M) -> Option<DdeltaCounterexample<M::Coeff>> {
    for k in 1..=model.top_grade() {
        let window = model.grade_basis(k);
        let hints = hint_refs(&window);
        let d_images: Vec<_> = window.iter().map(|f| model.d(f)).collect();
        let delta_images: Vec<_> = window.iter().map(|f| model.delta(f)).collect();
        let harmonic_forms: Vec<Form<M::Coeff>> = joint_kernel(&[d_images, delta_images])
            .iter()
            .map(|v| combine(&window, v))
            .collect();

        let below = model.solve_basis(k - 1, &hints);
        let exact_span: Vec<Form<M::Coeff>> =
            below.iter().map(|w| model.d(w)).filter(|f| !f.is_zero()).collect();
        let solve_window = model.solve_basis(k, &hints);
        let ddelta_span: Vec<Form<M::Coeff>> = solve_window
            .iter()
            .map(|w| model.d(&model.delta(w)))
            .filter(|f| !f.is_zero())
            .collect();

        let chart = Chart::from_forms(
            harmonic_forms.iter().chain(exact_span.iter()).chain(ddelta_span.iter()),
        );
        let exact_space = Subspace::span(
            chart.len(),
            exact_span.iter().map(|f| chart.coords(f).expect("chart covers image spans")),
        );
        let ddelta_space = Subspace::span(
            chart.len(),
            ddelta_span.iter().map(|f| chart.coords(f).expect("chart covers image spans")),
        );

        for z in &harmonic_forms {
            let coords = chart.coords(z).expect("chart covers harmonic window");
            if !exact_space.contains(&coords) || ddelta_space.contains(&coords) {
                continue;
            }
            // Found one; shrink it while it stays a counterexample.
            let is_witness = |f: &Form<M::Coeff>| -> bool {
                if f.is_zero() || !model.d(f).is_zero() || !model.delta(f).is_zero() {
                    return false;
                }
                let c = match chart.coords(f) {
                    Some(c) => c,
                    None => return false,
                };
                exact_space.contains(&c) && !ddelta_space.contains(&c)
            };
            let mut alpha = z.clone();
            loop {
                let mut shrunk = false;
                for (mask, key, value) in alpha.support() {
                    let term = Form::from_part(
                        alpha.n(),
                        mask,
                        <M::Coeff as Coefficient>::from_term(&key, &value),
                    );
                    let candidate = alpha.sub(&term);
                    if is_witness(&candidate) {
                        alpha = candidate;
                        shrunk = true;
                        break;
                    }
                }
                if !shrunk {
                    break;
                }
            }
            return Some(DdeltaCounterexample { grade: k, alpha });
        }
    }
    None
}

/// For a closed form α on a model with a circle action, solve dβ = ι(ξ)α.
pub fn iota_exact_solve<M: ModelComplex>(
    model: &M,
    alpha: &Form<M::Coeff>,
) -> Result<Form<M::Coeff>, SolveError> {
    let group = model.group_data().ok_or(SolveError::NoGroupData)?;
    if !model.d(alpha).is_zero() {
        return Err(SolveError::NotClosed);
    }
    let rhs = model.iota_field(&group.field, alpha);
    if rhs.is_zero() {
        return Ok(Form::zero(alpha.n()));
    }
    let k = rhs.grade().expect("nonzero contraction has a grade");
    if k == 0 {
        // A function is exact only when it vanishes.
        return Err(SolveError::Insoluble);
    }
    let window = model.solve_basis(k - 1, &[alpha, &rhs]);
    let images: Vec<_> = window.iter().map(|w| model.d(w)).collect();
    let beta = solve_in_window(&window, &images, &rhs, PivotOrder::Forward)
        .ok_or(SolveError::Insoluble)?;
    assert_eq!(model.d(&beta), rhs, "substitution check: dβ must equal ι(ξ)α");
    Ok(beta)
}

/// For a coclosed α and a Hamiltonian function f, the contraction by the
/// symplectic gradient of f is coexact with the explicit witness β = −fα.
pub fn iota_coexact_solve<M: ModelComplex>(
    model: &M,
    f: &Form<M::Coeff>,
    alpha: &Form<M::Coeff>,
) -> Result<Form<M::Coeff>, SolveError> {
    if !model.delta(alpha).is_zero() {
        return Err(SolveError::NotCoclosed);
    }
    let beta = f.wedge(alpha).neg();
    let field = model.hamiltonian_field(f);
    assert_eq!(
        model.delta(&beta),
        model.iota_field(&field, alpha),
        "substitution check: δ(−fα) must equal ι(v_f)α"
    );
    Ok(beta)
}

/// Per-grade comparison of d-cohomology with the d-cohomology of ker δ,
/// including the rank of the inclusion-induced map.
#[derive(Debug, Clone)]
pub struct QuasiIsoStep {
    pub k: usize,
    pub dim_full: usize,
    pub dim_subcomplex: usize,
    pub induced_rank: usize,
    pub bijective: bool,
}

pub fn delta_subcomplex_comparison<M: ModelComplex>(model: &M) -> Vec<QuasiIsoStep> {
    let mut steps = Vec::new();
    for k in 0..=model.top_grade() {
        let full = cohomology(model, k, Differential::D);
        let sub = cohomology(model, k, Differential::DOnDeltaKernel);
        let columns: Vec<Vec<Rational>> = sub
            .reps
            .iter()
            .map(|r| full.class_coords(r).expect("subcomplex cycles are cycles"))
            .collect();
        let rank = RatMatrix::from_columns(columns, full.dim()).rank();
        steps.push(QuasiIsoStep {
            k,
            dim_full: full.dim(),
            dim_subcomplex: sub.dim(),
            induced_rank: rank,
            bijective: rank == full.dim() && full.dim() == sub.dim(),
        });
    }
    steps
}

/// Outcome of the seeded dδ round-trip suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededStats {
    pub attempted: usize,
    pub solved: usize,
}

/// Draw random β₀, set α = dδβ₀, and require the solver to recover some β.
pub fn seeded_ddelta_suite<M: ModelComplex>(
    model: &M,
    grades: &[usize],
    per_grade: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SeededStats, (usize, Form<M::Coeff>)> {
    let mut stats = SeededStats { attempted: 0, solved: 0 };
    for &k in grades {
        for _ in 0..per_grade {
            let mut alpha = Form::zero(model.half_dim());
            for _ in 0..10 {
                let beta0 = model.random_form(k, rng);
                alpha = model.d(&model.delta(&beta0));
                if !alpha.is_zero() {
                    break;
                }
            }
            stats.attempted += 1;
            match ddelta_solve(model, &alpha) {
                Ok(_) => stats.solved += 1,
                Err(_) => return Err((k, alpha)),
            }
        }
    }
    Ok(stats)
}

/// Check that every class of every grade admits a harmonic representative;
/// returns the first failing class otherwise.
pub fn harmonic_all_classes<M: ModelComplex>(
    model: &M,
) -> Result<usize, (usize, Form<M::Coeff>)> {
    let mut checked = 0;
    for k in 0..=model.top_grade() {
        let basis = cohomology(model, k, Differential::D);
        for rep in &basis.reps {
            match harmonic_representative(model, rep) {
                Ok(_) => checked += 1,
                Err(_) => return Err((k, rep.clone())),
            }
        }
    }
    Ok(checked)
}

/// Exactness of a form: solvability of dγ = f over the hint window.
pub fn is_exact<M: ModelComplex>(model: &M, f: &Form<M::Coeff>) -> bool {
    if f.is_zero() {
        return true;
    }
    let k = match f.grade() {
        Some(k) if k > 0 => k,
        _ => return false,
    };
    let window = model.solve_basis(k - 1, &[f]);
    let images: Vec<_> = window.iter().map(|w| model.d(w)).collect();
    solve_in_window(&window, &images, f, PivotOrder::Forward).is_some()
}
