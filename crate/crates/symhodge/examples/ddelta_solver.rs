//! The dδ-solver: on Lefschetz models every closed, coclosed, exact form is
//! dδ of something, and the solver produces the certificate; on the
//! Kodaira–Thurston nilmanifold a minimized obstruction exists and is found.
//!
//! Run with `cargo run --example ddelta_solver`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symhodge::models::{flat_torus, kodaira_thurston, render_form, ModelComplex};
use symhodge::solvers::{ddelta_counterexample, ddelta_solve, ExactnessRoute};

fn main() {
    // Seed an instance on the 2-torus: α := dδβ₀ for a random 1-form β₀.
    // The solver never sees β₀; it must find its own preimage.
    let t2 = flat_torus(1);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let beta0 = t2.random_form(1, &mut rng);
    let alpha = t2.d(&t2.delta(&beta0));
    println!("seeded α = dδβ₀ on flat-torus-2:");
    println!("  α = {}", render_form(&t2, &alpha));

    let cert = ddelta_solve(&t2, &alpha).expect("Lefschetz models always solve");
    println!("  solver's β = {}", render_form(&t2, &cert.beta));
    println!(
        "  route: the class of α was recognized as {}",
        match cert.route {
            ExactnessRoute::Exact => "exact (α = d of something)",
            ExactnessRoute::Coexact => "coexact (α = δ of something)",
        }
    );
    assert_eq!(t2.d(&t2.delta(&cert.beta)), alpha, "substitution certificate");
    println!("  dδβ reproduces α exactly (β need not equal β₀ — only dδβ is pinned).");
    println!();

    // On the nilmanifold the lemma fails, and the failure is explicit.
    let kt = kodaira_thurston();
    let witness = ddelta_counterexample(&kt).expect("the nilmanifold obstructs");
    println!("kodaira-thurston obstruction, minimized to {} term(s):", witness.alpha.support().len());
    println!("  α = {}", render_form(&kt, &witness.alpha));
    println!("  grade {}", witness.grade);
    assert!(kt.d(&witness.alpha).is_zero(), "closed");
    assert!(kt.delta(&witness.alpha).is_zero(), "coclosed");
    let refusal = ddelta_solve(&kt, &witness.alpha).expect_err("must be insoluble");
    println!("  the solver refuses it: {refusal}");
    println!(
        "  α is closed, coclosed, and exact, yet outside the image of dδ — \
         the hypothesis that fails is the Lefschetz property, not the search."
    );
}
