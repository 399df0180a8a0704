//! The canonical section s: every base cohomology class of the sphere
//! extends to an equivariantly closed form, built by walking down a ζ-chain
//! and correcting each step with a coexact preimage.  Constants that cannot
//! be absorbed — Liouville means — surface as the invariants χ.
//!
//! Run with `cargo run --example canonical_extension`.

use symhodge::cartan::{render_eqform, Cartan};
use symhodge::linalg::PivotOrder;
use symhodge::models::{render_form, sphere_s1, ModelComplex};

fn main() {
    let sph = sphere_s1();
    let cartan = Cartan::new(&sph).expect("the sphere carries its rotation");

    // The symplectic class: its extension is exactly the moment extension.
    let cert = cartan
        .canonical_section(&sph.omega_form(), PivotOrder::Forward)
        .expect("the recursion closes");
    println!("s[ω] = {}", render_eqform(&sph, &cert.alpha_g));
    assert!(cartan.d_g(&cert.alpha_g).is_zero());
    assert!(cert.chi.is_empty(), "no Liouville mean appears for ω");
    println!("  equivariantly closed; no χ-corrections were needed");
    println!();

    // The projection to u = 0 inverts the section on classes.
    let back = cartan.projection_p(&cert.alpha_g);
    println!("p(s[ω]) = {}   (the base representative returns)", render_form(&sph, &back));
    assert_eq!(back, sph.omega_form());
    println!();

    // The squared class walks a longer chain: δφ₁ = φ₀ and
    // δφ₂ = ½φ₀² − ∂φ₁ − χ₁, with χ₁ the Liouville mean of the right side.
    let sec = cartan.omega_squared_section(PivotOrder::Forward).expect("chain closes");
    println!("extension chain for [ω]²:");
    println!("  φ₀ = {}", render_form(&sph, &sec.phi0));
    println!("  φ₁ = {}   (δφ₁ = φ₀)", render_form(&sph, &sec.phi1));
    println!("  χ₁ = {}   (the mean that δ cannot reach)", sec.chi1);
    println!("  φ₂ = {}   (δφ₂ = ½φ₀² − ∂φ₁ − χ₁)", render_form(&sph, &sec.phi2));
    assert_eq!(sph.delta(&sec.phi1), sec.phi0);
    println!(
        "  assembled representative: {}   (ω∧ω = 0 on a surface, and the \
         u-corrections cancel)",
        render_eqform(&sph, &sec.rep)
    );
    assert!(cartan.d_g(&sec.rep).is_zero());
    println!();

    // The class does not depend on how the inner linear systems choose
    // their pivots.
    let forward = cartan.omega_squared_section(PivotOrder::Forward).unwrap();
    let backward = cartan.omega_squared_section(PivotOrder::Backward).unwrap();
    let basis = cartan.equivariant_cohomology(4);
    assert_eq!(
        basis.class_coords(&forward.rep),
        basis.class_coords(&backward.rep),
        "pivot-independent class"
    );
    println!("Both pivoting strategies land in the same equivariant class.");
}
