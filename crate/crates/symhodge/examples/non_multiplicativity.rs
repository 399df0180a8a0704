//! The canonical section is linear but not a ring map: on the sphere,
//! s([ω])² and s([ω]²) are different equivariant classes.  The square of
//! the moment extension survives in degree 4, while [ω]² is already zero
//! downstairs and extends to the zero class.
//!
//! Run with `cargo run --example non_multiplicativity`.

use symhodge::cartan::{render_eqform, Cartan};
use symhodge::models::sphere_s1;

fn main() {
    let sph = sphere_s1();
    let cartan = Cartan::new(&sph).expect("the sphere carries its rotation");

    let omega_g = cartan.omega_g();
    let square = omega_g.wedge(&omega_g);
    println!("s[ω]   = ω_G = {}", render_eqform(&sph, &omega_g));
    println!("s[ω]²  = {}", render_eqform(&sph, &square));
    println!("         (ω∧ω = 0 pointwise, but the u-terms do not cancel)");
    println!();

    let witness = cartan.non_multiplicativity_witness().expect("witness exists");
    let basis = cartan.equivariant_cohomology(witness.degree);
    println!("in H_G at degree {} (dimension {}):", witness.degree, basis.dim());
    println!("  class of s[ω]²:   coordinates {:?}", coords(&witness.power));
    println!("  class of s([ω]²): coordinates {:?}", coords(&witness.section));
    assert!(witness.distinct);
    assert_ne!(witness.power, witness.section);
    println!();
    println!(
        "The two classes differ: [ω_G]² = [u²·1] is a nonzero multiple of \
         the generator coming from the point, while [ω]² = 0 upstairs forces \
         s([ω]²) = 0.  Extending classes one at a time is canonical; \
         extending products is not."
    );
}

fn coords(v: &[symhodge::linalg::Rational]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}
