//! The pointwise layer: the symplectic star on a frame with two Darboux
//! pairs, the degree-counting commutator [Λ, L], and the Lefschetz
//! decomposition into primitive parts.
//!
//! Run with `cargo run --example star_calculus`.

use symhodge::exterior::{Multiform, SymplecticSpace};
use symhodge::linalg::rat_int;
use symhodge::masks;

/// Frame covectors in storage order: e¹, f¹, e², f².
fn show(u: &Multiform) -> String {
    use num::Signed;
    let labels = ["e1", "f1", "e2", "f2"];
    if u.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (mask, c) in u.terms() {
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        let body: Vec<&str> = masks::bits(mask).map(|q| labels[q]).collect();
        if body.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if mag != rat_int(1) {
                out.push_str(&format!("{mag}·"));
            }
            out.push_str(&body.join("∧"));
        }
    }
    out
}

fn main() {
    let n = 2;
    let sp = SymplecticSpace::new(n);

    println!("symplectic form: ω = {}", show(&sp.omega()));
    println!("normalized volume: ωⁿ/n! = {}", show(&sp.top()));
    println!();

    // The star is solved from u∧★v = ω(u, v)·ωⁿ/n!, not tabulated by hand.
    println!("the star on a few forms:");
    for mask in [0b0000u32, 0b0001, 0b0011, 0b0110, 0b1111] {
        let u = Multiform::from_mask(n, mask, rat_int(1));
        let starred = sp.star(&u);
        println!("  ★({})  =  {}", show(&u), show(&starred));
        assert_eq!(sp.star(&starred), u, "the star is an involution");
    }
    println!("  (and ★★ = id on every one of them)");
    println!();

    // [Λ, L] acts as the scalar n−k on grade k — a theorem here, since the
    // operator is built as a genuine commutator.
    println!("[Λ, L] counts the complementary degree n−k:");
    for k in 0..=2 * n {
        let mask = (1u32 << k) - 1;
        let u = Multiform::from_mask(n, mask, rat_int(1));
        let a = sp.a_operator(&u);
        let expected = u.scale(&rat_int(n as i64 - k as i64));
        assert_eq!(a, expected);
        println!("  grade {k}: [Λ, L]({}) = {}", show(&u), show(&a));
    }
    println!();

    // Every form splits as Σ Lʲ(primitive); ω itself is L(1) plus nothing.
    let omega = sp.omega();
    println!("Lefschetz decomposition of ω:");
    for (j, p) in sp.primitive_decompose(&omega) {
        assert!(sp.contract_poisson(&p).is_zero(), "parts are primitive");
        println!("  Lᶨ-part with j = {j}: primitive piece {}", show(&p));
    }
    let mixed = Multiform::from_mask(n, 0b0011, rat_int(2))
        .add(&Multiform::from_mask(n, 0b1100, rat_int(1)));
    println!("Lefschetz decomposition of {}:", show(&mixed));
    let mut reassembled = Multiform::zero(n);
    for (j, p) in sp.primitive_decompose(&mixed) {
        println!("  j = {j}: {}", show(&p));
        let mut lifted = p;
        for _ in 0..j {
            lifted = sp.wedge_omega(&lifted);
        }
        reassembled = reassembled.add(&lifted);
    }
    assert_eq!(reassembled, mixed, "the pieces reassemble exactly");
    println!("  (reassembled exactly)");
}
