//! Bitmask bookkeeping for exterior-algebra bases.
//!
//! A basis k-form (or k-vector) over a space with basis indices 0..dim is a
//! subset of indices, stored as a `u32` mask read in ascending index order.
//! All Koszul signs reduce to counting transpositions between masks.

/// Number of indices in the mask, i.e. the exterior grade.
pub fn grade(mask: u32) -> usize {
    mask.count_ones() as usize
}

/// Ascending indices of the set bits.
pub fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Wedge of two basis elements: `None` when they share an index, otherwise
/// the merged mask and the sign of the permutation sorting the concatenation.
pub fn merge(a: u32, b: u32) -> Option<(u32, i8)> {
    if a & b != 0 {
        return None;
    }
    // Each index of `b` must jump over the indices of `a` above it.
    let mut swaps = 0u32;
    for i in bits(b) {
        swaps += (a >> i >> 1).count_ones();
    }
    let sign = if swaps % 2 == 0 { 1 } else { -1 };
    Some((a | b, sign))
}

/// Interior product by the basis vector `i`: removes `i` from the mask with
/// the sign (−1)^(number of indices below `i`), or `None` when `i` is absent.
pub fn contract(mask: u32, i: usize) -> Option<(u32, i8)> {
    if mask & (1 << i) == 0 {
        return None;
    }
    let below = (mask & ((1u32 << i) - 1)).count_ones();
    let sign = if below % 2 == 0 { 1 } else { -1 };
    Some((mask & !(1 << i), sign))
}

/// All masks of the given grade over `dim` indices, ascending as integers.
pub fn masks_of_grade(dim: usize, k: usize) -> Vec<u32> {
    (0u32..1 << dim).filter(|m| grade(*m) == k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_signs_count_transpositions() {
        // e0∧e1 in order: no swaps.
        assert_eq!(merge(0b01, 0b10), Some((0b11, 1)));
        // e1∧e0: one swap.
        assert_eq!(merge(0b10, 0b01), Some((0b11, -1)));
        // Overlap kills the product.
        assert_eq!(merge(0b01, 0b01), None);
        // (e0∧e3)∧(e1∧e2): e1 jumps over e3 (1), e2 jumps over e3 (1) → even.
        assert_eq!(merge(0b1001, 0b0110), Some((0b1111, 1)));
    }

    #[test]
    fn contract_signs() {
        // ι(X0)(e0∧e1) = e1, ι(X1)(e0∧e1) = -e0.
        assert_eq!(contract(0b11, 0), Some((0b10, 1)));
        assert_eq!(contract(0b11, 1), Some((0b01, -1)));
        assert_eq!(contract(0b10, 0), None);
    }

    #[test]
    fn grade_enumeration() {
        assert_eq!(masks_of_grade(4, 2).len(), 6);
        assert_eq!(masks_of_grade(6, 3).len(), 20);
        assert_eq!(masks_of_grade(4, 0), vec![0]);
    }
}
