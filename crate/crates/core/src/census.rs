//! Independent census by subset enumeration, used to cross-check the tree.
//!
//! A semigroup of genus `g` has all its gaps in `[1, 2g − 1]`, so the
//! semigroups of genus `g` are exactly the `g`-subsets of that interval whose
//! complement is additively closed. Nothing here shares code with the tree.

use crate::tree::EnumerationError;

/// Largest genus accepted by [`brute_force_census`].
pub const CENSUS_MAX_GENUS: u32 = 12;

fn closed_complement(gaps: u64, g: u32) -> bool {
    let span = 2 * g;
    let members = !gaps & ((1u64 << span) - 1);
    let mut rest = members & !1;
    while rest != 0 {
        let a = rest.trailing_zeros();
        if (members << a) & gaps != 0 {
            return false;
        }
        rest &= rest - 1;
    }
    true
}

fn count_genus(g: u32) -> u64 {
    if g == 0 {
        return 1;
    }
    let slots = 2 * g - 1;
    // Gosper's hack over g-subsets of bit positions 0..slots, shifted so bit
    // i stands for the integer i + 1.
    let mut subset: u64 = (1u64 << g) - 1;
    let end = 1u64 << slots;
    let mut count = 0;
    while subset < end {
        if closed_complement(subset << 1, g) {
            count += 1;
        }
        let low = subset & subset.wrapping_neg();
        let ripple = subset + low;
        subset = (((ripple ^ subset) >> 2) / low) | ripple;
    }
    count
}

/// Number of numerical semigroups of each genus `0..=max_genus`.
pub fn brute_force_census(max_genus: u32) -> Result<Vec<u64>, EnumerationError> {
    if max_genus > CENSUS_MAX_GENUS {
        return Err(EnumerationError::BoundTooLarge {
            max_genus,
            reason: format!("subset census is limited to genus <= {CENSUS_MAX_GENUS}"),
        });
    }
    Ok((0..=max_genus).map(count_genus).collect())
}
