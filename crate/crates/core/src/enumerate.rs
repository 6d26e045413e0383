//! Exhaustive path enumeration shared by the brute-force oracles.

use crate::error::{Error, Result};

/// Default ceiling on `V^S` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Number of paths `vocab_size^slots`, saturating.
pub fn path_count(slots: usize, vocab_size: usize) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..slots {
        n = n.saturating_mul(vocab_size as u128);
    }
    n
}

pub fn check_cap(slots: usize, vocab_size: usize, cap: u64) -> Result<()> {
    let paths = path_count(slots, vocab_size);
    if paths > u128::from(cap) {
        Err(Error::TooLarge { paths, cap })
    } else {
        Ok(())
    }
}

/// Visits every path in lexicographic order of token ids.
pub fn for_each_path(slots: usize, vocab_size: usize, cap: u64, mut visit: impl FnMut(&[usize])) -> Result<()> {
    check_cap(slots, vocab_size, cap)?;
    let mut path = vec![0usize; slots];
    loop {
        visit(&path);
        // odometer increment, last slot fastest
        let mut i = slots;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            path[i] += 1;
            if path[i] < vocab_size {
                break;
            }
            path[i] = 0;
        }
    }
}
