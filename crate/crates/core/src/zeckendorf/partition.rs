//! The split of `[G_n, G_{n+1})` by the leading digits of the decomposition.
//!
//! With `H_{n,i} = Σ_{i' ≤ i} c_{i'} G_{n+1−i'}`, the interval `I_{n,i,j}`
//! starts at `H_{n,i} + j G_{n−i}` and has length `G_{n−i}`. Its members are
//! exactly the integers whose decomposition begins `c_1, ..., c_i, j`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::plrs::Plrs;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInterval {
    pub i: usize,
    pub j: u32,
    pub start: BigUint,
    pub end: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    pub n: usize,
    pub intervals: Vec<PartitionInterval>,
}

/// Intervals `I_{n,i,j}` for `(i, j) ∈ Z`, in lexicographic order. Requires
/// `n > L`.
pub fn interval_partition(plrs: &Plrs, n: usize) -> Result<IntervalPartition> {
    let l = plrs.order();
    if n <= l {
        return Err(Error::IndexOutOfRange { n, reason: "the partition needs n > L" });
    }
    let seq = plrs.sequence(n + 1);
    let mut intervals = Vec::new();
    let mut h = BigUint::zero();
    for i in 0..l {
        if i > 0 {
            h += seq.term(n + 1 - i) * plrs.coefficient(i);
        }
        let width = seq.term(n - i);
        for j in 0..plrs.coefficient(i + 1) {
            if i == 0 && j == 0 {
                continue;
            }
            let start = &h + width * j;
            let end = &start + width;
            intervals.push(PartitionInterval { i, j, start, end });
        }
    }
    Ok(IntervalPartition { n, intervals })
}
