use crate::error::{invalid, Result};
use crate::polar::BitVector;

/// Returns `n` such that `len == 2^n`, or an error for lengths that are not
/// powers of two.
pub fn log2_exact(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return invalid(format!("length {len} is not a power of two"));
    }
    Ok(len.trailing_zeros() as usize)
}

/// `x = u * G_N` over GF(2), natural indexing, `G_N` the n-fold Kronecker
/// power of `[[1,0],[1,1]]`.
pub fn polar_transform(u: &BitVector) -> Result<BitVector> {
    log2_exact(u.len())?;
    let mut x = u.clone().into_inner();
    polar_transform_in_place(&mut x);
    Ok(BitVector::from_raw(x))
}

/// In-place butterfly form of [`polar_transform`]. The slice length must be
/// a power of two. Since `G_N * G_N = I`, this is also the inverse.
pub fn polar_transform_in_place(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// `x = u * G_N^T`: the kernel with control and target swapped.
pub fn transposed_transform_in_place(x: &mut [u8]) {
    let n = x.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        half *= 2;
    }
}

/// The bit-reversal permutation of `0..n` (0-based): entry `i` is `i` with
/// its `log2(n)` address bits reversed. The permutation is an involution.
pub fn bit_reversal_permutation(n: usize) -> Result<Vec<usize>> {
    let bits = log2_exact(n)?;
    if bits == 0 {
        return Ok(vec![0]);
    }
    Ok((0..n)
        .map(|i| i.reverse_bits() >> (usize::BITS as usize - bits))
        .collect())
}

/// Rows of `G_N` built directly from the Kronecker recursion.
pub fn generator_matrix(n: usize) -> Result<Vec<BitVector>> {
    log2_exact(n)?;
    let mut g = vec![vec![1u8]];
    while g.len() < n {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for r in 0..m {
            for c in 0..m {
                next[r][c] = g[r][c];
                next[r + m][c] = g[r][c];
                next[r + m][c + m] = g[r][c];
            }
        }
        g = next;
    }
    Ok(g.into_iter().map(BitVector::from_raw).collect())
}
