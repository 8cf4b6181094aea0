//! Fixed-order summation.
//!
//! Every reduction in the crate goes through [`pairwise_sum`] over values
//! listed in ascending cell order. The recursion always splits at `len / 2`,
//! so a sequence made of `2^k` equal blocks sums to exactly `2^k` times the
//! block sum; the dilation identities rely on that.

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Arithmetic mean through [`pairwise_sum`]; zero for an empty slice.
pub fn pairwise_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        pairwise_sum(xs) / xs.len() as f64
    }
}
