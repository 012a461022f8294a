//! Index of `Gamma_0(N)` and the number of leading Fourier coefficients whose
//! vanishing forces a weight-`k` form on `Gamma_0(N)` to vanish.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SturmData {
    pub weight: u32,
    pub level: u64,
    pub index: u64,
    /// Largest `M` with `M >= k * index / 12`, i.e. `ceil(k * index / 12)`.
    pub bound: u64,
    /// Coefficients `0..=bound` must vanish.
    pub count: u64,
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// `[SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn sturm_index(level: u64) -> u64 {
    assert!(level >= 1, "level must be positive");
    prime_divisors(level)
        .into_iter()
        .fold(level, |acc, p| acc / p * (p + 1))
}

pub fn sturm_data(weight: u32, level: u64) -> SturmData {
    let index = sturm_index(level);
    let bound = (u64::from(weight) * index).div_ceil(12);
    SturmData { weight, level, index, bound, count: bound + 1 }
}

pub fn sturm_coeff_count(weight: u32, level: u64) -> u64 {
    sturm_data(weight, level).count
}
