//! Small in-place DFTs.

use num_complex::Complex;
use num_traits::Zero;

use crate::real::Real;

/// Forward DFT `X[j] = sum_r x[r] exp(-2 pi i j r / n)`.
///
/// Radix-2 for power-of-two lengths, direct summation otherwise.
pub fn dft<S: Real>(x: &mut [Complex<S>]) {
    let n = x.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        fft_radix2(x);
    } else {
        let out = naive_dft(x);
        x.copy_from_slice(&out);
    }
}

/// Direct `O(n^2)` DFT.
pub fn naive_dft<S: Real>(x: &[Complex<S>]) -> Vec<Complex<S>> {
    let n = x.len();
    (0..n)
        .map(|j| {
            x.iter().enumerate().fold(Complex::zero(), |acc, (r, v)| {
                let turns = S::lit(((j * r) % n) as f64) / S::lit(n as f64);
                acc + *v * (-turns).cis2pi()
            })
        })
        .collect()
}

fn fft_radix2<S: Real>(x: &mut [Complex<S>]) {
    let n = x.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            x.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        for k in 0..half {
            let w = (-(S::lit(k as f64) / S::lit(len as f64))).cis2pi();
            for start in (0..n).step_by(len) {
                let a = x[start + k];
                let b = x[start + k + half] * w;
                x[start + k] = a + b;
                x[start + k + half] = a - b;
            }
        }
        len *= 2;
    }
}
