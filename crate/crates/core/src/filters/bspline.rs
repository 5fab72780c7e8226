//! Cardinal B-splines (the `n`-fold convolution of the unit box).

use crate::real::Real;

/// Centered cardinal B-spline of order `n`, supported on `[-n/2, n/2]`.
///
/// Evaluated with the Cox-de Boor recursion, which only combines
/// non-negative terms.
pub fn cardinal_bspline<S: Real>(n: usize, x: S) -> S {
    assert!(n >= 1, "B-spline order must be positive");
    let half = S::lit(n as f64) * S::lit(0.5);
    let y = x + half;
    if n == 1 {
        return if x.abs() < S::lit(0.5) || x == S::lit(-0.5) {
            S::one()
        } else {
            S::zero()
        };
    }
    if y <= S::zero() || y >= S::lit(n as f64) {
        return S::zero();
    }
    let j = y.floor().to_usize().unwrap_or(0).min(n - 1);
    // vals[q] holds M_r(y - (j - q)) for q = 0..r
    let mut vals = vec![S::zero(); n];
    vals[0] = S::one();
    for r in 2..=n {
        let rf = S::lit(r as f64);
        let inv = S::one() / S::lit((r - 1) as f64);
        for q in (0..r).rev() {
            let i = j as isize - q as isize;
            let u = y - S::lit(i as f64);
            let left = if q < r - 1 { vals[q] } else { S::zero() };
            let right = if q >= 1 { vals[q - 1] } else { S::zero() };
            // M_r(u) = [u M_{r-1}(u) + (r - u) M_{r-1}(u - 1)] / (r - 1), with u - 1 = y - (i + 1)
            vals[q] = (u * left + (rf - u) * right) * inv;
        }
    }
    // M_n(y - 0) sits at q = j
    vals[j]
}
