//! Small deterministic quadrature and summation helpers used across modules.

use num_complex::Complex64;

/// Pairwise summation with a fixed reduction tree.
///
/// The reduction order depends only on the slice length, so results are
/// reproducible bit-for-bit regardless of threading elsewhere.
pub fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Composite Simpson weights on `n` uniform intervals of width `h`
/// (`n` even, `n + 1` nodes). All weights are strictly positive.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 2 && n % 2 == 0, "Simpson rule needs an even interval count");
    let mut w = vec![0.0; n + 1];
    w[0] = h / 3.0;
    w[n] = h / 3.0;
    for (j, wj) in w.iter_mut().enumerate().take(n).skip(1) {
        *wj = if j % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
    }
    w
}

/// Composite Simpson approximation of `f` over `[a, b]` with `n` intervals.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let w = simpson_weights(n, h);
    let terms: Vec<Complex64> = w
        .iter()
        .enumerate()
        .map(|(j, &wj)| wj * f(a + j as f64 * h))
        .collect();
    pairwise_sum_c(&terms)
}
