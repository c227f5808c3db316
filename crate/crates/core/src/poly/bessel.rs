//! Bessel functions of the first kind `J_0 .. J_N` at a single argument.

/// `J_n(t)` for `n = 0..=nmax` by Miller's backward recurrence, normalized
/// with `J_0 + 2 sum_k J_{2k} = 1`.
pub fn bessel_j_all(nmax: usize, t: f64) -> Vec<f64> {
    if t == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    let x = t.abs();
    let top = nmax.max(x.ceil() as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;
    let mut out = vec![0.0; nmax + 1];
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0f64;
    for n in (0..start).rev() {
        // j holds J_{n+1}; step to J_n
        let jn = 2.0 * (n + 1) as f64 / x * j - jp1;
        jp1 = j;
        j = jn;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
        if n <= nmax {
            out[n] = j;
        }
        if n % 2 == 0 {
            norm += if n == 0 { j } else { 2.0 * j };
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    if t < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}
