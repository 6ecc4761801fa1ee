//! Reference computations that share no code with the library under test.

/// `f'(x)` from central differences at `h` and `h/2`, Richardson-combined.
pub fn richardson(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Forward slopes `(y[i+1] - y[i]) / (x[i+1] - x[i])`.
pub fn slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.windows(2).zip(y.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect()
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Every labelled assignment of `n` individuals to weighted levels, binned by
/// integer total energy: `hist[E] = sum over assignments with energy E of prod w`.
pub fn labelled_histogram(eps: &[u32], weights: &[u32], n: u32) -> Vec<u128> {
    let levels = eps.len();
    let top = eps.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0u128; (top * n) as usize + 1];
    let mut digits = vec![0usize; n as usize];
    loop {
        let energy: u32 = digits.iter().map(|&d| eps[d]).sum();
        let count: u128 = digits.iter().map(|&d| weights[d] as u128).product();
        hist[energy as usize] += count;
        let mut i = 0;
        loop {
            if i == digits.len() {
                return hist;
            }
            digits[i] += 1;
            if digits[i] < levels {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// All level sets drawn from energies `{0, 1, 2, 3}` with weights in `1..=3`.
pub fn all_small_systems() -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    for mask in 1u32..16 {
        let eps: Vec<u32> = (0..4).filter(|b| mask & (1 << b) != 0).collect();
        let l = eps.len() as u32;
        for code in 0..3u32.pow(l) {
            let weights: Vec<u32> = (0..l).map(|i| code / 3u32.pow(i) % 3 + 1).collect();
            out.push((eps.clone(), weights));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_by_hand() {
        // two individuals, levels 0 (w=1) and 1 (w=2): E=0 -> 1, E=1 -> 2*2, E=2 -> 4
        assert_eq!(labelled_histogram(&[0, 1], &[1, 2], 2), vec![1, 4, 4]);
        assert_eq!(labelled_histogram(&[0, 1], &[1, 2], 0), vec![1]);
    }

    #[test]
    fn system_count() {
        // sum_L C(4, L) 3^L = 4^4 - 1
        assert_eq!(all_small_systems().len(), 255);
    }

    #[test]
    fn helpers() {
        assert!((richardson(|x| x.powi(3), 2.0, 1e-2) - 12.0).abs() < 1e-10);
        assert_eq!(slopes(&[0.0, 1.0, 3.0], &[0.0, 2.0, 3.0]), vec![2.0, 0.5]);
        assert!((ln_binomial(4, 2) - 6f64.ln()).abs() < 1e-15);
    }
}
