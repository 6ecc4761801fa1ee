//! Central finite differences with one level of Richardson extrapolation.

use crate::error::Result;

/// Step used around `x`: `max(1e-6, 1e-6 |x|)`.
pub fn default_step(x: f64) -> f64 {
    1e-6_f64.max(1e-6 * x.abs())
}

/// `f'(x)` from central differences at `h` and `h/2`, combined as `(4 D(h/2) - D(h)) / 3`.
pub fn central_derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let d_h = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let half = 0.5 * h;
    let d_half = (f(x + half)? - f(x - half)?) / h;
    Ok((4.0 * d_half - d_h) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_exp_and_sin() {
        let d = central_derivative(|x| Ok(x.exp()), 1.0, default_step(1.0)).unwrap();
        assert!((d - 1f64.exp()).abs() < 1e-9);
        let d = central_derivative(|x| Ok(x.sin()), 0.3, 1e-3).unwrap();
        assert!((d - 0.3f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn step_scales_with_argument() {
        assert_eq!(default_step(0.5), 1e-6);
        assert!((default_step(-100.0) - 1e-4).abs() < 1e-18);
    }
}
