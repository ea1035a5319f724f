//! Bracketing scalar root search.

use crate::error::{Error, Result};

/// Outcome of geometric bracket expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    Found { lo: f64, hi: f64 },
    /// No sign change before the half-width exceeded the limit.
    Exhausted,
}

/// Expands `[-h, h]` by doubling `h` until `f` changes sign or `h > limit`.
pub fn expand_bracket<F>(f: &F, initial_halfwidth: f64, limit: f64) -> Bracket
where
    F: Fn(f64) -> f64,
{
    let mut h = initial_halfwidth.min(limit);
    loop {
        let (flo, fhi) = (f(-h), f(h));
        if flo == 0.0 || fhi == 0.0 || (flo < 0.0) != (fhi < 0.0) {
            return Bracket::Found { lo: -h, hi: h };
        }
        if h >= limit {
            return Bracket::Exhausted;
        }
        h = (2.0 * h).min(limit);
    }
}

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Interpolation steps (secant or inverse quadratic) are taken when they stay
/// inside the bracket and shrink it fast enough, otherwise the step bisects.
/// Stops when the bracket is narrower than `xtol` or `f` hits zero exactly.
pub fn brent<F>(f: F, a: f64, b: f64, xtol: f64, max_iterations: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa < 0.0) == (fb < 0.0) {
        return Err(Error::Domain(format!(
            "root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iterations {
        if (fb < 0.0) == (fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = brent(|x: f64| x.cos() - x, 0.0, 1.0, 1e-14, 100).unwrap();
        assert!((r - 0.739_085_133_215_160_6).abs() < 1e-13);
    }

    #[test]
    fn steep_function_converges() {
        let r = brent(|x: f64| (20.0 * x).exp() - 1e5, -3.0, 3.0, 1e-12, 200).unwrap();
        assert!((r - 1e5f64.ln() / 20.0).abs() < 1e-11);
    }

    #[test]
    fn unbracketed_is_an_error() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-10, 50).is_err());
    }

    #[test]
    fn bracket_expansion() {
        match expand_bracket(&|x| x - 37.0, 1.0, 100.0) {
            Bracket::Found { lo, hi } => assert!(lo < 37.0 && (37.0..=64.0).contains(&hi)),
            Bracket::Exhausted => panic!("should bracket"),
        }
        assert_eq!(expand_bracket(&|x| x - 300.0, 1.0, 100.0), Bracket::Exhausted);
    }
}
