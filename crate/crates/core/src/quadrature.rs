//! Adaptive Simpson quadrature for real and complex integrands.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

pub fn adaptive_simpson<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<T>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    adaptive_simpson_panels(f, a, b, 1, tol)
}

/// Splits `[a, b]` into `panels` equal pieces before refining; needed for
/// oscillatory integrands where a single coarse Simpson estimate can alias.
/// The absolute tolerance is shared out in proportion to panel width.
pub fn adaptive_simpson_panels<T, F>(mut f: F, a: f64, b: f64, panels: usize, tol: f64) -> Result<T>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut x0 = a;
    let mut f0 = f(a);
    let mut total: Option<T> = None;
    for i in 0..panels {
        let x1 = if i + 1 == panels { b } else { a + (i + 1) as f64 * h };
        let xm = 0.5 * (x0 + x1);
        let (fm, f1) = (f(xm), f(x1));
        let whole = simpson(x0, x1, f0, fm, f1);
        let piece = refine(&mut f, x0, x1, f0, fm, f1, whole, tol / panels as f64, MAX_DEPTH)?;
        total = Some(match total {
            Some(s) => s + piece,
            None => piece,
        });
        x0 = x1;
        f0 = f1;
    }
    Ok(total.expect("at least one panel"))
}

fn simpson<T: Integrand>(a: f64, b: f64, fa: T, fm: T, fb: T) -> T {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn refine<T, F>(f: &mut F, a: f64, b: f64, fa: T, fm: T, fb: T, whole: T, tol: f64, depth: u32) -> Result<T>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let sum = left + right;
    let delta = sum - whole;
    let floor = 64.0 * f64::EPSILON * sum.magnitude();
    if delta.magnitude() <= 15.0 * tol.max(floor) {
        return Ok(sum + delta * (1.0 / 15.0));
    }
    if depth == 0 || !(a < lm && rm < b) {
        return Err(Error::QuadratureNonConvergence { a, b });
    }
    let l = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}
