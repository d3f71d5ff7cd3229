use std::convert::Infallible;

use super::Interval;
use crate::error::{Error, Result};

const MAX_ITER: usize = 300;

/// Brent's method on a bracketing interval. Returns once the bracket around
/// the root is no wider than `tol` (plus a few ulps) or an exact zero is hit.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Interval, tol: f64) -> Result<f64> {
    try_find_root(|x| Ok::<_, Infallible>(f(x)), bracket, tol).map_err(|e| match e {
        RootError::Root(e) => e,
        RootError::Eval(never) => match never {},
    })
}

#[derive(Debug)]
pub enum RootError<E> {
    Root(Error),
    Eval(E),
}

impl<E> From<RootError<E>> for Error
where
    E: Into<Error>,
{
    fn from(e: RootError<E>) -> Self {
        match e {
            RootError::Root(e) => e,
            RootError::Eval(e) => e.into(),
        }
    }
}

/// [`find_root`] for fallible functions; evaluation errors are passed through.
pub fn try_find_root<F, E>(mut f: F, bracket: Interval, tol: f64) -> Result<f64, RootError<E>>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if !bracket.is_finite() {
        return Err(RootError::Root(Error::InvalidParameter(
            "root bracket must be finite".into(),
        )));
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = f(a).map_err(RootError::Eval)?;
    let mut fb = f(b).map_err(RootError::Eval)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(RootError::Root(Error::Bracketing {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        }));
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b).map_err(RootError::Eval)?;
    }
    Ok(b)
}
