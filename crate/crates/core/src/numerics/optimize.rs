use std::convert::Infallible;

use super::Interval;

/// Points in the coarse scan that precedes golden-section search.
pub const PRE_GRID_POINTS: usize = 17;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximize `f` over the open interval `domain`.
///
/// A 17-point interior grid picks the starting bracket (so a function that is
/// not unimodal on the whole domain still ends near its best grid cell), then
/// golden-section search narrows it to width `tol`. Endpoints are never
/// evaluated. Returns `(argmax, max)` for the best point evaluated.
pub fn maximize_scalar<F: FnMut(f64) -> f64>(mut f: F, domain: Interval, tol: f64) -> (f64, f64) {
    match try_maximize_scalar(|x| Ok::<_, Infallible>(f(x)), domain, tol) {
        Ok(v) => v,
        Err(never) => match never {},
    }
}

/// [`maximize_scalar`] for fallible objectives.
pub fn try_maximize_scalar<F, E>(mut f: F, domain: Interval, tol: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let step = domain.width() / (PRE_GRID_POINTS + 1) as f64;
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut best_index = 0;
    for i in 0..PRE_GRID_POINTS {
        let x = domain.lo + (i + 1) as f64 * step;
        let v = f(x)?;
        if v > best.1 {
            best = (x, v);
            best_index = i;
        }
    }
    if best.0.is_nan() {
        // Objective was NaN everywhere; report the centre.
        let x = domain.lo + 0.5 * domain.width();
        return Ok((x, f64::NAN));
    }

    let mut a = domain.lo + best_index as f64 * step;
    let mut b = domain.lo + (best_index + 2) as f64 * step;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd > best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}
