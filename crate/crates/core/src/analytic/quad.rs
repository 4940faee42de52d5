//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: u32 = 60;

/// `∫_a^b f` by adaptive Simpson with Richardson correction.
///
/// A panel is accepted when its two halves agree with the whole to
/// `15 * tol`; the tolerance is halved at each split. Fails if a panel is
/// still unresolved at `max_depth`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::QuadratureFailed { a, b });
    }
    if b < a {
        return adaptive_simpson(f, b, a, abs_tol, max_depth).map(|v| -v);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let panel = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
    };
    panel
        .refine(&f, abs_tol, max_depth)
        .ok_or(Error::QuadratureFailed { a, b })
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn refine<F: Fn(f64) -> f64>(&self, f: &F, tol: f64, depth: u32) -> Option<f64> {
        let m = 0.5 * (self.a + self.b);
        let lm = 0.5 * (self.a + m);
        let rm = 0.5 * (m + self.b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - self.a) / 6.0 * (self.fa + 4.0 * flm + self.fm);
        let right = (self.b - m) / 6.0 * (self.fm + 4.0 * frm + self.fb);
        let delta = left + right - self.whole;
        if delta.abs() <= 15.0 * tol {
            return Some(left + right + delta / 15.0);
        }
        // no room left to split
        if depth == 0 || lm <= self.a || rm >= self.b {
            return None;
        }
        let l = Panel {
            a: self.a,
            b: m,
            fa: self.fa,
            fm: flm,
            fb: self.fm,
            whole: left,
        };
        let r = Panel {
            a: m,
            b: self.b,
            fa: self.fm,
            fm: frm,
            fb: self.fb,
            whole: right,
        };
        Some(l.refine(f, 0.5 * tol, depth - 1)? + r.refine(f, 0.5 * tol, depth - 1)?)
    }
}
