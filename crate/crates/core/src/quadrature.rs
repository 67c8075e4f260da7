//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Panels used for the initial subdivision and for the `int |f|` scale.
const INITIAL_PANELS: usize = 16;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]`.
///
/// The local error test is relative to a coarse estimate of `int |f|`, so
/// integrands whose signed integral cancels to zero still terminate.
/// Fails if any branch needs more than `max_depth` bisections.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let h = (b - a) / INITIAL_PANELS as f64;
    let nodes: Vec<f64> = (0..=2 * INITIAL_PANELS).map(|i| f(a + 0.5 * h * i as f64)).collect();

    let scale: f64 = (0..INITIAL_PANELS)
        .map(|i| {
            simpson(
                0.0,
                h,
                nodes[2 * i].abs(),
                nodes[2 * i + 1].abs(),
                nodes[2 * i + 2].abs(),
            )
        })
        .sum::<f64>()
        .abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let tol = rel_tol * scale / INITIAL_PANELS as f64;

    let mut total = 0.0;
    for i in 0..INITIAL_PANELS {
        let (pa, pb) = (a + h * i as f64, a + h * (i + 1) as f64);
        let (fa, fm, fb) = (nodes[2 * i], nodes[2 * i + 1], nodes[2 * i + 2]);
        let panel = Panel {
            a: pa,
            b: pb,
            fa,
            fm,
            fb,
            whole: simpson(pa, pb, fa, fm, fb),
        };
        total += refine(&f, panel, tol, max_depth)?;
    }
    Ok(total)
}

fn refine<F>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (p.a + p.b);
    let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return Err(Error::Quadrature { a: p.a, b: p.b });
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(refine(f, l, 0.5 * tol, depth - 1)? + refine(f, r, 0.5 * tol, depth - 1)?)
}
