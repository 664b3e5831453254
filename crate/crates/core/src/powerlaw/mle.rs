use crate::error::{Error, Result};

use super::zeta::hurwitz_unchecked;

pub const ALPHA_LOWER: f64 = 1.0 + 1e-6;
pub const ALPHA_UPPER: f64 = 8.0;
const ALPHA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMle {
    pub alpha: f64,
    pub stderr: f64,
    pub log_likelihood: f64,
    /// The maximizer sits on the search ceiling; the tail is close to
    /// degenerate.
    pub at_upper_bound: bool,
}

/// Sufficient statistics of a tail for the discrete power-law likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TailStats {
    pub n: usize,
    pub sum_ln: f64,
    pub x_min: u64,
}

impl TailStats {
    pub fn log_likelihood(&self, alpha: f64) -> f64 {
        -(self.n as f64) * hurwitz_unchecked(alpha, self.x_min as f64).ln() - alpha * self.sum_ln
    }
}

/// Maximum-likelihood Lotka exponent of a tail whose values are all
/// `>= x_min`, with likelihood normalized by the Hurwitz zeta.
pub fn fit_alpha_mle(tail: &[u64], x_min: u64) -> Result<AlphaMle> {
    if x_min == 0 {
        return Err(Error::InvalidParameter("x_min must be at least 1".into()));
    }
    if tail.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: tail.len(),
        });
    }
    if let Some(&value) = tail.iter().find(|&&v| v < x_min) {
        return Err(Error::BelowXmin { value, x_min });
    }
    let first = tail[0];
    if tail.iter().all(|&v| v == first) {
        return Err(Error::DegenerateTail);
    }
    let sum_ln = tail.iter().map(|&v| (v as f64).ln()).sum();
    fit_from_stats(TailStats {
        n: tail.len(),
        sum_ln,
        x_min,
    })
}

pub(crate) fn fit_from_stats(stats: TailStats) -> Result<AlphaMle> {
    let mean_ln = stats.sum_ln / stats.n as f64;
    if mean_ln <= (stats.x_min as f64).ln() {
        return Err(Error::DegenerateTail);
    }
    let (alpha, neg_ll) = brent_minimize(|a| -stats.log_likelihood(a), ALPHA_LOWER, ALPHA_UPPER, ALPHA_TOL);
    let at_upper_bound = alpha > ALPHA_UPPER - 1e-5;
    Ok(AlphaMle {
        alpha,
        stderr: observed_stderr(alpha, stats),
        log_likelihood: -neg_ll,
        at_upper_bound,
    })
}

/// `1 / sqrt(n * d^2/da^2 ln zeta(a, x_min))`, the observed-information
/// standard error.
fn observed_stderr(alpha: f64, stats: TailStats) -> f64 {
    let ln_z = |a: f64| hurwitz_unchecked(a, stats.x_min as f64).ln();
    let h = 1e-4f64.min((alpha - 1.0) / 2.0);
    let curvature = (ln_z(alpha + h) - 2.0 * ln_z(alpha) + ln_z(alpha - h)) / (h * h);
    if curvature > 0.0 {
        1.0 / (stats.n as f64 * curvature).sqrt()
    } else {
        f64::NAN
    }
}

/// Brent's bracketed minimization (golden section with parabolic steps).
/// Returns the abscissa and the function value there.
pub(crate) fn brent_minimize<F: Fn(f64) -> f64>(f: F, lower: f64, upper: f64, tol: f64) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (lower, upper);
    let mut x = a + GOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(mid - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    // the interior search cannot land exactly on the ceiling
    let fu = f(upper);
    if fu < fx {
        return (upper, fu);
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Grid maximization over [1.01, 8] at step 1e-4, refined to the best
    /// grid point.
    fn grid_oracle(tail: &[u64], x_min: u64) -> f64 {
        let sum_ln: f64 = tail.iter().map(|&v| (v as f64).ln()).sum();
        let n = tail.len() as f64;
        let ll = |a: f64| {
            let mut z = 0.0;
            // direct sum with integral tail, independent of the EM routine
            let cutoff = 5_000u64;
            for k in x_min..cutoff {
                z += (k as f64).powf(-a);
            }
            let b = cutoff as f64 - 0.5;
            z += b.powf(1.0 - a) / (a - 1.0);
            -n * z.ln() - a * sum_ln
        };
        let mut best = (f64::NEG_INFINITY, 0.0);
        // coarse pass then a 1e-4 grid around the coarse optimum
        let mut a = 1.01;
        while a <= 8.0 {
            let v = ll(a);
            if v > best.0 {
                best = (v, a);
            }
            a += 0.01;
        }
        let centre = best.1;
        let mut a = (centre - 0.02).max(1.01);
        while a <= (centre + 0.02).min(8.0) {
            let v = ll(a);
            if v > best.0 {
                best = (v, a);
            }
            a += 1e-4;
        }
        best.1
    }

    #[test]
    fn small_tail_matches_grid() {
        let tail = [1, 1, 1, 1, 2, 2, 3];
        let fit = fit_alpha_mle(&tail, 1).unwrap();
        let oracle = grid_oracle(&tail, 1);
        assert!((fit.alpha - oracle).abs() < 2e-4, "{} vs {}", fit.alpha, oracle);
        assert!(fit.stderr > 0.0 && fit.stderr.is_finite());
        assert!(!fit.at_upper_bound);
    }

    #[test]
    fn stationary_point() {
        let tail = [5, 5, 6, 7, 9, 12, 20, 31, 64];
        let fit = fit_alpha_mle(&tail, 5).unwrap();
        let stats = TailStats {
            n: tail.len(),
            sum_ln: tail.iter().map(|&v| (v as f64).ln()).sum(),
            x_min: 5,
        };
        let h = 1e-4;
        let slope = (stats.log_likelihood(fit.alpha + h) - stats.log_likelihood(fit.alpha - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-3, "{slope}");
        assert!((fit.log_likelihood - stats.log_likelihood(fit.alpha)).abs() < 1e-9);
    }

    #[test]
    fn degenerate_and_invalid_tails() {
        assert!(matches!(fit_alpha_mle(&[4, 4, 4], 4), Err(Error::DegenerateTail)));
        assert!(matches!(fit_alpha_mle(&[9, 9], 4), Err(Error::DegenerateTail)));
        assert!(matches!(
            fit_alpha_mle(&[3, 9], 4),
            Err(Error::BelowXmin { value: 3, x_min: 4 })
        ));
        assert!(matches!(fit_alpha_mle(&[9], 4), Err(Error::TooFewValues { .. })));
    }

    #[test]
    fn nearly_degenerate_tail_hits_ceiling() {
        let mut tail = vec![1u64; 5000];
        tail.push(2);
        let fit = fit_alpha_mle(&tail, 1).unwrap();
        assert!(fit.at_upper_bound);
        assert_eq!(fit.alpha, ALPHA_UPPER);
    }

    #[test]
    fn brent_on_quadratic() {
        let (x, fx) = brent_minimize(|x| (x - 2.345).powi(2) + 1.0, 0.0, 10.0, 1e-10);
        assert!((x - 2.345).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-12);
    }
}
