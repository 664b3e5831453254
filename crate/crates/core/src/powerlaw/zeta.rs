use crate::error::{Error, Result};

/// `B_{2j} / (2j)!` for j = 1..=8.
const EM_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// Hurwitz zeta `sum_{k>=0} (k + a)^(-s)` for `s > 1`, `a > 0`.
///
/// Terms are summed directly until the shifted argument reaches
/// `max(12, s)`, after which the Euler-Maclaurin remainder with eight
/// Bernoulli corrections closes the series.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::DivergentSeries(s));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Hurwitz zeta needs a > 0, got {a}"
        )));
    }
    Ok(hurwitz_unchecked(s, a))
}

pub(crate) fn hurwitz_unchecked(s: f64, a: f64) -> f64 {
    let shift_to = s.max(12.0);
    let direct = if a >= shift_to {
        0
    } else {
        (shift_to - a).ceil() as usize
    };
    let mut sum = 0.0;
    for k in 0..direct {
        sum += (a + k as f64).powf(-s);
    }
    let b = a + direct as f64;
    let b_pow = b.powf(-s);
    let mut tail = b * b_pow / (s - 1.0) + 0.5 * b_pow;
    // (s)_{2j-1} b^{-s-2j+1}, starting at j = 1
    let inv_b2 = 1.0 / (b * b);
    let mut t = s * b_pow / b;
    for (j, c) in EM_COEFFS.iter().enumerate() {
        tail += c * t;
        let m = (2 * j + 1) as f64;
        t *= (s + m) * (s + m + 1.0) * inv_b2;
    }
    sum + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn riemann_case() {
        let z = hurwitz_zeta(2.0, 1.0).unwrap();
        assert!((z - PI * PI / 6.0).abs() < 1e-14);
        let z4 = hurwitz_zeta(4.0, 1.0).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn shift_identity() {
        let z = hurwitz_zeta(2.0, 2.0).unwrap();
        assert!((z - (PI * PI / 6.0 - 1.0)).abs() < 1e-14);
        for &(s, a) in &[(1.3, 0.7), (2.5, 3.0), (5.0, 40.5), (7.9, 1.0)] {
            let lhs = hurwitz_zeta(s, a + 1.0).unwrap();
            let rhs = hurwitz_zeta(s, a).unwrap() - a.powf(-s);
            assert!(((lhs - rhs) / lhs).abs() < 1e-12, "s={s} a={a}");
        }
    }

    #[test]
    fn partial_sum_oracle() {
        // 10^7 direct terms plus the integral of the remainder, which is
        // accurate to O(N^{-s-1})
        let (s, a) = (2.5, 7.0);
        let n = 10_000_000u64;
        let mut direct = 0.0;
        for k in (0..n).rev() {
            direct += (k as f64 + a).powf(-s);
        }
        let b = n as f64 + a;
        let oracle = direct + b.powf(1.0 - s) / (s - 1.0) + 0.5 * b.powf(-s);
        let z = hurwitz_zeta(s, a).unwrap();
        assert!(((z - oracle) / oracle).abs() < 1e-9, "{z} vs {oracle}");
    }

    #[test]
    fn near_one_and_large_s() {
        // zeta(s) ~ 1/(s-1) + Euler-Mascheroni as s -> 1
        let s = 1.0 + 1e-6;
        let z = hurwitz_zeta(s, 1.0).unwrap();
        assert!((z - (1e6 + 0.5772156649)).abs() < 1e-3);
        let z = hurwitz_zeta(30.0, 1.0).unwrap();
        assert!((z - (1.0 + 2f64.powi(-30) + 3f64.powi(-30))).abs() < 1e-15);
    }

    #[test]
    fn divergent_and_bad_shift() {
        assert!(matches!(hurwitz_zeta(1.0, 1.0), Err(Error::DivergentSeries(_))));
        assert!(matches!(hurwitz_zeta(0.5, 1.0), Err(Error::DivergentSeries(_))));
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
    }
}
