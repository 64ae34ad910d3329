//! Complex log-gamma, Bernoulli numbers and the Hurwitz zeta function.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Distance to a pole below which evaluation is refused.
pub const POLE_THRESHOLD: f64 = 1e-8;

const MAX_BERNOULLI: usize = 120;

/// Exact Bernoulli numbers `B_0..=B_n` (with `B_1 = −1/2`) by the
/// Akiyama–Tanigawa algorithm.
pub fn bernoulli_exact(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut row: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        out.push(row[0].clone());
    }
    // The algorithm yields B_1 = +1/2.
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `B_{2j} / (2j)!` for `j = 0, 1, …` as `f64`.
fn scaled_even_bernoulli() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_exact(MAX_BERNOULLI);
        let mut fact = BigInt::one();
        let mut out = Vec::new();
        for (m, bm) in b.iter().enumerate() {
            if m > 0 {
                fact *= BigInt::from(m);
            }
            if m % 2 == 0 {
                let v = bm / BigRational::from_integer(fact.clone());
                out.push(v.to_f64().unwrap_or(0.0));
            }
        }
        out
    })
}

/// Stirling coefficients `B_{2j} / (2j(2j−1))`, `j ≥ 1`.
fn stirling_coefficients() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        bernoulli_exact(40)
            .iter()
            .enumerate()
            .skip(2)
            .step_by(2)
            .map(|(m, b)| {
                let d = BigRational::from_integer(BigInt::from(m * (m - 1)));
                (b / d).to_f64().unwrap_or(0.0)
            })
            .collect()
    })
}

fn near_nonpositive_integer<T: Real>(z: Complex<T>) -> bool {
    let r = z.re.round();
    r <= T::zero() && (z - Complex::new(r, T::zero())).norm() < T::lit(POLE_THRESHOLD)
}

/// A branch of `log Γ(z)`: the exponential is exact, the imaginary part is
/// not normalised to the principal branch.
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if near_nonpositive_integer(z) {
        return Err(Error::Pole(format!("Gamma at {z}")));
    }
    let threshold = T::lit(15.0);
    let mut z = z;
    let mut shift = Complex::new(T::zero(), T::zero());
    while z.re < threshold {
        shift += z.ln();
        z += T::one();
    }
    let half = T::lit(0.5);
    let mut acc = (z - half) * z.ln() - z + T::lit(0.5 * std::f64::consts::TAU.ln());
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let eps = T::epsilon() * T::lit(0.1);
    for &c in stirling_coefficients() {
        let term = pow * T::lit(c);
        acc += term;
        if term.norm() < eps * acc.norm().max(T::one()) {
            break;
        }
        pow *= inv2;
    }
    Ok(acc - shift)
}

/// `Γ(z)`.
pub fn gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    log_gamma(z).map(|v| v.exp())
}

#[inline]
fn pow_neg<T: Real>(base_ln: T, s: Complex<T>) -> Complex<T> {
    // base^{-s} for base = exp(base_ln)
    Complex::from_polar((-s.re * base_ln).exp(), -s.im * base_ln)
}

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^{−s}` for `a > 0`, continued to
/// `s ≠ 1` by Euler–Maclaurin summation.
pub fn hurwitz_zeta<T: Real>(s: Complex<T>, a: T) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    if (s - one).norm() < T::lit(POLE_THRESHOLD) {
        return Err(Error::Pole(format!("Hurwitz zeta at s = {s}")));
    }
    euler_maclaurin(s, a, false)
}

/// `ζ(s, a) − 1/(s − 1)`, entire in `s`. Sums of these with weights adding
/// up to zero give pole-free combinations such as nontrivial Dirichlet
/// L-functions without cancellation near `s = 1`.
pub fn hurwitz_zeta_regular<T: Real>(s: Complex<T>, a: T) -> Result<Complex<T>> {
    euler_maclaurin(s, a, true)
}

/// `(e^z − 1)/z`, accurate near zero.
fn exprel<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(1e-3) {
        let mut term = Complex::new(T::one(), T::zero());
        let mut acc = term;
        for k in 2..8 {
            term = term * z / T::from_int(k);
            acc += term;
        }
        acc
    } else {
        (z.exp() - T::one()) / z
    }
}

/// `Σ_{k ≥ N} (k + a)^{−s}` by Euler–Maclaurin from `N = n_terms`, or
/// `None` when the asymptotic series has not converged at this `N`. The
/// regular variant drops the `1/(s − 1)` pole part.
fn em_tail<T: Real>(s: Complex<T>, a: T, n_terms: usize, regular: bool) -> Option<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let coeffs = scaled_even_bernoulli();
    let eps = T::epsilon();
    let big = T::from_int(n_terms as i64) + a;
    let big_ln = big.ln();
    let big_pow = pow_neg(big_ln, s);
    // ∫_N^∞ x^{−s} dx = N^{1−s}/(s−1); the regular variant drops 1/(s−1).
    let integral = if regular {
        -exprel((one - s) * big_ln) * big_ln
    } else {
        big_pow * big / (s - one)
    };
    let mut acc = integral + big_pow * T::lit(0.5);
    // Rising factorial s (s+1) … (s+2j−2) times big^{−s−2j+1}, updated as
    // one product so that neither factor overflows at large |s|.
    let mut factor = s * big_pow / big;
    let inv_big2 = (big * big).recip();
    for (j, &c) in coeffs.iter().enumerate().skip(1) {
        let term = factor * T::lit(c);
        acc += term;
        if term.norm() <= eps * acc.norm().max(big_pow.norm()) {
            return Some(acc);
        }
        let m = T::from_int(2 * j as i64);
        factor = factor * ((s + m - T::one()) * inv_big2) * (s + m);
    }
    None
}

fn initial_terms<T: Real>(s: Complex<T>) -> usize {
    (0.25 * s.norm().to_f64().unwrap_or(0.0)).ceil().max(16.0) as usize
}

fn euler_maclaurin<T: Real>(s: Complex<T>, a: T, regular: bool) -> Result<Complex<T>> {
    if a <= T::zero() {
        return Err(Error::InvalidParameter(format!("Hurwitz parameter a = {a} must be positive")));
    }
    let mut n_terms = initial_terms(s);
    loop {
        if let Some(tail) = em_tail(s, a, n_terms, regular) {
            let mut head = Complex::new(T::zero(), T::zero());
            for k in 0..n_terms {
                head += pow_neg((T::from_int(k as i64) + a).ln(), s);
            }
            return Ok(head + tail);
        }
        n_terms *= 2;
        if n_terms > 1 << 24 {
            return Err(Error::InvalidParameter(format!(
                "Hurwitz zeta did not converge at s = {s}, a = {a}"
            )));
        }
    }
}

/// `ζ(s − shift_j, r/q)` for every shift `j` and every `r = 1, …, q − 1`
/// (entry `[j][r − 1]`), or the regular parts `ζ − 1/(s − shift_j − 1)`.
/// The partial sums share `ln(k + r/q)` across the shifts.
pub fn hurwitz_residue_batch<T: Real>(
    s: Complex<T>,
    shifts: &[Complex<T>],
    q: u64,
    regular: bool,
) -> Result<Vec<Vec<Complex<T>>>> {
    let one = Complex::new(T::one(), T::zero());
    let points: Vec<Complex<T>> = shifts.iter().map(|&a| s - a).collect();
    if !regular {
        if let Some(p) = points.iter().find(|&&p| (p - one).norm() < T::lit(POLE_THRESHOLD)) {
            return Err(Error::Pole(format!("Hurwitz zeta at s = {p}")));
        }
    }
    let qf = T::from_int(q as i64);
    let n_terms = points.iter().map(|&p| initial_terms(p)).max().unwrap_or(16);
    let residues = q as usize - 1;
    let mut tails = vec![vec![Complex::new(T::zero(), T::zero()); residues]; points.len()];
    for (j, &p) in points.iter().enumerate() {
        for r in 1..q {
            let a = T::from_int(r as i64) / qf;
            match em_tail(p, a, n_terms, regular) {
                Some(t) => tails[j][r as usize - 1] = t,
                // Rare: fall back to the single evaluation with its own N.
                None => {
                    tails[j][r as usize - 1] = euler_maclaurin(p, a, regular)?;
                    tails[j][r as usize - 1] -= head_sum(p, a, n_terms);
                }
            }
        }
    }
    let same_re = points.iter().all(|p| p.re == points[0].re);
    let mut heads = vec![vec![Complex::new(T::zero(), T::zero()); residues]; points.len()];
    for k in 0..n_terms as u64 {
        for r in 1..q {
            let lm = (T::from_int(k as i64) + T::from_int(r as i64) / qf).ln();
            let shared = if same_re { (-points[0].re * lm).exp() } else { T::zero() };
            for (j, p) in points.iter().enumerate() {
                let mag = if same_re { shared } else { (-p.re * lm).exp() };
                heads[j][r as usize - 1] += Complex::from_polar(mag, -p.im * lm);
            }
        }
    }
    Ok(heads
        .iter()
        .zip(&tails)
        .map(|(h, t)| h.iter().zip(t).map(|(a, b)| *a + *b).collect())
        .collect())
}

/// `Σ_{k < count} (k + a)^{−s}`.
fn head_sum<T: Real>(s: Complex<T>, a: T, count: usize) -> Complex<T> {
    (0..count).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
        acc + pow_neg((T::from_int(k as i64) + a).ln(), s)
    })
}

/// Riemann zeta `ζ(s) = ζ(s, 1)`.
pub fn zeta<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    hurwitz_zeta(s, T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn hurwitz_far_up_the_critical_line() {
        // mpmath: zeta(0.5 + 8000j, 0.2)
        let z = hurwitz_zeta(Complex::new(0.5, 8000.0), 0.2).unwrap();
        let want = Complex::new(3.403_258_592_488_184, -3.203_841_006_089_376);
        assert!((z - want).norm() < 1e-10, "{z}");
        let w = hurwitz_zeta(Complex::new(0.5, -8000.0), 0.2).unwrap();
        assert!((w - want.conj()).norm() < 1e-10, "{w}");
    }

    #[test]
    fn residue_batch_matches_single_calls() {
        let shifts = [c(0.0, 1.3), c(0.0, -0.4), c(0.2, -0.9)];
        for s in [c(0.5, 3.0), c(0.5, -250.0), c(2.5, 40.0), c(-0.5, 900.0)] {
            for regular in [false, true] {
                let batch = hurwitz_residue_batch(s, &shifts, 7, regular).unwrap();
                for (j, &a) in shifts.iter().enumerate() {
                    for r in 1..7u64 {
                        let x = r as f64 / 7.0;
                        let single = if regular {
                            hurwitz_zeta_regular(s - a, x).unwrap()
                        } else {
                            hurwitz_zeta(s - a, x).unwrap()
                        };
                        let got = batch[j][r as usize - 1];
                        assert!((got - single).norm() <= 1e-12 * single.norm().max(1.0), "{s} {j} {r}: {got} vs {single}");
                    }
                }
            }
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_exact(12);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(b[0], r(1, 1));
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[3], r(0, 1));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[12], r(-691, 2730));
    }

    #[test]
    fn gamma_at_integers_and_half() {
        let g = gamma(c(5.0, 0.0)).unwrap();
        assert!((g - c(24.0, 0.0)).norm() < 1e-11);
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g - c(PI.sqrt(), 0.0)).norm() < 1e-13, "{g}");
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g - c(-2.0 * PI.sqrt(), 0.0)).norm() < 1e-13);
        assert!(gamma(c(-3.0, 0.0)).is_err());
    }

    #[test]
    fn gamma_reflection_and_recurrence() {
        for &(x, y) in &[(0.3, 1.7), (-2.4, 0.9), (0.25, -12.0), (3.5, 40.0)] {
            let z = c(x, y);
            let lhs = gamma(z).unwrap() * gamma(C::new(1.0, 0.0) - z).unwrap();
            let rhs = C::new(PI, 0.0) / (z * PI).sin();
            assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm(), "{z}");
            let step = gamma(z + 1.0).unwrap() - z * gamma(z).unwrap();
            assert!(step.norm() <= 1e-12 * gamma(z + 1.0).unwrap().norm().max(1e-300));
        }
    }

    #[test]
    fn gamma_modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.5, 3.0, 20.0] {
            let g = gamma(c(0.0, y)).unwrap().norm_sqr();
            let expect = PI / (y * (PI * y).sinh());
            assert!((g / expect - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zeta_special_values() {
        let z2 = zeta(c(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-14);
        let zm1 = zeta(c(-1.0, 0.0)).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-14);
        let z0 = zeta(c(0.0, 0.0)).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-14);
        let h = hurwitz_zeta(c(2.0, 0.0), 0.5).unwrap();
        assert!((h.re - PI * PI / 2.0).abs() < 1e-13);
        assert!(zeta(c(1.0, 0.0)).is_err());
        assert!(zeta(c(1.0 + 1e-9, 0.0)).is_err());
    }

    #[test]
    fn zeta_on_critical_line() {
        // ζ(1/2 + 14.134725141734693 i) is a zero.
        let z = zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12);
        // mpmath: zeta(0.5+30j)
        let z = zeta(c(0.5, 30.0)).unwrap();
        assert!((z - c(-0.120_642_287_590_043_7, -0.583_691_214_763_706_3)).norm() < 1e-12);
    }

    #[test]
    fn hurwitz_reference_values() {
        // 30-digit references from an arbitrary-precision evaluation.
        let cases = [
            (c(3.0, 4.0), 0.2, c(123.862_244_488_789_61, 18.887_980_436_352_995)),
            (c(3.0, 4.0), 0.5, c(-7.512_124_248_705_721, 2.638_024_290_586_378_5)),
            (c(3.0, 4.0), 1.0, c(0.890_554_906_965_073_3, -0.008_075_945_424_327_26)),
            (c(-0.7, 25.0), 0.1, c(-4.977_317_368_402_503, -0.020_993_139_456_034_618)),
        ];
        for (s, a, expect) in cases {
            let v = hurwitz_zeta(s, a).unwrap();
            assert!((v - expect).norm() < 1e-12 * expect.norm().max(1.0), "{s} {a}: {v}");
        }
    }

    #[test]
    fn hurwitz_against_direct_series() {
        let s = c(3.0, 4.0);
        let direct: C = (0..100_000).map(|k| C::new(k as f64 + 0.5, 0.0).powc(-s)).sum();
        let tail_bound = 100_000f64.powf(-2.0) / 2.0;
        assert!((hurwitz_zeta(s, 0.5).unwrap() - direct).norm() < tail_bound + 1e-11);
    }

    #[test]
    fn hurwitz_shift_relation() {
        // ζ(s, a) = a^{−s} + ζ(s, a + 1)
        for &(x, y) in &[(-0.7, 25.0), (0.5, -3.0), (1.8, 55.0)] {
            let s = c(x, y);
            for a in [0.1, 0.6] {
                let lhs = hurwitz_zeta(s, a).unwrap();
                let rhs = C::new(a, 0.0).powc(-s) + hurwitz_zeta(s, a + 1.0).unwrap();
                assert!((lhs - rhs).norm() < 1e-11 * lhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn regular_part_removes_the_pole() {
        let s = c(1.3, 0.4);
        let full = hurwitz_zeta(s, 0.3).unwrap();
        let reg = hurwitz_zeta_regular(s, 0.3).unwrap();
        assert!((full - reg - (s - 1.0).inv()).norm() < 1e-12);
        // Near s = 1: ζ(s, a) − 1/(s − 1) → −ψ(a); ψ(1) = −γ.
        let at_one = hurwitz_zeta_regular(c(1.0, 0.0), 1.0).unwrap();
        assert!((at_one.re - 0.577_215_664_901_532_9).abs() < 1e-13);
    }

    #[test]
    fn single_precision_zeta() {
        let z = zeta(Complex::<f32>::new(2.0, 0.0)).unwrap();
        assert!((z.re - (PI * PI / 6.0) as f32).abs() < 1e-5);
    }
}
