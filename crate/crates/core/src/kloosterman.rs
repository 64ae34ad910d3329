//! Hyper-Kloosterman sums modulo a prime and the Gauss-sum moment identities
//! that express them through Dirichlet characters.
//!
//! `Kl_k(m, q) = Σ e((x_1 + … + x_{k−1} + m·(x_1⋯x_{k−1})^{−1}) / q)` over
//! units `x_i` modulo `q`, and `Kl_1(m, q) = e(m/q)`.

use std::sync::Arc;

use num_complex::Complex;

use crate::chars::{CharacterTable, Parity, PrimeModulus};
use crate::error::{Error, Result};
use crate::scalar::{sign, Real};

/// Default cap on the number of enumerated tuples.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Arguments of `Kl_k(m, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KloostermanParams {
    pub k: u32,
    pub m: i64,
    pub q: u64,
}

impl KloostermanParams {
    pub fn new(k: u32, m: i64, q: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange {
                what: "k",
                value: 0,
                range: "[1, ∞)".into(),
            });
        }
        PrimeModulus::new(q)?;
        Ok(Self { k, m, q })
    }
}

/// How to evaluate a Kloosterman sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KlMethod {
    /// Direct enumeration when within budget, otherwise the character method.
    #[default]
    Auto,
    Direct,
    Chars,
}

/// The table `e(j/q)` for `0 ≤ j < q`.
pub fn roots_of_unity<T: Real>(q: u64) -> Vec<Complex<T>> {
    (0..q as i64).map(|j| crate::scalar::unit_root(j, q)).collect()
}

/// Joint distribution of `(x_1 + … + x_{k−1} mod q, x_1⋯x_{k−1} mod q)` over
/// unit tuples; `Kl_k(m)` for every residue `m` follows by one weighted pass.
#[derive(Debug, Clone)]
struct SumProductHistogram {
    q: u64,
    // counts[s * q + p]
    counts: Vec<u64>,
}

impl SumProductHistogram {
    fn enumerate(k: u32, q: u64, budget: u64) -> Result<Self> {
        let dim = k - 1;
        let needed = (q as u128 - 1).pow(dim);
        if needed > u128::from(budget) {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut counts = vec![0u64; (q * q) as usize];
        if dim == 0 {
            counts[1] = 1;
        } else {
            Self::recurse(q, dim, 0, 1, &mut counts);
        }
        Ok(Self { q, counts })
    }

    fn recurse(q: u64, remaining: u32, sum: u64, prod: u64, counts: &mut [u64]) {
        if remaining == 1 {
            for x in 1..q {
                let s = (sum + x) % q;
                let p = prod * x % q;
                counts[(s * q + p) as usize] += 1;
            }
            return;
        }
        for x in 1..q {
            Self::recurse(q, remaining - 1, (sum + x) % q, prod * x % q, counts);
        }
    }

    fn evaluate<T: Real>(&self, m: i64, roots: &[Complex<T>]) -> Complex<T> {
        let q = self.q;
        let mr = m.rem_euclid(q as i64) as u64;
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in 1..q {
            let mp = mr * crate::chars::pow_mod(p, q - 2, q) % q;
            for s in 0..q {
                let c = self.counts[(s * q + p) as usize];
                if c != 0 {
                    acc += roots[((s + mp) % q) as usize] * T::from_int(c as i64);
                }
            }
        }
        acc
    }
}

/// `Kl_k(m, q)` by direct enumeration of the `(q−1)^{k−1}` unit tuples.
pub fn kl_direct<T: Real>(p: KloostermanParams, budget: u64) -> Result<Complex<T>> {
    let hist = SumProductHistogram::enumerate(p.k, p.q, budget)?;
    Ok(hist.evaluate(p.m, &roots_of_unity::<T>(p.q)))
}

/// `Σ* τ(ψ)^k ψ̄(m)` over nontrivial characters of the given parity.
pub fn char_moment<T: Real>(
    table: &CharacterTable<T>,
    k: u32,
    m: i64,
    parity: Parity,
) -> Complex<T> {
    table
        .indices(parity, true)
        .into_iter()
        .map(|t| table.gauss_sum(t).powu(k) * table.value(table.conjugate_index(t), m))
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// `Kl_k(m, q)` for a unit `m`, through the even and odd moment identities.
pub fn kl_via_chars<T: Real>(p: KloostermanParams) -> Result<Complex<T>> {
    let md = PrimeModulus::shared(p.q)?;
    let table = CharacterTable::<T>::new(md);
    kl_via_chars_with(&table, p.k, p.m)
}

/// As [`kl_via_chars`] with a prebuilt character table.
pub fn kl_via_chars_with<T: Real>(table: &CharacterTable<T>, k: u32, m: i64) -> Result<Complex<T>> {
    let q = table.modulus().q();
    if m.rem_euclid(q as i64) == 0 {
        return Err(Error::NotAUnit(m, q));
    }
    let even = char_moment(table, k, m, Parity::Even);
    let odd = char_moment(table, k, m, Parity::Odd);
    Ok((even + odd + sign::<T>(i64::from(k))) / T::from_int(q as i64 - 1))
}

/// `Kl_k(m, q)` with the requested method.
pub fn kl<T: Real>(p: KloostermanParams, method: KlMethod, budget: u64) -> Result<Complex<T>> {
    match method {
        KlMethod::Direct => kl_direct(p, budget),
        KlMethod::Chars => {
            if p.m.rem_euclid(p.q as i64) == 0 {
                Ok(Complex::new(sign(i64::from(p.k) - 1), T::zero()))
            } else {
                kl_via_chars(p)
            }
        }
        KlMethod::Auto => match kl_direct(p, budget) {
            Err(Error::BudgetExceeded { .. }) => kl(p, KlMethod::Chars, budget),
            other => other,
        },
    }
}

/// `Kl_k(m, q)` for every residue `m` modulo `q`.
#[derive(Debug, Clone)]
pub struct KloostermanTable<T> {
    k: u32,
    q: u64,
    values: Vec<Complex<T>>,
}

impl<T: Real> KloostermanTable<T> {
    /// Builds the table by enumeration, or by characters when enumeration
    /// would exceed `budget`.
    pub fn new(modulus: &Arc<PrimeModulus>, k: u32, budget: u64) -> Result<Self> {
        let q = modulus.q();
        KloostermanParams::new(k, 1, q)?;
        let values = match SumProductHistogram::enumerate(k, q, budget) {
            Ok(hist) => {
                let roots = roots_of_unity::<T>(q);
                (0..q as i64).map(|m| hist.evaluate(m, &roots)).collect()
            }
            Err(Error::BudgetExceeded { .. }) => {
                let table = CharacterTable::<T>::new(modulus.clone());
                let mut v = vec![Complex::new(sign(i64::from(k) - 1), T::zero())];
                for m in 1..q as i64 {
                    v.push(kl_via_chars_with(&table, k, m)?);
                }
                v
            }
            Err(e) => return Err(e),
        };
        Ok(Self { k, q, values })
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn get(&self, m: i64) -> Complex<T> {
        self.values[m.rem_euclid(self.q as i64) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(k: u32, m: i64, q: u64) -> Complex<f64> {
        kl_direct(KloostermanParams::new(k, m, q).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    // Straight nested-loop definition, kept independent of the histogram path.
    fn naive(k: u32, m: i64, q: u64) -> Complex<f64> {
        let qi = q as i64;
        let mut acc = Complex::new(0.0, 0.0);
        let dim = (k - 1) as usize;
        let mut xs = vec![1i64; dim];
        loop {
            let sum: i64 = xs.iter().sum();
            let prod = xs.iter().fold(1i64, |p, &x| p * x % qi);
            let inv = crate::chars::mod_inverse(prod, q).unwrap() as i64;
            let arg = (sum + m * inv).rem_euclid(qi) as f64 / q as f64;
            acc += Complex::from_polar(1.0, std::f64::consts::TAU * arg);
            let mut i = 0;
            loop {
                if i == dim {
                    return acc;
                }
                xs[i] += 1;
                if xs[i] < qi {
                    break;
                }
                xs[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn degree_one_is_additive_character() {
        let v = direct(1, 3, 7);
        let e = Complex::from_polar(1.0, std::f64::consts::TAU * 3.0 / 7.0);
        assert!((v - e).norm() < 1e-14);
    }

    #[test]
    fn classical_kloosterman_value() {
        let v = direct(2, 1, 5);
        assert!((v.re - 0.381_966_011_250_105_1).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn degenerate_modulus_multiple() {
        for q in [3u64, 5, 7] {
            for k in 1..=5u32 {
                let v = direct(k, 2 * q as i64, q);
                let expect = if k % 2 == 1 { 1.0 } else { -1.0 };
                assert!((v - Complex::new(expect, 0.0)).norm() < 1e-12, "k={k} q={q}");
            }
        }
    }

    #[test]
    fn histogram_matches_nested_loops() {
        for q in [3u64, 5, 7] {
            for k in 2..=4u32 {
                for m in -3..(q as i64 + 2) {
                    if m.rem_euclid(q as i64) == 0 {
                        continue;
                    }
                    assert!((direct(k, m, q) - naive(k, m, q)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn chars_method_matches_enumeration() {
        for q in [3u64, 5, 7, 11, 13] {
            for k in 1..=5u32 {
                for m in 1..q as i64 {
                    let p = KloostermanParams::new(k, m, q).unwrap();
                    let a: Complex<f64> = kl_direct(p, DEFAULT_BUDGET).unwrap();
                    let b: Complex<f64> = kl_via_chars(p).unwrap();
                    assert!((a - b).norm() < 1e-10, "k={k} m={m} q={q}");
                }
            }
        }
    }

    #[test]
    fn chars_method_rejects_non_units() {
        let p = KloostermanParams::new(3, 14, 7).unwrap();
        assert_eq!(kl_via_chars::<f64>(p), Err(Error::NotAUnit(14, 7)));
    }

    #[test]
    fn budget_refusal_and_auto_fallback() {
        let p = KloostermanParams::new(4, 2, 11).unwrap();
        assert!(matches!(
            kl_direct::<f64>(p, 100),
            Err(Error::BudgetExceeded { needed: 1000, budget: 100 })
        ));
        let auto: Complex<f64> = kl(p, KlMethod::Auto, 100).unwrap();
        assert!((auto - direct(4, 2, 11)).norm() < 1e-10);
    }

    #[test]
    fn table_agrees_with_pointwise_values() {
        let md = PrimeModulus::shared(7).unwrap();
        for budget in [DEFAULT_BUDGET, 1] {
            let table = KloostermanTable::<f64>::new(&md, 3, budget).unwrap();
            for m in 0..7 {
                assert!((table.get(m) - direct(3, m, 7)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(KloostermanParams::new(0, 1, 5).is_err());
        assert!(KloostermanParams::new(2, 1, 9).is_err());
    }
}
