//! Modular arithmetic, Dirichlet characters modulo an odd prime and their
//! Gauss sums.
//!
//! Characters are indexed by an exponent `t ∈ [0, q−2]` against the smallest
//! primitive root `g`: `ψ_t(g^j) = exp(2πi·t·j/(q−1))`. With this indexing the
//! parity of `ψ_t` is the parity of `t` and the conjugate of `ψ_t` is
//! `ψ_{(q−1−t) mod (q−1)}`.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{unit_root, Real};

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod m`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, in `[0, m)`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    let mi = m as i64;
    let (g, x, _) = ext_gcd(a.rem_euclid(mi), mi);
    (g == 1).then(|| x.rem_euclid(mi) as u64)
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_prime_modulus(q: u64) -> Result<()> {
    if q < 3 {
        return Err(Error::ModulusTooSmall(q));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(())
}

/// Smallest `g ≥ 2` of multiplicative order `q − 1` modulo the prime `q`.
pub fn find_primitive_root(q: u64) -> Result<u64> {
    check_prime_modulus(q)?;
    let factors = distinct_prime_factors(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1))
        .ok_or(Error::NotPrime(q))
}

/// Character parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

/// An odd prime `q` together with its smallest primitive root and a
/// discrete-log table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeModulus {
    q: u64,
    g: u64,
    // dlog[r] for 1 <= r < q; dlog[0] is unused.
    dlog: Vec<u32>,
}

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        let g = find_primitive_root(q)?;
        let mut dlog = vec![u32::MAX; q as usize];
        let mut x = 1u64;
        for j in 0..(q - 1) {
            dlog[x as usize] = j as u32;
            x = x * g % q;
        }
        Ok(Self { q, g, dlog })
    }

    pub fn shared(q: u64) -> Result<Arc<Self>> {
        Self::new(q).map(Arc::new)
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn primitive_root(&self) -> u64 {
        self.g
    }

    /// Order of the unit group, `q − 1`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    #[inline]
    pub fn reduce(&self, m: i64) -> u64 {
        m.rem_euclid(self.q as i64) as u64
    }

    /// Discrete logarithm base `g`, or `None` when `q | m`.
    #[inline]
    pub fn dlog(&self, m: i64) -> Option<u32> {
        let r = self.reduce(m);
        (r != 0).then(|| self.dlog[r as usize])
    }

    pub fn inverse(&self, m: i64) -> Option<u64> {
        mod_inverse(m, self.q)
    }
}

/// The character `ψ_t` modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: Arc<PrimeModulus>,
    index: u32,
}

impl DirichletCharacter {
    pub fn new(modulus: Arc<PrimeModulus>, index: u32) -> Result<Self> {
        if u64::from(index) >= modulus.order() {
            return Err(Error::OutOfRange {
                what: "character index",
                value: i64::from(index),
                range: format!("[0, {}]", modulus.order() - 1),
            });
        }
        Ok(Self { modulus, index })
    }

    pub fn trivial(modulus: Arc<PrimeModulus>) -> Self {
        Self { modulus, index: 0 }
    }

    #[inline]
    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    #[inline]
    pub fn index(&self) -> u32 {
        self.index
    }

    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    #[inline]
    pub fn parity(&self) -> Parity {
        if self.index % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn conjugate(&self) -> Self {
        let order = self.modulus.order() as u32;
        Self {
            modulus: self.modulus.clone(),
            index: (order - self.index) % order,
        }
    }

    /// `ψ(m)`; exactly zero when `q | m`.
    pub fn eval<T: Real>(&self, m: i64) -> Complex<T> {
        match self.modulus.dlog(m) {
            None => Complex::new(T::zero(), T::zero()),
            Some(j) => unit_root(
                i64::from(self.index) * i64::from(j),
                self.modulus.order(),
            ),
        }
    }

    /// `τ(ψ) = Σ_{x=1}^{q−1} ψ(x)·e(x/q)`.
    pub fn gauss_sum<T: Real>(&self) -> Complex<T> {
        let q = self.modulus.q();
        (1..q as i64)
            .map(|x| self.eval::<T>(x) * unit_root::<T>(x, q))
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }
}

/// Characters of the given parity; `nontrivial_only` drops `ψ_0`.
pub fn characters_by_parity(
    modulus: &Arc<PrimeModulus>,
    parity: Parity,
    nontrivial_only: bool,
) -> Vec<DirichletCharacter> {
    let start = match parity {
        Parity::Even if nontrivial_only => 2,
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    (start..modulus.order() as u32)
        .step_by(2)
        .map(|t| DirichletCharacter {
            modulus: modulus.clone(),
            index: t,
        })
        .collect()
}

/// Dense table of all character values and Gauss sums modulo `q`.
///
/// `value(t, r)` is `ψ_t(r)` for residues `0 ≤ r < q`.
#[derive(Debug, Clone)]
pub struct CharacterTable<T> {
    modulus: Arc<PrimeModulus>,
    values: Vec<Complex<T>>,
    gauss: Vec<Complex<T>>,
}

impl<T: Real> CharacterTable<T> {
    pub fn new(modulus: Arc<PrimeModulus>) -> Self {
        let q = modulus.q() as usize;
        let order = modulus.order() as u32;
        let mut values = Vec::with_capacity(order as usize * q);
        let mut gauss = Vec::with_capacity(order as usize);
        for t in 0..order {
            let chi = DirichletCharacter {
                modulus: modulus.clone(),
                index: t,
            };
            values.extend((0..q as i64).map(|r| chi.eval::<T>(r)));
            gauss.push(chi.gauss_sum());
        }
        Self {
            modulus,
            values,
            gauss,
        }
    }

    #[inline]
    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    #[inline]
    pub fn value(&self, t: u32, m: i64) -> Complex<T> {
        let q = self.modulus.q() as usize;
        self.values[t as usize * q + self.modulus.reduce(m) as usize]
    }

    #[inline]
    pub fn gauss_sum(&self, t: u32) -> Complex<T> {
        self.gauss[t as usize]
    }

    #[inline]
    pub fn conjugate_index(&self, t: u32) -> u32 {
        let order = self.modulus.order() as u32;
        (order - t) % order
    }

    /// Indices of the characters of a parity, optionally without `ψ_0`.
    pub fn indices(&self, parity: Parity, nontrivial_only: bool) -> Vec<u32> {
        characters_by_parity(&self.modulus, parity, nontrivial_only)
            .into_iter()
            .map(|c| c.index)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn primitive_roots_of_small_primes() {
        assert_eq!(find_primitive_root(3).unwrap(), 2);
        assert_eq!(find_primitive_root(5).unwrap(), 2);
        assert_eq!(find_primitive_root(7).unwrap(), 3);
        assert_eq!(find_primitive_root(23).unwrap(), 5);
    }

    #[test]
    fn primitive_root_rejects_bad_moduli() {
        assert_eq!(find_primitive_root(2), Err(Error::ModulusTooSmall(2)));
        assert_eq!(find_primitive_root(9), Err(Error::NotPrime(9)));
        assert!(PrimeModulus::new(1).is_err());
    }

    #[test]
    fn primitive_root_generates_the_unit_group() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let md = PrimeModulus::new(q).unwrap();
            let mut seen = vec![false; q as usize];
            for j in 0..q - 1 {
                let x = pow_mod(md.primitive_root(), j, q) as usize;
                assert!(!seen[x]);
                seen[x] = true;
            }
        }
    }

    #[test]
    fn character_values() {
        let md = PrimeModulus::shared(5).unwrap();
        let trivial = DirichletCharacter::trivial(md.clone());
        assert!(close(trivial.eval(3), Complex::new(1.0, 0.0), 1e-15));
        let legendre = DirichletCharacter::new(md.clone(), 2).unwrap();
        assert!(close(legendre.eval(2), Complex::new(-1.0, 0.0), 1e-15));
        for t in 0..4 {
            let chi = DirichletCharacter::new(md.clone(), t).unwrap();
            assert_eq!(chi.eval::<f64>(5), Complex::new(0.0, 0.0));
            assert_eq!(chi.eval::<f64>(-10), Complex::new(0.0, 0.0));
        }
        assert!(DirichletCharacter::new(md, 4).is_err());
    }

    #[test]
    fn parity_matches_value_at_minus_one() {
        for q in [3u64, 5, 7, 11, 13] {
            let md = PrimeModulus::shared(q).unwrap();
            for t in 0..(q - 1) as u32 {
                let chi = DirichletCharacter::new(md.clone(), t).unwrap();
                let expect = chi.parity().sign() as f64;
                assert!(close(chi.eval(-1), Complex::new(expect, 0.0), 1e-12));
            }
        }
    }

    #[test]
    fn gauss_sums() {
        let md = PrimeModulus::shared(5).unwrap();
        let g0: Complex<f64> = DirichletCharacter::trivial(md.clone()).gauss_sum();
        assert!(close(g0, Complex::new(-1.0, 0.0), 1e-12));
        let g2: Complex<f64> = DirichletCharacter::new(md, 2).unwrap().gauss_sum();
        assert!(close(g2, Complex::new(5f64.sqrt(), 0.0), 1e-12));
    }

    #[test]
    fn gauss_sum_norm_and_conjugate_product() {
        for q in (3..50).filter(|&q| is_prime(q)) {
            let md = PrimeModulus::shared(q).unwrap();
            for t in 1..(q - 1) as u32 {
                let chi = DirichletCharacter::new(md.clone(), t).unwrap();
                let tau: Complex<f64> = chi.gauss_sum();
                assert!((tau.norm() - (q as f64).sqrt()).abs() < 1e-12);
                let prod = chi.conjugate().gauss_sum::<f64>() * tau;
                let expect = chi.parity().sign() as f64 * q as f64;
                assert!(close(prod, Complex::new(expect, 0.0), 1e-10));
            }
        }
    }

    #[test]
    fn parity_counts() {
        let count = |q: u64, p: Parity| {
            characters_by_parity(&PrimeModulus::shared(q).unwrap(), p, true).len()
        };
        assert_eq!((count(5, Parity::Even), count(5, Parity::Odd)), (1, 2));
        assert_eq!(count(3, Parity::Even), 0);
        assert_eq!((count(7, Parity::Even), count(7, Parity::Odd)), (2, 3));
        let md = PrimeModulus::shared(7).unwrap();
        assert_eq!(characters_by_parity(&md, Parity::Even, false).len(), 3);
    }

    #[test]
    fn orthogonality_multiplicativity_and_conjugation() {
        for q in [5u64, 7, 11, 13] {
            let md = PrimeModulus::shared(q).unwrap();
            for t in 0..(q - 1) as u32 {
                let chi = DirichletCharacter::new(md.clone(), t).unwrap();
                let total: Complex<f64> = (1..q as i64).map(|m| chi.eval::<f64>(m)).sum();
                if t != 0 {
                    assert!(total.norm() < 1e-12);
                }
                let bar = chi.conjugate();
                for a in 1..q as i64 {
                    assert!(close(bar.eval(a), chi.eval::<f64>(a).conj(), 1e-14));
                    for b in 1..q as i64 {
                        let ab: Complex<f64> = chi.eval(a * b);
                        assert!(close(ab, chi.eval::<f64>(a) * chi.eval::<f64>(b), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn table_matches_pointwise_evaluation() {
        let md = PrimeModulus::shared(11).unwrap();
        let table = CharacterTable::<f64>::new(md.clone());
        for t in 0..10 {
            let chi = DirichletCharacter::new(md.clone(), t).unwrap();
            assert_eq!(table.gauss_sum(t), chi.gauss_sum());
            for m in -12..12 {
                assert_eq!(table.value(t, m), chi.eval(m));
            }
            assert_eq!(table.conjugate_index(t), chi.conjugate().index());
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let md = PrimeModulus::shared(13).unwrap();
        let chi = DirichletCharacter::new(md, 3).unwrap();
        let tau: Complex<f32> = chi.gauss_sum();
        assert!((tau.norm() - 13f32.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(mod_inverse(2, 5), Some(3));
        assert_eq!(mod_inverse(-2, 7), Some(3));
        assert_eq!(mod_inverse(7, 7), None);
        assert_eq!(ext_gcd(240, 46).0, 2);
    }
}
