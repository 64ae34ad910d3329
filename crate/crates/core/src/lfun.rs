//! Dirichlet and twisted L-functions, the character-weighted combinations
//! `Z, Z̃, Y, Ỹ`, and residuals of the functional equations they satisfy.
//!
//! With `L(s) = L(s, π)`, `L̃(w) = L(w, π̃)`, `H_l`, `H̃_l` the Hecke
//! polynomials in `q^{−s}` and `Σ*` running over nontrivial characters:
//!
//! ```text
//! Z(s)  = Σ*_even τ(ψ̄)^k ψ(a) L(s, π×ψ)      + (−1)^k     L(s) (1 + q H_1(s))
//! Z̃(w)  = Σ*_even τ(ψ)^{n−k} ψ(a) L(w, π̃×ψ̄) + (−1)^{n−k} L̃(w) (1 + q H̃_1(w))
//! Y(s)  = Σ_odd   τ(ψ̄)^k ψ(a) L(s, π×ψ)
//! Ỹ(w)  = Σ_odd   τ(ψ)^{n−k} ψ(a) L(w, π̃×ψ̄)
//! ```
//!
//! Their Dirichlet coefficients are `(q−1)/2 · (Kl_k(am, q) ± Kl_k(−am, q)) ·
//! A(1, …, 1, m)` and `(q−1)/2 · (Kl_{n−k}(ām, q) ± Kl_{n−k}(−ām, q)) ·
//! A(m, 1, …, 1)`.

use std::sync::Arc;

use num_complex::Complex;

use crate::chars::{CharacterTable, DirichletCharacter, Parity, PrimeModulus};
use crate::coeffs::{at_left, at_right, unit_tuple, CoefficientSource, EisensteinParams};
use crate::error::{Error, Result};
use crate::kloosterman::{KloostermanTable, DEFAULT_BUDGET};
use crate::mellin::{gamma_factor, Sign};
use crate::scalar::{real_pow, sign, Real};
use crate::special::{hurwitz_residue_batch, hurwitz_zeta, hurwitz_zeta_regular, POLE_THRESHOLD};

/// How an L-value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LMethod {
    /// Truncated Dirichlet series inside its half-plane of absolute convergence.
    Series,
    /// Analytic continuation through zeta and Hurwitz-zeta values.
    Continuation,
}

/// An L-function value together with its evaluation method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LPoint<T> {
    pub s: Complex<T>,
    pub value: Complex<T>,
    pub method: LMethod,
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// `q^{−s}` for a positive integer `q`.
#[inline]
pub fn int_pow_neg<T: Real>(q: u64, s: Complex<T>) -> Complex<T> {
    real_pow(T::from_int(q as i64), -s)
}

/// `L(s, ψ) = q^{−s} Σ_{r=1}^{q−1} ψ(r) ζ(s, r/q)`.
pub fn dirichlet_l<T: Real>(s: Complex<T>, chi: &DirichletCharacter) -> Result<Complex<T>> {
    let q = chi.modulus().q();
    let regular = !chi.is_trivial();
    let mut acc: Complex<T> = czero();
    for r in 1..q {
        let a = T::from_int(r as i64) / T::from_int(q as i64);
        let z = if regular {
            hurwitz_zeta_regular(s, a)?
        } else {
            hurwitz_zeta(s, a)?
        };
        acc += chi.eval::<T>(r as i64) * z;
    }
    Ok(acc * int_pow_neg(q, s))
}

/// `L(s, ψ_t)` for every nontrivial character index `t`; entry 0 is unused
/// and set to zero.
pub fn dirichlet_l_nontrivial<T: Real>(s: Complex<T>, table: &CharacterTable<T>) -> Result<Vec<Complex<T>>> {
    let hz = hurwitz_residue_batch(s, &[czero()], table.modulus().q(), true)?;
    Ok(twists_from_residues(s, &hz[0], table))
}

/// `q^{−s} Σ_r ψ_t(r) ζ(s, r/q)` for nontrivial `t`. The regular parts may
/// stand in for `ζ(s, r/q)` since `Σ_r ψ_t(r) = 0`.
fn twists_from_residues<T: Real>(s: Complex<T>, hz: &[Complex<T>], table: &CharacterTable<T>) -> Vec<Complex<T>> {
    let order = table.modulus().order() as usize;
    let scale = int_pow_neg(table.modulus().q(), s);
    let mut out = vec![czero(); order];
    for (t, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc: Complex<T> = czero();
        for (i, z) in hz.iter().enumerate() {
            acc += table.value(t as u32, i as i64 + 1) * *z;
        }
        *slot = acc * scale;
    }
    out
}

fn check_poles<T: Real>(s: Complex<T>, alphas: &[Complex<T>]) -> Result<()> {
    let one = Complex::new(T::one(), T::zero());
    let bad: Vec<usize> = alphas
        .iter()
        .enumerate()
        .filter(|(_, a)| (s - *a - one).norm() < T::lit(POLE_THRESHOLD))
        .map(|(j, _)| j + 1)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Pole(format!("L(s, π) at s = {s}: s = 1 + α_j for j in {bad:?}")))
    }
}

/// `L(s, π) = Π_j ζ(s − α_j)`.
pub fn eis_l<T: Real>(s: Complex<T>, params: &EisensteinParams<T>) -> Result<Complex<T>> {
    check_poles(s, params.alphas())?;
    params
        .alphas()
        .iter()
        .try_fold(Complex::new(T::one(), T::zero()), |acc, a| {
            Ok(acc * hurwitz_zeta(s - a, T::one())?)
        })
}

/// `L(s, π × ψ) = Π_j L(s − α_j, ψ)`.
pub fn eis_l_twisted<T: Real>(
    s: Complex<T>,
    params: &EisensteinParams<T>,
    chi: &DirichletCharacter,
) -> Result<Complex<T>> {
    if chi.is_trivial() {
        check_poles(s, params.alphas())?;
    }
    params
        .alphas()
        .iter()
        .try_fold(Complex::new(T::one(), T::zero()), |acc, a| Ok(acc * dirichlet_l(s - a, chi)?))
}

/// `L(s, π × ψ_t)` for every nontrivial `t` (entry 0 unused).
pub fn eis_l_all_twists<T: Real>(
    s: Complex<T>,
    params: &EisensteinParams<T>,
    table: &CharacterTable<T>,
) -> Result<Vec<Complex<T>>> {
    let order = table.modulus().order() as usize;
    let mut out = vec![Complex::new(T::one(), T::zero()); order];
    out[0] = czero();
    let hz = hurwitz_residue_batch(s, params.alphas(), table.modulus().q(), true)?;
    for (a, residues) in params.alphas().iter().zip(&hz) {
        let factor = twists_from_residues(s - a, residues, table);
        for t in 1..order {
            out[t] *= factor[t];
        }
    }
    Ok(out)
}

/// `Σ_{m ≤ len} c_m m^{−s}` with `coeffs[m − 1] = c_m`.
pub fn dirichlet_series<T: Real>(s: Complex<T>, coeffs: &[Complex<T>]) -> Complex<T> {
    let mut acc: Complex<T> = czero();
    for (i, c) in coeffs.iter().enumerate().rev() {
        acc += *c * int_pow_neg(i as u64 + 1, s);
    }
    acc
}

/// Rankin bound for `Σ_{m > M} d_n(m) m^{−σ}`: `min_δ M^{−δ} ζ(σ − δ)^n`
/// over `δ ∈ (0, σ − 1)`. Infinite when `σ ≤ 1`.
pub fn divisor_tail_bound(n: u32, sigma: f64, cutoff: usize) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let lm = (cutoff.max(1) as f64).ln();
    let mut best = f64::INFINITY;
    for i in 1..200 {
        let delta = (sigma - 1.0) * i as f64 / 200.0;
        let z = hurwitz_zeta(Complex::new(sigma - delta, 0.0), 1.0)
            .map(|v| v.re)
            .unwrap_or(f64::INFINITY);
        best = best.min((-delta * lm).exp() * z.powi(n as i32));
    }
    best
}

/// `H_l(s, q)` and `H̃_l(w, q)` with coefficients from a source.
#[derive(Debug, Clone)]
pub struct HeckePolys<T> {
    n: u32,
    q: u64,
    right: Vec<Complex<T>>,
    left: Vec<Complex<T>>,
}

impl<T: Real> HeckePolys<T> {
    pub fn new(source: &dyn CoefficientSource<T>, q: u64) -> Result<Self> {
        let n = source.degree();
        let mut right = vec![czero(); n as usize];
        let mut left = vec![czero(); n as usize];
        for i in 1..n {
            right[i as usize] = source.coefficient(&at_right(n, i, q))?;
            left[i as usize] = source.coefficient(&at_left(n, i, q))?;
        }
        Ok(Self { n, q, right, left })
    }

    fn eval(&self, coeffs: &[Complex<T>], l: u32, s: Complex<T>) -> Complex<T> {
        let x = int_pow_neg(self.q, s);
        let mut acc: Complex<T> = czero();
        let mut xp = Complex::new(T::one(), T::zero());
        for i in 1..=self.n {
            xp *= x;
            if i == self.n {
                acc += xp * sign::<T>(i64::from(i));
            } else if i >= l {
                acc += coeffs[i as usize] * xp * sign::<T>(i64::from(i));
            }
        }
        acc
    }

    /// `H_l(s) = Σ_{i=l}^{n−1} (−1)^i A(q at position i from the right) q^{−is} + (−1)^n q^{−ns}`.
    pub fn h(&self, l: u32, s: Complex<T>) -> Complex<T> {
        self.eval(&self.right, l, s)
    }

    /// `H̃_l(w)`: as `H_l` with `q` at position `i` from the left.
    pub fn h_tilde(&self, l: u32, w: Complex<T>) -> Complex<T> {
        self.eval(&self.left, l, w)
    }
}

/// `L_q(s, π) = Σ_{q | m} A(1, …, 1, m) m^{−s} = −L(s, π) H_1(s, q)`.
pub fn l_q_value<T: Real>(s: Complex<T>, source: &dyn CoefficientSource<T>, q: u64) -> Result<Complex<T>> {
    let params = source
        .eisenstein()
        .ok_or_else(|| Error::InvalidParameter("continuation needs an Eisenstein source".into()))?;
    let hecke = HeckePolys::new(source, q)?;
    Ok(-eis_l(s, params)? * hecke.h(1, s))
}

/// Character data modulo `q` plus the source data needed to assemble
/// `Z, Z̃, Y, Ỹ` for any `k` and `a`.
pub struct TwistedFamily<T: Real> {
    source: Arc<dyn CoefficientSource<T>>,
    table: CharacterTable<T>,
    hecke: HeckePolys<T>,
}

/// Values at one point that the assemblies are linear in.
#[derive(Debug, Clone)]
pub struct PointData<T> {
    pub s: Complex<T>,
    /// `L(s, π × ψ_t)` (or the dual twists `L(s, π̃ × ψ_t)`), entry 0 unused.
    pub twists: Vec<Complex<T>>,
    /// `L(s, π)` (or `L(s, π̃)`); `None` when `s` is at a pole.
    pub untwisted: Option<Complex<T>>,
}

impl<T: Real> TwistedFamily<T> {
    pub fn new(source: Arc<dyn CoefficientSource<T>>, q: u64) -> Result<Self> {
        let modulus = PrimeModulus::shared(q)?;
        let hecke = HeckePolys::new(source.as_ref(), q)?;
        Ok(Self {
            table: CharacterTable::new(modulus),
            source,
            hecke,
        })
    }

    pub fn degree(&self) -> u32 {
        self.source.degree()
    }

    pub fn q(&self) -> u64 {
        self.table.modulus().q()
    }

    pub fn table(&self) -> &CharacterTable<T> {
        &self.table
    }

    pub fn hecke(&self) -> &HeckePolys<T> {
        &self.hecke
    }

    pub fn source(&self) -> &Arc<dyn CoefficientSource<T>> {
        &self.source
    }

    fn params(&self) -> Result<&EisensteinParams<T>> {
        self.source
            .eisenstein()
            .ok_or_else(|| Error::InvalidParameter("continuation needs an Eisenstein source".into()))
    }

    fn check_k(&self, k: u32) -> Result<()> {
        let n = self.degree();
        if k < 1 || k > n - 1 {
            return Err(Error::OutOfRange {
                what: "k",
                value: i64::from(k),
                range: format!("[1, {}]", n - 1),
            });
        }
        Ok(())
    }

    /// Twisted and untwisted L-values of `π` at `s`.
    pub fn point(&self, s: Complex<T>) -> Result<PointData<T>> {
        let params = self.params()?;
        Ok(PointData {
            s,
            twists: eis_l_all_twists(s, params, &self.table)?,
            untwisted: eis_l(s, params).ok(),
        })
    }

    /// Twisted and untwisted L-values of `π̃` at `w`.
    pub fn dual_point(&self, w: Complex<T>) -> Result<PointData<T>> {
        let dual = self.params()?.dual();
        Ok(PointData {
            s: w,
            twists: eis_l_all_twists(w, &dual, &self.table)?,
            untwisted: eis_l(w, &dual).ok(),
        })
    }

    fn untwisted(&self, p: &PointData<T>) -> Result<Complex<T>> {
        p.untwisted
            .ok_or_else(|| Error::Pole(format!("L-function pole at s = {}", p.s)))
    }

    fn char_part(&self, k_power: u32, conj_gauss: bool, a: i64, p: &PointData<T>, conj_twist: bool, parity: Parity) -> Complex<T> {
        let mut acc: Complex<T> = czero();
        for t in self.table.indices(parity, true) {
            let ct = self.table.conjugate_index(t);
            let tau = self.table.gauss_sum(if conj_gauss { ct } else { t });
            let l = p.twists[if conj_twist { ct } else { t } as usize];
            acc += tau.powu(k_power) * self.table.value(t, a) * l;
        }
        acc
    }

    /// `Z(s)` from precomputed values at `s`.
    pub fn z(&self, k: u32, a: i64, p: &PointData<T>) -> Result<Complex<T>> {
        self.check_k(k)?;
        let q = T::from_int(self.q() as i64);
        let l = self.untwisted(p)?;
        let chars = self.char_part(k, true, a, p, false, Parity::Even);
        Ok(chars + l * (self.hecke.h(1, p.s) * q + T::one()) * sign::<T>(i64::from(k)))
    }

    /// `Z̃(w)` from precomputed dual values at `w`.
    pub fn z_tilde(&self, k: u32, a: i64, p: &PointData<T>) -> Result<Complex<T>> {
        self.check_k(k)?;
        let n = self.degree();
        let q = T::from_int(self.q() as i64);
        let l = self.untwisted(p)?;
        let chars = self.char_part(n - k, false, a, p, true, Parity::Even);
        Ok(chars + l * (self.hecke.h_tilde(1, p.s) * q + T::one()) * sign::<T>(i64::from(n - k)))
    }

    /// `Y(s)` from precomputed values at `s`.
    pub fn y(&self, k: u32, a: i64, p: &PointData<T>) -> Result<Complex<T>> {
        self.check_k(k)?;
        Ok(self.char_part(k, true, a, p, false, Parity::Odd))
    }

    /// `Ỹ(w)` from precomputed dual values at `w`.
    pub fn y_tilde(&self, k: u32, a: i64, p: &PointData<T>) -> Result<Complex<T>> {
        self.check_k(k)?;
        let n = self.degree();
        Ok(self.char_part(n - k, false, a, p, true, Parity::Odd))
    }

    /// `Σ_{l=2}^{top} (q^{l−1} − q^{l−2}) P_l`.
    fn hecke_tail(&self, top: u32, mut poly: impl FnMut(u32) -> Complex<T>) -> Complex<T> {
        let q = T::from_int(self.q() as i64);
        let mut acc: Complex<T> = czero();
        for l in 2..=top {
            let w = q.powi(l as i32 - 1) - q.powi(l as i32 - 2);
            acc += poly(l) * w;
        }
        acc
    }

    /// `F(s) = Z(s) + (−1)^k q Σ_{l=2}^{k} (q^{l−1} − q^{l−2}) H_l(s) L(s)`.
    pub fn f_even(&self, k: u32, a: i64, p: &PointData<T>) -> Result<Complex<T>> {
        let z = self.z(k, a, p)?;
        if k < 2 {
            return Ok(z);
        }
        let l = self.untwisted(p)?;
        let q = T::from_int(self.q() as i64);
        let tail = self.hecke_tail(k, |j| self.hecke.h(j, p.s));
        Ok(z + tail * l * q * sign::<T>(i64::from(k)))
    }

    /// `F̃(w) = Z̃(w) + (−1)^{n−k} q Σ_{l=2}^{n−k} (q^{l−1} − q^{l−2}) H̃_l(w) L̃(w)`.
    pub fn f_tilde_even(&self, k: u32, a: i64, p: &PointData<T>) -> Result<Complex<T>> {
        let z = self.z_tilde(k, a, p)?;
        let n = self.degree();
        if n - k < 2 {
            return Ok(z);
        }
        let l = self.untwisted(p)?;
        let q = T::from_int(self.q() as i64);
        let tail = self.hecke_tail(n - k, |j| self.hecke.h_tilde(j, p.s));
        Ok(z + tail * l * q * sign::<T>(i64::from(n - k)))
    }

    /// `q^{k − ns}`.
    pub fn q_power(&self, k: u32, s: Complex<T>) -> Complex<T> {
        let n = T::from_int(i64::from(self.degree()));
        let lq = T::from_int(self.q() as i64).ln();
        let e = (Complex::new(T::from_int(i64::from(k)), T::zero()) - s * n) * lq;
        e.exp()
    }

    /// Dirichlet coefficients of `Z` (`parity = Even`) or `Y` (`Odd`) for
    /// `m = 1..=count`: `(q−1)/2 (Kl_k(am) ± Kl_k(−am)) A(1, …, 1, m)`.
    pub fn series_coefficients(&self, k: u32, a: i64, parity: Parity, count: usize) -> Result<Vec<Complex<T>>> {
        self.check_k(k)?;
        let n = self.degree();
        let kl = KloostermanTable::<T>::new(self.table.modulus(), k, DEFAULT_BUDGET)?;
        let coeffs = self.source.slot_series(&unit_tuple(n), n as usize - 2, count)?;
        Ok(self.kl_weighted(&kl, a, parity, &coeffs))
    }

    /// Dirichlet coefficients of `Z̃` or `Ỹ`:
    /// `(q−1)/2 (Kl_{n−k}(ām) ± Kl_{n−k}(−ām)) A(m, 1, …, 1)`.
    pub fn dual_series_coefficients(&self, k: u32, a: i64, parity: Parity, count: usize) -> Result<Vec<Complex<T>>> {
        self.check_k(k)?;
        let n = self.degree();
        let abar = self
            .table
            .modulus()
            .inverse(a)
            .ok_or(Error::NotAUnit(a, self.q()))? as i64;
        let kl = KloostermanTable::<T>::new(self.table.modulus(), n - k, DEFAULT_BUDGET)?;
        let coeffs = self.source.slot_series(&unit_tuple(n), 0, count)?;
        Ok(self.kl_weighted(&kl, abar, parity, &coeffs))
    }

    fn kl_weighted(&self, kl: &KloostermanTable<T>, a: i64, parity: Parity, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let half = T::from_int(self.q() as i64 - 1) * T::lit(0.5);
        let q = self.q() as i64;
        let pm = T::from_int(parity.sign());
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = (i as i64 + 1) % q;
                let w = kl.get(a * m) + kl.get(-a * m) * pm;
                w * *c * half
            })
            .collect()
    }
}

/// Which functional equation to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeKind {
    /// `L(s, π) = G_+(s) L(1 − s, π̃)`.
    Standard,
    /// `τ(ψ̄)^k L(s, π×ψ) = τ(ψ)^{n−k} q^{k−ns} G_+(s) L(1−s, π̃×ψ̄)`, ψ even nontrivial.
    Even,
    /// `τ(ψ̄)^k L(s, π×ψ) = (−1)^k τ(ψ)^{n−k} q^{k−ns} G_−(s) L(1−s, π̃×ψ̄)`, ψ odd.
    Odd,
}

/// `|lhs − rhs| / max(|lhs|, |rhs|, 1)`.
pub fn relative_residual<T: Real>(lhs: Complex<T>, rhs: Complex<T>) -> T {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(T::one())
}

/// Largest residual of the chosen functional equation at `s`, over all
/// characters of the relevant parity. Zero when there are none (`q = 3`,
/// even twists).
pub fn fe_residual<T: Real>(kind: FeKind, s: Complex<T>, k: u32, family: &TwistedFamily<T>) -> Result<T> {
    family.check_k(k)?;
    let n = family.degree();
    let lambda = family.source.spectral();
    let one = Complex::new(T::one(), T::zero());
    match kind {
        FeKind::Standard => {
            let params = family.params()?;
            let lhs = eis_l(s, params)?;
            let rhs = gamma_factor(s, lambda, Sign::Plus)? * eis_l(one - s, &params.dual())?;
            Ok(relative_residual(lhs, rhs))
        }
        FeKind::Even | FeKind::Odd => {
            let (parity, gsign, extra) = match kind {
                FeKind::Even => (Parity::Even, Sign::Plus, T::one()),
                _ => (Parity::Odd, Sign::Minus, sign::<T>(i64::from(k))),
            };
            let idx = family.table.indices(parity, true);
            if idx.is_empty() {
                return Ok(T::zero());
            }
            let here = family.point(s)?;
            let there = family.dual_point(one - s)?;
            let g = gamma_factor(s, lambda, gsign)?;
            let qp = family.q_power(k, s);
            let mut worst = T::zero();
            for t in idx {
                let ct = family.table.conjugate_index(t);
                let lhs = family.table.gauss_sum(ct).powu(k) * here.twists[t as usize];
                let rhs = family.table.gauss_sum(t).powu(n - k) * qp * g * there.twists[ct as usize] * extra;
                worst = worst.max(relative_residual(lhs, rhs));
            }
            Ok(worst)
        }
    }
}

/// Residuals of the two pre-inversion identities:
/// `F(s) = q^{k−ns} G_+(s) F̃(1−s)` and `Y(s) = (−1)^k q^{k−ns} G_−(s) Ỹ(1−s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofChainResidual<T> {
    pub even: T,
    pub odd: T,
}

pub fn proof_chain_residual<T: Real>(
    s: Complex<T>,
    k: u32,
    a: i64,
    family: &TwistedFamily<T>,
) -> Result<ProofChainResidual<T>> {
    let one = Complex::new(T::one(), T::zero());
    let lambda = family.source.spectral();
    let here = family.point(s)?;
    let there = family.dual_point(one - s)?;
    let qp = family.q_power(k, s);
    let even_lhs = family.f_even(k, a, &here)?;
    let even_rhs = qp * gamma_factor(s, lambda, Sign::Plus)? * family.f_tilde_even(k, a, &there)?;
    let odd_lhs = family.y(k, a, &here)?;
    let odd_rhs = qp * gamma_factor(s, lambda, Sign::Minus)? * family.y_tilde(k, a, &there)? * sign::<T>(i64::from(k));
    Ok(ProofChainResidual {
        even: relative_residual(even_lhs, even_rhs),
        odd: relative_residual(odd_lhs, odd_rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::EisensteinSource;

    type C = Complex<f64>;

    fn family(parts: &[f64], q: u64) -> TwistedFamily<f64> {
        let src = EisensteinSource::new(EisensteinParams::from_imaginary(parts).unwrap());
        TwistedFamily::new(Arc::new(src), q).unwrap()
    }

    #[test]
    fn legendre_five_at_one_is_positive() {
        let md = PrimeModulus::shared(5).unwrap();
        let chi = DirichletCharacter::new(md, 2).unwrap();
        let v: C = dirichlet_l(C::new(1.0, 0.0), &chi).unwrap();
        // L(1, (·/5)) = 2 log(φ)/√5
        let expect = 2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln() / 5f64.sqrt();
        assert!(v.im.abs() < 1e-14);
        assert!((v.re - expect).abs() < 1e-13);
    }

    #[test]
    fn dirichlet_l_matches_series() {
        let md = PrimeModulus::shared(7).unwrap();
        for t in 1..6 {
            let chi = DirichletCharacter::new(md.clone(), t).unwrap();
            let s = C::new(2.0, 0.0);
            let direct: C = (1..1_000_000i64).map(|m| chi.eval::<f64>(m) * (m as f64).powi(-2)).sum();
            assert!((dirichlet_l(s, &chi).unwrap() - direct).norm() < 1e-9);
        }
    }

    #[test]
    fn trivial_character_is_zeta_with_euler_factor() {
        let md = PrimeModulus::shared(5).unwrap();
        let chi = DirichletCharacter::trivial(md);
        let s = C::new(0.3, 4.0);
        let expect = (C::new(1.0, 0.0) - int_pow_neg(5, s)) * crate::special::zeta(s).unwrap();
        assert!((dirichlet_l(s, &chi).unwrap() - expect).norm() < 1e-12);
        assert!(dirichlet_l(C::new(1.0, 0.0), &chi).is_err());
    }

    #[test]
    fn batch_twists_match_single_evaluations() {
        let params = EisensteinParams::from_imaginary(&[1.3, -0.4, -0.9]).unwrap();
        let md = PrimeModulus::shared(7).unwrap();
        let table = CharacterTable::new(md.clone());
        let s = C::new(0.4, 1.7);
        let all = eis_l_all_twists(s, &params, &table).unwrap();
        for t in 1..6 {
            let chi = DirichletCharacter::new(md.clone(), t).unwrap();
            let single = eis_l_twisted(s, &params, &chi).unwrap();
            assert!((all[t as usize] - single).norm() < 1e-12 * single.norm().max(1.0));
        }
    }

    #[test]
    fn eisenstein_l_basics() {
        let zero = EisensteinParams::from_imaginary(&[0.0, 0.0, 0.0]).unwrap();
        let s = C::new(0.2, 3.0);
        let z = crate::special::zeta(s).unwrap();
        assert!((eis_l(s, &zero).unwrap() - z * z * z).norm() < 1e-12);
        let params = EisensteinParams::from_imaginary(&[0.7, -0.7]).unwrap();
        assert!(matches!(eis_l(C::new(1.0, 0.7), &params), Err(Error::Pole(_))));
    }

    #[test]
    fn continuation_matches_series_far_right() {
        let fam = family(&[1.3, -0.4, -0.9], 5);
        let params = fam.source.eisenstein().unwrap().clone();
        let coeffs = fam.source.slot_series(&[1, 1], 1, 200_000).unwrap();
        for s in [C::new(4.0, 3.0), C::new(5.0, -7.0)] {
            let series = dirichlet_series(s, &coeffs);
            let bound = divisor_tail_bound(3, s.re, coeffs.len());
            let v = eis_l(s, &params).unwrap();
            assert!((series - v).norm() <= bound + 1e-13, "{s}");
            assert!(bound < 1e-9);
        }
    }

    #[test]
    fn l_q_matches_series() {
        let fam = family(&[1.3, -0.4, -0.9], 5);
        let coeffs = fam.source.slot_series(&[1, 1], 1, 100_000).unwrap();
        let masked: Vec<C> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (i + 1) % 5 == 0 { *c } else { C::new(0.0, 0.0) })
            .collect();
        let s = C::new(3.0, 2.0);
        let direct = dirichlet_series(s, &masked);
        let v = l_q_value(s, fam.source.as_ref(), 5).unwrap();
        assert!((direct - v).norm() < 1e-10);
    }

    #[test]
    fn assembled_sums_match_kloosterman_series() {
        let fam = family(&[1.3, -0.4, -0.9], 5);
        let s = C::new(4.5, 1.0);
        let here = fam.point(s).unwrap();
        let dual = fam.dual_point(s).unwrap();
        let count = 50_000;
        for k in 1..=2 {
            for a in [1i64, 2] {
                let z = fam.z(k, a, &here).unwrap();
                let zs = dirichlet_series(s, &fam.series_coefficients(k, a, Parity::Even, count).unwrap());
                let y = fam.y(k, a, &here).unwrap();
                let ys = dirichlet_series(s, &fam.series_coefficients(k, a, Parity::Odd, count).unwrap());
                let zt = fam.z_tilde(k, a, &dual).unwrap();
                let zts = dirichlet_series(s, &fam.dual_series_coefficients(k, a, Parity::Even, count).unwrap());
                let yt = fam.y_tilde(k, a, &dual).unwrap();
                let yts = dirichlet_series(s, &fam.dual_series_coefficients(k, a, Parity::Odd, count).unwrap());
                for (x, y) in [(z, zs), (y, ys), (zt, zts), (yt, yts)] {
                    assert!((x - y).norm() < 1e-9, "k={k} a={a}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn q3_even_sum_is_degenerate_term() {
        let fam = family(&[0.7, -0.7], 3);
        let s = C::new(2.5, 0.3);
        let p = fam.point(s).unwrap();
        let l = p.untwisted.unwrap();
        let lq = l_q_value(s, fam.source.as_ref(), 3).unwrap();
        let z = fam.z(1, 1, &p).unwrap();
        assert!((z - (lq * 3.0 - l)).norm() < 1e-12);
    }

    #[test]
    fn functional_equations() {
        let fam = family(&[1.3, -0.4, -0.9], 5);
        for s in [C::new(0.3, 2.0), C::new(-0.6, 11.0), C::new(1.7, -23.0)] {
            for k in 1..=2 {
                for kind in [FeKind::Standard, FeKind::Even, FeKind::Odd] {
                    let r = fe_residual(kind, s, k, &fam).unwrap();
                    assert!(r < 1e-10, "{kind:?} s={s} k={k}: {r}");
                }
            }
        }
    }

    #[test]
    fn proof_chain_identities() {
        let cases: [(&[f64], u64, u32, C); 2] = [
            (&[1.3, -0.4, -0.9], 5, 1, C::new(0.4, 1.7)),
            (&[1.1, 0.35, -0.6, -0.85], 7, 2, C::new(-0.2, 0.9)),
        ];
        for (parts, q, k, s) in cases {
            let fam = family(parts, q);
            for a in [1i64, 2, 3] {
                let r = proof_chain_residual(s, k, a, &fam).unwrap();
                assert!(r.even < 1e-10 && r.odd < 1e-10, "{r:?}");
            }
        }
    }

    #[test]
    fn odd_sums_are_entire_across_the_edge() {
        let fam = family(&[0.7, -0.7], 5);
        for re in [0.9, 1.0, 1.1] {
            for im in [-0.7, 0.0, 0.7] {
                let p = fam.point(C::new(re, im)).unwrap();
                assert!(fam.y(1, 2, &p).unwrap().norm().is_finite());
            }
        }
    }

    #[test]
    fn divisor_tail_bound_is_sane() {
        assert!(divisor_tail_bound(2, 1.0, 100).is_infinite());
        let b = divisor_tail_bound(2, 3.0, 1000);
        let direct: f64 = (1001..200_000u64)
            .map(|m| (1..=m).filter(|d| m % d == 0).count() as f64 / (m as f64).powi(3))
            .take(2000)
            .sum();
        assert!(b > direct);
    }
}
