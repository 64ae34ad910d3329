//! Exact multivariate Laurent polynomials in `X` (standing for `q^{−s}`), `Q`
//! (standing for `q`) and free symbols `A_i`, where `A_i` is the coefficient
//! `A(1,…,1,q,1,…,1)` with `q` at position `i` counted from the right.
//!
//! The Hecke polynomials `H_l`, their duals `H̃_l` and the identity relating
//! them under `s ↦ 1 − s` are built and compared here without floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A polynomial variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Coefficient symbol with `q` at the given position from the right.
    A(u32),
    Q,
    X,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "X"),
            Var::Q => write!(f, "Q"),
            Var::A(i) => write!(f, "A{i}"),
        }
    }
}

/// A monomial: variables with nonzero exponents, sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: Var, exp: i32) -> Self {
        Self::from_powers([(v, exp)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Self(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn powers(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_powers(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Laurent polynomial with coefficients in `C`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<C> LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `v^exp` with unit coefficient.
    pub fn var(v: Var, exp: i32) -> Self {
        Self::term(C::one(), Monomial::var(v, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Replaces `X` by `Q^{−1}·X^{−1}`, the image of `q^{−s}` under `s ↦ 1 − s`.
    pub fn substitute_dual(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(Var::X);
            let image = Monomial::from_powers(
                m.powers()
                    .iter()
                    .copied()
                    .chain([(Var::X, -2 * e), (Var::Q, -e)]),
            );
            out.add_term(image, c.clone());
        }
        out
    }

    /// Evaluates at numeric values of the variables.
    pub fn evaluate(&self, value: impl Fn(Var) -> Complex<f64>) -> Complex<f64>
    where
        C: ToPrimitive,
    {
        self.terms
            .iter()
            .map(|(m, c)| {
                let coef = c.to_f64().expect("coefficient representable as f64");
                m.powers()
                    .iter()
                    .fold(Complex::new(coef, 0.0), |acc, &(v, e)| acc * value(v).powi(e))
            })
            .sum()
    }
}

impl<C> Add for &LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    type Output = LaurentPoly<C>;

    fn add(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C> Neg for &LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    type Output = LaurentPoly<C>;

    fn neg(self) -> LaurentPoly<C> {
        self.scale(&-C::one())
    }
}

impl<C> Sub for &LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    type Output = LaurentPoly<C>;

    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self + &(-rhs)
    }
}

impl<C> Mul for &LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    type Output = LaurentPoly<C>;

    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C> $tr for LaurentPoly<C>
        where
            C: Clone + Zero + One + Neg<Output = C> + PartialEq,
        {
            type Output = LaurentPoly<C>;

            fn $method(self, rhs: Self) -> LaurentPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C> fmt::Display for LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq + Signed + fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Ascending powers of X read most naturally for Dirichlet polynomials.
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| (m.exponent(Var::X), (*m).clone()));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            if m.powers().is_empty() {
                write!(f, "{mag}")?;
            } else if unit {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

fn check_range(what: &'static str, value: u32, lo: u32, hi: u32) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::OutOfRange {
            what,
            value: i64::from(value),
            range: format!("[{lo}, {hi}]"),
        });
    }
    Ok(())
}

fn signed<C: Clone + Zero + One + Neg<Output = C> + PartialEq>(i: u32) -> C {
    if i % 2 == 0 {
        C::one()
    } else {
        -C::one()
    }
}

fn hecke_poly<C>(n: u32, l: u32, symbol: impl Fn(u32) -> u32) -> LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    let mut p = LaurentPoly::zero();
    for i in l..n {
        let m = Monomial::from_powers([(Var::A(symbol(i)), 1), (Var::X, i as i32)]);
        p.add_term(m, signed::<C>(i));
    }
    p.add_term(Monomial::var(Var::X, n as i32), signed::<C>(n));
    p
}

/// `H_l = Σ_{i=l}^{n−1} (−1)^i A_i X^i + (−1)^n X^n`.
pub fn build_h<C>(n: u32, l: u32) -> Result<LaurentPoly<C>>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    check_range("n", n, 2, u32::MAX)?;
    check_range("l", l, 1, n - 1)?;
    Ok(hecke_poly(n, l, |i| i))
}

/// `H̃_l = Σ_{i=l}^{n−1} (−1)^i A_{n−i} X^i + (−1)^n X^n`: the coefficient with
/// `q` at position `i` from the left is the symbol at position `n − i` from
/// the right.
pub fn build_h_tilde<C>(n: u32, l: u32) -> Result<LaurentPoly<C>>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    check_range("n", n, 2, u32::MAX)?;
    check_range("l", l, 1, n - 1)?;
    Ok(hecke_poly(n, l, |i| n - i))
}

fn q_pow<C>(e: i32) -> LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    LaurentPoly::var(Var::Q, e)
}

/// `Q^{−1} + P_1 + Σ_{l=2}^{top} (Q^{l−1} − Q^{l−2}) P_l`.
fn weighted_sum<C>(top: u32, part: impl Fn(u32) -> LaurentPoly<C>) -> LaurentPoly<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    let mut acc = &q_pow::<C>(-1) + &part(1);
    for l in 2..=top {
        let w = &q_pow::<C>(l as i32 - 1) - &q_pow::<C>(l as i32 - 2);
        acc = &acc + &(&w * &part(l));
    }
    acc
}

/// Left side of the dual Hecke identity:
/// `Q^{−1} + H_1 + Σ_{l=2}^{k} (Q^{l−1} − Q^{l−2}) H_l`.
pub fn dual_identity_lhs<C>(n: u32, k: u32) -> Result<LaurentPoly<C>>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    check_range("n", n, 2, u32::MAX)?;
    check_range("k", k, 1, n - 1)?;
    Ok(weighted_sum(k, |l| hecke_poly(n, l, |i| i)))
}

/// Right side of the dual Hecke identity:
/// `(−1)^n Q^k X^n (Q^{−1} + H̃_1' + Σ_{l=2}^{n−k} (Q^{l−1} − Q^{l−2}) H̃_l')`
/// where `'` denotes [`LaurentPoly::substitute_dual`].
pub fn dual_identity_rhs<C>(n: u32, k: u32) -> Result<LaurentPoly<C>>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    check_range("n", n, 2, u32::MAX)?;
    check_range("k", k, 1, n - 1)?;
    let inner = weighted_sum(n - k, |l| hecke_poly::<C>(n, l, |i| n - i).substitute_dual());
    let prefactor = LaurentPoly::term(
        signed::<C>(n),
        Monomial::from_powers([(Var::Q, k as i32), (Var::X, n as i32)]),
    );
    Ok(&prefactor * &inner)
}

/// Expanded form of the left side:
/// `Q^{−1} + Σ_{i=1}^{n−1} (−1)^i Q^{min(i,k)−1} A_i X^i + (−1)^n Q^{k−1} X^n`.
pub fn dual_identity_closed_form<C>(n: u32, k: u32) -> Result<LaurentPoly<C>>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    check_range("n", n, 2, u32::MAX)?;
    check_range("k", k, 1, n - 1)?;
    let mut p = q_pow::<C>(-1);
    for i in 1..n {
        let m = Monomial::from_powers([
            (Var::Q, i.min(k) as i32 - 1),
            (Var::A(i), 1),
            (Var::X, i as i32),
        ]);
        p.add_term(m, signed::<C>(i));
    }
    p.add_term(
        Monomial::from_powers([(Var::Q, k as i32 - 1), (Var::X, n as i32)]),
        signed::<C>(n),
    );
    Ok(p)
}

/// Both sides of the dual Hecke identity and their difference.
#[derive(Debug, Clone)]
pub struct IdentityCheck<C> {
    pub lhs: LaurentPoly<C>,
    pub rhs: LaurentPoly<C>,
    pub residual: LaurentPoly<C>,
}

impl<C> IdentityCheck<C>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Builds both sides of the dual Hecke identity for `(n, k)` and subtracts.
pub fn check_dual_identity<C>(n: u32, k: u32) -> Result<IdentityCheck<C>>
where
    C: Clone + Zero + One + Neg<Output = C> + PartialEq,
{
    let lhs = dual_identity_lhs(n, k)?;
    let rhs = dual_identity_rhs(n, k)?;
    let residual = &lhs - &rhs;
    Ok(IdentityCheck { lhs, rhs, residual })
}
