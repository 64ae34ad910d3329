//! Fourier-coefficient suppliers for GL(n) forms.
//!
//! Coefficients are indexed by tuples `(m_1, …, m_{n−1})` of positive
//! integers. "Position `i` from the right" means tuple index `n − 1 − i`;
//! "position `i` from the left" means tuple index `i − 1`.
//!
//! The built-in [`EisensteinSource`] is the minimal-parabolic Eisenstein
//! series with `L(s, π) = Π_j ζ(s − α_j)`; at a prime `p` its coefficients are
//! Schur polynomials in `p^{α_1}, …, p^{α_n}`. [`FileSource`] serves externally
//! computed coefficients.

use std::collections::HashMap;
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result, TupleDisplay};
use crate::scalar::Real;

/// Origin of a coefficient family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Eisenstein,
    File,
}

/// Supplier of coefficients `A(m_1, …, m_{n−1})` with `A(1, …, 1) = 1`.
pub trait CoefficientSource<T: Real>: Send + Sync {
    /// The degree `n ≥ 2`.
    fn degree(&self) -> u32;

    /// Spectral parameters `λ_1, …, λ_n`.
    fn spectral(&self) -> &[Complex<T>];

    fn kind(&self) -> SourceKind;

    fn is_cuspidal(&self) -> bool;

    /// `A(m)` for a tuple of `n − 1` positive integers.
    fn coefficient(&self, m: &[u64]) -> Result<Complex<T>>;

    /// `A(template with template[slot] replaced by j)` for `j = 1..=count`.
    fn slot_series(&self, template: &[u64], slot: usize, count: usize) -> Result<Vec<Complex<T>>> {
        let mut m = template.to_vec();
        (1..=count as u64)
            .map(|j| {
                m[slot] = j;
                self.coefficient(&m)
            })
            .collect()
    }

    /// Largest `M` such that `slot_series(template, slot, M)` succeeds, or
    /// `None` when the source is unbounded.
    fn available_count(&self, _template: &[u64], _slot: usize) -> Option<usize> {
        None
    }

    /// Eisenstein parameters when the L-functions of this source have known
    /// analytic continuation.
    fn eisenstein(&self) -> Option<&EisensteinParams<T>> {
        None
    }
}

/// The all-ones tuple of length `n − 1`.
pub fn unit_tuple(n: u32) -> Vec<u64> {
    vec![1; n as usize - 1]
}

/// Tuple with `value` at position `pos` from the right.
pub fn at_right(n: u32, pos: u32, value: u64) -> Vec<u64> {
    let mut m = unit_tuple(n);
    m[(n - 1 - pos) as usize] = value;
    m
}

/// Tuple with `value` at position `pos` from the left.
pub fn at_left(n: u32, pos: u32, value: u64) -> Vec<u64> {
    let mut m = unit_tuple(n);
    m[(pos - 1) as usize] = value;
    m
}

fn check_tuple(n: u32, m: &[u64]) -> Result<()> {
    if m.len() != n as usize - 1 {
        return Err(Error::InvalidParameter(format!(
            "coefficient index {} has length {}, expected {}",
            TupleDisplay(m.to_vec()),
            m.len(),
            n - 1
        )));
    }
    if m.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "coefficient index {} has a nonpositive entry",
            TupleDisplay(m.to_vec())
        )));
    }
    Ok(())
}

/// Parameters `α_1, …, α_n` of a minimal-parabolic Eisenstein series: purely
/// imaginary and summing to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EisensteinParams<T> {
    alphas: Vec<Complex<T>>,
}

impl<T: Real> EisensteinParams<T> {
    pub fn new(alphas: Vec<Complex<T>>) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least two parameters, got {}",
                alphas.len()
            )));
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        if let Some(a) = alphas.iter().find(|a| a.re.abs() > tol) {
            return Err(Error::InvalidParameter(format!("parameter {a} is not purely imaginary")));
        }
        let total: Complex<T> = alphas.iter().copied().sum();
        let scale = alphas.iter().map(|a| a.norm()).fold(T::one(), T::max);
        if total.norm() > tol * scale {
            return Err(Error::InvalidParameter(format!("parameters sum to {total}, not 0")));
        }
        Ok(Self { alphas })
    }

    /// Parameters `i·t_j`.
    pub fn from_imaginary(parts: &[T]) -> Result<Self> {
        Self::new(parts.iter().map(|&t| Complex::new(T::zero(), t)).collect())
    }

    pub fn degree(&self) -> u32 {
        self.alphas.len() as u32
    }

    pub fn alphas(&self) -> &[Complex<T>] {
        &self.alphas
    }

    /// Parameters of the contragredient, `−α_j`.
    pub fn dual(&self) -> Self {
        Self {
            alphas: self.alphas.iter().map(|a| -a).collect(),
        }
    }
}

/// Complete homogeneous symmetric polynomials `h_0..=h_max` of `xs`.
pub fn complete_homogeneous<T: Real>(xs: &[Complex<T>], max: usize) -> Vec<Complex<T>> {
    let mut h = vec![Complex::new(T::zero(), T::zero()); max + 1];
    h[0] = Complex::new(T::one(), T::zero());
    for &x in xs {
        for k in 1..=max {
            let prev = h[k - 1];
            h[k] += x * prev;
        }
    }
    h
}

fn determinant<T: Real>(mut a: Vec<Vec<Complex<T>>>) -> Complex<T> {
    let n = a.len();
    let mut det = Complex::new(T::one(), T::zero());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap_or(col);
        if a[pivot][col].norm() == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[row][c] -= factor * v;
            }
        }
    }
    det
}

/// Schur polynomial `s_λ(xs)` by the Jacobi–Trudi determinant
/// `det(h_{λ_i − i + j})`, where `λ` may be shorter than `xs`.
pub fn schur<T: Real>(partition: &[u32], xs: &[Complex<T>]) -> Complex<T> {
    let len = partition.iter().rposition(|&p| p > 0).map_or(0, |i| i + 1);
    if len == 0 {
        return Complex::new(T::one(), T::zero());
    }
    if len > xs.len() {
        return Complex::new(T::zero(), T::zero());
    }
    let max = partition[0] as usize + len;
    let h = complete_homogeneous(xs, max);
    let matrix = (0..len)
        .map(|i| {
            (0..len)
                .map(|j| {
                    let idx = partition[i] as i64 - i as i64 + j as i64;
                    if idx < 0 {
                        Complex::new(T::zero(), T::zero())
                    } else {
                        h[idx as usize]
                    }
                })
                .collect()
        })
        .collect();
    determinant(matrix)
}

/// Partition attached to the exponent tuple `(k_1, …, k_{n−1})` at a prime:
/// `λ_i = k_1 + … + k_{n−i}`.
pub fn partition_of(exponents: &[u32]) -> Vec<u32> {
    let len = exponents.len();
    (1..=len)
        .map(|i| exponents[..=len - i].iter().sum())
        .collect()
}

fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn valuation(mut m: u64, p: u64) -> u32 {
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

/// Coefficients of the minimal-parabolic Eisenstein series.
#[derive(Debug, Clone)]
pub struct EisensteinSource<T> {
    params: EisensteinParams<T>,
}

impl<T: Real> EisensteinSource<T> {
    pub fn new(params: EisensteinParams<T>) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &EisensteinParams<T> {
        &self.params
    }

    /// The contragredient source, with parameters `−α`.
    pub fn dual(&self) -> Self {
        Self::new(self.params.dual())
    }

    fn prime_powers(&self, p: u64) -> Vec<Complex<T>> {
        let lp = T::from_int(p as i64).ln();
        self.params
            .alphas
            .iter()
            .map(|a| Complex::from_polar((a.re * lp).exp(), a.im * lp))
            .collect()
    }

    /// Local factor at `p` for the exponent tuple `(v_p(m_1), …)`.
    pub fn local_factor(&self, p: u64, exponents: &[u32]) -> Complex<T> {
        schur(&partition_of(exponents), &self.prime_powers(p))
    }

    /// `A` restricted to tuples supported on a single slot, for `m ≤ count`.
    fn single_slot_table(&self, slot: usize, count: usize) -> Vec<Complex<T>> {
        let n1 = self.params.degree() as usize - 1;
        let spf = smallest_prime_factors(count);
        let mut out = vec![Complex::new(T::zero(), T::zero()); count + 1];
        if count >= 1 {
            out[1] = Complex::new(T::one(), T::zero());
        }
        let mut exps = vec![0u32; n1];
        let mut cache: HashMap<(u64, u32), Complex<T>> = HashMap::new();
        for m in 2..=count {
            let p = spf[m] as usize;
            let mut rest = m;
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            let local = *cache.entry((p as u64, e)).or_insert_with(|| {
                exps.iter_mut().for_each(|x| *x = 0);
                exps[slot] = e;
                self.local_factor(p as u64, &exps)
            });
            out[m] = local * out[rest];
        }
        out
    }
}

impl<T: Real> CoefficientSource<T> for EisensteinSource<T> {
    fn degree(&self) -> u32 {
        self.params.degree()
    }

    fn spectral(&self) -> &[Complex<T>] {
        &self.params.alphas
    }

    fn kind(&self) -> SourceKind {
        SourceKind::Eisenstein
    }

    fn is_cuspidal(&self) -> bool {
        false
    }

    fn eisenstein(&self) -> Option<&EisensteinParams<T>> {
        Some(&self.params)
    }

    fn coefficient(&self, m: &[u64]) -> Result<Complex<T>> {
        check_tuple(self.degree(), m)?;
        let mut primes: Vec<u64> = m.iter().flat_map(|&x| factorize(x)).map(|(p, _)| p).collect();
        primes.sort_unstable();
        primes.dedup();
        let mut acc = Complex::new(T::one(), T::zero());
        for p in primes {
            let exps: Vec<u32> = m.iter().map(|&x| valuation(x, p)).collect();
            acc *= self.local_factor(p, &exps);
        }
        Ok(acc)
    }

    fn slot_series(&self, template: &[u64], slot: usize, count: usize) -> Result<Vec<Complex<T>>> {
        check_tuple(self.degree(), template)?;
        let others: Vec<u64> = template
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != slot && v != 1)
            .map(|(_, &v)| v)
            .collect();
        let mut fixed_primes: Vec<u64> = others.iter().flat_map(|&x| factorize(x)).map(|(p, _)| p).collect();
        fixed_primes.sort_unstable();
        fixed_primes.dedup();
        let plain = self.single_slot_table(slot, count);
        if fixed_primes.is_empty() {
            return Ok(plain[1..].to_vec());
        }
        // A(template with j at slot) = Π_{p fixed} A_p · plain(j without the fixed primes).
        let mut out = Vec::with_capacity(count);
        let mut m = template.to_vec();
        let mut cache: HashMap<Vec<u32>, Complex<T>> = HashMap::new();
        for j in 1..=count as u64 {
            m[slot] = j;
            let mut rest = j;
            let mut acc = Complex::new(T::one(), T::zero());
            for &p in &fixed_primes {
                let exps: Vec<u32> = m.iter().map(|&x| valuation(x, p)).collect();
                rest /= p.pow(exps[slot]);
                let mut key = exps.clone();
                key.push(p as u32);
                acc *= *cache.entry(key).or_insert_with(|| self.local_factor(p, &exps));
            }
            out.push(acc * plain[rest as usize]);
        }
        Ok(out)
    }
}

/// Coefficients read from a text file.
///
/// Grammar (ASCII, whitespace separated, `#` starts a comment):
///
/// ```text
/// n=3
/// lambda=0.0,1.3;0.0,-0.4;0.0,-0.9
/// 1 1 1.0 0.0
/// 1 2 0.31 -0.12
/// ```
///
/// Each data row holds `n − 1` positive integers followed by the real and
/// imaginary parts of the coefficient. The row for `(1, …, 1)` must be present
/// with value 1.
#[derive(Debug, Clone)]
pub struct FileSource<T> {
    n: u32,
    lambda: Vec<Complex<T>>,
    values: HashMap<Vec<u64>, Complex<T>>,
}

impl<T: Real> FileSource<T> {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<u32> = None;
        let mut lambda: Option<Vec<Complex<T>>> = None;
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(v) = line.strip_prefix("n=") {
                let d: u32 = v.trim().parse().map_err(|_| perr(format!("bad degree '{v}'")))?;
                if d < 2 {
                    return Err(perr(format!("degree {d} < 2")));
                }
                n = Some(d);
                continue;
            }
            if let Some(v) = line.strip_prefix("lambda=") {
                let parsed = v
                    .split(';')
                    .map(|pair| {
                        let mut it = pair.split(',').map(|x| x.trim().parse::<f64>());
                        match (it.next(), it.next(), it.next()) {
                            (Some(Ok(re)), Some(Ok(im)), None) => Ok(Complex::new(T::lit(re), T::lit(im))),
                            _ => Err(perr(format!("bad spectral parameter '{pair}'"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                lambda = Some(parsed);
                continue;
            }
            let d = n.ok_or_else(|| perr("data row before 'n=' header".into()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != d as usize + 1 {
                return Err(perr(format!(
                    "expected {} fields, found {}",
                    d + 1,
                    fields.len()
                )));
            }
            let split = d as usize - 1;
            let tuple = fields[..split]
                .iter()
                .map(|f| match f.parse::<u64>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(perr(format!("bad index '{f}'"))),
                })
                .collect::<Result<Vec<u64>>>()?;
            let re: f64 = fields[split].parse().map_err(|_| perr(format!("bad number '{}'", fields[split])))?;
            let im: f64 = fields[split + 1]
                .parse()
                .map_err(|_| perr(format!("bad number '{}'", fields[split + 1])))?;
            values.insert(tuple, Complex::new(T::lit(re), T::lit(im)));
        }
        let n = n.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing 'n=' header".into(),
        })?;
        let lambda = lambda.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing 'lambda=' header".into(),
        })?;
        if lambda.len() != n as usize {
            return Err(Error::Parse {
                line: 0,
                message: format!("{} spectral parameters for degree {n}", lambda.len()),
            });
        }
        let one = unit_tuple(n);
        match values.get(&one) {
            Some(v) if (*v - Complex::new(T::one(), T::zero())).norm() <= T::lit(1e-12) => {}
            Some(v) => {
                return Err(Error::InvalidParameter(format!(
                    "normalisation A{} = {v}, expected 1",
                    TupleDisplay(one)
                )))
            }
            None => return Err(Error::InsufficientData(TupleDisplay(one))),
        }
        Ok(Self { n, lambda, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl<T: Real> CoefficientSource<T> for FileSource<T> {
    fn degree(&self) -> u32 {
        self.n
    }

    fn spectral(&self) -> &[Complex<T>] {
        &self.lambda
    }

    fn kind(&self) -> SourceKind {
        SourceKind::File
    }

    fn is_cuspidal(&self) -> bool {
        true
    }

    fn coefficient(&self, m: &[u64]) -> Result<Complex<T>> {
        check_tuple(self.n, m)?;
        self.values
            .get(m)
            .copied()
            .ok_or_else(|| Error::InsufficientData(TupleDisplay(m.to_vec())))
    }

    fn available_count(&self, template: &[u64], slot: usize) -> Option<usize> {
        let mut m = template.to_vec();
        let mut count = 0usize;
        loop {
            m[slot] = count as u64 + 1;
            if !self.values.contains_key(&m) {
                return Some(count);
            }
            count += 1;
        }
    }
}

/// The contragredient of a source: `Ã(m_1, …, m_{n−1}) = A(m_{n−1}, …, m_1)`
/// with spectral parameters `conj λ_j`. For unitary forms this also equals
/// `conj A(m_1, …, m_{n−1})`.
pub struct DualSource<'a, T> {
    inner: &'a dyn CoefficientSource<T>,
    lambda: Vec<Complex<T>>,
}

impl<'a, T: Real> DualSource<'a, T> {
    pub fn new(inner: &'a dyn CoefficientSource<T>) -> Self {
        let lambda = inner.spectral().iter().map(|l| l.conj()).collect();
        Self { inner, lambda }
    }
}

impl<T: Real> CoefficientSource<T> for DualSource<'_, T> {
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn spectral(&self) -> &[Complex<T>] {
        &self.lambda
    }

    fn kind(&self) -> SourceKind {
        self.inner.kind()
    }

    fn is_cuspidal(&self) -> bool {
        self.inner.is_cuspidal()
    }

    fn coefficient(&self, m: &[u64]) -> Result<Complex<T>> {
        let reversed: Vec<u64> = m.iter().rev().copied().collect();
        self.inner.coefficient(&reversed)
    }

    fn slot_series(&self, template: &[u64], slot: usize, count: usize) -> Result<Vec<Complex<T>>> {
        let reversed: Vec<u64> = template.iter().rev().copied().collect();
        let mirrored = template.len() - 1 - slot;
        self.inner.slot_series(&reversed, mirrored, count)
    }

    fn available_count(&self, template: &[u64], slot: usize) -> Option<usize> {
        let reversed: Vec<u64> = template.iter().rev().copied().collect();
        self.inner.available_count(&reversed, template.len() - 1 - slot)
    }
}

/// Dirichlet coefficients of `Π_j ζ(s − α_j)` up to `count` by repeated
/// convolution of the sequences `m^{α_j}`.
pub fn zeta_product_coefficients<T: Real>(alphas: &[Complex<T>], count: usize) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut acc = vec![zero; count + 1];
    if count >= 1 {
        acc[1] = Complex::new(T::one(), T::zero());
    }
    for a in alphas {
        let powers: Vec<Complex<T>> = (0..=count)
            .map(|m| {
                if m == 0 {
                    zero
                } else {
                    let lm = T::from_int(m as i64).ln();
                    Complex::from_polar((a.re * lm).exp(), a.im * lm)
                }
            })
            .collect();
        let mut next = vec![zero; count + 1];
        for d in 1..=count {
            if acc[d] == zero {
                continue;
            }
            let mut e = 1;
            while d * e <= count {
                next[d * e] += acc[d] * powers[e];
                e += 1;
            }
        }
        acc = next;
    }
    acc
}

/// Largest deviation between `A(1, …, 1, m)` and the coefficients of
/// `Π_j ζ(s − α_j)` for `m ≤ max_m`.
pub fn last_slot_series_check<T: Real>(params: &EisensteinParams<T>, max_m: usize) -> Result<T> {
    let src = EisensteinSource::new(params.clone());
    let n = params.degree();
    let series = src.slot_series(&unit_tuple(n), n as usize - 2, max_m)?;
    let oracle = zeta_product_coefficients(params.alphas(), max_m);
    Ok(series
        .iter()
        .enumerate()
        .map(|(i, v)| (*v - oracle[i + 1]).norm())
        .fold(T::zero(), T::max))
}

/// Residual of the Hecke relation multiplying `A(q at position i from the
/// right)` into `A(1, …, 1, m)`, for a prime `q` and `1 ≤ i ≤ n − 1`:
///
/// `A(q@i) A(1,…,1,m) = A(q@i, m) + [q | m] A(q@(i+1), m/q)` for `i ≤ n − 2`,
/// where for `i = 1` the two entries share the last slot (`A(1,…,1,qm)`), and
/// the second term is `A(1,…,1,m/q)` for `i = n − 1`.
pub fn hecke_check<T: Real>(
    source: &dyn CoefficientSource<T>,
    q: u64,
    m: u64,
    i: u32,
) -> Result<Complex<T>> {
    let n = source.degree();
    if i < 1 || i > n - 1 {
        return Err(Error::OutOfRange {
            what: "position",
            value: i64::from(i),
            range: format!("[1, {}]", n - 1),
        });
    }
    let left = source.coefficient(&at_right(n, i, q))? * source.coefficient(&at_right(n, 1, m))?;
    let mut main = at_right(n, i, q);
    let last = n as usize - 2;
    main[last] *= m;
    let mut right = source.coefficient(&main)?;
    if m % q == 0 {
        let extra = if i == n - 1 {
            at_right(n, 1, m / q)
        } else {
            let mut t = at_right(n, i + 1, q);
            t[last] *= m / q;
            t
        };
        right += source.coefficient(&extra)?;
    }
    Ok(left - right)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn eis(parts: &[f64]) -> EisensteinSource<f64> {
        EisensteinSource::new(EisensteinParams::from_imaginary(parts).unwrap())
    }

    #[test]
    fn params_validation() {
        assert!(EisensteinParams::from_imaginary(&[0.5, -0.5]).is_ok());
        assert!(EisensteinParams::from_imaginary(&[0.5, 0.5]).is_err());
        assert!(EisensteinParams::new(vec![C::new(0.1, 0.0), C::new(-0.1, 0.0)]).is_err());
        assert!(EisensteinParams::from_imaginary(&[0.0]).is_err());
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_of(&[0, 3]), vec![3, 0]);
        assert_eq!(partition_of(&[2, 0]), vec![2, 2]);
        assert_eq!(partition_of(&[1, 2, 3]), vec![6, 3, 1]);
    }

    #[test]
    fn schur_small_cases() {
        let xs = [C::new(2.0, 0.0), C::new(3.0, 0.0)];
        // s_(2,1)(x, y) = x²y + xy²
        assert!((schur(&[2, 1], &xs) - C::new(30.0, 0.0)).norm() < 1e-12);
        // s_(1,1) = e_2
        assert!((schur(&[1, 1], &xs) - C::new(6.0, 0.0)).norm() < 1e-12);
        assert!((schur(&[1, 1, 1], &xs)).norm() < 1e-12);
    }

    #[test]
    fn normalisation_and_divisor_values() {
        let src = eis(&[0.0, 0.0, 0.0]);
        assert!((src.coefficient(&[1, 1]).unwrap() - C::new(1.0, 0.0)).norm() < 1e-14);
        assert!((src.coefficient(&[1, 4]).unwrap() - C::new(6.0, 0.0)).norm() < 1e-12);
        assert!((src.coefficient(&[4, 1]).unwrap() - C::new(6.0, 0.0)).norm() < 1e-12);
        assert!(src.coefficient(&[0, 1]).is_err());
        assert!(src.coefficient(&[1]).is_err());
    }

    #[test]
    fn last_slot_at_prime_is_power_sum() {
        let src = eis(&[1.3, -0.4, -0.9]);
        for p in [2u64, 3, 5, 7, 11] {
            let expect: C = src
                .params()
                .alphas()
                .iter()
                .map(|a| (a * (p as f64).ln()).exp())
                .sum();
            assert!((src.coefficient(&[1, p]).unwrap() - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn series_checks() {
        let p = EisensteinParams::from_imaginary(&[0.0, 0.0]).unwrap();
        assert_eq!(last_slot_series_check(&p, 50).unwrap(), 0.0);
        let p = EisensteinParams::from_imaginary(&[1.0, -1.0, 0.0]).unwrap();
        assert!(last_slot_series_check(&p, 100).unwrap() <= 1e-10);
        assert_eq!(last_slot_series_check(&p, 1).unwrap(), 0.0);
    }

    #[test]
    fn dual_symmetry() {
        let src = eis(&[1.1, 0.35, -0.6, -0.85]);
        for a in 1..12u64 {
            for b in 1..12u64 {
                for c in [1u64, 2, 6, 9] {
                    let lhs = src.coefficient(&[a, b, c]).unwrap().conj();
                    let rhs = src.coefficient(&[c, b, a]).unwrap();
                    assert!((lhs - rhs).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn dual_source_matches_negated_parameters() {
        let src = eis(&[1.3, -0.4, -0.9]);
        let dual_params = src.dual();
        let dual = DualSource::new(&src);
        for m in [[1u64, 2], [3, 1], [4, 9], [12, 5]] {
            let a = dual.coefficient(&m).unwrap();
            let b = dual_params.coefficient(&m).unwrap();
            assert!((a - b).norm() < 1e-12, "{a} {b}");
        }
        let sa = dual.slot_series(&[1, 1], 0, 30).unwrap();
        let sb = dual_params.slot_series(&[1, 1], 0, 30).unwrap();
        for (a, b) in sa.iter().zip(&sb) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn slot_series_matches_pointwise() {
        let src = eis(&[1.1, 0.35, -0.6, -0.85]);
        let templates: [(&[u64], usize); 4] = [
            (&[1, 1, 1], 2),
            (&[1, 1, 1], 0),
            (&[5, 1, 1], 2),
            (&[1, 25, 1], 0),
        ];
        for (template, slot) in templates {
            let series = src.slot_series(template, slot, 200).unwrap();
            let mut m = template.to_vec();
            for (j, v) in series.iter().enumerate() {
                m[slot] = j as u64 + 1;
                assert!((v - src.coefficient(&m).unwrap()).norm() < 1e-11, "{m:?}");
            }
        }
    }

    #[test]
    fn hecke_relations_hold() {
        let src = eis(&[1.1, 0.35, -0.6, -0.85]);
        for q in [2u64, 3, 5] {
            for i in 1..=3 {
                for m in [1u64, 2, 3, 10, 25, 36, 125] {
                    let r = hecke_check(&src, q, m, i).unwrap();
                    assert!(r.norm() < 1e-10, "q={q} i={i} m={m}: {r}");
                }
            }
        }
        let gl2 = eis(&[0.7, -0.7]);
        for m in 1..50 {
            assert!(hecke_check(&gl2, 3, m, 1).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn file_source_round_trip() {
        let text = "# test data\nn=3\nlambda=0,1.3;0,-0.4;0,-0.9\n1 1 1 0\n1 2 0.25 -0.5 # note\n1 3 0.1 0.2\n2 1 0.25 0.5\n";
        let src = FileSource::<f64>::parse(text).unwrap();
        assert!(src.is_cuspidal());
        assert_eq!(src.kind(), SourceKind::File);
        assert_eq!(src.coefficient(&[1, 2]).unwrap(), C::new(0.25, -0.5));
        assert_eq!(
            src.coefficient(&[1, 4]),
            Err(Error::InsufficientData(TupleDisplay(vec![1, 4])))
        );
        assert_eq!(src.available_count(&[1, 1], 1), Some(3));
        assert_eq!(src.available_count(&[1, 1], 0), Some(2));
        let dual = DualSource::new(&src);
        assert_eq!(dual.coefficient(&[2, 1]).unwrap(), C::new(0.25, -0.5));
    }

    #[test]
    fn file_source_errors() {
        let missing_one = "n=2\nlambda=0,1;0,-1\n2 0.5 0\n";
        assert!(matches!(
            FileSource::<f64>::parse(missing_one),
            Err(Error::InsufficientData(_))
        ));
        let malformed = "n=2\nlambda=0,1;0,-1\n1 1 0\n2 x 0\n";
        assert!(matches!(
            FileSource::<f64>::parse(malformed),
            Err(Error::Parse { line: 4, .. })
        ));
        let bad_lambda = "n=2\nlambda=0,1\n1 1 0\n";
        assert!(FileSource::<f64>::parse(bad_lambda).is_err());
    }
}
