//! Bump test functions, their Mellin transforms, the archimedean factors
//! `G_±` and the kernels `Ω_±` obtained by integrating along vertical lines.
//!
//! `ω̃(s) = ∫_0^∞ ω(x) x^{s−1} dx` is computed in the variable `v = ln x`,
//! where it becomes the Fourier–Laplace transform `∫ ω(e^v) e^{vs} dv` of a
//! compactly supported smooth function.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::scalar::Real;
use crate::special::{log_gamma, POLE_THRESHOLD};

/// `ω(x) = amplitude · exp(1 − 1/(1 − u²))` with `u = (x − center)/radius`
/// on `|u| < 1`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction<T> {
    center: T,
    radius: T,
    amplitude: T,
}

impl<T: Real> TestFunction<T> {
    pub fn new(center: T, radius: T, amplitude: T) -> Result<Self> {
        if !(radius > T::zero() && radius < center) {
            return Err(Error::InvalidParameter(format!(
                "bump radius {radius} must lie in (0, center = {center})"
            )));
        }
        Ok(Self {
            center,
            radius,
            amplitude,
        })
    }

    /// Bump with maximum value 1.
    pub fn unit(center: T, radius: T) -> Result<Self> {
        Self::new(center, radius, T::one())
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    /// Open support `(center − radius, center + radius)`.
    pub fn support(&self) -> (T, T) {
        (self.center - self.radius, self.center + self.radius)
    }

    pub fn eval(&self, x: T) -> T {
        let u = (x - self.center) / self.radius;
        let d = T::one() - u * u;
        if d <= T::zero() || self.amplitude == T::zero() {
            return T::zero();
        }
        self.amplitude * (T::one() - d.recip()).exp()
    }

    /// `∫ ω(x) x^{s−1} dx` by Gauss–Legendre panels in `v = ln x`.
    pub fn mellin(&self, s: Complex<T>) -> Complex<T> {
        let (lo, hi) = self.support();
        let (a, b) = (lo.ln(), hi.ln());
        let width = (b - a).to_f64().unwrap_or(1.0);
        let freq = s.im.abs().to_f64().unwrap_or(0.0);
        let panels = (width * (freq / 2.0 + 40.0)).ceil().max(64.0) as usize;
        let gl = GaussLegendre::<T>::new(20);
        gl.integrate_panels(a, b, panels, |v| {
            let w = self.eval(v.exp());
            if w == T::zero() {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::from_polar((s.re * v).exp(), s.im * v) * w
            }
        })
    }
}

/// Default spacing in `v = ln x` of [`MellinTable`] samples.
pub const DEFAULT_LOG_STEP: f64 = 1e-3;

/// Samples of `ω(e^v)` on a uniform grid in `v`, from which `ω̃` is obtained
/// by the trapezoidal rule (spectrally accurate for compactly supported
/// smooth integrands).
#[derive(Debug, Clone)]
pub struct MellinTable<T> {
    omega: TestFunction<T>,
    logs: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> MellinTable<T> {
    pub fn new(omega: TestFunction<T>, step: T) -> Self {
        let (lo, hi) = omega.support();
        let (a, b) = (lo.ln(), hi.ln());
        let count = ((b - a) / step).ceil().to_usize().unwrap_or(1).max(8);
        let h = (b - a) / T::from_int(count as i64);
        let mut logs = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        for j in 1..count {
            let v = a + h * T::from_int(j as i64);
            let w = omega.eval(v.exp());
            if w > T::zero() {
                logs.push(v);
                weights.push(w * h);
            }
        }
        Self {
            omega,
            logs,
            weights,
        }
    }

    pub fn with_default_step(omega: TestFunction<T>) -> Self {
        Self::new(omega, T::lit(DEFAULT_LOG_STEP))
    }

    pub fn omega(&self) -> &TestFunction<T> {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn eval(&self, s: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&v, &w) in self.logs.iter().zip(&self.weights) {
            acc += Complex::from_polar(w * (s.re * v).exp(), s.im * v);
        }
        acc
    }

    /// Rounding error model of [`Self::eval_line`] on `Re s = c`: the error
    /// at height `t` is about `ε (|t|·v_max + 64) · rms`, since each phase
    /// `t·v` is rounded relative to its size and the errors of the samples
    /// are independent. Returns `(rms, v_max)`, `rms` being the root sum of
    /// squares of the sample magnitudes.
    pub fn rounding_scale(&self, c: T) -> (T, T) {
        let mut sq = T::zero();
        let mut vmax = T::zero();
        for (&v, &w) in self.logs.iter().zip(&self.weights) {
            let m = w * (c * v).exp();
            sq += m * m;
            vmax = vmax.max(v.abs());
        }
        (sq.sqrt(), vmax)
    }

    /// `ω̃(c + i(t0 + j·dt))` for `j = 0..count`, by per-sample phase
    /// recurrences reseeded from exact exponentials every 32 steps.
    pub fn eval_line(&self, c: T, t0: T, dt: T, count: usize) -> Vec<Complex<T>> {
        const RESEED: usize = 32;
        let m = self.logs.len();
        let base: Vec<T> = self
            .logs
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| w * (c * v).exp())
            .collect();
        let steps: Vec<Complex<T>> = self.logs.iter().map(|&v| Complex::from_polar(T::one(), dt * v)).collect();
        let mut phase = vec![Complex::new(T::zero(), T::zero()); m];
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            if j % RESEED == 0 {
                let t = t0 + dt * T::from_int(j as i64);
                for i in 0..m {
                    phase[i] = Complex::from_polar(base[i], t * self.logs[i]);
                }
            } else {
                for i in 0..m {
                    phase[i] *= steps[i];
                }
            }
            let mut acc = Complex::new(T::zero(), T::zero());
            for p in &phase {
                acc += *p;
            }
            out.push(acc);
        }
        out
    }
}

/// Which archimedean factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

fn pole_check<T: Real>(z: Complex<T>, what: &str, s: Complex<T>) -> Result<()> {
    let r = z.re.round();
    if r <= T::zero() && (z - Complex::new(r, T::zero())).norm() < T::lit(POLE_THRESHOLD) {
        return Err(Error::Pole(format!("{what} has a pole at s = {s}")));
    }
    Ok(())
}

/// `G_+(s) = π^{−n(1/2−s)} Π_j Γ((1 − s − conj λ_j)/2) / Γ((s − λ_j)/2)`.
pub fn g_plus<T: Real>(s: Complex<T>, lambda: &[Complex<T>]) -> Result<Complex<T>> {
    gamma_factor(s, lambda, Sign::Plus)
}

/// `G_−(s) = i^{−n} π^{−n(1/2−s)} Π_j Γ((2 − s − conj λ_j)/2) / Γ((1 + s − λ_j)/2)`.
pub fn g_minus<T: Real>(s: Complex<T>, lambda: &[Complex<T>]) -> Result<Complex<T>> {
    gamma_factor(s, lambda, Sign::Minus)
}

pub fn gamma_factor<T: Real>(s: Complex<T>, lambda: &[Complex<T>], sign: Sign) -> Result<Complex<T>> {
    let half = T::lit(0.5);
    let shift = match sign {
        Sign::Plus => T::zero(),
        Sign::Minus => T::one(),
    };
    let n = T::from_int(lambda.len() as i64);
    let mut acc = (s - half) * n * T::PI().ln();
    for l in lambda {
        let top = (Complex::new(T::one() + shift, T::zero()) - s - l.conj()) * half;
        pole_check(top, "gamma factor", s)?;
        let bottom = (s + shift - l) * half;
        acc += log_gamma(top)?;
        // Poles of Γ in the denominator are zeros of G; log Γ refuses them,
        // so the factor is returned as exactly zero.
        match log_gamma(bottom) {
            Ok(v) => acc -= v,
            Err(_) => return Ok(Complex::new(T::zero(), T::zero())),
        }
    }
    let mut g = acc.exp();
    if sign == Sign::Minus {
        // i^{−n}
        let quarter = lambda.len() % 4;
        g = match quarter {
            0 => g,
            1 => Complex::new(g.im, -g.re),
            2 => -g,
            _ => Complex::new(-g.im, g.re),
        };
    }
    Ok(g)
}

/// Vertical contour `Re s = −σ`, truncated at `|Im s| ≤ T`, with a
/// Gauss–Legendre density per unit height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec<T> {
    pub sigma: T,
    pub height: T,
    pub nodes_per_unit: usize,
}

impl<T: Real> Default for ContourSpec<T> {
    fn default() -> Self {
        Self {
            sigma: T::lit(2.0),
            height: T::lit(60.0),
            nodes_per_unit: 16,
        }
    }
}

impl<T: Real> ContourSpec<T> {
    pub fn new(sigma: T, height: T, nodes_per_unit: usize) -> Result<Self> {
        if sigma <= T::one() {
            return Err(Error::InvalidParameter(format!("sigma = {sigma} must exceed 1")));
        }
        if height < T::lit(20.0) {
            return Err(Error::InvalidParameter(format!("height = {height} must be at least 20")));
        }
        if nodes_per_unit == 0 {
            return Err(Error::InvalidParameter("nodes per unit must be positive".into()));
        }
        Ok(Self {
            sigma,
            height,
            nodes_per_unit,
        })
    }

    /// Distance from the line `Re s = −σ` to the nearest pole of `G_±`.
    pub fn pole_distance(&self, lambda: &[Complex<T>]) -> T {
        let line = -self.sigma;
        let mut best = T::infinity();
        for l in lambda {
            // Poles at s = 1 − conj λ + 2ℓ (G_+) and s = 2 − conj λ + 2ℓ (G_−).
            for base in [T::one(), T::lit(2.0)] {
                let mut re = base - l.re;
                while re < line - T::one() {
                    re += T::lit(2.0);
                }
                best = best.min((re - line).abs());
            }
        }
        best
    }

    /// This contour, or the first `σ` in `[1.5, 3]` (step 0.05) whose line
    /// stays at distance `≥ 0.1` from every pole.
    pub fn avoiding_poles(&self, lambda: &[Complex<T>]) -> Result<Self> {
        let min = T::lit(0.1);
        if self.pole_distance(lambda) >= min {
            return Ok(*self);
        }
        for i in 0..=30 {
            let candidate = Self {
                sigma: T::lit(1.5 + 0.05 * i as f64),
                ..*self
            };
            if candidate.pole_distance(lambda) >= min {
                return Ok(candidate);
            }
        }
        Err(Error::Pole("no admissible sigma in [1.5, 3]".into()))
    }
}

/// A truncated vertical-line integral and its estimated truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineIntegral<T> {
    pub value: Complex<T>,
    /// Geometric extrapolation of the integrand envelope beyond `|Im s| = T`;
    /// infinite when the envelope is not decaying.
    pub tail_bound: T,
}

impl<T: Real> LineIntegral<T> {
    pub fn within(&self, tol: T) -> bool {
        self.tail_bound <= tol
    }
}

/// Nodes `t` and weights of the composite Gauss–Legendre rule on `[−T, T]`
/// with unit panels.
fn line_rule<T: Real>(contour: &ContourSpec<T>) -> (Vec<T>, Vec<T>, usize) {
    let gl = GaussLegendre::<T>::new(contour.nodes_per_unit);
    let panels = (contour.height * T::lit(2.0)).ceil().to_usize().unwrap_or(1).max(1);
    let width = contour.height * T::lit(2.0) / T::from_int(panels as i64);
    let mut ts = Vec::with_capacity(panels * gl.nodes.len());
    let mut ws = Vec::with_capacity(panels * gl.nodes.len());
    for p in 0..panels {
        let lo = -contour.height + width * T::from_int(p as i64);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            ts.push(lo + width * T::lit(0.5) * (x + T::one()));
            ws.push(w * width * T::lit(0.5));
        }
    }
    (ts, ws, gl.nodes.len())
}

/// Tail estimate from per-panel maxima of `|integrand|`: fits a geometric
/// ratio over the outermost `span` panels on each side.
fn geometric_tail<T: Real>(panel_max: &[T], panel_width: T) -> T {
    let k = panel_max.len();
    if k < 4 {
        return T::infinity();
    }
    let span = (k / 4).clamp(2, 10);
    let mut total = T::zero();
    let left: Vec<T> = panel_max[..k / 2].iter().rev().copied().collect();
    let right: Vec<T> = panel_max[k / 2..].to_vec();
    // Each side ordered outward.
    for outward in [left, right] {
        let last = outward[outward.len() - 1];
        let earlier = outward[outward.len() - 1 - span];
        if last == T::zero() {
            continue;
        }
        let ratio = (last / earlier).powf(T::one() / T::from_int(span as i64));
        if !(ratio < T::one()) {
            return T::infinity();
        }
        total += last * ratio / (T::one() - ratio) * panel_width;
    }
    total / T::TAU()
}

/// A truncated vertical line `Re s = re`, `|Im s| ≤ height`, integrated by
/// unit Gauss–Legendre panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line<T> {
    pub re: T,
    pub height: T,
    pub nodes_per_unit: usize,
}

impl<T: Real> ContourSpec<T> {
    /// The line `Re s = −σ` of this contour.
    pub fn line(&self) -> Line<T> {
        Line {
            re: -self.sigma,
            height: self.height,
            nodes_per_unit: self.nodes_per_unit,
        }
    }
}

/// `(1/2πi) ∫ ω̃(s) G_±(s) x^s ds` along `line`. Moving the line within
/// `Re s < 1` does not change the value, since `G_±` has no poles there
/// when `Re λ_j = 0`.
pub fn omega_on_line<T: Real>(
    x: T,
    table: &MellinTable<T>,
    lambda: &[Complex<T>],
    line: &Line<T>,
    sign: Sign,
) -> Result<LineIntegral<T>> {
    if x <= T::zero() {
        return Err(Error::InvalidParameter(format!("kernel argument x = {x} must be positive")));
    }
    if table.omega().amplitude() == T::zero() {
        return Ok(LineIntegral {
            value: Complex::new(T::zero(), T::zero()),
            tail_bound: T::zero(),
        });
    }
    let contour = ContourSpec {
        sigma: -line.re,
        height: line.height,
        nodes_per_unit: line.nodes_per_unit,
    };
    let (ts, ws, per_panel) = line_rule(&contour);
    let lx = x.ln();
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut panel_max = vec![T::zero(); ts.len() / per_panel];
    for (idx, (&t, &w)) in ts.iter().zip(&ws).enumerate() {
        let s = Complex::new(line.re, t);
        let g = gamma_factor(s, lambda, sign)?;
        let f = table.eval(s) * g * Complex::from_polar((s.re * lx).exp(), t * lx);
        let p = idx / per_panel;
        panel_max[p] = panel_max[p].max(f.norm());
        acc += f * w;
    }
    let width = line.height * T::lit(2.0) / T::from_int(panel_max.len() as i64);
    Ok(LineIntegral {
        value: acc / T::TAU(),
        tail_bound: geometric_tail(&panel_max, width),
    })
}

/// `Ω_+(x) = (1/2πi) ∫_{(−σ)} ω̃(s) G_+(s) x^s ds`, truncated at height `T`.
pub fn omega_plus<T: Real>(
    x: T,
    table: &MellinTable<T>,
    lambda: &[Complex<T>],
    contour: &ContourSpec<T>,
) -> Result<LineIntegral<T>> {
    omega_on_line(x, table, lambda, &contour.line(), Sign::Plus)
}

/// `Ω_−(x) = (1/2πi) ∫_{(−σ)} ω̃(s) G_−(s) x^s ds`, truncated at height `T`.
pub fn omega_minus<T: Real>(
    x: T,
    table: &MellinTable<T>,
    lambda: &[Complex<T>],
    contour: &ContourSpec<T>,
) -> Result<LineIntegral<T>> {
    omega_on_line(x, table, lambda, &contour.line(), Sign::Minus)
}

/// `|ω(x) − (1/2πi) ∫_{(σ)} x^{−s} ω̃(s) ds|` for each `x`, with the line
/// integral truncated at `T` and evaluated by the composite Gauss–Legendre
/// rule of `contour`.
pub fn mellin_inversion_residuals<T: Real>(
    table: &MellinTable<T>,
    contour: &ContourSpec<T>,
    xs: &[T],
) -> Vec<T> {
    let (ts, ws, _) = line_rule(contour);
    let values: Vec<Complex<T>> = ts
        .iter()
        .map(|&t| table.eval(Complex::new(contour.sigma, t)))
        .collect();
    xs.iter()
        .map(|&x| {
            let lx = x.ln();
            let mut acc = Complex::new(T::zero(), T::zero());
            for ((&t, &w), v) in ts.iter().zip(&ws).zip(&values) {
                acc += *v * Complex::from_polar((-contour.sigma * lx).exp(), -t * lx) * w;
            }
            let recon = acc / T::TAU();
            (recon - Complex::new(table.omega().eval(x), T::zero())).norm()
        })
        .collect()
}

/// Single-point form of [`mellin_inversion_residuals`].
pub fn mellin_inversion_check<T: Real>(table: &MellinTable<T>, contour: &ContourSpec<T>, x: T) -> T {
    mellin_inversion_residuals(table, contour, &[x])[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn bump() -> TestFunction<f64> {
        TestFunction::unit(40.0, 30.0).unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(&f, a, b, fa, fm, fb, whole, tol, 40)
    }

    #[test]
    fn bump_shape() {
        let w = bump();
        assert_eq!(w.eval(40.0), 1.0);
        assert_eq!(w.eval(10.0), 0.0);
        assert_eq!(w.eval(75.0), 0.0);
        assert!(w.eval(69.9) > 0.0);
        assert!(TestFunction::unit(10.0, 12.0).is_err());
    }

    #[test]
    fn mellin_real_points_against_simpson() {
        let w = bump();
        let m1 = w.mellin(C::new(1.0, 0.0));
        let oracle1 = simpson(|x| w.eval(x), 10.0, 70.0, 1e-13);
        assert!(m1.re > 0.0);
        assert!((m1.re - oracle1).abs() < 1e-9 * oracle1);
        let m2 = w.mellin(C::new(2.0, 0.0));
        let oracle2 = simpson(|x| x * w.eval(x), 10.0, 70.0, 1e-12);
        assert!((m2.re - oracle2).abs() < 1e-10 * oracle2);
    }

    #[test]
    fn table_matches_panel_quadrature() {
        let w = bump();
        let table = MellinTable::with_default_step(w);
        for &(re, im) in &[(0.5, 0.0), (0.5, 37.0), (-2.0, 120.0), (2.0, -80.0), (0.5, 900.0)] {
            let s = C::new(re, im);
            let a = table.eval(s);
            let b = w.mellin(s);
            // Scale by ∫|ω(x) x^{s−1}| dx, the conditioning of the sum.
            let scale = table.eval(C::new(re, 0.0)).re;
            assert!((a - b).norm() < 1e-12 * scale, "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn line_recurrence_matches_pointwise() {
        let table = MellinTable::with_default_step(bump());
        let line = table.eval_line(0.5, -50.0, 0.1, 1000);
        for j in (0..1000).step_by(97) {
            let direct = table.eval(C::new(0.5, -50.0 + 0.1 * j as f64));
            assert!((line[j] - direct).norm() < 1e-12 * (1.0 + direct.norm()));
        }
    }

    #[test]
    fn mellin_obeys_integration_by_parts_bound() {
        // |ω̃(σ + it)| ≤ |t|^{−6} ∫ |g⁽⁶⁾(v)| dv with g(v) = ω(e^v) e^{σv}.
        let w = bump();
        let sigma = 0.5;
        let g = |v: f64| w.eval(v.exp()) * (sigma * v).exp();
        let (a, b) = (10f64.ln(), 70f64.ln());
        let h = 5e-3;
        let binom = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
        let steps = ((b - a) / h).ceil() as usize;
        let mut c6 = 0.0;
        for j in 0..=steps {
            let v = a + j as f64 * h;
            let d6: f64 = binom.iter().enumerate().map(|(i, c)| c * g(v + (i as f64 - 3.0) * h)).sum::<f64>() / h.powi(6);
            c6 += d6.abs() * h;
        }
        for t in [10.0, 20.0, 30.0, 40.0, 50.0] {
            let v = w.mellin(C::new(sigma, t)).norm();
            assert!(v * t.powi(6) <= c6, "t={t}: {} > {c6}", v * t.powi(6));
        }
    }

    #[test]
    fn gamma_factor_at_symmetric_point() {
        let g = g_plus(C::new(0.5, 0.0), &[C::new(0.0, 0.0)]).unwrap();
        assert!((g - C::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gamma_factor_unit_modulus_on_critical_line() {
        let lambda = [C::new(0.0, 1.3), C::new(0.0, -0.4), C::new(0.0, -0.9)];
        for t in [-25.0, -3.0, 0.7, 18.0] {
            let s = C::new(0.5, t);
            assert!((g_plus(s, &lambda).unwrap().norm() - 1.0).abs() < 1e-12);
            assert!((g_minus(s, &lambda).unwrap().norm() - 1.0).abs() < 1e-12);
            let mirrored = g_plus(C::new(0.5, -t), &lambda).unwrap().norm();
            assert!((g_plus(s, &lambda).unwrap().norm() - mirrored).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_factor_matches_direct_gamma_ratio() {
        let t0 = 0.7;
        let lambda = [C::new(0.0, t0), C::new(0.0, -t0)];
        let s = C::new(0.3, 2.0);
        let g = |z: C| crate::special::gamma(z).unwrap();
        let pi_pow = C::new(PI, 0.0).powc((s - 0.5) * 2.0);
        let direct = pi_pow * g((C::new(1.0, 0.0) - s + C::new(0.0, t0)) / 2.0) * g((C::new(1.0, 0.0) - s - C::new(0.0, t0)) / 2.0)
            / (g((s - C::new(0.0, t0)) / 2.0) * g((s + C::new(0.0, t0)) / 2.0));
        assert!((g_plus(s, &lambda).unwrap() - direct).norm() < 1e-12 * direct.norm());
        assert!(g_plus(C::new(1.0, 0.7), &lambda).is_err());
    }

    #[test]
    fn contour_validation_and_pole_avoidance() {
        assert!(ContourSpec::new(1.0, 60.0, 16).is_err());
        assert!(ContourSpec::new(2.0, 10.0, 16).is_err());
        let c = ContourSpec::<f64>::default();
        let tame = [C::new(0.0, 1.0), C::new(0.0, -1.0)];
        assert_eq!(c.avoiding_poles(&tame).unwrap(), c);
        // Re λ = 3 puts a G_+ pole at Re s = −2.
        let wild = [C::new(3.0, 0.0), C::new(-3.0, 0.0)];
        let moved = c.avoiding_poles(&wild).unwrap();
        assert!(moved.pole_distance(&wild) >= 0.1);
        assert!(moved.sigma != 2.0);
    }

    #[test]
    fn zero_amplitude_gives_zero_kernel() {
        let w = TestFunction::new(40.0, 30.0, 0.0).unwrap();
        let table = MellinTable::with_default_step(w);
        let r = omega_plus(0.3, &table, &[C::new(0.0, 0.5), C::new(0.0, -0.5)], &ContourSpec::default()).unwrap();
        assert_eq!(r.value, C::new(0.0, 0.0));
    }

    #[test]
    fn degree_one_kernel_is_cosine_transform() {
        // For ζ: Ω_+(x) = 2x ∫ ω(y) cos(2π x y) dy.
        let w = TestFunction::unit(1.0, 0.9).unwrap();
        let table = MellinTable::with_default_step(w);
        let line = Line {
            re: 0.5,
            height: 1500.0,
            nodes_per_unit: 12,
        };
        for x in [0.05, 0.2, 0.6] {
            let k = omega_on_line(x, &table, &[C::new(0.0, 0.0)], &line, Sign::Plus).unwrap();
            assert!(k.tail_bound < 1e-9, "{}", k.tail_bound);
            let oracle = 2.0 * x * simpson(|y| w.eval(y) * (2.0 * PI * x * y).cos(), 0.1, 1.9, 1e-14);
            assert!((k.value.re - oracle).abs() < 1e-8, "x={x}: {} vs {oracle}", k.value);
            assert!(k.value.im.abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_is_real_and_linear() {
        let lambda = [C::new(0.0, 0.7), C::new(0.0, -0.7)];
        let contour = ContourSpec::default();
        let w1 = MellinTable::with_default_step(TestFunction::new(3.0, 1.0, 1.0).unwrap());
        let w2 = MellinTable::with_default_step(TestFunction::new(3.0, 1.0, 2.5).unwrap());
        let a = omega_plus(0.4, &w1, &lambda, &contour).unwrap();
        let b = omega_plus(0.4, &w2, &lambda, &contour).unwrap();
        assert!(a.value.im.abs() < 1e-10);
        assert!((b.value - a.value * 2.5).norm() < 1e-12 * (1.0 + b.value.norm()));
    }

    #[test]
    fn mellin_inversion_roundtrip() {
        let w = TestFunction::unit(1.0, 0.5).unwrap();
        let table = MellinTable::with_default_step(w);
        let contour = ContourSpec::new(2.0, 1280.0, 16).unwrap();
        let r = mellin_inversion_residuals(&table, &contour, &[1.0, 0.8, 1.3, 2.0]);
        assert!(r.iter().all(|&e| e < 1e-8), "{r:?}");
    }
}
