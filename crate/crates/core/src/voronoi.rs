//! Both sides of the Voronoi summation formulae with additive twists
//! `e(am/q)` modulo a prime, and their verification.
//!
//! The arithmetic side is a finite sum over the support of `ω`. The dual side
//! is `(1/2πi) ∫ ω̃(s) G_±(s) D(s) ds` along `Re s = 1/2`, where `D` is the
//! dual Dirichlet series `q^{k−ns} F̃(1−s)/(q−1)` (even part) or
//! `(−1)^k q^{k−ns} Ỹ(1−s)/(q−1)` (odd part). With a Gaussian window
//! `χ(s) = exp((s − 1/2)²/W²)` it is split as
//!
//! ```text
//! Σ_m c_m/m · Ω_W(m/q^n)  +  (1/2π) ∫ (1 − χ) ω̃ G_± D dt
//! ```
//!
//! where `Ω_W(x) = (1/2πi) ∫ χ ω̃ G_± x^s ds` is the windowed kernel and the
//! second term uses the analytic continuation of `D`. The windowed kernel
//! decays fast enough in `x` for the `m`-sum to be truncated with a
//! Rankin-type tail bound; the unwindowed `Ω_±` do not.
//!
//! For sources with poles (the Eisenstein family) the even part picks up
//! `(1/(q−1)) Σ Res_{s = 1 + α_j} F(s) ω̃(s)`, computed by trapezoidal
//! quadrature on small circles.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;

use crate::chars::{Parity, PrimeModulus};
use crate::coeffs::{at_left, at_right, unit_tuple, CoefficientSource, SourceKind};
use crate::error::{Error, Result};
use crate::kloosterman::{KloostermanTable, DEFAULT_BUDGET};
use crate::lfun::{divisor_tail_bound, PointData, TwistedFamily};
use crate::mellin::{gamma_factor, MellinTable, Sign, TestFunction};
use crate::scalar::{sign, Real};

/// Which formula to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    /// `Kl_k(am) + Kl_k(−am)` against `Ω_+`, with Hecke side sums.
    Even,
    /// `Kl_k(am) − Kl_k(−am)` against `Ω_−`.
    Odd,
    /// `Kl_k(am)` against `Ω_+ ± Ω_−`: the sum of the two.
    Combined,
}

impl Part {
    pub fn name(self) -> &'static str {
        match self {
            Part::Even => "even",
            Part::Odd => "odd",
            Part::Combined => "combined",
        }
    }
}

impl std::str::FromStr for Part {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Part::Even),
            "odd" => Ok(Part::Odd),
            "combined" => Ok(Part::Combined),
            other => Err(Error::InvalidParameter(format!("unknown part '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// The comparison is not conclusive: truncation targets were not met
    /// or the coefficient data is finite.
    Approximate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Approximate => "approximate",
        }
    }
}

/// Numerical settings of the dual-side evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiSettings {
    /// `σ > 1`; the line `Re s = −σ` is one of the lines used for the kernel
    /// envelope.
    pub sigma: f64,
    /// Fixed truncation height of the continuation integral; adaptive when
    /// `None`.
    pub height: Option<f64>,
    /// Fixed `m`-sum cutoff; chosen from the envelope when `None`.
    pub m_cutoff: Option<usize>,
    /// Real part of the line carrying the continuation integral.
    pub line_re: f64,
    /// Real part of the line on which the windowed kernel is integrated;
    /// any line in `Re s < 1` gives the same kernel.
    pub kernel_re: f64,
    /// Trapezoidal step in `Im s`.
    pub step: f64,
    /// Candidate window widths, tried from largest to smallest.
    pub windows: Vec<f64>,
    /// Upper bound on `(kernel nodes) × (m-sum terms)`.
    pub work_budget: f64,
    /// Absolute truncation target for each of the `m`-sum and the integral.
    pub target: f64,
    /// Chunk length in `Im s` of the adaptive continuation integral.
    pub chunk: f64,
    pub max_height: f64,
    /// Height used for the unwindowed kernel of sources without
    /// continuation.
    pub kernel_height: f64,
    pub residue_radius: f64,
    pub residue_nodes: usize,
    /// Relative tolerances of the even/combined and odd verdicts.
    pub tol_even: f64,
    pub tol_odd: f64,
    /// Absolute errors below this pass regardless of the relative error.
    pub abs_floor: f64,
    /// Sample spacing in `ln x` of the Mellin transform table.
    pub log_step: f64,
}

impl Default for VoronoiSettings {
    fn default() -> Self {
        Self {
            sigma: 2.0,
            height: None,
            m_cutoff: None,
            line_re: 0.5,
            kernel_re: -0.5,
            step: 0.1,
            windows: vec![64.0, 32.0, 16.0, 8.0, 4.0, 2.0],
            work_budget: 2e8,
            target: 1e-10,
            chunk: 50.0,
            max_height: 4000.0,
            kernel_height: 60.0,
            residue_radius: 0.05,
            residue_nodes: 64,
            tol_even: 1e-5,
            tol_odd: 1e-6,
            abs_floor: 1e-10,
            log_step: 5e-4,
        }
    }
}

impl VoronoiSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.sigma <= 1.0 {
            return bad(format!("sigma = {} must exceed 1", self.sigma));
        }
        if !(self.line_re > 0.0 && self.line_re < 1.0) {
            return bad(format!("line_re = {} must lie in (0, 1)", self.line_re));
        }
        if self.kernel_re >= 1.0 {
            return bad(format!("kernel_re = {} must be below 1", self.kernel_re));
        }
        if let Some(h) = self.height {
            if h <= 0.0 {
                return bad(format!("height = {h} must be positive"));
            }
        }
        if self.step <= 0.0 || self.chunk < self.step || self.windows.is_empty() || self.windows.iter().any(|&w| w <= 0.0) {
            return bad("step, chunk and windows must be positive".into());
        }
        if self.residue_nodes < 8 || self.residue_radius <= 0.0 {
            return bad("residue circle needs radius > 0 and at least 8 nodes".into());
        }
        Ok(())
    }
}

/// `k`, `a` and `ā` with `aā ≡ 1 (mod q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoronoiInstance {
    pub k: u32,
    pub a: i64,
    pub abar: i64,
}

impl VoronoiInstance {
    pub fn new(n: u32, q: u64, k: u32, a: i64) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(Error::OutOfRange {
                what: "k",
                value: i64::from(k),
                range: format!("[1, {}]", n - 1),
            });
        }
        let abar = crate::chars::mod_inverse(a, q).ok_or(Error::NotAUnit(a, q))? as i64;
        debug_assert_eq!((a.rem_euclid(q as i64) * abar) % q as i64, 1);
        Ok(Self { k, a, abar })
    }
}

/// Truncation and quadrature diagnostics of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation<T> {
    /// Window width `W`; `None` when the kernel is not split.
    pub window: Option<T>,
    pub m_cutoff: usize,
    /// Bound on the neglected `m > m_cutoff` terms.
    pub m_tail_bound: T,
    pub height: T,
    /// Estimate of the continuation integral beyond `height`.
    pub height_tail_bound: T,
    /// Estimated rounding error of the dual side.
    pub roundoff_bound: T,
    /// Change of the polar correction under doubling the circle nodes.
    pub correction_stability: Option<T>,
    /// `|regrouped − (even + odd)| / max(|regrouped|, 1)` in combined mode.
    pub regrouping_residual: Option<T>,
}

impl<T: Real> Truncation<T> {
    pub fn total_bound(&self) -> T {
        self.m_tail_bound + self.height_tail_bound + self.roundoff_bound
    }
}

/// Parameter echo of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportParams<T> {
    pub n: u32,
    pub q: u64,
    pub k: u32,
    pub a: i64,
    pub abar: i64,
    pub part: Part,
    pub omega_center: T,
    pub omega_radius: T,
    pub source: SourceKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub params: ReportParams<T>,
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub correction: Complex<T>,
    /// `|lhs − (rhs + correction)|`.
    pub abs_err: T,
    /// `abs_err / max(|lhs|, |rhs|, 1e−30)`.
    pub rel_err: T,
    pub tolerance: T,
    pub verdict: Verdict,
    pub truncation: Truncation<T>,
    pub notes: Vec<String>,
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn sign_index(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// Geometric extrapolation of chunk masses `prev, last, …`; ten further
/// chunks of size `last` when the decay is slower than 0.9 per chunk.
fn tail_estimate(last: f64, prev: f64) -> f64 {
    let ratio = if prev > 0.0 { last / prev } else { 0.0 };
    if ratio < 0.9 {
        last * ratio / (1.0 - ratio)
    } else {
        10.0 * last
    }
}

/// Samples on the integration line at `t = j · step`.
#[derive(Debug, Clone)]
struct Node<T> {
    t: T,
    omega: Complex<T>,
    gamma: [Complex<T>; 2],
    dual: Option<PointData<T>>,
}

/// `C(c) = (1/2π) ∫ |χ ω̃ G| dt` on several lines `Re s = c < 0`, so that
/// `|Ω_W(x)| ≤ x^c C(c)`.
#[derive(Debug, Clone)]
struct Envelope {
    lines: Vec<(f64, f64)>,
    on_line: f64,
}

/// Value of a truncated continuation integral.
#[derive(Debug, Clone, Copy)]
struct HighPart<T> {
    value: Complex<T>,
    height: T,
    tail: T,
    roundoff: T,
}

/// Dual-side partial sum `Σ_{m ≤ M} c_m/m Ω_W(m/q^n)`.
#[derive(Debug, Clone, Copy)]
struct LowPart<T> {
    value: Complex<T>,
    roundoff: T,
}

struct ResidueNodes<T> {
    points: Vec<(Complex<T>, PointData<T>, Complex<T>)>,
}

/// Precomputed data for one source, modulus and test function, shared by
/// every `k`, `a` and part.
pub struct VoronoiContext<T: Real> {
    source: Arc<dyn CoefficientSource<T>>,
    modulus: Arc<PrimeModulus>,
    family: Option<TwistedFamily<T>>,
    omega: TestFunction<T>,
    mellin: MellinTable<T>,
    settings: VoronoiSettings,
    lambda: Vec<Complex<T>>,
    right: Vec<Node<T>>,
    left: Vec<Node<T>>,
    window: Option<f64>,
    low_half: usize,
    envelopes: Option<[Envelope; 2]>,
    m_needed: [usize; 2],
    m_limit: Option<usize>,
    bound_coefficient: f64,
    kernel_nodes: [Vec<(T, Complex<T>)>; 2],
    kernels: [Vec<Complex<T>>; 2],
    kl: HashMap<u32, KloostermanTable<T>>,
    first_slot: Vec<Complex<T>>,
    first_slot_q: HashMap<u32, Vec<Complex<T>>>,
    residues: HashMap<usize, ResidueNodes<T>>,
    notes: Vec<String>,
}

impl<T: Real> VoronoiContext<T> {
    pub fn new(
        source: Arc<dyn CoefficientSource<T>>,
        q: u64,
        omega: TestFunction<T>,
        settings: VoronoiSettings,
    ) -> Result<Self> {
        settings.validate()?;
        let modulus = PrimeModulus::shared(q)?;
        let n = source.degree();
        let continuation = source.eisenstein().is_some();
        let family = if continuation {
            Some(TwistedFamily::new(source.clone(), q)?)
        } else {
            None
        };
        let mut kl = HashMap::new();
        for k in 1..n {
            kl.insert(k, KloostermanTable::new(&modulus, k, DEFAULT_BUDGET)?);
        }
        let lambda = source.spectral().to_vec();
        let mellin = MellinTable::new(omega, T::lit(settings.log_step));
        let mut ctx = Self {
            source,
            modulus,
            family,
            omega,
            mellin,
            settings,
            lambda,
            right: Vec::new(),
            left: Vec::new(),
            window: None,
            low_half: 0,
            envelopes: None,
            m_needed: [0, 0],
            m_limit: None,
            bound_coefficient: 0.0,
            kernel_nodes: [Vec::new(), Vec::new()],
            kernels: [Vec::new(), Vec::new()],
            kl,
            first_slot: Vec::new(),
            first_slot_q: HashMap::new(),
            residues: HashMap::new(),
            notes: Vec::new(),
        };
        ctx.bound_coefficient = ctx.coefficient_bound();
        if continuation {
            ctx.choose_window()?;
        } else {
            ctx.low_half = (ctx.settings.kernel_height / ctx.settings.step).ceil() as usize;
            let avail = ctx.source.available_count(&unit_tuple(n), 0);
            ctx.m_limit = avail;
            let m = ctx.settings.m_cutoff.unwrap_or(avail.unwrap_or(1000));
            ctx.m_needed = [m, m];
            ctx.notes.push(format!(
                "source without continuation: kernel unwindowed and truncated at height {}, m-sum limited to the supplied coefficients",
                ctx.settings.kernel_height
            ));
        }
        Ok(ctx)
    }

    pub fn degree(&self) -> u32 {
        self.source.degree()
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    pub fn settings(&self) -> &VoronoiSettings {
        &self.settings
    }

    pub fn window(&self) -> Option<f64> {
        self.window
    }

    /// Cutoffs chosen for the `Ω_+` and `Ω_−` sums.
    pub fn m_cutoffs(&self) -> [usize; 2] {
        self.m_needed
    }

    fn step(&self) -> T {
        T::lit(self.settings.step)
    }

    fn c0(&self) -> T {
        T::lit(self.settings.line_re)
    }

    fn q_pow_n(&self) -> f64 {
        (self.q() as f64).powi(self.degree() as i32)
    }

    /// `B` with `|c_m| ≤ B d_n(m)` for the dual coefficients of every `k`.
    fn coefficient_bound(&self) -> f64 {
        let n = self.degree();
        let q = self.q() as f64;
        let mut best: f64 = 0.0;
        for k in 1..n {
            let table = &self.kl[&(n - k)];
            let max_kl = (0..self.q() as i64)
                .map(|m| table.get(m).norm().to_f64().unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            let mut b = q.powi(k as i32) * max_kl;
            for l in 2..=(n - k) {
                b += q.powi((k - 1 + l) as i32) * f64::from(n) * 2f64.powi(n as i32);
            }
            best = best.max(b);
        }
        best
    }

    fn chi(&self, t: f64) -> f64 {
        match self.window {
            Some(w) => (-(t / w) * (t / w)).exp(),
            None => 1.0,
        }
    }

    fn envelope(&self, window: f64, sign: Sign) -> Result<Envelope> {
        let n = f64::from(self.degree());
        let c0 = self.settings.line_re;
        let dt = 0.25f64.min(window / 8.0);
        let mut lines: Vec<f64> = vec![-0.5, -1.0, -2.0, -3.0, -4.0, -6.0, -8.0, -12.0, -16.0];
        lines.push(-self.settings.sigma);
        let integrate = |c: f64| -> Result<f64> {
            let reach = window * ((n * (0.5 - c) / 2.0).max(0.0).sqrt() + 7.0);
            let half = (reach / dt).ceil() as usize;
            let omegas = self
                .mellin
                .eval_line(T::lit(c), T::lit(-(half as f64) * dt), T::lit(dt), 2 * half + 1);
            let mut acc = 0.0;
            for (i, om) in omegas.iter().enumerate() {
                let t = (i as f64 - half as f64) * dt;
                let s = Complex::new(T::lit(c), T::lit(t));
                let g = gamma_factor(s, &self.lambda, sign)?;
                let chi = (((c - c0) * (c - c0) - t * t) / (window * window)).exp();
                acc += chi * om.norm().to_f64().unwrap_or(0.0) * g.norm().to_f64().unwrap_or(f64::INFINITY);
            }
            Ok(acc * dt / std::f64::consts::TAU)
        };
        let on_line = integrate(self.settings.kernel_re)?;
        let mut env = Vec::with_capacity(lines.len());
        for c in lines {
            env.push((c, integrate(c)?));
        }
        Ok(Envelope { lines: env, on_line })
    }

    /// Bound on `Σ_{m > M} |c_m|/m |Ω_W(m/q^n)|`.
    fn tail_bound(&self, env: &Envelope, m: usize) -> f64 {
        let n = self.degree();
        let qn = self.q_pow_n();
        env.lines
            .iter()
            .map(|&(c, cc)| self.bound_coefficient * cc * qn.powf(-c) * divisor_tail_bound(n, 1.0 - c, m))
            .fold(f64::INFINITY, f64::min)
    }

    fn needed_cutoff(&self, env: &Envelope, cap: usize) -> Option<usize> {
        let mut m = 64usize;
        loop {
            if self.tail_bound(env, m) <= self.settings.target {
                return Some(m);
            }
            if m >= cap {
                return None;
            }
            m = (m * 2).min(cap);
        }
    }

    fn choose_window(&mut self) -> Result<()> {
        let mut windows = self.settings.windows.clone();
        windows.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let mut fallback = None;
        for &w in &windows {
            let half = ((7.0 * w) / self.settings.step).ceil() as usize;
            let nodes = (2 * half + 1) as f64;
            let cap = (self.settings.work_budget / (2.0 * nodes)).max(64.0) as usize;
            let env = [self.envelope(w, Sign::Plus)?, self.envelope(w, Sign::Minus)?];
            let m = [self.needed_cutoff(&env[0], cap), self.needed_cutoff(&env[1], cap)];
            if let [Some(mp), Some(mm)] = m {
                self.window = Some(w);
                self.low_half = half;
                self.m_needed = [mp, mm];
                self.envelopes = Some(env);
                return Ok(());
            }
            fallback = Some((w, half, cap, env));
        }
        let (w, half, cap, env) = fallback.expect("at least one window");
        self.notes.push(format!(
            "no window meets the truncation target within the work budget; using W = {w} with m ≤ {cap}"
        ));
        self.window = Some(w);
        self.low_half = half;
        self.m_needed = [cap, cap];
        self.envelopes = Some(env);
        Ok(())
    }

    fn make_node(&self, t: T, omega: Complex<T>) -> Result<Node<T>> {
        let s = Complex::new(self.c0(), t);
        let gamma = [
            gamma_factor(s, &self.lambda, Sign::Plus)?,
            gamma_factor(s, &self.lambda, Sign::Minus)?,
        ];
        let dual = match &self.family {
            Some(f) => Some(f.dual_point(Complex::new(T::one(), T::zero()) - s)?),
            None => None,
        };
        Ok(Node { t, omega, gamma, dual })
    }

    /// Makes nodes `j = −count..=count` available.
    fn ensure_nodes(&mut self, count: usize) -> Result<()> {
        let dt = self.step();
        if self.right.len() < count + 1 {
            let start = self.right.len();
            let omegas = self
                .mellin
                .eval_line(self.c0(), dt * T::from_int(start as i64), dt, count + 1 - start);
            for (i, om) in omegas.into_iter().enumerate() {
                let t = dt * T::from_int((start + i) as i64);
                let node = self.make_node(t, om)?;
                self.right.push(node);
            }
        }
        if self.left.len() < count {
            let start = self.left.len() + 1;
            let omegas = self
                .mellin
                .eval_line(self.c0(), -dt * T::from_int(count as i64), dt, count + 1 - start);
            for (i, om) in omegas.into_iter().enumerate().rev() {
                let j = count - i;
                let node = self.make_node(-dt * T::from_int(j as i64), om)?;
                self.left.push(node);
            }
        }
        Ok(())
    }

    fn node(&self, j: i64) -> &Node<T> {
        if j >= 0 {
            &self.right[j as usize]
        } else {
            &self.left[(-j - 1) as usize]
        }
    }

    fn kernel_line(&self) -> f64 {
        if self.window.is_some() {
            self.settings.kernel_re
        } else {
            self.settings.line_re
        }
    }

    /// Trapezoidal weights `χ ω̃ G_± dt/2π` on the kernel line.
    fn kernel_weights(&self, sign: Sign) -> Result<Vec<(T, Complex<T>)>> {
        let half = self.low_half;
        let dt = self.settings.step;
        let ck = self.kernel_line();
        let shift = ck - self.settings.line_re;
        let omegas = self
            .mellin
            .eval_line(T::lit(ck), T::lit(-(half as f64) * dt), T::lit(dt), 2 * half + 1);
        let scale = T::lit(dt) / T::TAU();
        omegas
            .into_iter()
            .enumerate()
            .map(|(i, om)| {
                let t = (i as f64 - half as f64) * dt;
                let s = Complex::new(T::lit(ck), T::lit(t));
                let chi = match self.window {
                    Some(w) => {
                        let z = Complex::new(T::lit(shift / w), T::lit(t / w));
                        (z * z).exp()
                    }
                    None => Complex::new(T::one(), T::zero()),
                };
                Ok((T::lit(t), om * gamma_factor(s, &self.lambda, sign)? * chi * scale))
            })
            .collect()
    }

    /// Windowed kernel `Ω_W(m/q^n)` for `m = 1..=count`.
    fn ensure_kernel(&mut self, sign: Sign, count: usize) -> Result<()> {
        let idx = sign_index(sign);
        let have = self.kernels[idx].len();
        if have >= count {
            return Ok(());
        }
        if self.kernel_nodes[idx].is_empty() {
            self.kernel_nodes[idx] = self.kernel_weights(sign)?;
        }
        let weights = &self.kernel_nodes[idx];
        let dt = self.step();
        let qn = T::lit(self.q_pow_n());
        let ck = T::lit(self.kernel_line());
        const RESEED: usize = 64;
        let mut out = Vec::with_capacity(count - have);
        for m in have + 1..=count {
            let lx = (T::from_int(m as i64) / qn).ln();
            let step = Complex::from_polar(T::one(), dt * lx);
            let mut phase = czero();
            let mut acc = czero();
            for (i, (t, w)) in weights.iter().enumerate() {
                if i % RESEED == 0 {
                    phase = Complex::from_polar(T::one(), *t * lx);
                } else {
                    phase *= step;
                }
                acc += *w * phase;
            }
            out.push(acc * (ck * lx).exp());
        }
        self.kernels[idx].extend(out);
        Ok(())
    }

    fn ensure_first_slot(&mut self, count: usize) -> Result<()> {
        if self.first_slot.len() < count {
            let n = self.degree();
            self.first_slot = self.source.slot_series(&unit_tuple(n), 0, count)?;
        }
        Ok(())
    }

    fn first_slot_with_q(&mut self, l: u32, count: usize) -> Result<&[Complex<T>]> {
        let n = self.degree();
        let q = self.q();
        let stale = self.first_slot_q.get(&l).map_or(true, |v| v.len() < count);
        if stale {
            let series = self.source.slot_series(&at_left(n, l, q), 0, count)?;
            self.first_slot_q.insert(l, series);
        }
        Ok(&self.first_slot_q[&l][..count])
    }

    fn kl_table(&self, k: u32) -> &KloostermanTable<T> {
        &self.kl[&k]
    }

    fn lhs(&self, inst: &VoronoiInstance, part: Part) -> Result<Complex<T>> {
        let n = self.degree();
        let q = self.q();
        let (lo, hi) = self.omega.support();
        let lo = lo.floor().to_u64().unwrap_or(0) + 1;
        let hi_f = hi;
        let top = hi.ceil().to_u64().unwrap_or(0);
        let kl = self.kl_table(inst.k);
        let half = T::lit(0.5);
        let mut acc = czero();
        let mut tuple = unit_tuple(n);
        for m in lo..top {
            let w = self.omega.eval(T::from_int(m as i64));
            if w == T::zero() {
                continue;
            }
            let last = tuple.len() - 1;
            tuple[last] = m;
            let am = inst.a * m as i64;
            let weight = match part {
                Part::Even => (kl.get(am) + kl.get(-am)) * half,
                Part::Odd => (kl.get(am) - kl.get(-am)) * half,
                Part::Combined => kl.get(am),
            };
            acc += weight * self.source.coefficient(&tuple)? * w;
        }
        if part != Part::Odd {
            let qf = T::from_int(q as i64);
            for l in 2..=inst.k {
                let ql = q.pow(l);
                let mut m = 1u64;
                while T::from_int((m * ql) as i64) < hi_f {
                    let w = self.omega.eval(T::from_int((m * ql) as i64));
                    if w != T::zero() {
                        let mut tuple = at_right(n, l, q);
                        let last = tuple.len() - 1;
                        tuple[last] = m;
                        let c = self.source.coefficient(&tuple)?;
                        acc += c * w * qf.powi(l as i32 - 1) * sign::<T>(i64::from(l + inst.k));
                    }
                    m += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Dual coefficients `c_m` (`m = 1..=count`) with the dual `m`-sum equal to
    /// `Σ c_m/m Ω(m/q^n)`.
    fn dual_coefficients(&mut self, inst: &VoronoiInstance, parity: Parity, count: usize) -> Result<Vec<Complex<T>>> {
        let n = self.degree();
        let q = self.q();
        let k = inst.k;
        self.ensure_first_slot(count)?;
        let qf = T::from_int(q as i64);
        let kl = self.kl_table(n - k);
        let front = qf.powi(k as i32) * T::lit(0.5)
            * match parity {
                Parity::Even => T::one(),
                Parity::Odd => sign::<T>(i64::from(k)),
            };
        let pm = T::from_int(parity.sign());
        let mut out: Vec<Complex<T>> = (1..=count)
            .map(|m| {
                let am = inst.abar * m as i64;
                (kl.get(am) + kl.get(-am) * pm) * self.first_slot[m - 1] * front
            })
            .collect();
        if parity == Parity::Even {
            for l in 2..=(n - k) {
                let ql = q.pow(l) as usize;
                let len = count / ql;
                if len == 0 {
                    continue;
                }
                let w = qf.powi((k - 1 + l) as i32) * sign::<T>(i64::from(n - k + l));
                let series = self.first_slot_with_q(l, len)?.to_vec();
                for (i, c) in series.iter().enumerate() {
                    out[(i + 1) * ql - 1] += *c * w;
                }
            }
        }
        Ok(out)
    }

    fn low_sum(&mut self, coeffs: &[Complex<T>], sign: Sign) -> Result<LowPart<T>> {
        self.ensure_kernel(sign, coeffs.len())?;
        let idx = sign_index(sign);
        let qn = self.q_pow_n();
        let ck = self.kernel_line();
        let mut acc = czero();
        let mut mass = 0.0;
        for (i, c) in coeffs.iter().enumerate() {
            let m = i + 1;
            acc += *c * self.kernels[idx][i] / T::from_int(m as i64);
            mass += c.norm().to_f64().unwrap_or(0.0) / m as f64 * (m as f64 / qn).powf(ck);
        }
        let on_line = match &self.envelopes {
            Some(env) => env[idx].on_line,
            None => self.unwindowed_mass(sign),
        };
        let nodes = (2 * self.low_half + 1) as f64;
        let roundoff = 4.0 * f64::EPSILON * nodes.sqrt() * on_line * mass;
        Ok(LowPart {
            value: acc,
            roundoff: T::lit(roundoff),
        })
    }

    fn unwindowed_mass(&self, sign: Sign) -> f64 {
        self.kernel_nodes[sign_index(sign)]
            .iter()
            .map(|(_, w)| w.norm().to_f64().unwrap_or(0.0))
            .sum()
    }

    /// Integrand of the continuation part at node `j`, and its factor
    /// multiplying `ω̃`.
    fn high_integrand(&self, j: i64, inst: &VoronoiInstance, parity: Parity) -> Result<(Complex<T>, Complex<T>)> {
        let family = self.family.as_ref().expect("continuation available");
        let nd = self.node(j);
        let dual = nd.dual.as_ref().expect("dual data computed");
        let s = Complex::new(self.c0(), nd.t);
        let qm1 = T::from_int(self.q() as i64 - 1);
        let weight = T::one() - T::lit(self.chi(nd.t.to_f64().unwrap_or(0.0)));
        let d = match parity {
            Parity::Even => family.f_tilde_even(inst.k, inst.a, dual)? * nd.gamma[0],
            Parity::Odd => family.y_tilde(inst.k, inst.a, dual)? * nd.gamma[1] * sign::<T>(i64::from(inst.k)),
        };
        let factor = d * family.q_power(inst.k, s) * weight / qm1;
        Ok((factor * nd.omega, factor))
    }

    /// `(1/2π) ∫ (1 − χ) ω̃ G D dt` for each parity, on a common height.
    fn high(&mut self, inst: &VoronoiInstance, parities: &[Parity]) -> Result<Vec<HighPart<T>>> {
        let p = parities.len();
        if self.family.is_none() {
            return Ok(vec![
                HighPart {
                    value: czero(),
                    height: T::zero(),
                    tail: T::zero(),
                    roundoff: T::zero(),
                };
                p
            ]);
        }
        let dt = self.settings.step;
        let per_chunk = ((self.settings.chunk / dt).round() as usize).max(1);
        let fixed = self.settings.height.map(|h| (h / dt).round() as usize);
        let max_nodes = fixed.unwrap_or((self.settings.max_height / dt).round() as usize);
        let scale = dt / std::f64::consts::TAU;
        let (rms, vmax) = self.mellin.rounding_scale(self.c0());
        let (rms, vmax) = (rms.to_f64().unwrap_or(0.0), vmax.to_f64().unwrap_or(0.0));
        let mut values = vec![czero::<T>(); p];
        let mut noise = vec![0.0; p];
        let mut total_mass = vec![0.0; p];
        let mut chunk_mass: Vec<Vec<f64>> = vec![Vec::new(); p];
        let mut done = 0usize;
        let mut first = true;
        loop {
            let upto = (done + per_chunk).min(max_nodes);
            self.ensure_nodes(upto)?;
            let mut mass = vec![0.0; p];
            let mut chunk_noise = vec![0.0; p];
            let mut js: Vec<i64> = Vec::new();
            if first {
                js.push(0);
            }
            for j in done + 1..=upto {
                js.push(j as i64);
                js.push(-(j as i64));
            }
            for &j in &js {
                // Error of ω̃ at this node, which dominates once ω̃ is tiny.
                let omega_err = 4.0 * f64::EPSILON * ((j as f64 * dt).abs() * vmax + 64.0) * rms;
                for (i, &par) in parities.iter().enumerate() {
                    let (f, factor) = self.high_integrand(j, inst, par)?;
                    values[i] += f * T::lit(scale);
                    mass[i] += f.norm().to_f64().unwrap_or(f64::INFINITY) * scale;
                    chunk_noise[i] += factor.norm().to_f64().unwrap_or(f64::INFINITY) * omega_err * scale;
                }
            }
            first = false;
            done = upto;
            for i in 0..p {
                total_mass[i] += mass[i];
                chunk_mass[i].push(mass[i]);
                noise[i] += chunk_noise[i];
            }
            let nodes = (2 * done + 1) as f64;
            let floors: Vec<f64> = (0..p)
                .map(|i| 4.0 * f64::EPSILON * nodes.sqrt() * total_mass[i] + chunk_noise[i])
                .collect();
            if done >= max_nodes {
                break;
            }
            if fixed.is_none() && chunk_mass[0].len() >= 2 {
                let settled = (0..p).all(|i| {
                    let cm = &chunk_mass[i];
                    let (last, prev) = (cm[cm.len() - 1], cm[cm.len() - 2]);
                    last <= floors[i] || (last <= prev && 4.0 * (last + tail_estimate(last, prev)) <= self.settings.target)
                });
                if settled {
                    break;
                }
            }
        }
        let nodes = (2 * done + 1) as f64;
        let height = T::lit(done as f64 * dt);
        Ok((0..p)
            .map(|i| {
                let cm = &chunk_mass[i];
                let last = *cm.last().unwrap_or(&0.0);
                let prev = if cm.len() >= 2 { cm[cm.len() - 2] } else { f64::INFINITY };
                let tail = tail_estimate(last, prev);
                HighPart {
                    value: values[i],
                    height,
                    tail: T::lit(4.0 * tail),
                    roundoff: T::lit(4.0 * f64::EPSILON * nodes.sqrt() * total_mass[i] + noise[i]),
                }
            })
            .collect())
    }

    /// Centres and radii of the residue circles around `s = 1 + α_j`.
    fn pole_circles(&self) -> Result<Vec<(Complex<T>, T)>> {
        let family = match &self.family {
            Some(f) => f,
            None => return Ok(Vec::new()),
        };
        let params = family.source().eisenstein().expect("continuation source");
        let one = Complex::new(T::one(), T::zero());
        let mut poles: Vec<Complex<T>> = Vec::new();
        for a in params.alphas() {
            let p = one + a;
            if !poles.iter().any(|x| (*x - p).norm() < T::lit(1e-9)) {
                poles.push(p);
            }
        }
        let mut radius = T::lit(self.settings.residue_radius);
        for (i, a) in poles.iter().enumerate() {
            for b in &poles[i + 1..] {
                radius = radius.min((*a - *b).norm() / T::lit(2.5));
            }
        }
        if radius < T::lit(1e-3) {
            return Err(Error::Pole(format!(
                "poles of L(s, π) are too close for separate residue circles (radius {radius})"
            )));
        }
        Ok(poles.into_iter().map(|p| (p, radius)).collect())
    }

    fn ensure_residue_nodes(&mut self, count: usize) -> Result<()> {
        if self.residues.contains_key(&count) {
            return Ok(());
        }
        let family = self.family.as_ref().expect("continuation source");
        let mut points = Vec::new();
        for (centre, r) in self.pole_circles()? {
            for j in 0..count {
                let theta = T::TAU() * T::from_int(j as i64) / T::from_int(count as i64);
                let dz = Complex::from_polar(r, theta);
                let s = centre + dz;
                let pd = family.point(s)?;
                // (1/2πi) ∮ f ds ≈ (1/N) Σ f(s_j) (s_j − centre)
                let weight = dz / T::from_int(count as i64) * self.mellin.eval(s);
                points.push((s, pd, weight));
            }
        }
        self.residues.insert(count, ResidueNodes { points });
        Ok(())
    }

    fn correction_with(&mut self, inst: &VoronoiInstance, count: usize) -> Result<Complex<T>> {
        self.ensure_residue_nodes(count)?;
        let family = self.family.as_ref().expect("continuation source");
        let qm1 = T::from_int(self.q() as i64 - 1);
        let mut acc = czero();
        for (_, pd, w) in &self.residues[&count].points {
            acc += family.f_even(inst.k, inst.a, pd)? * *w;
        }
        Ok(acc / qm1)
    }

    /// `(1/(q−1)) Σ_j Res_{s=1+α_j} F(s) ω̃(s)` and its change under doubling
    /// the circle nodes. Zero for sources without poles.
    pub fn polar_correction(&mut self, inst: &VoronoiInstance) -> Result<(Complex<T>, T)> {
        if self.family.is_none() {
            return Ok((czero(), T::zero()));
        }
        let n = self.settings.residue_nodes;
        let base = self.correction_with(inst, n)?;
        let fine = self.correction_with(inst, 2 * n)?;
        Ok((fine, (fine - base).norm()))
    }

    fn m_tail(&self, sign: Sign, m: usize) -> f64 {
        match &self.envelopes {
            Some(env) => self.tail_bound(&env[sign_index(sign)], m),
            None => f64::INFINITY,
        }
    }

    fn cutoff(&self, part: Part) -> usize {
        let m = match part {
            Part::Even => self.m_needed[0],
            Part::Odd => self.m_needed[1],
            Part::Combined => self.m_needed[0].max(self.m_needed[1]),
        };
        let m = self.settings.m_cutoff.unwrap_or(m);
        match self.m_limit {
            Some(l) => m.min(l),
            None => m,
        }
    }

    fn params(&self, inst: &VoronoiInstance, part: Part) -> ReportParams<T> {
        ReportParams {
            n: self.degree(),
            q: self.q(),
            k: inst.k,
            a: inst.a,
            abar: inst.abar,
            part,
            omega_center: self.omega.center(),
            omega_radius: self.omega.radius(),
            source: self.source.kind(),
        }
    }

    /// Evaluates both sides of the chosen formula and compares them.
    pub fn verify(&mut self, inst: &VoronoiInstance, part: Part) -> Result<VerificationReport<T>> {
        let n = self.degree();
        if inst.k < 1 || inst.k >= n {
            return Err(Error::OutOfRange {
                what: "k",
                value: i64::from(inst.k),
                range: format!("[1, {}]", n - 1),
            });
        }
        match self.verify_inner(inst, part) {
            Err(Error::InsufficientData(t)) => Ok(self.insufficient(inst, part, format!(
                "coefficient A{t} is not available"
            ))),
            other => other,
        }
    }

    /// Re-evaluates `base` with its `m`-sum cutoff and continuation height
    /// doubled, keeping the kernel window.
    pub fn verify_refined(
        &mut self,
        inst: &VoronoiInstance,
        part: Part,
        base: &VerificationReport<T>,
    ) -> Result<VerificationReport<T>> {
        let saved = (self.settings.height, self.settings.m_cutoff);
        let height = base.truncation.height.to_f64().unwrap_or(0.0);
        self.settings.height = Some(2.0 * height);
        self.settings.m_cutoff = Some(2 * base.truncation.m_cutoff);
        let out = self.verify(inst, part);
        (self.settings.height, self.settings.m_cutoff) = saved;
        out
    }

    fn insufficient(&self, inst: &VoronoiInstance, part: Part, note: String) -> VerificationReport<T> {
        let mut notes = self.notes.clone();
        notes.push(note);
        let nan = T::nan();
        VerificationReport {
            params: self.params(inst, part),
            lhs: Complex::new(nan, nan),
            rhs: Complex::new(nan, nan),
            correction: czero(),
            abs_err: nan,
            rel_err: nan,
            tolerance: T::lit(self.tolerance(part)),
            verdict: Verdict::Approximate,
            truncation: Truncation {
                window: self.window.map(T::lit),
                m_cutoff: 0,
                m_tail_bound: T::infinity(),
                height: T::zero(),
                height_tail_bound: T::infinity(),
                roundoff_bound: T::zero(),
                correction_stability: None,
                regrouping_residual: None,
            },
            notes,
        }
    }

    fn tolerance(&self, part: Part) -> f64 {
        match part {
            Part::Odd => self.settings.tol_odd,
            _ => self.settings.tol_even,
        }
    }

    fn verify_inner(&mut self, inst: &VoronoiInstance, part: Part) -> Result<VerificationReport<T>> {
        let m = self.cutoff(part);
        let mut notes = self.notes.clone();
        let (lhs, low, high, correction, stability, regroup, m_tail) = match part {
            Part::Even | Part::Odd => {
                let (parity, sign) = if part == Part::Even {
                    (Parity::Even, Sign::Plus)
                } else {
                    (Parity::Odd, Sign::Minus)
                };
                let lhs = self.lhs(inst, part)?;
                let coeffs = self.dual_coefficients(inst, parity, m)?;
                let low = self.low_sum(&coeffs, sign)?;
                let high = self.high(inst, &[parity])?[0];
                let (corr, stab) = if part == Part::Even {
                    let (c, s) = self.polar_correction(inst)?;
                    (c, Some(s))
                } else {
                    (czero(), None)
                };
                (lhs, low, high, corr, stab, None, self.m_tail(sign, m))
            }
            Part::Combined => {
                let lhs = self.lhs(inst, Part::Combined)?;
                let lhs_split = self.lhs(inst, Part::Even)? + self.lhs(inst, Part::Odd)?;
                let even = self.dual_coefficients(inst, Parity::Even, m)?;
                let odd = self.dual_coefficients(inst, Parity::Odd, m)?;
                let low_e = self.low_sum(&even, Sign::Plus)?;
                let low_o = self.low_sum(&odd, Sign::Minus)?;
                let regrouped = self.regrouped_low(inst, m)?;
                let highs = self.high(inst, &[Parity::Even, Parity::Odd])?;
                let (corr, stab) = self.polar_correction(inst)?;
                let split = low_e.value + low_o.value;
                let rhs_scale = regrouped.norm().max(T::one());
                let lhs_scale = lhs.norm().max(T::one());
                let residual = ((regrouped - split).norm() / rhs_scale).max((lhs - lhs_split).norm() / lhs_scale);
                let low = LowPart {
                    value: regrouped,
                    roundoff: low_e.roundoff + low_o.roundoff,
                };
                let high = HighPart {
                    value: highs[0].value + highs[1].value,
                    height: highs[0].height,
                    tail: highs[0].tail + highs[1].tail,
                    roundoff: highs[0].roundoff + highs[1].roundoff,
                };
                let tail = self.m_tail(Sign::Plus, m) + self.m_tail(Sign::Minus, m);
                (lhs, low, high, corr, Some(stab), Some(residual), tail)
            }
        };
        let rhs = low.value + high.value;
        let abs_err = (lhs - (rhs + correction)).norm();
        let denom = lhs.norm().max(rhs.norm()).max(T::lit(1e-30));
        let rel_err = abs_err / denom;
        let tol = T::lit(self.tolerance(part));
        let truncation = Truncation {
            window: self.window.map(T::lit),
            m_cutoff: m,
            m_tail_bound: T::lit(m_tail),
            height: high.height,
            height_tail_bound: high.tail,
            roundoff_bound: low.roundoff + high.roundoff,
            correction_stability: stability,
            regrouping_residual: regroup,
        };
        let scale = lhs.norm().max(rhs.norm()).max(T::one());
        let conclusive = self.family.is_some() && truncation.total_bound() <= tol * scale / T::lit(10.0);
        let agrees = rel_err <= tol || abs_err <= T::lit(self.settings.abs_floor);
        let regroup_ok = regroup.map_or(true, |r| r <= T::lit(1e-10));
        if !regroup_ok {
            notes.push("combined regrouping differs from even + odd".into());
        }
        if self.family.is_some() && !conclusive {
            notes.push("truncation bounds exceed a tenth of the tolerance".into());
        }
        let verdict = if !regroup_ok {
            Verdict::Fail
        } else if !conclusive {
            Verdict::Approximate
        } else if agrees {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Ok(VerificationReport {
            params: self.params(inst, part),
            lhs,
            rhs,
            correction,
            abs_err,
            rel_err,
            tolerance: tol,
            verdict,
            truncation,
            notes,
        })
    }

    /// The `m`-sum in the grouping `Kl(ām)(Ω_+ + (−1)^k Ω_−) + Kl(−ām)(Ω_+ − (−1)^k Ω_−)`
    /// plus the Hecke side sums against `Ω_+`.
    fn regrouped_low(&mut self, inst: &VoronoiInstance, count: usize) -> Result<Complex<T>> {
        let n = self.degree();
        let q = self.q();
        let k = inst.k;
        self.ensure_first_slot(count)?;
        self.ensure_kernel(Sign::Plus, count)?;
        self.ensure_kernel(Sign::Minus, count)?;
        let qf = T::from_int(q as i64);
        let sk = sign::<T>(i64::from(k));
        let front = qf.powi(k as i32) * T::lit(0.5);
        let kl = self.kl_table(n - k);
        let mut acc = czero();
        for m in 1..=count {
            let plus = self.kernels[0][m - 1];
            let minus = self.kernels[1][m - 1] * sk;
            let am = inst.abar * m as i64;
            let grouped = kl.get(am) * (plus + minus) + kl.get(-am) * (plus - minus);
            acc += grouped * self.first_slot[m - 1] * front / T::from_int(m as i64);
        }
        for l in 2..=(n - k) {
            let ql = q.pow(l) as usize;
            let len = count / ql;
            if len == 0 {
                continue;
            }
            let w = qf.powi((k - 1) as i32) * sign::<T>(i64::from(n - k + l));
            let series = self.first_slot_with_q(l, len)?.to_vec();
            for (i, c) in series.iter().enumerate() {
                let m = i + 1;
                // Ω_+(m/q^{n−l}) is the kernel at index q^l m.
                acc += *c * self.kernels[0][m * ql - 1] * w / T::from_int(m as i64);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{EisensteinParams, EisensteinSource, FileSource};

    type C = Complex<f64>;

    fn source(parts: &[f64]) -> Arc<dyn CoefficientSource<f64>> {
        Arc::new(EisensteinSource::new(EisensteinParams::from_imaginary(parts).unwrap()))
    }

    fn bump() -> TestFunction<f64> {
        TestFunction::unit(40.0, 30.0).unwrap()
    }

    #[test]
    fn instance_validation() {
        let inst = VoronoiInstance::new(3, 5, 1, 2).unwrap();
        assert_eq!(inst.abar, 3);
        assert!(VoronoiInstance::new(3, 5, 3, 2).is_err());
        assert!(VoronoiInstance::new(3, 5, 0, 2).is_err());
        assert!(matches!(VoronoiInstance::new(3, 5, 1, 10), Err(Error::NotAUnit(10, 5))));
        assert_eq!(VoronoiInstance::new(3, 7, 1, -1).unwrap().abar, 6);
    }

    #[test]
    fn lhs_empty_support_is_zero() {
        let omega = TestFunction::unit(0.5, 0.4).unwrap();
        let ctx = VoronoiContext::new(source(&[0.7, -0.7]), 5, omega, VoronoiSettings::default()).unwrap();
        let inst = VoronoiInstance::new(2, 5, 1, 1).unwrap();
        for part in [Part::Even, Part::Odd, Part::Combined] {
            assert_eq!(ctx.lhs(&inst, part).unwrap(), C::new(0.0, 0.0));
        }
    }

    #[test]
    fn lhs_matches_independent_summation() {
        let src = source(&[1.3, -0.4, -0.9]);
        let ctx = VoronoiContext::new(src.clone(), 5, bump(), VoronoiSettings::default()).unwrap();
        let inst = VoronoiInstance::new(3, 5, 2, 2).unwrap();
        let kl = |m: i64| {
            crate::kloosterman::kl_direct::<f64>(crate::kloosterman::KloostermanParams::new(2, m, 5).unwrap(), 1 << 20)
                .unwrap()
        };
        let mut even = C::new(0.0, 0.0);
        for m in 11..70u64 {
            let a = src.coefficient(&[1, m]).unwrap();
            even += 0.5 * (kl(2 * m as i64) + kl(-2 * m as i64)) * a * bump().eval(m as f64);
        }
        // l = 2: (−1)^{2+2} q A(q, m) ω(25 m)
        for m in 1..3u64 {
            even += 5.0 * src.coefficient(&[5, m]).unwrap() * bump().eval(25.0 * m as f64);
        }
        let got = ctx.lhs(&inst, Part::Even).unwrap();
        assert!((got - even).norm() < 1e-12 * even.norm().max(1.0), "{got} vs {even}");
    }

    #[test]
    fn polar_correction_converges_and_needs_poles() {
        let mut ctx = VoronoiContext::new(source(&[1.3, -0.4, -0.9]), 5, bump(), VoronoiSettings::default()).unwrap();
        let inst = VoronoiInstance::new(3, 5, 1, 2).unwrap();
        let (c, stab) = ctx.polar_correction(&inst).unwrap();
        assert!(c.norm() > 1e-3);
        assert!(stab < 1e-9, "{stab}");
    }

    #[test]
    fn clustered_poles_are_rejected() {
        let src = source(&[1e-4, -1e-4]);
        let mut ctx = VoronoiContext::new(src, 3, bump(), VoronoiSettings::default()).unwrap();
        let inst = VoronoiInstance::new(2, 3, 1, 1).unwrap();
        assert!(matches!(ctx.polar_correction(&inst), Err(Error::Pole(_))));
    }

    #[test]
    fn repeated_parameters_share_one_circle() {
        let src = source(&[0.0, 0.0]);
        let ctx = VoronoiContext::new(src, 3, bump(), VoronoiSettings::default()).unwrap();
        assert_eq!(ctx.pole_circles().unwrap().len(), 1);
    }

    #[test]
    fn zero_amplitude_gives_zero_sides() {
        let omega = TestFunction::new(40.0, 30.0, 0.0).unwrap();
        let mut ctx = VoronoiContext::new(source(&[0.7, -0.7]), 3, omega, VoronoiSettings::default()).unwrap();
        let inst = VoronoiInstance::new(2, 3, 1, 1).unwrap();
        let r = ctx.verify(&inst, Part::Odd).unwrap();
        assert_eq!(r.lhs, C::new(0.0, 0.0));
        assert_eq!(r.rhs, C::new(0.0, 0.0));
    }

    #[test]
    fn file_source_reports_missing_tuples() {
        let text = "n=2\nlambda=0,0.7;0,-0.7\n1 1.0 0.0\n2 0.5 0.0\n";
        let src: Arc<dyn CoefficientSource<f64>> = Arc::new(FileSource::parse(text).unwrap());
        let mut ctx = VoronoiContext::new(src, 3, bump(), VoronoiSettings::default()).unwrap();
        let inst = VoronoiInstance::new(2, 3, 1, 1).unwrap();
        let r = ctx.verify(&inst, Part::Odd).unwrap();
        assert_eq!(r.verdict, Verdict::Approximate);
        assert!(r.notes.iter().any(|n| n.contains("A(11)")), "{:?}", r.notes);
    }
}
