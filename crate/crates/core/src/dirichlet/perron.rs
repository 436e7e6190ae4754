use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::factor::{product_terms, PolyFactor};
use crate::arith::CompensatedSum;
use crate::report::{g12, g12_vec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronParams {
    #[serde(serialize_with = "g12")]
    pub y: f64,
    #[serde(serialize_with = "g12")]
    pub tau: f64,
    #[serde(serialize_with = "g12")]
    pub c: f64,
    #[serde(rename = "T0", serialize_with = "g12")]
    pub t0: f64,
    #[serde(rename = "T1", serialize_with = "g12")]
    pub t1: f64,
}

impl PerronParams {
    /// c = 1 + 1/log y, T0 = τ (log y)^3, T1 = y^{1/8}.
    pub fn new(y: f64, tau: f64) -> Result<Self> {
        if !(y > std::f64::consts::E) || !(tau >= 2.0) {
            return Err(Error::InvalidArgument("Perron windows need y > e and tau >= 2".into()));
        }
        let l = y.ln();
        Ok(PerronParams { y, tau, c: 1.0 + 1.0 / l, t0: tau * l.powi(3), t1: y.powf(0.125) })
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    /// y (log y)^2 / T0 + log y
    pub fn envelope(&self) -> f64 {
        let l = self.y.ln();
        self.y * l * l / self.t0 + l
    }
}

/// C1(s) = ((1 + 1/τ)^s − 1)/s
pub fn c1(s: Complex64, tau: f64) -> Complex64 {
    ((s * (1.0 + 1.0 / tau).ln()).exp() - 1.0) / s
}

/// C2(s) = ((1 + 1/τ)^s − 1 − s/τ)/s
pub fn c2(s: Complex64, tau: f64) -> Complex64 {
    c1(s, tau) - 1.0 / tau
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub panel_width: f64,
    /// Gauss–Legendre nodes per panel; chosen from the frequency bound when None.
    pub nodes: Option<usize>,
    /// accepted |panel − two half panels| relative to the panel scale
    pub tol: f64,
    /// every this many panels the panel is re-integrated on halves
    pub check_every: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { panel_width: 1.0, nodes: None, tol: 1e-10, check_every: 61 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronReport {
    #[serde(serialize_with = "g12")]
    pub y: f64,
    #[serde(serialize_with = "g12")]
    pub tau: f64,
    #[serde(rename = "T0", serialize_with = "g12")]
    pub t0: f64,
    #[serde(serialize_with = "g12")]
    pub estimate: f64,
    #[serde(serialize_with = "g12")]
    pub direct: f64,
    #[serde(serialize_with = "g12")]
    pub residual: f64,
    #[serde(serialize_with = "g12")]
    pub envelope: f64,
    /// residual / envelope
    #[serde(rename = "K", serialize_with = "g12")]
    pub k: f64,
    pub panels: usize,
    pub nodes: usize,
}

/// Residuals over successive doublings of T0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub reports: Vec<PerronReport>,
    /// max of |estimate(T) − direct| over panel ends T ∈ [T0·2^d, T0·2^{d+1}]
    #[serde(serialize_with = "g12_vec")]
    pub block_sup: Vec<f64>,
}

const CHUNK: usize = 256;

/// The integrand H(c+it) = y^s C1(s) S(s) with S = Π S_i.
struct Integrand {
    params: PerronParams,
    /// (log n, a_n n^{-c})
    terms: Vec<(f64, f64)>,
    direct: f64,
    omega: f64,
}

impl Integrand {
    fn new(params: PerronParams, factors: &[PolyFactor]) -> Result<Self> {
        let coeffs = product_terms(factors)?;
        let (y, yp) = (params.y, params.y * (1.0 + 1.0 / params.tau));
        let direct = coeffs
            .iter()
            .filter(|&&(n, _)| (n as f64) > y && (n as f64) <= yp)
            .map(|&(_, a)| a)
            .collect::<CompensatedSum>()
            .value();
        let terms: Vec<(f64, f64)> = coeffs
            .iter()
            .map(|&(n, a)| {
                let l = (n as f64).ln();
                (l, a * (-params.c * l).exp())
            })
            .collect();
        let omega = terms
            .iter()
            .map(|&(l, _)| (yp.ln() - l).abs().max((y.ln() - l).abs()))
            .fold(yp.ln(), f64::max);
        Ok(Integrand { params, terms, direct, omega })
    }

    fn scalar(&self, t: f64) -> Complex64 {
        let s = Complex64::new(self.params.c, t);
        (s * self.params.y.ln()).exp() * c1(s, self.params.tau)
    }

    fn s_at(&self, t: f64) -> Complex64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for &(l, w) in &self.terms {
            let (sn, cs) = (t * l).sin_cos();
            re += w * cs;
            im -= w * sn;
        }
        Complex64::new(re, im)
    }

    fn eval(&self, t: f64) -> Complex64 {
        self.scalar(t) * self.s_at(t)
    }

    /// ∫_a^b H dt by Gauss–Legendre with direct evaluation.
    fn direct_panel(&self, a: f64, b: f64, rule: &Rule) -> Complex64 {
        let h = b - a;
        rule.x.iter().zip(&rule.w).map(|(&x, &w)| self.eval(a + x * h) * (w * h)).sum()
    }

    /// ∫ over [i·w, (i+1)·w] for i in start..start+count, with S evaluated by phase rotation.
    fn uniform_panels(&self, start: usize, count: usize, width: f64, rule: &Rule) -> Vec<Complex64> {
        let nodes = rule.x.len();
        let chunks: Vec<Vec<Complex64>> = (0..count.div_ceil(CHUNK))
            .into_par_iter()
            .map(|ci| {
                let first = start + ci * CHUNK;
                let len = CHUNK.min(start + count - first);
                let mut acc = vec![Complex64::new(0.0, 0.0); len * nodes];
                let t_first = first as f64 * width;
                let mut offsets = vec![Complex64::new(0.0, 0.0); nodes];
                for &(l, wn) in &self.terms {
                    let mut phase = Complex64::from_polar(wn, -t_first * l);
                    let step = Complex64::from_polar(1.0, -width * l);
                    for (o, &x) in offsets.iter_mut().zip(&rule.x) {
                        *o = Complex64::from_polar(1.0, -x * width * l);
                    }
                    for p in 0..len {
                        let row = &mut acc[p * nodes..(p + 1) * nodes];
                        for (a, o) in row.iter_mut().zip(&offsets) {
                            *a += phase * o;
                        }
                        phase *= step;
                    }
                }
                (0..len)
                    .map(|p| {
                        let a = (first + p) as f64 * width;
                        (0..nodes)
                            .map(|k| self.scalar(a + rule.x[k] * width) * acc[p * nodes + k] * (rule.w[k] * width))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        chunks.into_iter().flatten().collect()
    }
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    /// Gauss–Legendre rule on [0, 1].
    fn gauss_legendre(n: usize) -> Rule {
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = (1.0 - z) / 2.0;
            w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
        }
        Rule { x, w }
    }
}

/// Nodes for which the Gauss–Legendre error on e^{iωt} over a panel is negligible.
fn choose_nodes(omega: f64, width: f64) -> usize {
    let half = (omega * width / 2.0).max(1e-3);
    let mut n = 8;
    loop {
        let m = 2.0 * n as f64;
        let log_err = m * half.ln() - ln_factorial(m);
        if log_err < -36.0 || n >= 128 {
            return n;
        }
        n += 4;
    }
}

fn ln_factorial(m: f64) -> f64 {
    (1..=m as u64).map(|k| (k as f64).ln()).sum()
}

/// Integration engine holding the panel integrals of H over [0, T_max].
struct Quadrature {
    integrand: Integrand,
    width: f64,
    rule: Rule,
    nodes: usize,
    panels: Vec<Complex64>,
}

impl Quadrature {
    fn build(integrand: Integrand, t_max: f64, opts: &QuadratureOptions) -> Result<Self> {
        let width = opts.panel_width;
        if !(width > 0.0) {
            return Err(Error::InvalidArgument("panel width must be positive".into()));
        }
        let count = (t_max / width).floor() as usize;
        let mut nodes = opts.nodes.unwrap_or_else(|| choose_nodes(integrand.omega, width));
        loop {
            let rule = Rule::gauss_legendre(nodes);
            let panels = integrand.uniform_panels(0, count, width, &rule);
            match Self::check(&integrand, &panels, width, &rule, opts) {
                Ok(()) => return Ok(Quadrature { integrand, width, rule, nodes, panels }),
                Err(diag) if nodes >= 128 || opts.nodes.is_some() => {
                    return Err(Error::Numerical(format!("quadrature did not converge: {diag}")))
                }
                Err(_) => nodes *= 2,
            }
        }
    }

    fn check(
        integrand: &Integrand,
        panels: &[Complex64],
        width: f64,
        rule: &Rule,
        opts: &QuadratureOptions,
    ) -> std::result::Result<(), String> {
        let scale = integrand.terms.iter().map(|&(_, w)| w.abs()).sum::<f64>()
            * integrand.params.y.powf(integrand.params.c)
            * width
            / integrand.params.tau;
        for i in (0..panels.len()).step_by(opts.check_every.max(1)) {
            let a = i as f64 * width;
            let m = a + width / 2.0;
            let halves = integrand.direct_panel(a, m, rule) + integrand.direct_panel(m, a + width, rule);
            let diff = (halves - panels[i]).norm();
            if diff > opts.tol * scale.max(1.0) {
                return Err(format!(
                    "panel {i} on [{a}, {}]: halving changes the integral by {diff:e} (scale {scale:e})",
                    a + width
                ));
            }
        }
        Ok(())
    }

    /// ∫_0^T H dt for 0 ≤ T ≤ T_max.
    fn integral_to(&self, t: f64) -> Complex64 {
        let full = ((t / self.width).floor() as usize).min(self.panels.len());
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        for p in &self.panels[..full] {
            re.add(p.re);
            im.add(p.im);
        }
        let a = full as f64 * self.width;
        if t > a {
            let rest = self.integrand.direct_panel(a, t, &self.rule);
            re.add(rest.re);
            im.add(rest.im);
        }
        Complex64::new(re.value(), im.value())
    }

    fn estimate(&self, t: f64) -> f64 {
        self.integral_to(t).re / std::f64::consts::PI
    }

    fn report(&self, t0: f64) -> PerronReport {
        let p = self.integrand.params.with_t0(t0);
        let estimate = self.estimate(t0);
        let residual = (estimate - self.integrand.direct).abs();
        let envelope = p.envelope();
        PerronReport {
            y: p.y,
            tau: p.tau,
            t0,
            estimate,
            direct: self.integrand.direct,
            residual,
            envelope,
            k: residual / envelope,
            panels: self.panels.len(),
            nodes: self.nodes,
        }
    }

    /// max |estimate(T) − direct| over panel ends in [lo, hi] and at both ends.
    fn block_sup(&self, lo: f64, hi: f64) -> f64 {
        let mut best = (self.estimate(lo) - self.integrand.direct).abs();
        best = best.max((self.estimate(hi) - self.integrand.direct).abs());
        let first = (lo / self.width).ceil() as usize;
        let last = ((hi / self.width).floor() as usize).min(self.panels.len());
        if first <= last {
            let mut acc = self.integral_to(first as f64 * self.width);
            for i in first..last {
                acc += self.panels[i];
                let r = (acc.re / std::f64::consts::PI - self.integrand.direct).abs();
                best = best.max(r);
            }
        }
        best
    }
}

/// Truncated Perron estimate of Σ_{y<n≤y+y/τ} a_n for the coefficients of Π S_i.
pub fn perron_window(params: &PerronParams, factors: &[PolyFactor]) -> Result<PerronReport> {
    perron_window_with(params, factors, &QuadratureOptions::default())
}

pub fn perron_window_with(
    params: &PerronParams,
    factors: &[PolyFactor],
    opts: &QuadratureOptions,
) -> Result<PerronReport> {
    let q = Quadrature::build(Integrand::new(*params, factors)?, params.t0, opts)?;
    Ok(q.report(params.t0))
}

/// Reports at T0·2^d for d = 0..=doublings, plus dyadic block sups of the residual.
pub fn perron_doubling(params: &PerronParams, factors: &[PolyFactor], doublings: u32) -> Result<DoublingReport> {
    let top = params.t0 * 2f64.powi(doublings as i32 + 1);
    let q = Quadrature::build(Integrand::new(*params, factors)?, top, &QuadratureOptions::default())?;
    let heights: Vec<f64> = (0..=doublings).map(|d| params.t0 * 2f64.powi(d as i32)).collect();
    let reports = heights.iter().map(|&h| q.report(h)).collect();
    let block_sup = heights.iter().map(|&h| q.block_sup(h, 2.0 * h)).collect();
    Ok(DoublingReport { reports, block_sup })
}

/// |∫_{c+iT_lo}^{c+iT_hi} y^s C1(s) S(s) ds|
pub fn tail_e4(params: &PerronParams, factors: &[PolyFactor], t_lo: f64, t_hi: f64) -> Result<f64> {
    if t_lo > t_hi {
        return Err(Error::InvalidArgument("tail segment needs Tlo <= Thi".into()));
    }
    if t_lo == t_hi {
        return Ok(0.0);
    }
    let integrand = Integrand::new(*params, factors)?;
    let width = QuadratureOptions::default().panel_width;
    let rule = Rule::gauss_legendre(choose_nodes(integrand.omega, width));
    let n = ((t_hi - t_lo) / width).ceil().max(1.0) as usize;
    let h = (t_hi - t_lo) / n as f64;
    let parts: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| integrand.direct_panel(t_lo + i as f64 * h, t_lo + (i + 1) as f64 * h, &rule))
        .collect();
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for p in parts {
        re.add(p.re);
        im.add(p.im);
    }
    Ok(Complex64::new(re.value(), im.value()).norm())
}
