//! Concrete L-function families and their exact central quantities:
//! `F(n)`, `Λ^(n)(k/2)`, `Ξ^(n)(0)` and the Taylor coefficients `γ(n)`.

use std::sync::Arc;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use crate::cache::{gamma_range, GammaCache};
use crate::asymptotics::stream_saddle;
use crate::error::{Error, Result};
use crate::numerics::{
    factorial_ratio, pow2_neg, quadrature_decaying, rising_product, DecayingIntegrand, PrecisionContext,
};
use crate::theta::{
    dirichlet_stream, modular_stream, quad_ideal_stream, reduced_forms, riemann_stream, tail_majorant,
    truncation_index, unit_count, DirichletCharacterSpec, ThetaTermStream,
};

/// A value with a certified absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Certified {
    pub value: Float,
    pub bound: Float,
}

impl Certified {
    pub fn exact_zero(prec: u32) -> Self {
        Certified { value: Float::new(prec), bound: Float::new(prec) }
    }

    /// Scale by a positive factor known to working precision.
    fn scaled(&self, k: &Float) -> Self {
        let p = self.value.prec();
        let value = Float::with_val(p, &self.value * k);
        let mut bound = Float::with_val(p, &self.bound * k).abs();
        bound += Float::with_val(p, value.abs_ref()) * pow2_neg(p - 4, p);
        Certified { value, bound }
    }
}

/// Which concrete family to build.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    Zeta,
    Dirichlet { disc: i64 },
    Modular { level: u64, weight: u32, coeffs: Vec<Rational>, eps_f: i8 },
    Dedekind { disc: i64 },
}

/// Pole contribution `P n! ((-1)^(n+1) - eps) rho^(n+1)` to `Λ^(n)(k/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pole {
    pub p: Rational,
    pub rho: u32,
}

/// A good L-function, described by the constants of its integral kernel
///
/// `F(n) = c0 scale^n (1 + (-1)^n eps) ∫_{t0}^∞ (f(t) - f(∞)) t^(mu-1) (log Q + 2 log t)^n dt`
///
/// with `t0 = Q^(-1/2)`, summed over the family's streams.
#[derive(Clone, Debug)]
pub struct LFamily {
    pub name: String,
    pub kind: FamilyKind,
    pub q: Integer,
    pub mu: Rational,
    /// `c0 = c0_base^c0_exp`.
    pub c0_base: u64,
    pub c0_exp: Rational,
    pub scale: Rational,
    pub eps: i8,
    pub j: u32,
    pub streams: Vec<Arc<ThetaTermStream>>,
    pub pole: Option<Pole>,
    pub k_center: Rational,
    hash: String,
}

#[derive(Serialize)]
struct CanonicalStream {
    source: crate::theta::StreamSource,
    unit: (u64, u64),
    alpha0: String,
    terms: Vec<(u64, String)>,
}

#[derive(Serialize)]
struct Canonical<'a> {
    name: &'a str,
    q: String,
    mu: String,
    c0: (u64, String),
    scale: String,
    eps: i8,
    j: u32,
    k_center: String,
    pole: Option<(String, u32)>,
    streams: Vec<CanonicalStream>,
}

impl LFamily {
    fn finish(mut self) -> Self {
        self.hash = self.compute_hash();
        self
    }

    /// Canonical serialization: constants plus the first 64 terms of each stream.
    pub fn canonical_json(&self) -> String {
        let streams = self
            .streams
            .iter()
            .map(|s| CanonicalStream {
                source: s.source().clone(),
                unit: s.unit_parts(),
                alpha0: s.alpha0().to_string(),
                terms: s.first_terms(64).into_iter().map(|t| (t.key, t.alpha.to_string())).collect(),
            })
            .collect();
        let c = Canonical {
            name: &self.name,
            q: self.q.to_string(),
            mu: self.mu.to_string(),
            c0: (self.c0_base, self.c0_exp.to_string()),
            scale: self.scale.to_string(),
            eps: self.eps,
            j: self.j,
            k_center: self.k_center.to_string(),
            pole: self.pole.as_ref().map(|p| (p.p.to_string(), p.rho)),
            streams,
        };
        serde_json::to_string(&c).expect("canonical form serializes")
    }

    fn compute_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    /// Content digest of the canonical serialization.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn has_pole(&self) -> bool {
        self.pole.is_some()
    }

    /// Lower integration limit `Q^(-1/2)`.
    pub fn t0(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.q).sqrt().recip()
    }

    pub fn log_q(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.q).ln()
    }

    pub fn c0(&self, prec: u32) -> Float {
        let e = Float::with_val(prec, &self.c0_exp);
        Float::with_val(prec, self.c0_base).pow(&e)
    }

    /// Derivative order `m` used for `γ(n)`: `2n-2`, `2n-1`, `2n` or `2n+1`.
    pub fn m_map(&self, n: u64) -> Option<u64> {
        match (self.has_pole(), self.eps) {
            (true, 1) => (2 * n).checked_sub(2),
            (true, _) => (2 * n).checked_sub(1),
            (false, 1) => Some(2 * n),
            (false, _) => Some(2 * n + 1),
        }
    }

    /// Whether `1 + (-1)^n eps` vanishes.
    pub fn parity_vanishes(&self, n: u64) -> bool {
        n.is_multiple_of(2) != (self.eps == 1)
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Build a family with its kernel constants.
pub fn make_family(kind: FamilyKind) -> Result<LFamily> {
    let fam = match &kind {
        FamilyKind::Zeta => LFamily {
            name: "zeta".into(),
            kind: kind.clone(),
            q: Integer::from(1),
            mu: rat(1, 4),
            c0_base: 1,
            c0_exp: rat(0, 1),
            scale: rat(1, 4),
            eps: 1,
            j: 1,
            streams: vec![Arc::new(riemann_stream())],
            pole: Some(Pole { p: rat(1, 1), rho: 2 }),
            k_center: rat(1, 1),
            hash: String::new(),
        },
        FamilyKind::Dirichlet { disc } => {
            let spec = DirichletCharacterSpec::new(*disc)?;
            let nu = spec.nu as i64;
            LFamily {
                name: format!("dirichlet({disc})"),
                kind: kind.clone(),
                q: Integer::from(*disc) * disc,
                mu: rat(1 + 2 * nu, 4),
                c0_base: disc.unsigned_abs(),
                c0_exp: rat(1 + 2 * nu, 4),
                scale: rat(1, 4),
                eps: 1,
                j: 1,
                streams: vec![Arc::new(dirichlet_stream(spec)?)],
                pole: None,
                k_center: rat(1, 1),
                hash: String::new(),
            }
        }
        FamilyKind::Modular { level, weight, coeffs, eps_f } => {
            if weight % 2 == 1 {
                return Err(Error::OddWeight(*weight));
            }
            if *eps_f != 1 && *eps_f != -1 {
                return Err(Error::InvalidEpsF(*eps_f as i64));
            }
            if *level == 0 || *weight == 0 {
                return Err(Error::InvalidParams("level and weight must be positive".into()));
            }
            let i_pow_w: i8 = if weight % 4 == 0 { 1 } else { -1 };
            LFamily {
                name: format!("modular(N={level},w={weight})"),
                kind: kind.clone(),
                q: Integer::from(*level),
                mu: rat(*weight as i64, 2),
                c0_base: *level,
                c0_exp: rat(*weight as i64, 4),
                scale: rat(1, 2),
                eps: i_pow_w * eps_f,
                j: 1,
                streams: vec![Arc::new(modular_stream(coeffs, *weight)?)],
                pole: None,
                k_center: rat(*weight as i64, 1),
                hash: String::new(),
            }
        }
        FamilyKind::Dedekind { disc } => {
            let forms = reduced_forms(*disc)?;
            let w = unit_count(*disc);
            let h = forms.len() as i64;
            let streams = forms
                .iter()
                .map(|&f| quad_ideal_stream(*disc, f, 64.0).map(Arc::new))
                .collect::<Result<Vec<_>>>()?;
            LFamily {
                name: format!("dedekind({disc})"),
                kind: kind.clone(),
                q: Integer::from(1),
                mu: rat(1, 4),
                c0_base: 1,
                c0_exp: rat(0, 1),
                scale: rat(1, 4),
                eps: 1,
                j: 2,
                streams,
                pole: Some(Pole { p: rat(2 * h, w as i64), rho: 2 }),
                k_center: rat(1, 1),
                hash: String::new(),
            }
        }
    };
    Ok(fam.finish())
}

/// The integrand `(f(t) - f(∞)) t^(mu-1) (log Q + 2 log t)^n` of one stream,
/// evaluated in log space relative to the leading exponential.
pub struct ThetaKernel {
    prec: u32,
    n: u64,
    j: u32,
    mu_m1: Float,
    log_q: Float,
    pi_cmin: Float,
    terms: Vec<(Float, Float)>,
    envelope: Float,
    lead_floor: Float,
    trunc_rel: Float,
    pub t0: Float,
}

impl ThetaKernel {
    /// Kernel on `[t0, ∞)`, truncated so the omitted terms are below
    /// `2^-(working_bits+16)` of the leading term everywhere on the range.
    pub fn new(stream: &ThetaTermStream, t0: &Float, mu: &Float, log_q: &Float, n: u64, ctx: &PrecisionContext) -> Result<Self> {
        let p = ctx.working_bits;
        let j = stream.j();
        let tau0 = if j == 1 { Float::with_val(p, t0) } else { Float::with_val(p, t0).root(j) };
        let pi = ctx.pi();
        let first = stream.first();
        let c_min = stream.c_of(first.key, p);
        let pi_cmin = Float::with_val(p, &pi * &c_min);
        let alpha_min = Float::with_val(p, &first.alpha).abs();
        let lead0 = Float::with_val(p, -Float::with_val(p, &pi_cmin * &tau0)).exp() * &alpha_min;
        let threshold = Float::with_val(p, &lead0 * pow2_neg(p + 16, p));
        let tr = truncation_index(stream, t0, &threshold)?;
        let kept = stream.first_terms(tr.count);
        let mut terms = Vec::with_capacity(kept.len());
        let mut envelope = Float::new(p);
        for t in kept {
            let c = stream.c_of(t.key, p);
            let dc = Float::with_val(p, &c - &c_min) * &pi;
            let alpha = Float::with_val(p, &t.alpha);
            envelope += Float::with_val(p, alpha.abs_ref()) * Float::with_val(p, -Float::with_val(p, &dc * &tau0)).exp();
            terms.push((dc, alpha));
        }
        let trunc_rel = Float::with_val(p, &tr.tail / &lead0);
        let rest = Float::with_val(p, &envelope - &alpha_min);
        envelope += Float::with_val(p, &trunc_rel * &alpha_min);
        let lead_floor = Float::with_val(p, &alpha_min - &rest);
        if !(lead_floor > 0) {
            return Err(Error::PrecisionInsufficient { bits: p, detail: "leading term does not dominate at t0".into() });
        }
        Ok(ThetaKernel {
            prec: p,
            n,
            j,
            mu_m1: Float::with_val(p, mu - 1u32),
            log_q: log_q.clone(),
            pi_cmin,
            terms,
            envelope,
            lead_floor,
            trunc_rel: Float::with_val(p, &trunc_rel * &alpha_min),
            t0: Float::with_val(p, t0),
        })
    }

    fn tau(&self, t: &Float) -> Float {
        if self.j == 1 {
            Float::with_val(self.prec, t)
        } else {
            Float::with_val(self.prec, t).root(self.j)
        }
    }

    /// Bound on the integral's error due to the omitted terms, given the
    /// computed integral `value`.
    pub fn truncation_error(&self, value: &Float) -> Float {
        let p = self.prec;
        Float::with_val(p, value.abs_ref()) * &self.trunc_rel / &self.lead_floor * 2u32
    }

    /// Peak of the `n = 0` integrand, clamped to `t0`.
    pub fn n0_peak(&self) -> Float {
        let p = self.prec;
        if self.mu_m1 <= 0 {
            return self.t0.clone();
        }
        let base = Float::with_val(p, &self.mu_m1 * self.j) / &self.pi_cmin;
        let t = base.pow(self.j);
        t.max(&self.t0)
    }
}

impl DecayingIntegrand for ThetaKernel {
    fn eval(&self, t: &Float) -> Float {
        let p = self.prec;
        let lt = Float::with_val(p, t.ln_ref());
        let tau = self.tau(t);
        let mut expo = Float::with_val(p, &self.mu_m1 * &lt);
        expo -= Float::with_val(p, &self.pi_cmin * &tau);
        if self.n > 0 {
            let big_l = Float::with_val(p, &lt * 2u32) + &self.log_q;
            if big_l <= 0 {
                return Float::new(p);
            }
            expo += big_l.ln() * self.n;
        }
        let mut s = Float::new(p);
        for (dc, alpha) in &self.terms {
            if dc.is_zero() {
                s += alpha;
            } else {
                s += Float::with_val(p, -Float::with_val(p, dc * &tau)).exp() * alpha;
            }
        }
        expo.exp() * s
    }

    fn tail_bound(&self, t: &Float) -> Option<Float> {
        let p = self.prec;
        let j = self.j;
        let u = self.tau(t);
        let pw = Float::with_val(p, &self.mu_m1 + 1u32) * j - 1u32;
        let ell = Float::with_val(p, u.ln_ref()) * (2 * j) + &self.log_q;
        let mut q = pw.clone().max(&Float::new(p));
        let mut g = Float::with_val(p, (&u).pow(&pw));
        if self.n > 0 {
            if ell <= 0 {
                return None;
            }
            q += Float::with_val(p, (2 * j) as u64 * self.n) / &ell;
            g *= Float::with_val(p, (&ell).pow(self.n));
        }
        let rate = Float::with_val(p, &self.pi_cmin - Float::with_val(p, &q / &u));
        if rate <= 0 {
            return None;
        }
        let decay = Float::with_val(p, -Float::with_val(p, &self.pi_cmin * &u)).exp();
        let mut b = g * decay * &self.envelope * j;
        b /= rate;
        Some(b)
    }

    fn eval_rel_error(&self) -> Float {
        pow2_neg(self.prec, self.prec) * (8 * self.n + 64 + self.terms.len() as u64)
    }
}

/// `∫_{t0}^∞ (f - f(∞)) t^(mu-1) (log Q + 2 log t)^n dt` for one stream.
fn stream_integral(family: &LFamily, stream: &ThetaTermStream, n: u64, ctx: &PrecisionContext) -> Result<Certified> {
    let p = ctx.working_bits;
    let t0 = family.t0(p);
    let mu = Float::with_val(p, &family.mu);
    let log_q = family.log_q(p);
    let kernel = ThetaKernel::new(stream, &t0, &mu, &log_q, n, ctx)?;
    let peak = if n == 0 {
        kernel.n0_peak()
    } else {
        let sp = stream_saddle(family, stream, n, ctx)?;
        sp.a.max(&t0)
    };
    let rel = 2f64.powi(-(ctx.target_bits() as i32));
    let (value, qbound) = quadrature_decaying(&kernel, &t0, &peak, rel, ctx)?;
    let bound = qbound + kernel.truncation_error(&value);
    Ok(Certified { value, bound })
}

/// Pure `F(n)` without the pole.
pub fn central_f(family: &LFamily, n: u64, ctx: &PrecisionContext) -> Result<Certified> {
    let p = ctx.working_bits;
    if family.parity_vanishes(n) {
        return Ok(Certified::exact_zero(p));
    }
    let mut value = Float::new(p);
    let mut bound = Float::new(p);
    for s in &family.streams {
        let c = stream_integral(family, s, n, ctx)?;
        value += &c.value;
        bound += &c.bound;
    }
    let mut k = family.c0(p) * Float::with_val(p, &family.scale).pow(n);
    k *= 2u32;
    Ok(Certified { value, bound }.scaled(&k))
}

/// Pole contribution to `Λ^(n)(k/2)`, exact.
pub fn pole_term(family: &LFamily, n: u64) -> Rational {
    match &family.pole {
        None => Rational::new(),
        Some(pole) => {
            let sign: i64 = if n.is_multiple_of(2) { -1 } else { 1 };
            let par = Integer::from(sign - family.eps as i64);
            let fact = rising_product(1, n);
            let rho = Integer::from(pole.rho).pow((n + 1) as u32);
            Rational::from(par * fact * rho) * &pole.p
        }
    }
}

/// `Λ^(n)(k/2)` = pole term + `F(n)`.
pub fn lambda_central_derivative(family: &LFamily, n: u64, ctx: &PrecisionContext) -> Result<Certified> {
    let p = ctx.working_bits;
    let f = central_f(family, n, ctx)?;
    let pt = pole_term(family, n);
    if pt == 0 {
        return Ok(f);
    }
    let value = Float::with_val(p, &pt) + &f.value;
    let mut bound = f.bound;
    bound += Float::with_val(p, value.abs_ref()) * pow2_neg(p - 2, p);
    Ok(Certified { value, bound })
}

/// `Ξ^(n)(0) = (-i)^n X(n)` with `X(n)` real.
#[derive(Clone, Debug)]
pub struct XiDerivative {
    pub n: u64,
    pub x: Certified,
}

impl XiDerivative {
    /// Real part of `Ξ^(n)(0)`.
    pub fn real_part(&self) -> Float {
        let p = self.x.value.prec();
        match self.n % 4 {
            0 => self.x.value.clone(),
            2 => Float::with_val(p, -&self.x.value),
            _ => Float::new(p),
        }
    }

    /// Imaginary part of `Ξ^(n)(0)`.
    pub fn imag_part(&self) -> Float {
        let p = self.x.value.prec();
        match self.n % 4 {
            1 => Float::with_val(p, -&self.x.value),
            3 => self.x.value.clone(),
            _ => Float::new(p),
        }
    }
}

/// `Ξ^(n)(0)`. With a pole, `Ξ(z) = (-z^2 - k^2/4) Λ(k/2 - iz)`; the pole part of
/// that product is constant, so for `n >= 1` only `F` enters.
pub fn xi_derivative_at_zero(family: &LFamily, n: u64, ctx: &PrecisionContext) -> Result<XiDerivative> {
    let p = ctx.working_bits;
    if !family.has_pole() {
        return Ok(XiDerivative { n, x: central_f(family, n, ctx)? });
    }
    let k2 = Float::with_val(p, &family.k_center) * Float::with_val(p, &family.k_center) / 4u32;
    let x = if n == 0 {
        let lam = lambda_central_derivative(family, 0, ctx)?;
        let v = Float::with_val(p, -&lam.value) * &k2;
        Certified { bound: Float::with_val(p, &lam.bound * &k2) + Float::with_val(p, v.abs_ref()) * pow2_neg(p - 2, p), value: v }
    } else {
        let fn_ = central_f(family, n, ctx)?;
        let mut value = Float::with_val(p, -&fn_.value) * &k2;
        let mut bound = Float::with_val(p, &fn_.bound * &k2);
        if n >= 2 {
            let fm2 = central_f(family, n - 2, ctx)?;
            let coef = Float::with_val(p, n * (n - 1));
            value += Float::with_val(p, &fm2.value * &coef);
            bound += Float::with_val(p, &fm2.bound * &coef);
        }
        bound += Float::with_val(p, value.abs_ref()) * pow2_neg(p - 4, p);
        Certified { value, bound }
    };
    Ok(XiDerivative { n, x })
}

/// Cached Taylor coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRecord {
    pub n: u64,
    pub value: Float,
    pub error_bound: Float,
    pub family_hash: String,
    pub working_bits: u32,
}

/// One attempt at the given precision.
fn gamma_once(family: &LFamily, n: u64, ctx: &PrecisionContext) -> Result<Certified> {
    let p = ctx.working_bits;
    let m = if family.eps == 1 { 2 * n } else { 2 * n + 1 };
    let xi = xi_derivative_at_zero(family, m, ctx)?;
    let ratio = factorial_ratio(n, m, p);
    // eps = +1: (-1)^n (-i)^(2n) = 1; eps = -1: i^(2n+1) (-i)^(2n+1) = 1
    Ok(xi.x.scaled(&ratio))
}

/// `γ(n)`, escalating precision on quadrature failure.
pub fn taylor_gamma(family: &LFamily, n: u64, ctx: &PrecisionContext) -> Result<GammaRecord> {
    let mut c = *ctx;
    let mut last = None;
    for _ in 0..=ctx.max_escalations {
        match gamma_once(family, n, &c) {
            Ok(g) => {
                let p = ctx.working_bits;
                let value = Float::with_val(p, &g.value);
                let mut error_bound = Float::with_val(p, &g.bound);
                if c.working_bits > p {
                    error_bound += Float::with_val(p, value.abs_ref()) * pow2_neg(p - 1, p);
                }
                return Ok(GammaRecord {
                    n,
                    value,
                    error_bound,
                    family_hash: family.hash().to_string(),
                    working_bits: ctx.working_bits,
                });
            }
            Err(e @ Error::PrecisionInsufficient { .. }) => {
                log::warn!("gamma({n}) at {} bits: {e}; escalating", c.working_bits);
                last = Some(e);
                c = c.escalated();
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `f(iy) = sum a(n) e^(-2 pi n y)` with a truncation bound from the
/// Deligne-type majorant beyond the supplied coefficients.
fn eval_q_series(stream: &ThetaTermStream, y: &Float, prec: u32) -> Result<Certified> {
    let pi = Float::with_val(prec, Constant::Pi);
    let mut value = Float::new(prec);
    let mut absum = Float::new(prec);
    let limit = stream.known_limit().unwrap_or(0);
    for t in stream.terms_to_key(limit).0 {
        let e = Float::with_val(prec, -Float::with_val(prec, &pi * y) * t.key).exp();
        let term = e * Float::with_val(prec, &t.alpha);
        absum += Float::with_val(prec, term.abs_ref());
        value += term;
    }
    let tail = tail_majorant(stream, y, limit, prec)
        .ok_or_else(|| Error::Inconclusive("no tail majorant at this point".into()))?;
    let bound = tail + absum * pow2_neg(prec - 8, prec);
    Ok(Certified { value, bound })
}

/// Determine `ε_f` in `f(i/(Ny)) = i^w ε_f N^(w/2) y^w f(iy)` by testing both
/// signs at `y = 1/√N` and `y = 2/√N`.
pub fn detect_functional_sign(coeffs: &[Rational], level: u64, weight: u32, ctx: &PrecisionContext) -> Result<i8> {
    if weight % 2 == 1 {
        return Err(Error::OddWeight(weight));
    }
    let p = ctx.working_bits;
    let stream = modular_stream(coeffs, weight)?;
    let n = Float::with_val(p, level);
    let sqrt_n = Float::with_val(p, n.sqrt_ref());
    let i_pow_w: i8 = if weight.is_multiple_of(4) { 1 } else { -1 };
    let mut fits = [true, true];
    for num in [1u32, 2] {
        let y = Float::with_val(p, num) / &sqrt_n;
        let y_dual = Float::with_val(p, &n * &y).recip();
        let lhs = eval_q_series(&stream, &y_dual, p)?;
        let rhs = eval_q_series(&stream, &y, p)?;
        let factor = Float::with_val(p, (&n).pow(weight / 2)) * Float::with_val(p, (&y).pow(weight));
        let rv = Float::with_val(p, &rhs.value * &factor);
        let rb = Float::with_val(p, &rhs.bound * &factor);
        let slack = Float::with_val(p, &lhs.bound + &rb);
        for (idx, s) in [1i8, -1].iter().enumerate() {
            let diff = Float::with_val(p, &lhs.value - Float::with_val(p, &rv * *s)).abs();
            if diff > slack {
                fits[idx] = false;
            }
        }
    }
    match fits {
        [true, false] => Ok(i_pow_w),
        [false, true] => Ok(-i_pow_w),
        [true, true] => Err(Error::Inconclusive("both signs fit; supply more coefficients or precision".into())),
        [false, false] => Err(Error::Inconclusive("neither sign fits the transformation law".into())),
    }
}

/// `Λ(f, s) = N^(s/2) (2π)^(-s) Γ(s) L(f, s)` for real `s`, split at `y1`:
///
/// `∫_{y1}^∞ f(iy) N^(s/2) y^(s-1) dy + i^w ε_f ∫_{1/(N y1)}^∞ f(iy) N^((w-s)/2) y^(w-s-1) dy`.
pub fn completed_modular_lambda(
    coeffs: &[Rational],
    level: u64,
    weight: u32,
    eps_f: i8,
    s: &Float,
    y1: &Float,
    ctx: &PrecisionContext,
) -> Result<Certified> {
    let p = ctx.working_bits;
    let stream = modular_stream(coeffs, weight)?;
    let n = Float::with_val(p, level);
    let zero = Float::new(p);
    let rel = 2f64.powi(-(ctx.target_bits() as i32));
    let piece = |sigma: &Float, start: &Float| -> Result<Certified> {
        let kernel = ThetaKernel::new(&stream, start, sigma, &zero, 0, ctx)?;
        let peak = kernel.n0_peak();
        let (v, b) = quadrature_decaying(&kernel, start, &peak, rel, ctx)?;
        let b = b + kernel.truncation_error(&v);
        let k = Float::with_val(p, sigma / 2u32);
        let k = Float::with_val(p, (&n).pow(&k));
        Ok(Certified { value: v, bound: b }.scaled(&k))
    };
    let first = piece(s, y1)?;
    let dual_s = Float::with_val(p, weight) - s;
    let y2 = Float::with_val(p, &n * y1).recip();
    let second = piece(&dual_s, &y2)?;
    let sign = if weight.is_multiple_of(4) { eps_f } else { -eps_f };
    let value = if sign == 1 { first.value + &second.value } else { first.value - &second.value };
    Ok(Certified { value, bound: first.bound + second.bound })
}
