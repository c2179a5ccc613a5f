//! Precision plumbing, certified quadrature for exponentially decaying
//! integrands, and the saddle equation `n = (A e^{L/j} + B) L`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision real. MPFR's exponent range reaches far below 10^-400000.
pub type BigReal = Float;

/// Binary precision settings shared by every numeric routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub working_bits: u32,
    pub guard_bits: u32,
    pub max_escalations: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { working_bits: 232, guard_bits: 32, max_escalations: 3 }
    }
}

impl PrecisionContext {
    pub fn new(working_bits: u32, guard_bits: u32, max_escalations: u32) -> Result<Self> {
        if working_bits < 64 {
            return Err(Error::InvalidParams(format!("working_bits {working_bits} < 64")));
        }
        if guard_bits < 16 {
            return Err(Error::InvalidParams(format!("guard_bits {guard_bits} < 16")));
        }
        if guard_bits + 32 > working_bits {
            return Err(Error::InvalidParams("guard_bits leave fewer than 32 target bits".into()));
        }
        Ok(PrecisionContext { working_bits, guard_bits, max_escalations })
    }

    /// `working_bits = ceil(digits * 3.33) + 32`.
    pub fn from_digits(digits: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::InvalidParams(format!("digits {digits} < 10")));
        }
        let bits = (digits as u64 * 333).div_ceil(100) as u32;
        Self::new(bits + 32, 32, 3)
    }

    /// Same settings at twice the working precision.
    pub fn escalated(&self) -> Self {
        PrecisionContext { working_bits: self.working_bits * 2, ..*self }
    }

    /// Bits of accuracy promised on outputs.
    pub fn target_bits(&self) -> u32 {
        self.working_bits - self.guard_bits
    }

    /// `2^-(working_bits - guard_bits)`.
    pub fn tolerance(&self) -> Float {
        Float::with_val(self.working_bits, 1u32) >> self.target_bits()
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.working_bits, Constant::Pi)
    }
}

/// `2^-k` at precision `prec`.
pub fn pow2_neg(k: u32, prec: u32) -> Float {
    Float::with_val(prec, 1u32) >> k
}

/// `n!/m!` formed exactly and rounded once.
pub fn factorial_ratio(n: u64, m: u64, prec: u32) -> Float {
    let (lo, hi) = if n >= m { (m, n) } else { (n, m) };
    let prod = rising_product(lo + 1, hi);
    let q = if n >= m { Rational::from(prod) } else { Rational::from((Integer::from(1), prod)) };
    Float::with_val(prec, &q)
}

/// Product of the integers in `[a, b]` (1 when empty), by binary splitting.
pub fn rising_product(a: u64, b: u64) -> Integer {
    if a > b {
        return Integer::from(1);
    }
    if b - a < 16 {
        let mut acc = Integer::from(1);
        for k in a..=b {
            acc *= k;
        }
        return acc;
    }
    let mid = a + (b - a) / 2;
    rising_product(a, mid) * rising_product(mid + 1, b)
}

pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `(2i-1)!!`.
pub fn odd_double_factorial(i: u32) -> Integer {
    let mut acc = Integer::from(1);
    for k in 1..=i {
        acc *= 2 * k - 1;
    }
    acc
}

/// Exact binary encoding of a float: value = mantissa * 2^exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexFloat {
    pub mantissa: String,
    pub exponent: i64,
    pub bits: u32,
}

pub fn to_hex(x: &Float) -> HexFloat {
    match x.to_integer_exp() {
        Some((m, e)) => HexFloat { mantissa: m.to_string_radix(16), exponent: e as i64, bits: x.prec() },
        None => HexFloat { mantissa: "0".into(), exponent: 0, bits: x.prec() },
    }
}

pub fn from_hex(h: &HexFloat) -> Result<Float> {
    let m = Integer::from_str_radix(&h.mantissa, 16).map_err(|e| Error::Parse(e.to_string()))?;
    let bits = h.bits.max(m.significant_bits()).max(2);
    let f = Float::with_val(bits, &m);
    let e = i32::try_from(h.exponent).map_err(|_| Error::Parse("exponent out of range".into()))?;
    Ok(if e >= 0 { f << (e as u32) } else { f >> (e.unsigned_abs()) })
}

/// Decimal rendering with an explicit exponent, e.g. `8.5921206983e-14`.
pub fn format_sci(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string_radix(10, Some(digits));
    if s.contains('e') {
        s
    } else {
        format!("{s}e0")
    }
}

/// Solve `n = (A e^{L/j} + B) L` for the unique positive `L`.
///
/// Newton from a Lambert-W seed, falling back to bisection on a bracket
/// grown geometrically from the seed. The function is convex for `L > 0`
/// and negative at 0, so the positive root is unique.
pub fn solve_saddle_equation(
    a: &Float,
    b: &Float,
    j: &Float,
    n: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    if !(a.is_finite() && *a > 0) {
        return Err(Error::InvalidParams("A must be positive".into()));
    }
    if !(j.is_finite() && *j > 0) {
        return Err(Error::InvalidParams("j must be positive".into()));
    }
    if !(n.is_finite() && *n > 0) {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let p = ctx.working_bits;
    let tol = Float::with_val(p, n * &ctx.tolerance());
    let g = |l: &Float| -> Float {
        let e = Float::with_val(p, l / j).exp();
        let mut v = Float::with_val(p, &e * a);
        v += b;
        v *= l;
        v -= n;
        v
    };
    let dg = |l: &Float| -> Float {
        let r = Float::with_val(p, l / j);
        let e = Float::with_val(p, r.exp_ref());
        let mut v = Float::with_val(p, &e * a);
        v *= Float::with_val(p, &r + 1u32);
        v += b;
        v
    };

    let x = Float::with_val(p, n / Float::with_val(p, a * j));
    let w = if x > 3 {
        let lx = Float::with_val(p, x.ln_ref());
        let llx = Float::with_val(p, lx.ln_ref());
        lx - llx
    } else {
        Float::with_val(p, x.ln_1p_ref())
    };
    let mut l = Float::with_val(p, &w * j);
    if !(l > 0) {
        l = Float::with_val(p, 1u32);
    }
    let seed = l.clone();

    for _ in 0..200 {
        let gv = g(&l);
        if Float::with_val(p, gv.abs_ref()) <= tol {
            return Ok(l);
        }
        let d = dg(&l);
        if !(d > 0) {
            break;
        }
        let next = Float::with_val(p, &l - Float::with_val(p, &gv / &d));
        if !(next.is_finite() && next > 0) {
            break;
        }
        if next == l {
            break;
        }
        l = next;
    }

    let mut lo = Float::new(p);
    let mut hi = seed.max(&Float::with_val(p, 1u32));
    let mut grown = 0;
    while g(&hi) <= 0 {
        hi *= 2u32;
        grown += 1;
        if grown > 4000 {
            return Err(Error::NoConvergence(n.to_string()));
        }
    }
    for _ in 0..(8 * p) {
        let mid = Float::with_val(p, &lo + &hi) / 2u32;
        let gv = g(&mid);
        if Float::with_val(p, gv.abs_ref()) <= tol {
            return Ok(mid);
        }
        if gv < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(n.to_string()))
}

/// An integrand on `[t0, inf)` that decays at least exponentially.
pub trait DecayingIntegrand: Sync {
    fn eval(&self, t: &Float) -> Float;
    /// Upper bound for the integral of `|h|` over `[t, inf)`, or `None`
    /// when `t` is too small for the majorant to apply.
    fn tail_bound(&self, t: &Float) -> Option<Float>;
    /// Relative error of one call to `eval`.
    fn eval_rel_error(&self) -> Float;
}

/// Adapter turning closures into a [`DecayingIntegrand`].
pub struct ClosureIntegrand<F, T>
where
    F: Fn(&Float) -> Float + Sync,
    T: Fn(&Float) -> Option<Float> + Sync,
{
    pub f: F,
    pub tail: T,
    pub rel_error: Float,
}

impl<F, T> DecayingIntegrand for ClosureIntegrand<F, T>
where
    F: Fn(&Float) -> Float + Sync,
    T: Fn(&Float) -> Option<Float> + Sync,
{
    fn eval(&self, t: &Float) -> Float {
        (self.f)(t)
    }
    fn tail_bound(&self, t: &Float) -> Option<Float> {
        (self.tail)(t)
    }
    fn eval_rel_error(&self) -> Float {
        self.rel_error.clone()
    }
}

const GL_ORDER: usize = 32;

type Rule = Arc<Vec<(Float, Float)>>;

fn rule_cache() -> &'static RwLock<HashMap<(usize, u32), Rule>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton on the
/// three-term recurrence.
pub fn gauss_legendre(q: usize, prec: u32) -> Rule {
    if let Some(r) = rule_cache().read().expect("rule cache poisoned").get(&(q, prec)) {
        return r.clone();
    }
    let wp = prec + 32;
    let eps = pow2_neg(wp - 8, wp);
    let pi = Float::with_val(wp, Constant::Pi);
    let mut nodes = Vec::with_capacity(q);
    let legendre = |x: &Float| -> (Float, Float) {
        let mut p0 = Float::with_val(wp, 1u32);
        let mut p1 = x.clone();
        for k in 2..=q as u32 {
            let mut p2 = Float::with_val(wp, x * &p1);
            p2 *= 2 * k - 1;
            p2 -= Float::with_val(wp, &p0 * (k - 1));
            p2 /= k;
            p0 = p1;
            p1 = p2;
        }
        let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
        let mut d = Float::with_val(wp, x * &p1);
        d -= &p0;
        d *= q as u32;
        d /= &x2m1;
        (p1, d)
    };
    for i in 1..=q {
        let theta = Float::with_val(wp, &pi * (i as f64 - 0.25)) / (q as f64 + 0.5);
        let mut x = theta.cos();
        for _ in 0..100 {
            let (pq, d) = legendre(&x);
            let dx = Float::with_val(wp, &pq / &d);
            x -= &dx;
            if Float::with_val(wp, dx.abs_ref()) < eps {
                break;
            }
        }
        let (_, d) = legendre(&x);
        let one_m = Float::with_val(wp, 1u32) - Float::with_val(wp, x.square_ref());
        let w = Float::with_val(wp, 2u32) / (one_m * Float::with_val(wp, d.square_ref()));
        nodes.push((Float::with_val(prec, &x), Float::with_val(prec, &w)));
    }
    let rule = Arc::new(nodes);
    rule_cache().write().expect("rule cache poisoned").insert((q, prec), rule.clone());
    rule
}

/// Composite Gauss–Legendre of `f` over `[a, b]` with `panels` panels;
/// returns the estimate and the sum of absolute weighted values.
fn composite<F: Fn(&Float) -> Float>(f: &F, a: &Float, b: &Float, panels: usize, prec: u32) -> (Float, Float) {
    let rule = gauss_legendre(GL_ORDER, prec);
    let h = Float::with_val(prec, b - a) / panels as u32;
    let half = Float::with_val(prec, &h / 2u32);
    let mut sum = Float::new(prec);
    let mut abs = Float::new(prec);
    for k in 0..panels {
        let left = Float::with_val(prec, &h * k as u32) + a;
        let mid = Float::with_val(prec, &left + &half);
        for (x, w) in rule.iter() {
            let v = Float::with_val(prec, &half * x) + &mid;
            let fv = f(&v);
            let wf = Float::with_val(prec, &fv * w);
            abs += Float::with_val(prec, wf.abs_ref());
            sum += wf;
        }
    }
    sum *= &half;
    abs *= &half;
    (sum, abs)
}

/// Integrate `h` over `[t0, inf)` with a certified error bound.
///
/// The variable is changed to `t = a e^v` with `a = peak_hint`; the window in
/// `v` grows until the integrand is below `2^-working_bits` of its peak, and
/// the pieces outside are bounded by the integrand's own tail majorant and
/// by unimodality on the left.
pub fn quadrature_decaying<I: DecayingIntegrand + ?Sized>(
    integrand: &I,
    t0: &Float,
    peak_hint: &Float,
    rel_err: f64,
    ctx: &PrecisionContext,
) -> Result<(Float, Float)> {
    let p = ctx.working_bits;
    if !(*t0 > 0) {
        return Err(Error::InvalidParams("t0 must be positive".into()));
    }
    if peak_hint < t0 {
        return Err(Error::BadBracket);
    }
    let a = Float::with_val(p, peak_hint);
    let h = |v: &Float| -> Float {
        let t = Float::with_val(p, v.exp_ref()) * &a;
        let val = integrand.eval(&t);
        val * t
    };
    let absh = |v: &Float| -> Float {
        let x = h(v);
        x.abs()
    };
    let v_min = Float::with_val(p, t0 / &a).ln();
    let zero = Float::new(p);
    let mut peak = absh(&zero);
    for s in [-0.5f64, 0.5] {
        let v = Float::with_val(p, s);
        if v >= v_min {
            peak = peak.max(&absh(&v));
        }
    }
    if peak.is_zero() {
        return Ok((Float::new(p), Float::new(p)));
    }
    let tiny = Float::with_val(p, &peak * pow2_neg(p + 8, p));

    let mut w_hi = Float::with_val(p, 0.5);
    while absh(&w_hi) > tiny {
        w_hi *= 1.5;
        if w_hi > 400 {
            return Err(Error::PrecisionInsufficient { bits: p, detail: "integrand does not decay".into() });
        }
    }
    let mut w_lo = Float::with_val(p, 0.5);
    let mut clamped = false;
    loop {
        let v = Float::with_val(p, -&w_lo);
        if v <= v_min {
            clamped = true;
            break;
        }
        if absh(&v) <= tiny {
            break;
        }
        w_lo *= 1.5;
    }

    let target = Float::with_val(p, rel_err);
    let rel_eval = integrand.eval_rel_error();
    let mut panels = 8usize;
    let mut cached: Option<(usize, Float, Float, Float)> = None;
    for _ in 0..200 {
        let va = if clamped { v_min.clone() } else { Float::with_val(p, -&w_lo) };
        let vb = w_hi.clone();
        let t_hi = Float::with_val(p, vb.exp_ref()) * &a;
        let tail_hi = integrand.tail_bound(&t_hi);
        let tail_lo = if clamped {
            Float::new(p)
        } else {
            let t_lo = Float::with_val(p, va.exp_ref()) * &a;
            let hv = integrand.eval(&t_lo).abs();
            Float::with_val(p, &t_lo - t0) * hv
        };
        let (i1, _) = match &cached {
            Some((np, lo, i, ab)) if *np == panels && *lo == va => (i.clone(), ab.clone()),
            _ => composite(&h, &va, &vb, panels, p),
        };
        let (i2, abs2) = composite(&h, &va, &vb, 2 * panels, p);
        let mag = Float::with_val(p, i2.abs_ref());
        let allowed = Float::with_val(p, &mag * &target);
        let disc = Float::with_val(p, &i2 - &i1).abs();
        let mut rounding = Float::with_val(p, &abs2 * &rel_eval);
        rounding *= 4u32;
        rounding += Float::with_val(p, &abs2 * pow2_neg(p - 6, p));
        let Some(tail_hi) = tail_hi else {
            w_hi *= 1.25;
            cached = None;
            continue;
        };
        let tails = Float::with_val(p, &tail_hi + &tail_lo);
        let mut bound = Float::with_val(p, &disc + &rounding);
        bound += &tails;
        if bound <= allowed {
            return Ok((i2, bound));
        }
        if rounding * 2u32 > allowed {
            return Err(Error::PrecisionInsufficient { bits: p, detail: "rounding error dominates".into() });
        }
        if Float::with_val(p, &tails * 4u32) > allowed {
            if tail_hi >= tail_lo {
                w_hi *= 1.25;
            } else {
                w_lo *= 1.25;
                if Float::with_val(p, -&w_lo) <= v_min {
                    clamped = true;
                }
            }
            cached = None;
            continue;
        }
        cached = Some((2 * panels, va, i2, abs2));
        panels *= 2;
        if panels > 1 << 14 {
            return Err(Error::PrecisionInsufficient { bits: p, detail: "panel budget exhausted".into() });
        }
    }
    Err(Error::PrecisionInsufficient { bits: p, detail: "window did not settle".into() })
}
