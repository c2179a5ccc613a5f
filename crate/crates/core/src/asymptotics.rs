//! Saddle-point asymptotics of `F(n)` and `γ(n)`.
//!
//! With `t = a(1+λ)` the integrand's logarithm expands as
//! `m log(1 + 2ε log(1+λ)) + (μ-1) log(1+λ) - K((1+λ)^(1/j) - 1)`, `ε = 1/L`,
//! `K = π c_min a^(1/j)`. The λ¹ term vanishes at the saddle, the λ² term is
//! `-C/2`, and exponentiating the rest gives the correction coefficients `A_i`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfunction::LFamily;
use crate::numerics::{factorial_ratio, odd_double_factorial, solve_saddle_equation, PrecisionContext};
use crate::theta::ThetaTermStream;

/// Saddle data for derivative order `m`.
#[derive(Clone, Debug)]
pub struct SaddlePoint {
    pub m: u64,
    /// `L = log Q + 2 log a`.
    pub l: Float,
    pub a: Float,
    /// Curvature: the λ² coefficient is `-C/2`.
    pub c: Float,
    /// `1/L`.
    pub eps_var: Float,
    /// `K = π c_min a^(1/j)`.
    pub k_exp: Float,
    pub j: u32,
}

/// Saddle point of one stream's leading term.
pub fn stream_saddle(family: &LFamily, stream: &ThetaTermStream, m: u64, ctx: &PrecisionContext) -> Result<SaddlePoint> {
    if m == 0 {
        return Err(Error::InvalidParams("saddle needs m >= 1".into()));
    }
    let p = ctx.working_bits;
    let j = stream.j();
    let pi = ctx.pi();
    let c_min = stream.c_min(p);
    let log_q = family.log_q(p);
    let mu = Float::with_val(p, &family.mu);
    let qpow = Float::with_val(p, -Float::with_val(p, &log_q / (2 * j))).exp();
    let a_coef = Float::with_val(p, &pi * &c_min) * qpow / (2 * j);
    let b_coef = Float::with_val(p, 1u32 - Float::with_val(p, &mu)) / 2u32;
    let jj = Float::with_val(p, 2 * j);
    let mf = Float::with_val(p, m);
    let l = solve_saddle_equation(&a_coef, &b_coef, &jj, &mf, ctx)?;
    let a = Float::with_val(p, Float::with_val(p, &l - &log_q) / 2u32).exp();
    let tau = if j == 1 { a.clone() } else { Float::with_val(p, a.root_ref(j)) };
    let k_exp = Float::with_val(p, &pi * &c_min) * tau;
    let eps_var = Float::with_val(p, l.recip_ref());
    let c = curvature(m, &eps_var, &mu, j, p);
    Ok(SaddlePoint { m, l, a, c, eps_var, k_exp, j })
}

/// `C = 2m(ε + 2ε²) + μ - 1 + K(j-1)/j²` with `K = j(2mε + μ - 1)`.
fn curvature(m: u64, eps: &Float, mu: &Float, j: u32, p: u32) -> Float {
    let e2 = Float::with_val(p, eps.square_ref());
    let mut c = Float::with_val(p, eps + Float::with_val(p, &e2 * 2u32)) * (2 * m);
    let mu_m1 = Float::with_val(p, mu - 1u32);
    c += &mu_m1;
    if j != 1 {
        let k = (Float::with_val(p, eps * (2 * m)) + &mu_m1) * j;
        c -= k * (j - 1) / (j * j);
    }
    c
}

/// Saddle point of the family's principal stream.
pub fn saddle_point(family: &LFamily, m: u64, ctx: &PrecisionContext) -> Result<SaddlePoint> {
    stream_saddle(family, &family.streams[0], m, ctx)
}

fn log1p_coeffs(order: usize, p: u32) -> Vec<Float> {
    (0..=order)
        .map(|i| {
            if i == 0 {
                Float::new(p)
            } else {
                let v = Float::with_val(p, 1u32) / i as u32;
                if i % 2 == 0 {
                    -v
                } else {
                    v
                }
            }
        })
        .collect()
}

fn series_mul(a: &[Float], b: &[Float], p: u32) -> Vec<Float> {
    let n = a.len();
    let mut out = vec![Float::new(p); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for k in 0..(n - i) {
            out[i + k] += Float::with_val(p, &a[i] * &b[k]);
        }
    }
    out
}

/// `log(1 + u)` for a series with `u_0 = 0`.
fn series_log1p(u: &[Float], p: u32) -> Vec<Float> {
    let n = u.len();
    let mut out = vec![Float::new(p); n];
    let mut pw = u.to_vec();
    for k in 1..n {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        for i in 0..n {
            out[i] += Float::with_val(p, &pw[i] * sign) / k as u32;
        }
        pw = series_mul(&pw, u, p);
    }
    out
}

/// `exp(s)` for a series with `s_0 = 0`.
fn series_exp(s: &[Float], p: u32) -> Vec<Float> {
    let n = s.len();
    let mut e = vec![Float::new(p); n];
    e[0] = Float::with_val(p, 1u32);
    for k in 1..n {
        let mut acc = Float::new(p);
        for i in 1..=k {
            acc += Float::with_val(p, &s[i] * &e[k - i]) * i as u32;
        }
        e[k] = acc / k as u32;
    }
    e
}

/// Coefficients of `(1+λ)^(1/j) - 1`.
fn root_coeffs(j: u32, order: usize, p: u32) -> Vec<Float> {
    let r = Float::with_val(p, 1u32) / j;
    let mut out = vec![Float::new(p); order + 1];
    let mut b = Float::with_val(p, 1u32);
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        b *= Float::with_val(p, &r - (i as u32 - 1));
        b /= i as u32;
        *slot = b.clone();
    }
    out
}

/// `[log(1 + 2ε log(1+λ))]_i` for `i <= order`.
fn log_log_coeffs(eps: &Float, order: usize, p: u32) -> Vec<Float> {
    let u: Vec<Float> = log1p_coeffs(order, p).into_iter().map(|c| c * Float::with_val(p, eps * 2u32)).collect();
    series_log1p(&u, p)
}

/// λ-coefficients `0..=order` of `log[g(a(1+λ))/g(a)]`.
pub fn log_expansion(family: &LFamily, sp: &SaddlePoint, order: usize) -> Vec<Float> {
    let p = sp.l.prec();
    let mu_m1 = Float::with_val(p, &family.mu) - 1u32;
    let ll = log_log_coeffs(&sp.eps_var, order, p);
    let l1 = log1p_coeffs(order, p);
    let rt = root_coeffs(sp.j, order, p);
    (0..=order)
        .map(|i| {
            let mut c = Float::with_val(p, &ll[i] * sp.m);
            c += Float::with_val(p, &mu_m1 * &l1[i]);
            c -= Float::with_val(p, &sp.k_exp * &rt[i]);
            c
        })
        .collect()
}

/// Correction coefficients `A_3..A_{2r}` and the resummed factor.
#[derive(Clone, Debug)]
pub struct CorrectionSeries {
    pub order: usize,
    pub c: Float,
    /// `a[i]` is `A_i`; entries below 3 are zero except `a[0] = 1`.
    pub a: Vec<Float>,
    /// `1 + sum_{i=2}^{r} (2i-1)!! A_{2i} / C^i`.
    pub factor: Float,
}

/// Exponentiate the cubic-and-higher part of `logcoeffs` up to `λ^(2r)`.
pub fn correction_terms(logcoeffs: &[Float], order: usize) -> Result<CorrectionSeries> {
    if logcoeffs.len() < 2 * order + 1 || logcoeffs.len() < 3 {
        return Err(Error::InvalidParams(format!("need log coefficients through degree {}", 2 * order)));
    }
    let p = logcoeffs[2].prec();
    let deg = 2 * order;
    let mut s = vec![Float::new(p); deg + 1];
    s[3..=deg].clone_from_slice(&logcoeffs[3..=deg]);
    let a = series_exp(&s, p);
    let c = Float::with_val(p, -&logcoeffs[2]) * 2u32;
    let mut factor = Float::with_val(p, 1u32);
    for i in 2..=order {
        if a[2 * i].is_zero() {
            continue;
        }
        let df = Float::with_val(p, &odd_double_factorial(i as u32));
        factor += df * &a[2 * i] / Float::with_val(p, (&c).pow(i as u32));
    }
    Ok(CorrectionSeries { order, c, a, factor })
}

fn prefactor(family: &LFamily, m: u64, p: u32) -> Float {
    let mut k = family.c0(p) * Float::with_val(p, &family.scale).pow(m);
    k *= 2u32;
    k
}

/// `α a^μ e^(-K) L^m sqrt(2π/C)`: the Laplace leading term of one stream.
fn laplace_leading(family: &LFamily, stream: &ThetaTermStream, sp: &SaddlePoint, p: u32) -> Float {
    let mu = Float::with_val(p, &family.mu);
    let mut log_v = Float::with_val(p, sp.a.ln_ref()) * &mu;
    log_v -= &sp.k_exp;
    log_v += Float::with_val(p, sp.l.ln_ref()) * sp.m;
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let root = Float::with_val(p, two_pi / &sp.c).sqrt();
    log_v.exp() * root * Float::with_val(p, &stream.first().alpha)
}

/// `F(n)` from the saddle-point expansion truncated at order `r`.
pub fn asymptotic_f(family: &LFamily, n: u64, order: usize, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.working_bits;
    if family.parity_vanishes(n) {
        return Ok(Float::new(p));
    }
    let mut total = Float::new(p);
    for s in &family.streams {
        let sp = stream_saddle(family, s, n, ctx)?;
        if !(sp.c > 0) {
            return Err(Error::NonpositiveCurvature(n));
        }
        let lc = log_expansion(family, &sp, 2 * order.max(1));
        let cs = correction_terms(&lc, order.max(1))?;
        total += laplace_leading(family, s, &sp, p) * &cs.factor;
    }
    Ok(total * prefactor(family, n, p))
}

/// Which closed form to use for the first correction `b1` in `1 + b1/m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum B1Variant {
    /// `2(31L⁴+189L³+542L²+744L+496) / (3(L+2)³)`.
    General,
    /// `(L⁴+9L³+32L²+24L+16) / (24(L+2)³)`; equals the true O(1/m) term when j = 1.
    #[default]
    Family,
    /// `(L⁴+9L³+56L²+16) / (24(L+2)³)`; reproduces the published χ₄ two-term column.
    Tabulated,
}

fn poly(l: &Float, coeffs: &[i64]) -> Float {
    let p = l.prec();
    let mut acc = Float::new(p);
    for &c in coeffs {
        acc *= l;
        acc += c;
    }
    acc
}

/// `b1` at `L` for root exponent `j`.
pub fn b1_value(l: &Float, j: u32, variant: B1Variant) -> Float {
    let p = l.prec();
    let lp2 = Float::with_val(p, l + 2u32);
    let cube = Float::with_val(p, (&lp2).pow(3u32));
    match variant {
        B1Variant::General => poly(l, &[31, 189, 542, 744, 496]) * 2u32 / (cube * 3u32),
        B1Variant::Tabulated => poly(l, &[1, 9, 56, 0, 16]) / (cube * 24u32),
        B1Variant::Family if j == 1 => poly(l, &[1, 9, 32, 24, 16]) / (cube * 24u32),
        B1Variant::Family => b1_from_series(l, j),
    }
}

/// Leading `m`-coefficient of `3A4/C² + 15A6/C³`, from the parts of the
/// λ-expansion linear in `m`.
pub fn b1_from_series(l: &Float, j: u32) -> Float {
    let p = l.prec();
    let eps = Float::with_val(p, l.recip_ref());
    let ll = log_log_coeffs(&eps, 4, p);
    let rt = root_coeffs(j, 4, p);
    let kj = Float::with_val(p, &eps * (2 * j));
    let part = |i: usize| Float::with_val(p, &ll[i] - Float::with_val(p, &kj * &rt[i]));
    let c = Float::with_val(p, -part(2)) * 2u32;
    let a3 = part(3);
    let a4 = part(4);
    let c2 = Float::with_val(p, c.square_ref());
    let c3 = Float::with_val(p, &c2 * &c);
    a4 * 3u32 / c2 + Float::with_val(p, a3.square_ref()) * 15u32 / (c3 * 2u32)
}

/// Two-term approximation `F̂(m)` with correction `1 + b1/m`.
pub fn two_term_fhat(family: &LFamily, m: u64, variant: B1Variant, ctx: &PrecisionContext) -> Result<Float> {
    let p = ctx.working_bits;
    if m == 0 {
        return Err(Error::InvalidParams("two-term form needs m >= 1".into()));
    }
    if family.parity_vanishes(m) {
        return Ok(Float::new(p));
    }
    let mut total = Float::new(p);
    for s in &family.streams {
        let sp = stream_saddle(family, s, m, ctx)?;
        if !(sp.c > 0) {
            return Err(Error::NonpositiveCurvature(m));
        }
        let corr = b1_value(&sp.l, sp.j, variant) / m + 1u32;
        total += laplace_leading(family, s, &sp, p) * corr;
    }
    Ok(total * prefactor(family, m, p))
}

/// `γ̂(n) = (n!/m!) F̂(m)` with `m = m_map(n)`.
pub fn gamma_hat(family: &LFamily, n: u64, variant: B1Variant, ctx: &PrecisionContext) -> Result<Float> {
    let m = family.m_map(n).filter(|&m| m >= 1).ok_or_else(|| Error::InvalidParams(format!("n = {n} too small")))?;
    let f = two_term_fhat(family, m, variant, ctx)?;
    Ok(f * factorial_ratio(n, m, ctx.working_bits))
}

/// Hermite-Jensen normalizers `(A(n), δ(n))` including the scale offset
/// `2 log(2 scale)`.
pub fn hj_normalizers(family: &LFamily, n: u64, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    hj_normalizers_with(family, n, true, ctx)
}

/// As [`hj_normalizers`], optionally without the scale offset.
pub fn hj_normalizers_with(family: &LFamily, n: u64, offset: bool, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let p = ctx.working_bits;
    let m = family.m_map(n).filter(|&m| m >= 1).ok_or(Error::NegativeRadicand(n))?;
    let sp = saddle_point(family, m, ctx)?;
    let (l, c) = (&sp.l, &sp.c);
    let l2 = Float::with_val(p, l.square_ref());
    let l4 = Float::with_val(p, l2.square_ref());
    let cl2 = Float::with_val(p, c * &l2);
    let mf = Float::with_val(p, m);
    let nf = Float::with_val(p, n);
    let mut a = (Float::with_val(p, &nf * &l2) / (Float::with_val(p, mf.square_ref()) * 4u32)).ln();
    if offset {
        a += (Float::with_val(p, &family.scale) * 2u32).ln() * 2u32;
    }
    a += Float::with_val(p, l - 2u32) * 2u32 / &cl2;
    a += Float::with_val(p, l + 4u32) * 8u32 * &mf / (Float::with_val(p, c.square_ref()) * &l4);
    let mut d2 = Float::with_val(p, 2u32) / &mf;
    d2 -= Float::with_val(p, 1u32) / (nf * 2u32);
    d2 -= Float::with_val(p, 8u32) / &cl2;
    if !(d2 > 0) {
        return Err(Error::NegativeRadicand(n));
    }
    Ok((a, d2.sqrt()))
}

/// Shift-expansion diagnostics at `n`.
#[derive(Clone, Debug)]
pub struct RatioDiagnostics {
    pub n: u64,
    pub m: u64,
    pub jshift: u64,
    pub l: Float,
    /// Curvature in the generic normalization, a quarter of [`SaddlePoint::c`].
    pub c_generic: Float,
    pub ell1: Float,
    pub ell2: Float,
    pub c1: Float,
    pub g1: Float,
    pub g2: Float,
    /// The printed second-order term `-2/m + 4/(C L²)`; twice the true one.
    pub g2_printed: Float,
    pub r_gamma: Float,
}

/// `ℓ1, ℓ2, c1, g1, g2` and `R_γ(j; m) = γ̂(n+j)/γ̂(n)`.
pub fn ratio_diagnostics(family: &LFamily, n: u64, jshift: u64, ctx: &PrecisionContext) -> Result<RatioDiagnostics> {
    let p = ctx.working_bits;
    let m = family.m_map(n).filter(|&m| m >= 1).ok_or_else(|| Error::InvalidParams(format!("n = {n} too small")))?;
    if jshift < 1 || 2 * jshift >= m {
        return Err(Error::ShiftTooLarge { jshift, half: m / 2 });
    }
    let sp = saddle_point(family, m, ctx)?;
    let l = sp.l.clone();
    let cg = Float::with_val(p, &sp.c / 4u32);
    let k = Float::with_val(p, &family.mu) * 2u32;
    let mf = Float::with_val(p, m);
    let l2 = Float::with_val(p, l.square_ref());
    let l4 = Float::with_val(p, l2.square_ref());
    let l5 = Float::with_val(p, &l4 * &l);
    let cg2 = Float::with_val(p, cg.square_ref());
    let cg3 = Float::with_val(p, &cg2 * &cg);

    let mut den = Float::with_val(p, &l / 2u32) + 1u32;
    den *= Float::with_val(p, &mf * 4u32);
    den += (Float::with_val(p, &k / 2u32) - 1u32) * &l2;
    let ell1 = Float::with_val(p, 8u32) / den;

    let mut inner = Float::with_val(p, &mf + Float::with_val(p, &k * &l) / 4u32);
    inner -= Float::with_val(p, &l / 2u32);
    let ell2 = -(Float::with_val(p, &l / 2u32) + 2u32) * inner / (Float::with_val(p, &cg3 * &l5));

    let c1 = Float::with_val(p, &l + 2u32) / Float::with_val(p, &cg * &l2)
        - Float::with_val(p, &l + 4u32) * &mf / Float::with_val(p, &cg2 * &l4);

    let (g1, delta) = hj_normalizers(family, n, ctx)?;
    let g2 = -Float::with_val(p, delta.square_ref());
    let g2_printed = Float::with_val(p, -2i32) / &mf + Float::with_val(p, 4u32) / Float::with_val(p, &cg * &l2);

    let base = gamma_hat(family, n, B1Variant::Family, ctx)?;
    let shifted = gamma_hat(family, n + jshift, B1Variant::Family, ctx)?;
    let r_gamma = shifted / base;
    Ok(RatioDiagnostics { n, m, jshift, l, c_generic: cg, ell1, ell2, c1, g1, g2, g2_printed, r_gamma })
}
