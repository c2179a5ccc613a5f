//! Jensen polynomials, Hermite polynomials and certified hyperbolicity.
//!
//! Real-root counting uses a Sturm chain over [`Ball`] coefficients. A
//! coefficient whose ball straddles zero without being exactly zero makes the
//! count undetermined, which surfaces as `Unknown`.

use std::cmp::Ordering;
use std::io::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::cache::{gamma_range, GammaCache};
use crate::error::{Error, Result};
use crate::interval::Ball;
use crate::lfunction::{taylor_gamma, GammaRecord, LFamily};
use crate::numerics::{binomial, PrecisionContext};

/// Dense polynomial with ball coefficients, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<Ball>,
}

impl RealPolynomial {
    /// Exact-zero leading terms are dropped; the remaining leading ball must
    /// exclude zero.
    pub fn new(mut coeffs: Vec<Ball>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Ball::is_exact_zero) {
            coeffs.pop();
        }
        match coeffs.last() {
            None => Err(Error::Empty),
            Some(c) if c.contains_zero() => Err(Error::LeadingIntervalContainsZero),
            Some(_) => Ok(RealPolynomial { coeffs }),
        }
    }

    pub fn from_exact(coeffs: &[Float]) -> Result<Self> {
        Self::new(coeffs.iter().cloned().map(Ball::exact).collect())
    }

    pub fn from_i64(coeffs: &[i64], prec: u32) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Ball::from_i64(c, prec)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Ball] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize) -> &Ball {
        &self.coeffs[j]
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(Ball::prec).max().unwrap_or(64)
    }

    pub fn eval(&self, x: &Ball) -> Ball {
        horner(&self.coeffs, x)
    }

    /// Same balls with midpoints carried at `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Ball { mid: Float::with_val(prec, &c.mid), rad: c.rad.clone() })
            .collect();
        RealPolynomial { coeffs }
    }
}

fn horner(c: &[Ball], x: &Ball) -> Ball {
    let mut acc = c.last().cloned().unwrap_or_else(|| Ball::from_i64(0, x.prec()));
    for b in c.iter().rev().skip(1) {
        acc = acc.mul(x).add(b);
    }
    acc
}

fn derivative(c: &[Ball]) -> Vec<Ball> {
    c.iter().enumerate().skip(1).map(|(i, b)| b.mul_int(i as i64)).collect()
}

fn trim(mut c: Vec<Ball>) -> Vec<Ball> {
    while c.last().is_some_and(Ball::is_exact_zero) {
        c.pop();
    }
    c
}

/// Positive multiple of the remainder of `a` by `b`, formed without
/// division so exact inputs give exact zeros. `None` if `b`'s leading ball
/// contains zero.
fn remainder(a: &[Ball], b: &[Ball]) -> Option<Vec<Ball>> {
    let lead = b.last()?;
    let negative = lead.sign()? == Ordering::Less;
    let mut r = a.to_vec();
    let mut steps = 0;
    while r.len() >= b.len() {
        let top = r.pop()?;
        let shift = r.len() + 1 - b.len();
        for x in r.iter_mut() {
            *x = x.mul(lead);
        }
        for (i, bc) in b.iter().take(b.len() - 1).enumerate() {
            r[shift + i] = r[shift + i].sub(&top.mul(bc));
        }
        steps += 1;
    }
    if negative && steps % 2 == 1 {
        r = r.iter().map(Ball::neg).collect();
    }
    Some(r)
}

/// Sturm chain `p, p', -rem, ...`, ending at a multiple of `gcd(p, p')`.
fn sturm_chain(p: &[Ball]) -> Option<Vec<Vec<Ball>>> {
    let mut chain = vec![p.to_vec()];
    let d = trim(derivative(p));
    if d.is_empty() {
        return Some(chain);
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = trim(remainder(&chain[n - 2], &chain[n - 1])?);
        if r.is_empty() {
            return Some(chain);
        }
        if r.last()?.contains_zero() {
            return None;
        }
        chain.push(r.iter().map(Ball::neg).collect());
    }
}

fn variations(signs: &[Ordering]) -> usize {
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn signs_at_infinity(chain: &[Vec<Ball>], positive: bool) -> Option<Vec<Ordering>> {
    chain
        .iter()
        .map(|q| {
            let s = q.last()?.sign()?;
            let flip = !positive && (q.len() - 1) % 2 == 1;
            Some(if flip { s.reverse() } else { s })
        })
        .collect()
}

/// Signs of the chain at `x`; exact zeros past the first entry are skipped.
fn signs_at(chain: &[Vec<Ball>], x: &Ball) -> Option<Vec<Ordering>> {
    let mut out = Vec::with_capacity(chain.len());
    for (i, q) in chain.iter().enumerate() {
        let v = horner(q, x);
        if i > 0 && v.is_exact_zero() {
            continue;
        }
        out.push(v.sign()?);
    }
    Some(out)
}

fn distinct_real_roots(chain: &[Vec<Ball>], interval: Option<(&Float, &Float)>) -> Option<usize> {
    let (lo, hi) = match interval {
        None => (signs_at_infinity(chain, false)?, signs_at_infinity(chain, true)?),
        Some((a, b)) => (signs_at(chain, &Ball::exact(a.clone()))?, signs_at(chain, &Ball::exact(b.clone()))?),
    };
    variations(&lo).checked_sub(variations(&hi))
}

/// Number of distinct real roots on the whole line or in `(lo, hi]`;
/// `None` when some sign in the chain is undetermined.
pub fn sturm_real_root_count(p: &RealPolynomial, interval: Option<(&Float, &Float)>) -> Option<usize> {
    let chain = sturm_chain(&p.coeffs)?;
    distinct_real_roots(&chain, interval)
}

/// Real roots counted with multiplicity, by recursion on `gcd(p, p')`.
fn real_roots_with_multiplicity(p: &[Ball]) -> Option<usize> {
    if p.len() <= 1 {
        return Some(0);
    }
    let chain = sturm_chain(p)?;
    let distinct = distinct_real_roots(&chain, None)?;
    let g = chain.last()?;
    Some(distinct + real_roots_with_multiplicity(g)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HyperbolicityStatus {
    CertifiedHyperbolic,
    CertifiedNotHyperbolic,
    Unknown,
}

impl HyperbolicityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::CertifiedHyperbolic => "CertifiedHyperbolic",
            Self::CertifiedNotHyperbolic => "CertifiedNotHyperbolic",
            Self::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicityVerdict {
    pub status: HyperbolicityStatus,
    /// Real roots with multiplicity, when determined.
    pub real_root_count: Option<usize>,
    pub precision_used: u32,
}

fn certify_once(p: &RealPolynomial) -> HyperbolicityVerdict {
    let bits = p.prec();
    match real_roots_with_multiplicity(&p.coeffs) {
        Some(r) => HyperbolicityVerdict {
            status: if r == p.degree() {
                HyperbolicityStatus::CertifiedHyperbolic
            } else {
                HyperbolicityStatus::CertifiedNotHyperbolic
            },
            real_root_count: Some(r),
            precision_used: bits,
        },
        None => HyperbolicityVerdict { status: HyperbolicityStatus::Unknown, real_root_count: None, precision_used: bits },
    }
}

/// Certify a fixed polynomial, raising the arithmetic precision on `Unknown`.
pub fn certify_hyperbolic(p: &RealPolynomial, ctx: &PrecisionContext) -> HyperbolicityVerdict {
    certify_hyperbolic_with(|c| Ok(p.with_prec(c.working_bits)), ctx)
}

/// Certify a polynomial rebuilt from scratch at each precision, so upstream
/// error bounds shrink too. Gives up with `Unknown` after
/// `ctx.max_escalations` doublings.
pub fn certify_hyperbolic_with<F>(build: F, ctx: &PrecisionContext) -> HyperbolicityVerdict
where
    F: Fn(&PrecisionContext) -> Result<RealPolynomial>,
{
    let mut c = *ctx;
    let mut verdict = HyperbolicityVerdict {
        status: HyperbolicityStatus::Unknown,
        real_root_count: None,
        precision_used: c.working_bits,
    };
    for step in 0..=ctx.max_escalations {
        if step > 0 {
            c = c.escalated();
        }
        verdict = match build(&c) {
            Ok(p) => certify_once(&p),
            Err(_) => HyperbolicityVerdict {
                status: HyperbolicityStatus::Unknown,
                real_root_count: None,
                precision_used: c.working_bits,
            },
        };
        verdict.precision_used = c.working_bits;
        if verdict.status != HyperbolicityStatus::Unknown {
            break;
        }
    }
    verdict
}

/// `J^{d,n}(X) = sum_j C(d,j) γ(n+j) X^j`.
pub fn jensen_polynomial(gammas: &[GammaRecord], d: usize, n: u64) -> Result<RealPolynomial> {
    let coeffs = (0..=d)
        .map(|j| {
            let idx = n + j as u64;
            let g = gammas.iter().find(|r| r.n == idx).ok_or(Error::MissingRecord(idx))?;
            let b = binomial(d as u64, j as u64);
            let p = g.value.prec();
            Ok(Ball::new(g.value.clone(), &g.error_bound).mul(&Ball::exact(Float::with_val(p, &b))))
        })
        .collect::<Result<Vec<_>>>()?;
    RealPolynomial::new(coeffs)
}

/// Hermite polynomial with `H_{d+1} = X H_d - 2d H_{d-1}`.
pub fn hermite(d: usize) -> RealPolynomial {
    let mut prev: Vec<i64> = vec![1];
    let mut cur: Vec<i64> = vec![0, 1];
    if d == 0 {
        return RealPolynomial::from_i64(&prev, 64).expect("nonzero");
    }
    for k in 1..d {
        let mut next = vec![0i64; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2 * k as i64 * c;
        }
        prev = cur;
        cur = next;
    }
    RealPolynomial::from_i64(&cur, 64).expect("monic")
}

/// `J((δX - 1)/e^A)` scaled to be monic.
pub fn normalized_jensen(j: &RealPolynomial, a: &Float, delta: &Float) -> Result<RealPolynomial> {
    if !(*delta > 0) {
        return Err(Error::InvalidParams("delta must be positive".into()));
    }
    let p = j.prec().max(a.prec());
    let ea = Float::with_val(p, -a).exp();
    let ea_ball = Ball::new(ea.clone(), &(Float::with_val(64, ea.abs_ref()) >> (p - 2)));
    let map = [ea_ball.neg(), ea_ball.mul(&Ball::exact(delta.clone()))];
    let mut acc: Vec<Ball> = vec![j.coeffs.last().cloned().ok_or(Error::Empty)?];
    for c in j.coeffs.iter().rev().skip(1) {
        let mut next = vec![Ball::from_i64(0, p); acc.len() + 1];
        for (i, x) in acc.iter().enumerate() {
            next[i] = next[i].add(&x.mul(&map[0]));
            next[i + 1] = next[i + 1].add(&x.mul(&map[1]));
        }
        next[0] = next[0].add(c);
        acc = next;
    }
    let lead = acc.last().cloned().ok_or(Error::Empty)?;
    if lead.contains_zero() {
        return Err(Error::LeadingIntervalContainsZero);
    }
    let d = acc.len() - 1;
    let mut out: Vec<Ball> = acc[..d].iter().map(|c| c.div(&lead).expect("lead excludes zero")).collect();
    out.push(Ball::exact(Float::with_val(p, 1u32)));
    RealPolynomial::new(out)
}

/// `max_j |coeff_j(p) - coeff_j(H_d)|` on midpoints.
pub fn hermite_deviation(p: &RealPolynomial, d: usize) -> Result<Float> {
    if p.degree() != d {
        return Err(Error::DegreeMismatch { expected: d, found: p.degree() });
    }
    let h = hermite(d);
    let prec = p.prec();
    let mut worst = Float::new(prec);
    for (a, b) in p.coeffs.iter().zip(h.coeffs.iter()) {
        let diff = Float::with_val(prec, &a.mid - &b.mid).abs();
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub d: usize,
    pub n: u64,
    pub verdict: HyperbolicityVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub family: String,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn count(&self, status: HyperbolicityStatus) -> usize {
        self.entries.iter().filter(|e| e.verdict.status == status).count()
    }

    pub fn exceptions(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| e.verdict.status == HyperbolicityStatus::CertifiedNotHyperbolic)
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| e.verdict.status == HyperbolicityStatus::Unknown)
    }

    /// CSV with header `family,d,n,status,root_count,bits`; nothing at all
    /// for an empty report.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        if self.entries.is_empty() {
            return Ok(());
        }
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["family", "d", "n", "status", "root_count", "bits"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for e in &self.entries {
            let rc = e.verdict.real_root_count.map(|r| r.to_string()).unwrap_or_default();
            wr.write_record([
                self.family.clone(),
                e.d.to_string(),
                e.n.to_string(),
                e.verdict.status.as_str().to_string(),
                rc,
                e.verdict.precision_used.to_string(),
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Verdicts for every `(d, n)`, sorted by `d` then `n`. Runs on the current
/// rayon pool; the result does not depend on its size.
pub fn hyperbolicity_scan(
    family: &LFamily,
    d_set: &[usize],
    n_range: RangeInclusive<u64>,
    ctx: &PrecisionContext,
    cache: Option<&GammaCache>,
) -> Result<ScanReport> {
    let mut ds: Vec<usize> = d_set.to_vec();
    ds.sort_unstable();
    ds.dedup();
    if n_range.is_empty() || ds.is_empty() {
        return Ok(ScanReport { family: family.name.clone(), entries: Vec::new() });
    }
    if ds[0] == 0 {
        return Err(Error::InvalidParams("degree must be at least 1".into()));
    }
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let dmax = *ds.last().expect("nonempty") as u64;
    let records = gamma_range(family, lo, hi + dmax, ctx, cache)?;
    let jobs: Vec<(usize, u64)> = ds.iter().flat_map(|&d| n_range.clone().map(move |n| (d, n))).collect();
    let entries = jobs
        .into_par_iter()
        .map(|(d, n)| {
            let verdict = certify_hyperbolic_with(
                |c| {
                    if c.working_bits == ctx.working_bits {
                        jensen_polynomial(&records, d, n)
                    } else {
                        let fresh = (n..=n + d as u64)
                            .map(|k| taylor_gamma(family, k, c))
                            .collect::<Result<Vec<_>>>()?;
                        jensen_polynomial(&fresh, d, n)
                    }
                },
                ctx,
            );
            ScanEntry { d, n, verdict }
        })
        .collect();
    Ok(ScanReport { family: family.name.clone(), entries })
}
