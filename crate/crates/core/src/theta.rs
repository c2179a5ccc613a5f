//! Exponential term streams `f(t) = alpha0 + sum alpha_m exp(-pi c_m t^(1/j))`.
//!
//! Every stream stores its exponents as integer keys times a common unit,
//! `c = key * unit`, so that equal exponents merge exactly and the stream has
//! a canonical form. Coefficients are exact rationals.

use std::collections::BTreeMap;
use std::io::Read;
use std::sync::RwLock;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};

/// One stream term: exponent `key * unit` and weight `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub key: u64,
    pub alpha: Rational,
}

/// Which family generated a stream. Part of the canonical serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StreamSource {
    Riemann,
    Dirichlet { disc: i64 },
    Modular { weight: u32, count: usize },
    Ideal { disc: i64, form: (i64, i64, i64) },
}

#[derive(Clone, Debug)]
enum Generator {
    Squares { disc: Option<i64>, nu: u32 },
    Finite(Vec<Term>),
    Form { a: i64, b: i64, c: i64, units: u32 },
}

#[derive(Debug)]
struct Memo {
    terms: Vec<Term>,
    complete_to: u64,
    exhausted: bool,
}

/// A lazily extended, canonical exponential series.
///
/// Extension goes through an append-only memo behind a lock, so concurrent
/// readers always see a sorted prefix that is complete up to a known key.
#[derive(Debug)]
pub struct ThetaTermStream {
    j: u32,
    alpha0: Rational,
    unit_num: u64,
    unit_sqrt_den: u64,
    growth_coef: u64,
    growth_exp2: u32,
    source: StreamSource,
    generator: Generator,
    memo: RwLock<Memo>,
}

impl Clone for ThetaTermStream {
    fn clone(&self) -> Self {
        let m = self.memo.read().expect("stream memo poisoned");
        ThetaTermStream {
            j: self.j,
            alpha0: self.alpha0.clone(),
            unit_num: self.unit_num,
            unit_sqrt_den: self.unit_sqrt_den,
            growth_coef: self.growth_coef,
            growth_exp2: self.growth_exp2,
            source: self.source.clone(),
            generator: self.generator.clone(),
            memo: RwLock::new(Memo { terms: m.terms.clone(), complete_to: m.complete_to, exhausted: m.exhausted }),
        }
    }
}

impl ThetaTermStream {
    fn new(
        j: u32,
        alpha0: Rational,
        unit: (u64, u64),
        growth: (u64, u32),
        source: StreamSource,
        generator: Generator,
    ) -> Self {
        let (memo_terms, complete_to, exhausted) = match &generator {
            Generator::Finite(t) => (t.clone(), t.last().map(|t| t.key).unwrap_or(0), true),
            _ => (Vec::new(), 0, false),
        };
        ThetaTermStream {
            j,
            alpha0,
            unit_num: unit.0,
            unit_sqrt_den: unit.1,
            growth_coef: growth.0,
            growth_exp2: growth.1,
            source,
            generator,
            memo: RwLock::new(Memo { terms: memo_terms, complete_to, exhausted }),
        }
    }

    /// Root exponent `j` in `t^(1/j)`.
    pub fn j(&self) -> u32 {
        self.j
    }

    /// The value `f(inf)`.
    pub fn alpha0(&self) -> &Rational {
        &self.alpha0
    }

    pub fn source(&self) -> &StreamSource {
        &self.source
    }

    /// Unit as `(numerator, radicand)`: `c = key * numerator / sqrt(radicand)`.
    pub fn unit_parts(&self) -> (u64, u64) {
        (self.unit_num, self.unit_sqrt_den)
    }

    pub fn unit(&self, prec: u32) -> Float {
        let mut u = Float::with_val(prec, self.unit_num);
        if self.unit_sqrt_den != 1 {
            u /= Float::with_val(prec, self.unit_sqrt_den).sqrt();
        }
        u
    }

    /// Exponent `c` for a key.
    pub fn c_of(&self, key: u64, prec: u32) -> Float {
        self.unit(prec) * key
    }

    /// `|alpha(key)| <= coef * key^(exp2/2)` for every key.
    pub fn growth(&self) -> (u64, u32) {
        (self.growth_coef, self.growth_exp2)
    }

    /// The smallest exponent's term.
    pub fn first(&self) -> Term {
        let mut bound = 1u64;
        loop {
            let (t, complete) = self.terms_to_key(bound);
            if let Some(first) = t.into_iter().next() {
                return first;
            }
            assert!(complete, "stream has no terms");
            bound *= 2;
        }
    }

    /// `c_min` as a float.
    pub fn c_min(&self, prec: u32) -> Float {
        self.c_of(self.first().key, prec)
    }

    /// All terms with key at most `bound`, and whether the stream is known
    /// to be complete up to `bound`.
    pub fn terms_to_key(&self, bound: u64) -> (Vec<Term>, bool) {
        self.ensure(bound);
        let m = self.memo.read().expect("stream memo poisoned");
        let end = m.terms.partition_point(|t| t.key <= bound);
        (m.terms[..end].to_vec(), m.complete_to >= bound)
    }

    /// All terms with `c <= c_bound`.
    pub fn terms_below(&self, c_bound: &Float) -> Vec<Term> {
        let prec = c_bound.prec().max(64) + 16;
        let keys = Float::with_val(prec, c_bound / self.unit(prec)).floor();
        let bound = keys.to_integer().and_then(|k| k.to_u64()).unwrap_or(0);
        self.terms_to_key(bound).0
    }

    /// The first `count` terms (fewer when a finite stream runs out).
    pub fn first_terms(&self, count: usize) -> Vec<Term> {
        let mut bound = 16u64;
        loop {
            self.ensure(bound);
            let m = self.memo.read().expect("stream memo poisoned");
            if m.terms.len() >= count || m.exhausted {
                return m.terms.iter().take(count).cloned().collect();
            }
            drop(m);
            bound = bound.saturating_mul(2);
        }
    }

    /// Largest key known to exist, for finite streams.
    pub fn known_limit(&self) -> Option<u64> {
        match &self.generator {
            Generator::Finite(t) => Some(t.last().map(|t| t.key).unwrap_or(0)),
            _ => None,
        }
    }

    fn ensure(&self, bound: u64) {
        {
            let m = self.memo.read().expect("stream memo poisoned");
            if m.complete_to >= bound || m.exhausted {
                return;
            }
        }
        let mut m = self.memo.write().expect("stream memo poisoned");
        if m.complete_to >= bound || m.exhausted {
            return;
        }
        let lo = m.complete_to;
        let hi = bound.max(lo.saturating_mul(2)).max(16);
        let fresh = self.generate(lo, hi);
        m.terms.extend(fresh);
        m.complete_to = hi;
    }

    /// Terms with `lo < key <= hi`, sorted and merged.
    fn generate(&self, lo: u64, hi: u64) -> Vec<Term> {
        match &self.generator {
            Generator::Squares { disc, nu } => {
                let mut out = Vec::new();
                let mut n = lo.isqrt() + 1;
                while n * n <= hi {
                    if n * n > lo {
                        let chi = match disc {
                            None => 1,
                            Some(d) => kronecker_unchecked(*d, n),
                        };
                        if chi != 0 {
                            let a = Integer::from(n).pow(*nu) * chi;
                            out.push(Term { key: n * n, alpha: Rational::from(a) });
                        }
                    }
                    n += 1;
                }
                out
            }
            Generator::Finite(_) => Vec::new(),
            Generator::Form { a, b, c, units } => {
                let counts = form_value_counts(*a, *b, *c, lo, hi);
                counts
                    .into_iter()
                    .map(|(k, cnt)| Term { key: k, alpha: Rational::from((cnt, *units as u64)) })
                    .collect()
            }
        }
    }
}

/// Counts of nonzero `(x, y)` with `lo < A x^2 + B xy + C y^2 <= hi`.
fn form_value_counts(a: i64, b: i64, c: i64, lo: u64, hi: u64) -> BTreeMap<u64, u64> {
    let d = (4 * a * c - b * b) as i128;
    let a = a as i128;
    let b = b as i128;
    let c = c as i128;
    let hi_i = hi as i128;
    let mut out = BTreeMap::new();
    // 4A Q = (2Ax + By)^2 + |D| y^2
    let ymax = ((4 * a * hi_i) / d).max(0) as u128;
    let ymax = (ymax as f64).sqrt() as i128 + 1;
    for y in -ymax..=ymax {
        let rest = 4 * a * hi_i - d * y * y;
        if rest < 0 {
            continue;
        }
        let s = (rest as f64).sqrt() as i128 + 2;
        let xlo = (-b * y - s).div_euclid(2 * a) - 1;
        let xhi = (-b * y + s).div_euclid(2 * a) + 1;
        for x in xlo..=xhi {
            if x == 0 && y == 0 {
                continue;
            }
            let q = a * x * x + b * x * y + c * y * y;
            if q > lo as i128 && q <= hi_i {
                *out.entry(q as u64).or_insert(0) += 1;
            }
        }
    }
    out
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Fundamental discriminant test: `D = 1 mod 4` squarefree, or `D = 4m` with
/// `m = 2, 3 mod 4` squarefree. `D = 1` is excluded.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        return (mr == 2 || mr == 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

fn kronecker_unchecked(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i8;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && tz % 2 == 1 {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (d mod n / n) for odd n.
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// The Kronecker symbol `(D/n)` for a fundamental discriminant `D`.
pub fn kronecker_symbol(d: i64, n: u64) -> Result<i8> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(kronecker_unchecked(d, n))
}

/// A real primitive character, given by its fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirichletCharacterSpec {
    pub disc: i64,
    pub nu: u32,
}

impl DirichletCharacterSpec {
    pub fn new(disc: i64) -> Result<Self> {
        if !is_fundamental(disc) {
            return Err(Error::NotFundamental(disc));
        }
        Ok(DirichletCharacterSpec { disc, nu: u32::from(disc < 0) })
    }
}

/// `sum_{m>=1} exp(-pi m^2 t)`.
pub fn riemann_stream() -> ThetaTermStream {
    ThetaTermStream::new(
        1,
        Rational::new(),
        (1, 1),
        (1, 0),
        StreamSource::Riemann,
        Generator::Squares { disc: None, nu: 0 },
    )
}

/// `sum_{n>=1} chi(n) n^nu exp(-pi n^2 t)`.
pub fn dirichlet_stream(spec: DirichletCharacterSpec) -> Result<ThetaTermStream> {
    let spec = DirichletCharacterSpec::new(spec.disc)?;
    Ok(ThetaTermStream::new(
        1,
        Rational::new(),
        (1, 1),
        (1, spec.nu),
        StreamSource::Dirichlet { disc: spec.disc },
        Generator::Squares { disc: Some(spec.disc), nu: spec.nu },
    ))
}

/// `sum a(n) exp(-2 pi n y)` for a normalized newform of weight `weight`.
pub fn modular_stream(coefficients: &[Rational], weight: u32) -> Result<ThetaTermStream> {
    if coefficients.is_empty() {
        return Err(Error::Empty);
    }
    if coefficients[0] != 1 {
        return Err(Error::NotNormalized);
    }
    let terms = coefficients
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0)
        .map(|(i, a)| Term { key: 2 * (i as u64 + 1), alpha: a.clone() })
        .collect();
    // |a(n)| <= d(n) n^((w-1)/2) <= 2 n^(w/2) <= 2 key^(w/2)
    Ok(ThetaTermStream::new(
        1,
        Rational::new(),
        (1, 1),
        (2, weight),
        StreamSource::Modular { weight, count: coefficients.len() },
        Generator::Finite(terms),
    ))
}

/// Default size limit for eta-product coefficients.
pub const ETA_DIGIT_BUDGET_BITS: u32 = 1 << 16;

/// Coefficients `a(1..=count)` of `prod eta(d z)^e` divided by its leading `q`-power.
pub fn eta_product(factors: &[(u64, u32)], count: usize) -> Result<Vec<Integer>> {
    eta_product_with_budget(factors, count, ETA_DIGIT_BUDGET_BITS)
}

pub fn eta_product_with_budget(factors: &[(u64, u32)], count: usize, budget_bits: u32) -> Result<Vec<Integer>> {
    if count == 0 {
        return Err(Error::Empty);
    }
    if factors.iter().any(|&(d, _)| d == 0) {
        return Err(Error::InvalidParams("eta factor with d = 0".into()));
    }
    let mut c = vec![Integer::new(); count];
    c[0] = Integer::from(1);
    for &(d, e) in factors {
        let mut s = d as usize;
        while s < count {
            for _ in 0..e {
                for i in (s..count).rev() {
                    let (lo, hi) = c.split_at_mut(i);
                    hi[0] -= &lo[i - s];
                }
            }
            s += d as usize;
        }
        if c.iter().any(|x| x.significant_bits() > budget_bits) {
            return Err(Error::Overflow(budget_bits));
        }
    }
    Ok(c)
}

/// Number of roots of unity in `Q(sqrt(D))` for `D < 0`.
pub fn unit_count(d: i64) -> u32 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether `(a, b, c)` is a reduced positive definite form.
pub fn is_reduced(a: i64, b: i64, c: i64) -> bool {
    a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
}

/// Reduced primitive forms of discriminant `D < 0`, one per ideal class.
pub fn reduced_forms(d: i64) -> Result<Vec<(i64, i64, i64)>> {
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if is_reduced(a, b, c) && gcd(gcd(a, b), c) == 1 {
                out.push((a, b, c));
            }
        }
        a += 1;
    }
    Ok(out)
}

/// Theta series of one ideal class of an imaginary quadratic field.
///
/// Exponents are `c = 2 Q(x, y) / sqrt|D|` over nonzero lattice points, with
/// weight `1/w_K` per point; `alpha0 = 1/w_K`. `bound` is a bound on `c` up
/// to which the stream is enumerated eagerly.
pub fn quad_ideal_stream(d: i64, form: (i64, i64, i64), bound: f64) -> Result<ThetaTermStream> {
    if d >= 0 || !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let (a, b, c) = form;
    let disc = b * b - 4 * a * c;
    if disc != d {
        return Err(Error::WrongDiscriminant { expected: d, found: disc });
    }
    if !is_reduced(a, b, c) {
        return Err(Error::NotReduced(a, b, c));
    }
    let key_bound = bound * (d.unsigned_abs() as f64).sqrt() / 2.0;
    if !(key_bound >= a as f64) {
        return Err(Error::EmptyBound);
    }
    let w = unit_count(d);
    let s = ThetaTermStream::new(
        2,
        Rational::from((1, w)),
        (2, d.unsigned_abs()),
        (2, 1),
        StreamSource::Ideal { disc: d, form },
        Generator::Form { a, b, c, units: w },
    );
    s.ensure(key_bound.floor() as u64);
    Ok(s)
}

/// Read `n,a_n` CSV rows (1-indexed, contiguous, exact decimals or integers).
pub fn load_coefficients_csv<R: Read>(reader: R) -> Result<Vec<Rational>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "a_n" {
        return Err(Error::Parse("expected header `n,a_n`".into()));
    }
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let n: u64 = rec[0].parse().map_err(|_| Error::Parse(format!("bad index `{}`", &rec[0])))?;
        let expected = row as u64 + 1;
        if n != expected {
            let kind = if n < expected { "duplicate" } else { "gap" };
            return Err(Error::Parse(format!("{kind} at n = {n}, expected {expected}")));
        }
        out.push(parse_exact_decimal(&rec[1])?);
    }
    if out.is_empty() {
        return Err(Error::Empty);
    }
    Ok(out)
}

/// Parse `-12`, `3.25` or `7/2` exactly.
pub fn parse_exact_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact number: `{s}`"));
    if s.contains('/') {
        return Rational::parse(s).map(Rational::from).map_err(|_| bad());
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let num = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).map_err(|_| bad())?;
    let den = Integer::from(10).pow(fp.len() as u32);
    let r = Rational::from((num, den));
    Ok(if neg { -r } else { r })
}

/// Result of [`truncation_index`].
#[derive(Clone, Debug)]
pub struct Truncation {
    /// Number of leading terms to keep.
    pub count: usize,
    /// Terms with key above this are covered by `tail`.
    pub key_bound: u64,
    /// Certified bound on the omitted terms at `t0`.
    pub tail: Float,
}

/// `sum_{k > K} G k^(g/2) e^(-x k)` bounded by a geometric series.
fn key_majorant(coef: u64, exp2: u32, x: &Float, k: u64, prec: u32) -> Option<Float> {
    let k1 = Float::with_val(prec, k + 1);
    let k2 = Float::with_val(prec, k + 2);
    let half = Float::with_val(prec, exp2) / 2u32;
    let ratio = Float::with_val(prec, &k2 / &k1).pow(&half) * Float::with_val(prec, -x).exp();
    if ratio >= 1 {
        return None;
    }
    let mut lead = Float::with_val(prec, (&k1).pow(&half)) * coef;
    lead *= Float::with_val(prec, -Float::with_val(prec, x * (k + 1))).exp();
    let mut out = lead / (Float::with_val(prec, 1u32) - ratio);
    out *= 1.0 + 2f64.powi(-40);
    Some(out)
}

/// Bound on `sum_{key > k} |α(key)| e^(-π c(key) t^(1/j))`, or `None` when
/// the geometric majorant does not converge at `t`.
pub fn tail_majorant(stream: &ThetaTermStream, t: &Float, k: u64, prec: u32) -> Option<Float> {
    let tau = if stream.j == 1 { Float::with_val(prec, t) } else { Float::with_val(prec, t).root(stream.j) };
    let x = Float::with_val(prec, Constant::Pi) * stream.unit(prec) * &tau;
    let (g, e) = stream.growth();
    key_majorant(g, e, &x, k, prec)
}

/// Choose how many terms make the omitted tail at `t0` at most `threshold`.
pub fn truncation_index(stream: &ThetaTermStream, t0: &Float, threshold: &Float) -> Result<Truncation> {
    if !(*threshold > 0) {
        return Err(Error::InvalidParams("threshold must be positive".into()));
    }
    let prec = threshold.prec().max(t0.prec()).max(64) + 32;
    let tau = if stream.j == 1 {
        Float::with_val(prec, t0)
    } else {
        Float::with_val(prec, t0).root(stream.j)
    };
    let x = Float::with_val(prec, Constant::Pi) * stream.unit(prec) * &tau;
    let (g, e) = stream.growth();
    let ok = |k: u64| key_majorant(g, e, &x, k, prec).filter(|m| m <= threshold);
    let key_bound = if ok(0).is_some() {
        0
    } else {
        let mut hi = 1u64;
        while ok(hi).is_none() {
            hi = hi.checked_mul(2).ok_or_else(|| Error::NoDecayProof("tail majorant never drops".into()))?;
            if hi > 1 << 50 {
                return Err(Error::NoDecayProof("tail majorant never drops".into()));
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid).is_some() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    if let Some(limit) = stream.known_limit() {
        if limit < key_bound {
            let tail = key_majorant(g, e, &x, limit, prec)
                .filter(|m| m <= threshold)
                .ok_or_else(|| Error::NoDecayProof(format!("coefficients end at key {limit}, need {key_bound}")))?;
            let count = stream.terms_to_key(limit).0.len();
            return Ok(Truncation { count, key_bound: limit, tail });
        }
    }
    let tail = key_majorant(g, e, &x, key_bound, prec).expect("majorant checked above");
    let count = stream.terms_to_key(key_bound).0.len();
    Ok(Truncation { count, key_bound, tail })
}
