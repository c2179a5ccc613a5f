//! Shared oracles for the integration tests. Nothing here calls into the
//! crate's quadrature, stream or root-counting code.

#![allow(dead_code)]

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

/// `q prod (1-q^n)^2 (1-q^{11n})^2`, coefficients `a(1..=count)`, by naive
/// series multiplication.
pub fn eta_11a(count: usize) -> Vec<Rational> {
    let mut s = vec![0i64; count];
    s[0] = 1;
    for step in [1usize, 11] {
        for _ in 0..2 {
            let mut k = step;
            while k < count {
                for i in (k..count).rev() {
                    s[i] -= s[i - k];
                }
                k += step;
            }
        }
    }
    s.into_iter().map(Rational::from).collect()
}

/// Newform 37a (y² + y = x³ - x) by point counting: `a(p) = p - #E(F_p)`
/// for p ≠ 37, `a(37) = -1`, extended multiplicatively.
pub fn curve_37a(count: usize) -> Vec<Rational> {
    let n = count;
    let mut is_prime = vec![true; n + 1];
    let mut a = vec![Integer::new(); n + 1];
    a[1] = Integer::from(1);
    let ap = |p: usize| -> i64 {
        if p == 37 {
            return -1;
        }
        let p64 = p as i64;
        let mut pts = 0i64;
        for x in 0..p64 {
            for y in 0..p64 {
                if (y * y + y - x * x * x + x).rem_euclid(p64) == 0 {
                    pts += 1;
                }
            }
        }
        p64 - pts
    };
    let mut primes = Vec::new();
    for p in 2..=n {
        if is_prime[p] {
            primes.push(p);
            let mut q = p * p;
            while q <= n {
                is_prime[q] = false;
                q += p;
            }
        }
    }
    // prime powers, then multiplicativity over coprime parts
    let mut pp = vec![None; n + 1];
    for &p in &primes {
        let c = ap(p);
        let eps = if p == 37 { 0 } else { p as i64 };
        let (mut prev, mut cur) = (Integer::from(1), Integer::from(c));
        let mut q = p;
        loop {
            pp[q] = Some(cur.clone());
            if q > n / p {
                break;
            }
            q *= p;
            let next = Integer::from(c) * &cur - Integer::from(eps) * &prev;
            prev = cur;
            cur = next;
        }
    }
    for m in 2..=n {
        let p = primes.iter().copied().find(|&p| m % p == 0).expect("factor");
        let mut q = 1;
        while m % (q * p) == 0 {
            q *= p;
        }
        a[m] = pp[q].clone().expect("prime power") * a[m / q].clone();
    }
    a.into_iter().skip(1).map(Rational::from).collect()
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = +1/2`; only even ones are used).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::from((1, m as u64 + 1)));
        for j in (1..=m).rev() {
            let d = Rational::from(&a[j - 1] - &a[j]) * j as u64;
            a[j - 1] = d;
        }
        out.push(a[0].clone());
    }
    out
}

/// Hurwitz zeta `ζ(r, s)`, `r >= 2`, `s > 0`, by Euler-Maclaurin.
pub fn hurwitz_zeta(r: u32, s: &Float, bern: &[Rational]) -> Float {
    let p = s.prec();
    let n_head = 200u32;
    let mut acc = Float::new(p);
    for k in 0..n_head {
        let x = Float::with_val(p, s + k);
        acc += Float::with_val(p, (&x).pow(r)).recip();
    }
    let x = Float::with_val(p, s + n_head);
    let xr = Float::with_val(p, (&x).pow(r));
    acc += Float::with_val(p, &x / &xr) / (r - 1);
    acc += Float::with_val(p, xr.recip_ref()) / 2u32;
    // B_{2i}/(2i)! * r(r+1)...(r+2i-2) * x^{-r-2i+1}
    let x2 = Float::with_val(p, x.square_ref());
    let mut pw = Float::with_val(p, &x * &xr).recip() * r;
    let mut fact = Float::with_val(p, 1u32);
    let mut i = 1usize;
    while 2 * i < bern.len() {
        // pw = r(r+1)..(r+2i-2) / x^{r+2i-1}, fact = (2i)!
        if i > 1 {
            pw *= Float::with_val(p, r + 2 * i as u32 - 3) * (r + 2 * i as u32 - 2);
            pw /= &x2;
        }
        fact *= (2 * i - 1) as u32;
        fact *= (2 * i) as u32;
        acc += Float::with_val(p, &bern[2 * i]) * &pw / &fact;
        i += 1;
    }
    acc
}

/// `exp` of a power series with zero constant term, through degree `n`.
fn series_exp(e: &[Float], n: usize, p: u32) -> Vec<Float> {
    let mut out = vec![Float::new(p); n + 1];
    out[0] = Float::with_val(p, 1u32);
    for k in 1..=n {
        let mut acc = Float::new(p);
        for i in 1..=k {
            acc += Float::with_val(p, &e[i] * &out[k - i]) * i as u32;
        }
        out[k] = acc / k as u32;
    }
    out
}

/// `∫_1^∞ e^{-bx} x^{s-1} (log x)^n dx` as
/// `n! [h^n] (Γ(s+h) b^{-s-h} - sum_k (-b)^k / (k! (s+h+k)))`.
pub fn incomplete_log_moment(b: &Float, s: &Float, n: usize, bern: &[Rational]) -> Float {
    let p = b.prec();
    let mut e = vec![Float::new(p); n + 1];
    if n >= 1 {
        e[1] = Float::with_val(p, s.digamma_ref()) - Float::with_val(p, b.ln_ref());
    }
    for (r, slot) in e.iter_mut().enumerate().skip(2) {
        let z = hurwitz_zeta(r as u32, s, bern) / r as u32;
        *slot = if r % 2 == 0 { z } else { -z };
    }
    let ex = series_exp(&e, n, p);
    let lead = Float::with_val(p, s.gamma_ref()) * Float::with_val(p, b.pow(&Float::with_val(p, -s)));
    let first = lead * &ex[n];
    // sum_k (-b)^k / k! * (-1)^n / (s+k)^{n+1}
    let mut second = Float::new(p);
    let mut term = Float::with_val(p, 1u32);
    let bf = b.to_f64();
    let mut k = 0u32;
    loop {
        let denom = Float::with_val(p, s + k).pow(n as u32 + 1);
        let t = Float::with_val(p, &term / &denom);
        second += &t;
        if f64::from(k) > 2.0 * bf + 20.0 && t.clone().abs() < Float::with_val(p, 1u32) >> (p + 20) {
            break;
        }
        k += 1;
        term *= Float::with_val(p, -b);
        term /= k;
    }
    if n % 2 == 1 {
        second = -second;
    }
    let mut fact = Float::with_val(p, 1u32);
    for i in 2..=n {
        fact *= i as u32;
    }
    (first - second) * fact
}

/// Which family the term-wise oracle evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleFamily {
    Zeta,
    Chi4,
    Modular11a,
    DedekindGaussian,
}

/// `F(n)` by integrating each theta term exactly after `t = Q^{-1/2} x^j`.
pub fn termwise_f(fam: OracleFamily, n: usize, base_bits: u32) -> Float {
    let (q, mu, c0, scale, j): (u32, Rational, Float, Rational, u32) = match fam {
        OracleFamily::Zeta => (1, Rational::from((1, 4)), Float::with_val(64, 1), Rational::from((1, 4)), 1),
        OracleFamily::Chi4 => (
            16,
            Rational::from((3, 4)),
            Float::with_val(base_bits, 4u32).pow(Float::with_val(base_bits, 0.75)),
            Rational::from((1, 4)),
            1,
        ),
        OracleFamily::Modular11a => {
            (11, Rational::from(1), Float::with_val(base_bits, 11u32).sqrt(), Rational::from((1, 2)), 1)
        }
        OracleFamily::DedekindGaussian => (1, Rational::from((1, 4)), Float::with_val(64, 1), Rational::from((1, 4)), 2),
    };
    if n % 2 == 1 {
        return Float::new(base_bits);
    }
    // (alpha, c) with exponent e^{-π c t^{1/j}}
    let terms: Vec<(Rational, u64)> = match fam {
        OracleFamily::Zeta => (1..=12u64).map(|m| (Rational::from(1), m * m)).collect(),
        OracleFamily::Chi4 => (1..=12u64)
            .filter(|m| m % 2 == 1)
            .map(|m| (Rational::from(if m % 4 == 1 { m as i64 } else { -(m as i64) }), m * m))
            .collect(),
        OracleFamily::Modular11a => {
            eta_11a(120).into_iter().enumerate().map(|(i, a)| (a, 2 * (i as u64 + 1))).filter(|(a, _)| *a != 0).collect()
        }
        OracleFamily::DedekindGaussian => (1..=160u64)
            .map(|m| {
                let mut r = 0i64;
                let lim = (m as f64).sqrt() as i64 + 1;
                for x in -lim..=lim {
                    for y in -lim..=lim {
                        if (x * x + y * y) as u64 == m {
                            r += 1;
                        }
                    }
                }
                (Rational::from((r, 4)), m)
            })
            .filter(|(a, _)| *a != 0)
            .collect(),
    };
    let qf = Float::with_val(base_bits, q);
    let b_min = {
        let pi = Float::with_val(64, Constant::Pi);
        (pi * terms[0].1 as f64).to_f64() * qf.to_f64().powf(-1.0 / (2.0 * j as f64))
    };
    let bern = bernoulli(140);
    let mut sum = Float::new(base_bits);
    for (alpha, c) in &terms {
        let bq = std::f64::consts::PI * *c as f64 * qf.to_f64().powf(-1.0 / (2.0 * j as f64));
        if bq - b_min > 200.0 {
            break;
        }
        let p = base_bits + (bq * 1.45) as u32 + 64;
        // Q^{-1/(2j)}
        let qpow = Float::with_val(p, &qf).root(2 * j).recip();
        let b = Float::with_val(p, Constant::Pi) * *c * qpow;
        let s = Float::with_val(p, &mu) * j;
        let i = incomplete_log_moment(&b, &s, n, &bern);
        sum += Float::with_val(base_bits, i * Float::with_val(p, alpha));
    }
    let mut out = sum * j * Float::with_val(base_bits, 2 * j).pow(n as u32);
    let mu_half = Float::with_val(base_bits, &mu) / 2u32;
    out /= Float::with_val(base_bits, (&qf).pow(&mu_half));
    out *= c0;
    out *= Float::with_val(base_bits, &scale).pow(n as u32);
    out * 2u32
}

/// All complex roots of a real polynomial (constant term first) by
/// Durand-Kerner at `prec` bits.
pub fn durand_kerner(coeffs: &[i64], prec: u32) -> Vec<Complex> {
    let d = coeffs.len() - 1;
    let lead = Float::with_val(prec, coeffs[d]);
    let c: Vec<Float> = coeffs.iter().map(|&x| Float::with_val(prec, x) / &lead).collect();
    let eval = |z: &Complex| {
        let mut acc = Complex::with_val(prec, (1, 0));
        for k in (0..d).rev() {
            acc *= z;
            acc += &c[k];
        }
        acc
    };
    let seed = Complex::with_val(prec, (0.4, 0.9));
    let mut roots: Vec<Complex> = (0..d).map(|k| Complex::with_val(prec, (&seed).pow(k as u32))).collect();
    for _ in 0..2000 {
        let mut moved = Float::new(64);
        for i in 0..d {
            let mut den = Complex::with_val(prec, (1, 0));
            for (k, rk) in roots.iter().enumerate() {
                if k != i {
                    den *= Complex::with_val(prec, &roots[i] - rk);
                }
            }
            let step = Complex::with_val(prec, eval(&roots[i]) / den);
            let size = Float::with_val(64, Complex::with_val(prec, step.abs_ref()).real());
            if size > moved {
                moved = size;
            }
            roots[i] -= step;
        }
        if moved < Float::with_val(64, 2f64.powi(-(prec as i32) + 20)) {
            break;
        }
    }
    roots
}

/// Real roots (with multiplicity) among Durand-Kerner roots, and whether
/// the classification is clear-cut at the given threshold.
pub fn dense_real_root_count(coeffs: &[i64]) -> (usize, bool) {
    let roots = durand_kerner(coeffs, 200);
    let mut real = 0;
    let mut clear = true;
    for r in &roots {
        let im = r.imag().to_f64().abs();
        let scale = r.real().to_f64().abs().max(1.0);
        if im < 1e-25 * scale {
            real += 1;
        } else if im < 1e-12 * scale {
            clear = false;
        }
    }
    (real, clear)
}
