//! Midpoint-radius real balls. Radii are kept at 64 bits and rounded upward;
//! every operation adds the rounding error of the midpoint.

use std::cmp::Ordering;

use rug::float::Round;
use rug::Float;

const RAD_BITS: u32 = 64;

/// The real interval `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub mid: Float,
    pub rad: Float,
}

fn up(v: Float) -> Float {
    Float::with_val_round(RAD_BITS, &v, Round::Up).0
}

fn add_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_BITS, a + b, Round::Up).0
}

fn mul_up(a: &Float, b: &Float) -> Float {
    Float::with_val_round(RAD_BITS, a * b, Round::Up).0
}

/// Half an ulp of `x`, rounded up, unless the rounding was exact.
fn ulp_err(x: &Float, dir: Ordering) -> Float {
    if x.is_zero() || dir == Ordering::Equal {
        return Float::new(RAD_BITS);
    }
    let a = Float::with_val_round(RAD_BITS, x.abs_ref(), Round::Up).0;
    a >> (x.prec() - 1)
}

impl Ball {
    pub fn exact(mid: Float) -> Self {
        Ball { mid, rad: Float::new(RAD_BITS) }
    }

    pub fn new(mid: Float, rad: &Float) -> Self {
        Ball { mid, rad: up(Float::with_val(RAD_BITS, rad.abs_ref())) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Ball::exact(Float::with_val(prec, v))
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        let a = Float::with_val_round(RAD_BITS, self.mid.abs_ref(), Round::Down).0;
        a <= self.rad
    }

    /// Sign if certain.
    pub fn sign(&self) -> Option<Ordering> {
        if self.contains_zero() {
            None
        } else if self.mid > 0 {
            Some(Ordering::Greater)
        } else {
            Some(Ordering::Less)
        }
    }

    pub fn abs_upper(&self) -> Float {
        add_up(&up(Float::with_val(RAD_BITS, self.mid.abs_ref())), &self.rad)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let p = self.prec().max(o.prec());
        let (mid, dir) = Float::with_val_round(p, &self.mid + &o.mid, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &o.rad), &ulp_err(&mid, dir));
        Ball { mid, rad }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let p = self.prec().max(o.prec());
        let (mid, dir) = Float::with_val_round(p, &self.mid * &o.mid, Round::Nearest);
        let am = up(Float::with_val(RAD_BITS, self.mid.abs_ref()));
        let bm = up(Float::with_val(RAD_BITS, o.mid.abs_ref()));
        let mut rad = mul_up(&am, &o.rad);
        rad = add_up(&rad, &mul_up(&bm, &self.rad));
        rad = add_up(&rad, &mul_up(&self.rad, &o.rad));
        rad = add_up(&rad, &ulp_err(&mid, dir));
        Ball { mid, rad }
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Ball) -> Option<Ball> {
        if o.contains_zero() {
            return None;
        }
        let p = self.prec().max(o.prec());
        let (mid, dir) = Float::with_val_round(p, &self.mid / &o.mid, Round::Nearest);
        // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
        let q = up(Float::with_val(RAD_BITS, mid.abs_ref()));
        let num = add_up(&self.rad, &mul_up(&q, &o.rad));
        let lo = Float::with_val_round(RAD_BITS, o.mid.abs_ref(), Round::Down).0;
        let den = Float::with_val_round(RAD_BITS, &lo - &o.rad, Round::Down).0;
        let mut rad = Float::with_val_round(RAD_BITS, &num / &den, Round::Up).0;
        rad = add_up(&rad, &ulp_err(&mid, dir));
        Some(Ball { mid, rad })
    }

    pub fn mul_int(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(k, self.prec()))
    }
}
