//! High-precision real plumbing shared by the transform, certification, and
//! quadrature modules: MPFR float helpers, a midpoint-radius ball type for
//! certified sign evaluation, and an exact Bernoulli-number cache.

use std::sync::Mutex;

use rug::float::Round;
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Precision used for radius bookkeeping. Radii only need a couple of
/// significant digits; what matters is that every radius operation rounds up.
pub const RAD_PREC: u32 = 64;

pub fn float_from_rational(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

pub fn float_zero(prec: u32) -> Float {
    Float::with_val(prec, 0)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// 2^e as a radius-precision float.
pub fn exp2(e: i32) -> Float {
    Float::with_val(RAD_PREC, Float::i_exp(1, e))
}

fn rad_up(mut f: Float) -> Float {
    f.set_prec_round(RAD_PREC, Round::Up);
    f.abs()
}

fn add_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.add_assign_round(b, Round::Up);
    r
}

fn mul_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.mul_assign_round(b, Round::Up);
    r
}

fn div_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.div_assign_round(b, Round::Up);
    r
}

fn sub_down(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.sub_assign_round(b, Round::Down);
    r
}

/// Upper bound on the rounding error of a midpoint value: |mid| * 2^(1-prec).
fn ulp_bound(mid: &Float) -> Float {
    let mut b = rad_up(mid.clone());
    b.mul_assign_round(&exp2(1 - mid.prec() as i32), Round::Up);
    b
}

/// Midpoint-radius interval scalar: the represented real lies within
/// `mid ± rad`. Midpoints carry the working precision; radii are
/// low-precision and every radius operation rounds upward, so enclosures
/// stay valid through elimination.
#[derive(Clone, Debug)]
pub struct Ball {
    pub mid: Float,
    pub rad: Float,
}

impl Ball {
    pub fn exact(mid: Float) -> Self {
        Ball {
            rad: Float::with_val(RAD_PREC, 0),
            mid,
        }
    }

    /// Ball from a midpoint and a relative error bound.
    pub fn from_relative(mid: Float, relbound: &Float) -> Self {
        let rad = mul_up(&rad_up(mid.clone()), relbound);
        Ball { mid, rad }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let mid = Float::with_val(prec, r);
        let rad = ulp_bound(&mid);
        Ball { mid, rad }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let mid = Float::with_val(self.mid.prec(), &self.mid + &other.mid);
        let rad = add_up(&add_up(&self.rad, &other.rad), &ulp_bound(&mid));
        Ball { mid, rad }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        let mid = Float::with_val(self.mid.prec(), &self.mid - &other.mid);
        let rad = add_up(&add_up(&self.rad, &other.rad), &ulp_bound(&mid));
        Ball { mid, rad }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let mid = Float::with_val(self.mid.prec(), &self.mid * &other.mid);
        let cross = add_up(
            &mul_up(&rad_up(self.mid.clone()), &other.rad),
            &mul_up(&rad_up(other.mid.clone()), &self.rad),
        );
        let rad = add_up(
            &add_up(&cross, &mul_up(&self.rad, &other.rad)),
            &ulp_bound(&mid),
        );
        Ball { mid, rad }
    }

    /// Division; fails (returns None) when the divisor ball straddles zero.
    pub fn div(&self, other: &Ball) -> Option<Ball> {
        let denom_low = sub_down(&rad_up(other.mid.clone()), &other.rad);
        if !(denom_low.is_sign_positive() && !denom_low.is_zero()) {
            return None;
        }
        let mid = Float::with_val(self.mid.prec(), &self.mid / &other.mid);
        // |a/b - mid| <= (rad_a + |mid| rad_b) / (|b| - rad_b) + ulp
        let num = add_up(&self.rad, &mul_up(&rad_up(mid.clone()), &other.rad));
        let rad = add_up(&div_up(&num, &denom_low), &ulp_bound(&mid));
        Some(Ball { mid, rad })
    }

    pub fn contains_zero(&self) -> bool {
        let m = rad_up(self.mid.clone());
        m <= self.rad
    }

    /// Sign certified against `safety * rad`: +1, -1, or 0 (undecided).
    pub fn certified_sign(&self, safety: u32) -> i32 {
        let bound = mul_up(&self.rad, &Float::with_val(RAD_PREC, safety));
        let m = rad_up(self.mid.clone());
        if m > bound && self.mid.is_sign_positive() {
            1
        } else if m > bound && self.mid.is_sign_negative() {
            -1
        } else {
            0
        }
    }
}

/// `base^c` for a positive exact rational base with a certified relative
/// error bound, computed as `exp(c * ln base)` at `prec` bits. The bound
/// `(c*|ln base| + 4) * 2^-prec` follows from first-order propagation of the
/// rounding of `ln`, the multiply, and `exp`.
pub fn pow_with_bound(base: &Rational, c: f64, prec: u32) -> Result<(Float, Float)> {
    if base.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::domain("pow_with_bound: base must be positive"));
    }
    if !(c > 0.0) {
        return Err(Error::domain("pow_with_bound: exponent must be positive"));
    }
    let b = Float::with_val(prec + 16, base);
    let ln_b = b.ln();
    let exponent = Float::with_val(prec + 16, &ln_b * &Float::with_val(53, c));
    let value = Float::with_val(prec, exponent.exp());
    let mut mag = rad_up(ln_b);
    mag.mul_assign_round(&Float::with_val(RAD_PREC, c.abs()), Round::Up);
    mag.add_assign_round(&Float::with_val(RAD_PREC, 4), Round::Up);
    let relbound = mul_up(&mag, &exp2(-(prec as i32)));
    Ok((value, relbound))
}

/// Global cache of even-index Bernoulli numbers `B_2, B_4, ...`, extended on
/// demand through the tangent-number recurrence (integer-only, no gcd
/// churn): `T_1 = 1`, `T_k = (k-1) T_{k-1}`, then the in-place sweep
/// `T_j <- (j-k) T_{j-1} + (j-k+2) T_j`, and finally
/// `B_2n = (-1)^(n-1) * 2n * T_n / (2^2n (2^2n - 1))`.
static BERNOULLI_EVEN: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// `B_{2j}` for `j >= 1`, exact.
pub fn bernoulli_even(j: usize) -> Rational {
    assert!(j >= 1);
    let mut cache = BERNOULLI_EVEN.lock().unwrap();
    if cache.len() < j {
        let n = (j + 16).max(cache.len() * 2);
        let mut t: Vec<Integer> = Vec::with_capacity(n + 1);
        t.push(Integer::new()); // unused index 0
        t.push(Integer::from(1));
        for k in 2..=n {
            let prev = t[k - 1].clone();
            t.push(prev * Integer::from(k as u32 - 1));
        }
        for k in 2..=n {
            for idx in k..=n {
                let a = &t[idx - 1] * Integer::from((idx - k) as u32);
                let b = &t[idx] * Integer::from((idx - k + 2) as u32);
                t[idx] = a + b;
            }
        }
        cache.clear();
        for m in 1..=n {
            let two_2m = Integer::from(1) << (2 * m as u32);
            let denom = &two_2m * (two_2m.clone() - Integer::from(1));
            let mut num = &t[m] * Integer::from(2 * m as u32);
            if m % 2 == 0 {
                num = -num;
            }
            cache.push(Rational::from((num, denom)));
        }
    }
    cache[j - 1].clone()
}

/// Decimal rendering used by reports: round-trippable 40 significant digits.
pub fn decimal_string(f: &Float) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let (sign, digits, exp) = f.to_sign_string_exp(10, Some(40));
    let sign = if sign { "-" } else { "" };
    format!("{sign}0.{digits}e{}", exp.unwrap_or(0))
}

/// Relative difference |a - b| / max(|b|, tiny), as an f64 for reporting.
pub fn rel_diff(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = Float::with_val(prec, b).abs();
    if scale.is_zero() {
        diff
    } else {
        diff / scale
    }
}
