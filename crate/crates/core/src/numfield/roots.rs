//! Certified complex root enclosures.
//!
//! Approximations come from Aberth-Ehrlich iteration (first in `f64`, then
//! in big fixed-point arithmetic). Each approximation `z_i` is then wrapped
//! in the Weierstrass disk of radius `n |p(z_i) / prod_{j != i} (z_i - z_j)|`;
//! when these disks are pairwise disjoint each contains exactly one root.
//! The certification itself is exact integer arithmetic on dyadic centers.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::{Error, Result};

/// Disk `|z - center| <= radius` containing exactly one root, with center
/// `(re + i*im) / 2^bits` and radius `radius / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosure {
    pub re: BigInt,
    pub im: BigInt,
    pub radius: BigInt,
    pub bits: u32,
    /// The enclosed root is certified real.
    pub real: bool,
}

impl RootEnclosure {
    pub fn center_f64(&self) -> (f64, f64) {
        (scaled_f64(&self.re, self.bits), scaled_f64(&self.im, self.bits))
    }

    pub fn radius_f64(&self) -> f64 {
        scaled_f64(&self.radius, self.bits)
    }

    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Certified comparison of `|root|` with 1, if the disk avoids the unit circle.
    pub fn cmp_unit_circle(&self) -> Option<Ordering> {
        let one = BigInt::one() << self.bits;
        let n = self.norm_sq();
        if self.radius < one {
            let inner = &one - &self.radius;
            if n < &inner * &inner {
                return Some(Ordering::Less);
            }
        }
        let outer = &one + &self.radius;
        if n > &outer * &outer {
            return Some(Ordering::Greater);
        }
        None
    }

    /// True when the two closed disks are disjoint.
    pub fn disjoint(&self, other: &RootEnclosure) -> bool {
        assert_eq!(self.bits, other.bits);
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let s = &self.radius + &other.radius;
        &dr * &dr + &di * &di > &s * &s
    }
}

impl Serialize for RootEnclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (re, im) = self.center_f64();
        let mut st = s.serialize_struct("RootEnclosure", 6)?;
        st.serialize_field("center", &[re, im])?;
        st.serialize_field("radius", &self.radius_f64())?;
        st.serialize_field("bits", &self.bits)?;
        st.serialize_field("re_hex", &self.re.to_str_radix(16))?;
        st.serialize_field("im_hex", &self.im.to_str_radix(16))?;
        st.serialize_field("radius_hex", &self.radius.to_str_radix(16))?;
        st.serialize_field("real", &self.real)?;
        st.end()
    }
}

pub(crate) fn scaled_f64(x: &BigInt, bits: u32) -> f64 {
    let b = x.bits();
    if b > 1000 {
        let shift = b - 60;
        let top = (x >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - bits as i32)
    } else {
        x.to_f64().unwrap_or(0.0) / 2f64.powi(bits as i32)
    }
}

trait AberthNum:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn log2_abs(&self) -> f64;
    fn one_like(&self) -> Self;
}

impl AberthNum for Complex64 {
    fn log2_abs(&self) -> f64 {
        self.norm().log2()
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
}

/// Gaussian dyadic `(re + i*im) / 2^bits` with truncating arithmetic.
#[derive(Clone, Debug)]
struct CFix {
    re: BigInt,
    im: BigInt,
    bits: u32,
}

impl CFix {
    fn from_complex(z: Complex64, bits: u32) -> Self {
        let conv = |x: f64| -> BigInt {
            let (m, e) = frexp(x);
            let mant = BigInt::from((m * 9007199254740992.0) as i64); // 2^53
            let shift = e - 53 + bits as i32;
            if shift >= 0 {
                mant << shift as u32
            } else {
                mant >> (-shift) as u32
            }
        };
        CFix { re: conv(z.re), im: conv(z.im), bits }
    }

    fn with_bits(&self, bits: u32) -> Self {
        let adj = |x: &BigInt| -> BigInt {
            if bits >= self.bits {
                x << (bits - self.bits)
            } else {
                x >> (self.bits - bits)
            }
        };
        CFix { re: adj(&self.re), im: adj(&self.im), bits }
    }
}

fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (0.0, 0);
    }
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x / 2f64.powi(e);
    (m, e)
}

impl Add for CFix {
    type Output = CFix;
    fn add(self, o: CFix) -> CFix {
        CFix { re: self.re + o.re, im: self.im + o.im, bits: self.bits }
    }
}

impl Sub for CFix {
    type Output = CFix;
    fn sub(self, o: CFix) -> CFix {
        CFix { re: self.re - o.re, im: self.im - o.im, bits: self.bits }
    }
}

impl Mul for CFix {
    type Output = CFix;
    fn mul(self, o: CFix) -> CFix {
        let re = (&self.re * &o.re - &self.im * &o.im) >> self.bits;
        let im = (&self.re * &o.im + &self.im * &o.re) >> self.bits;
        CFix { re, im, bits: self.bits }
    }
}

impl Div for CFix {
    type Output = CFix;
    fn div(self, o: CFix) -> CFix {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            // coincident iterates; push far away so the next sweep separates them
            let big = BigInt::one() << (2 * self.bits);
            return CFix { re: big.clone(), im: big, bits: self.bits };
        }
        let re = ((&self.re * &o.re + &self.im * &o.im) << self.bits) / &den;
        let im = ((&self.im * &o.re - &self.re * &o.im) << self.bits) / &den;
        CFix { re, im, bits: self.bits }
    }
}

impl AberthNum for CFix {
    fn log2_abs(&self) -> f64 {
        let m = self.re.abs().max(self.im.abs());
        if m.is_zero() {
            f64::NEG_INFINITY
        } else {
            m.bits() as f64 - self.bits as f64
        }
    }
    fn one_like(&self) -> Self {
        CFix { re: BigInt::one() << self.bits, im: BigInt::zero(), bits: self.bits }
    }
}

fn horner<T: AberthNum>(coeffs: &[T], z: &T) -> T {
    let mut acc = coeffs.last().unwrap().clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * z.clone() + c.clone();
    }
    acc
}

/// One Gauss-Seidel Aberth sweep; returns `log2` of the largest correction.
fn aberth_sweep<T: AberthNum>(p: &[T], dp: &[T], zs: &mut [T]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..zs.len() {
        let zi = zs[i].clone();
        let pv = horner(p, &zi);
        if pv.log2_abs() == f64::NEG_INFINITY {
            continue;
        }
        let w = pv / horner(dp, &zi);
        let one = zi.one_like();
        let mut s = zi.clone() - zi.clone();
        for (j, zj) in zs.iter().enumerate() {
            if j != i {
                s = s + one.clone() / (zi.clone() - zj.clone());
            }
        }
        let corr = w.clone() / (one - w * s);
        worst = worst.max(corr.log2_abs());
        zs[i] = zi - corr;
    }
    worst
}

fn float_seeds(coeffs: &[BigInt]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let c: Vec<Complex64> = coeffs.iter().map(|a| Some(Complex64::new(a.to_f64()?, 0.0))).collect::<Option<_>>()?;
    if c.iter().any(|z| !z.re.is_finite()) {
        return None;
    }
    let dc: Vec<Complex64> = (1..=n).map(|k| c[k] * k as f64).collect();
    // Fujiwara bound
    let radius = (1..=n)
        .map(|k| (c[n - k].norm() / c[n].norm()).powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = radius.max(1e-3);
    let mut zs: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.7))
        .collect();
    for _ in 0..2000 {
        let worst = aberth_sweep(&c, &dc, &mut zs);
        if zs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        if worst < -45.0 {
            break;
        }
    }
    Some(zs)
}

/// Exact Weierstrass radii (in units of `2^-bits`) for the given centers, or
/// `None` if two centers coincide.
fn weierstrass_radii(coeffs: &[BigInt], zs: &[CFix]) -> Option<Vec<BigInt>> {
    let n = coeffs.len() - 1;
    let p = zs[0].bits;
    let nn = BigInt::from((n * n) as u64);
    let mut radii = Vec::with_capacity(n);
    for (i, zi) in zs.iter().enumerate() {
        // S = p(z) * 2^(p n), a Gaussian integer
        let (mut sr, mut si) = (coeffs[n].clone(), BigInt::zero());
        for k in (0..n).rev() {
            let nr = &sr * &zi.re - &si * &zi.im;
            let ni = &sr * &zi.im + &si * &zi.re;
            sr = nr + (&coeffs[k] << (p as usize * (n - k)));
            si = ni;
        }
        let mut prod = BigInt::one();
        for (j, zj) in zs.iter().enumerate() {
            if j != i {
                let dr = &zi.re - &zj.re;
                let di = &zi.im - &zj.im;
                prod *= &dr * &dr + &di * &di;
            }
        }
        if prod.is_zero() {
            return None;
        }
        let num = &nn * (&sr * &sr + &si * &si);
        let ceil = (&num + &prod - 1u32) / &prod;
        radii.push(ceil.sqrt() + 1u32);
    }
    Some(radii)
}

fn try_certify(coeffs: &[BigInt], zs: &[CFix], max_radius_log2: i64) -> Option<Vec<RootEnclosure>> {
    let radii = weierstrass_radii(coeffs, zs)?;
    let bits = zs[0].bits;
    let limit = if max_radius_log2 + bits as i64 >= 0 {
        BigInt::one() << (max_radius_log2 + bits as i64) as u64
    } else {
        BigInt::zero()
    };
    let mut encl: Vec<RootEnclosure> = zs
        .iter()
        .zip(radii)
        .map(|(z, r)| RootEnclosure { re: z.re.clone(), im: z.im.clone(), radius: r, bits, real: false })
        .collect();
    if encl.iter().any(|e| e.radius > limit) {
        return None;
    }
    for i in 0..encl.len() {
        for j in i + 1..encl.len() {
            if !encl[i].disjoint(&encl[j]) {
                return None;
            }
        }
    }
    // disks touching the real axis: recenter on it and re-check isolation
    let mut moved = encl.clone();
    for e in moved.iter_mut() {
        if e.im.abs() <= e.radius {
            e.radius = &e.radius + e.im.abs();
            e.im = BigInt::zero();
            e.real = true;
        }
    }
    for i in 0..moved.len() {
        if !moved[i].real {
            continue;
        }
        let isolated = (0..moved.len()).all(|j| j == i || moved[i].disjoint(&moved[j]));
        if isolated && moved[i].radius <= limit {
            encl[i] = moved[i].clone();
        }
    }
    Some(encl)
}

/// Certified enclosures of all complex roots of the squarefree monic integer
/// polynomial `coeffs` (lowest degree first), each of radius at most
/// `2^-(precision_bits/2)`.
pub fn certified_roots(coeffs: &[BigInt], precision_bits: u32) -> Result<Vec<RootEnclosure>> {
    let n = coeffs.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
        Error::InvalidField("root finding needs degree >= 1".into())
    })?;
    if n == 1 {
        let bits = precision_bits;
        let re = -(&coeffs[0] << bits) / &coeffs[1];
        return Ok(vec![RootEnclosure { re, im: BigInt::zero(), radius: BigInt::zero(), bits, real: true }]);
    }
    let max_radius_log2 = -((precision_bits / 2) as i64);
    let seeds = float_seeds(coeffs).unwrap_or_else(|| {
        (0..n)
            .map(|k| Complex64::from_polar(1.5, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.7))
            .collect()
    });
    let mut bits = precision_bits.max(64) + 32;
    let mut zs: Vec<CFix> = seeds.iter().map(|&z| CFix::from_complex(z, bits)).collect();
    let cap = (precision_bits.max(64) + 32) * 16;
    while bits <= cap {
        let cs: Vec<CFix> = coeffs
            .iter()
            .map(|a| CFix { re: a << bits, im: BigInt::zero(), bits })
            .collect();
        let dcs: Vec<CFix> = (1..=n)
            .map(|k| CFix { re: (&coeffs[k] * BigInt::from(k)) << bits, im: BigInt::zero(), bits })
            .collect();
        for _ in 0..400 {
            let worst = aberth_sweep(&cs, &dcs, &mut zs);
            if worst < -(bits as f64) + 12.0 {
                break;
            }
        }
        if let Some(mut encl) = try_certify(coeffs, &zs, max_radius_log2) {
            encl.sort_by(|a, b| b.re.cmp(&a.re).then_with(|| b.im.cmp(&a.im)));
            return Ok(encl);
        }
        bits *= 2;
        zs = zs.iter().map(|z| z.with_bits(bits)).collect();
    }
    Err(Error::PrecisionExhausted(format!(
        "root isolation did not certify below {cap} working bits"
    )))
}
