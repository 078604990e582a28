//! Truncated arithmetic in the totally ramified extension defined by
//! `pi^(p-1) = -p`, with explicit precision carried on every value.
//!
//! A value is `pi^shift * sum_{i < p-1} c_i pi^i`, known modulo
//! `pi^prec`; coefficient `i` is therefore stored reduced modulo
//! `p^ceil((prec - shift - i)/(p-1))`. The pi-adic order of a nonzero
//! stored value is exactly `min_i ((p-1) v_p(c_i) + i + shift)` because the
//! exponents `i` are distinct modulo `p-1`: no cross-coefficient
//! cancellation is possible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PiAdic {
    p: u32,
    shift: i64,
    coeffs: Vec<BigInt>,
    prec: i64,
}

impl PiAdic {
    fn d(&self) -> i64 {
        (self.p - 1) as i64
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn zero(p: u32, prec: i64) -> Self {
        PiAdic {
            p,
            shift: 0,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
            prec,
        }
    }

    pub fn one(p: u32, prec: i64) -> Self {
        Self::from_bigint(p, BigInt::one(), prec)
    }

    pub fn from_bigint(p: u32, n: BigInt, prec: i64) -> Self {
        let mut c = vec![BigInt::zero(); (p - 1) as usize];
        c[0] = n;
        let mut v = PiAdic {
            p,
            shift: 0,
            coeffs: c,
            prec,
        };
        v.reduce();
        v
    }

    pub fn from_i64(p: u32, n: i64, prec: i64) -> Self {
        Self::from_bigint(p, BigInt::from(n), prec)
    }

    pub fn pi(p: u32, prec: i64) -> Self {
        if p == 2 {
            // pi = -2 when the ramification degree is one
            return Self::from_bigint(2, BigInt::from(-2), prec);
        }
        let mut c = vec![BigInt::zero(); (p - 1) as usize];
        c[1] = BigInt::one();
        let mut v = PiAdic {
            p,
            shift: 0,
            coeffs: c,
            prec,
        };
        v.reduce();
        v
    }

    /// Embed an exact rational with arbitrary `p`-part.
    pub fn from_ratio(p: u32, num: &BigInt, den: &BigInt, prec: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidConfig("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero(p, prec));
        }
        let pb = BigInt::from(p);
        let (vn, n1) = strip_p(num.clone(), &pb);
        let (vd, d1) = strip_p(den.clone(), &pb);
        let v = vn - vd;
        let d = (p - 1) as i64;
        let shift = v * d;
        // relative precision needed for the unit part
        let rel = (prec - shift).max(1);
        let modulus = pb.pow(div_ceil_i64(rel, d) as u32 + 1);
        let dinv = mod_inverse(&d1, &modulus)
            .ok_or_else(|| Error::InvalidConfig("denominator not invertible".into()))?;
        // p^v = (-1)^v pi^(v(p-1)): odd p-powers flip the sign
        let mut unit = (n1 * dinv).mod_floor(&modulus);
        if v % 2 != 0 {
            unit = -unit;
        }
        let mut c = vec![BigInt::zero(); (p - 1) as usize];
        c[0] = unit;
        let mut out = PiAdic {
            p,
            shift,
            coeffs: c,
            prec,
        };
        out.reduce();
        Ok(out)
    }

    /// Modulus exponent for coefficient index `i` at the current shift.
    fn modulus_exp(&self, i: usize) -> i64 {
        div_ceil_i64(self.prec - self.shift - i as i64, self.d()).max(0)
    }

    fn reduce(&mut self) {
        let p = BigInt::from(self.p);
        for i in 0..self.coeffs.len() {
            let e = self.modulus_exp(i);
            if e == 0 {
                self.coeffs[i] = BigInt::zero();
            } else {
                let m = p.pow(e as u32);
                self.coeffs[i] = self.coeffs[i].mod_floor(&m);
            }
        }
    }

    /// Bring the representation to its canonical form: the shift equals the
    /// order of the value (or zero for a value that vanishes at precision).
    /// Without this step, shifts drift downward across compositions and the
    /// per-coefficient moduli grow without bound.
    fn normalize(&mut self) {
        self.reduce();
        match self.ord() {
            None => {
                self.shift = 0;
                for c in self.coeffs.iter_mut() {
                    *c = BigInt::zero();
                }
            }
            Some(o) => {
                let w = o - self.shift;
                if w > 0 {
                    let moduli: Vec<BigInt> = (0..self.coeffs.len())
                        .map(|i| {
                            let e = self.modulus_exp(i);
                            if e == 0 {
                                BigInt::zero()
                            } else {
                                BigInt::from(self.p).pow(e as u32)
                            }
                        })
                        .collect();
                    Self::unshift_vec(&mut self.coeffs, self.p, w, &moduli);
                    self.shift = o;
                    self.reduce();
                }
            }
        }
    }

    /// Multiply the coefficient vector by `pi^k` in place (k >= 0).
    fn shift_vec(coeffs: &mut Vec<BigInt>, p: u32, k: i64) {
        let d = (p - 1) as usize;
        let minus_p = BigInt::from(-(p as i64));
        for _ in 0..k {
            let top = coeffs[d - 1].clone();
            for i in (1..d).rev() {
                coeffs[i] = coeffs[i - 1].clone();
            }
            coeffs[0] = top * &minus_p;
        }
    }

    /// Divide the coefficient vector by `pi^k`; the value must be divisible
    /// (the constant term must be divisible by `p` at each step, which is
    /// guaranteed when the represented value has pi-order at least `k`).
    fn unshift_vec(coeffs: &mut Vec<BigInt>, p: u32, k: i64, moduli: &[BigInt]) {
        let d = (p - 1) as usize;
        let pb = BigInt::from(p);
        // lift symmetrically so mathematical divisibility shows in residues
        for (i, c) in coeffs.iter_mut().enumerate() {
            if !moduli[i].is_zero() {
                let half = &moduli[i] / 2;
                if &*c > &half {
                    *c -= &moduli[i];
                }
            }
        }
        for _ in 0..k {
            let c0 = coeffs[0].clone();
            debug_assert!((&c0 % &pb).is_zero(), "unshift of non-divisible value");
            for i in 0..d - 1 {
                coeffs[i] = coeffs[i + 1].clone();
            }
            coeffs[d - 1] = -(c0 / &pb);
        }
    }

    fn aligned(&self, target_shift: i64) -> Vec<BigInt> {
        debug_assert!(target_shift <= self.shift);
        let mut c = self.coeffs.clone();
        Self::shift_vec(&mut c, self.p, self.shift - target_shift);
        c
    }

    pub fn add(&self, other: &PiAdic) -> PiAdic {
        debug_assert_eq!(self.p, other.p);
        let shift = self.shift.min(other.shift);
        let a = self.aligned(shift);
        let b = other.aligned(shift);
        let coeffs: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let mut out = PiAdic {
            p: self.p,
            shift,
            coeffs,
            prec: self.prec.min(other.prec),
        };
        out.normalize();
        out
    }

    pub fn neg(&self) -> PiAdic {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -c.clone();
        }
        out.reduce();
        out
    }

    pub fn sub(&self, other: &PiAdic) -> PiAdic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PiAdic) -> PiAdic {
        debug_assert_eq!(self.p, other.p);
        let d = (self.p - 1) as usize;
        let mut out = vec![BigInt::zero(); 2 * d];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] += x * y;
            }
        }
        let minus_p = BigInt::from(-(self.p as i64));
        for k in (d..2 * d).rev() {
            if !out[k].is_zero() {
                let v = out[k].clone() * &minus_p;
                out[k - d] += v;
                out[k] = BigInt::zero();
            }
        }
        out.truncate(d);
        // precision: x y + x O(pi^pb) + y O(pi^pa)
        let oa = self.ord().unwrap_or(self.prec);
        let ob = other.ord().unwrap_or(other.prec);
        let prec = (oa + other.prec).min(ob + self.prec);
        let mut res = PiAdic {
            p: self.p,
            shift: self.shift + other.shift,
            coeffs: out,
            prec,
        };
        res.normalize();
        res
    }

    /// Exact multiplication by `p^k` for `k` of either sign (`p = -pi^(p-1)`
    /// is exact in this representation).
    pub fn mul_p_pow(&self, k: i64) -> PiAdic {
        let mut out = self.clone();
        out.shift += k * self.d();
        out.prec += k * self.d();
        if k % 2 != 0 {
            for c in out.coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
        out.normalize();
        out
    }

    /// Exact pi-adic order of the stored value, or `None` when it vanishes
    /// at the current precision.
    pub fn ord(&self) -> Option<i64> {
        let pb = BigInt::from(self.p);
        let mut best: Option<i64> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (v, _) = strip_p(c.clone(), &pb);
            let o = self.d() * v + i as i64 + self.shift;
            if o < self.prec {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        best
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.ord().is_none()
    }

    /// Invert a value of finite order. The result has absolute precision
    /// `prec - 2 ord`.
    pub fn inv(&self) -> Result<PiAdic> {
        let o = self
            .ord()
            .ok_or_else(|| Error::PrecisionExhausted("inverting zero at precision".into()))?;
        let rel = self.prec - o;
        if rel < 1 {
            return Err(Error::PrecisionExhausted(
                "no significant digits left for inversion".into(),
            ));
        }
        // normalize to a unit at shift zero
        let mut unit = self.clone();
        let w = o - unit.shift;
        debug_assert!(w >= 0);
        let moduli: Vec<BigInt> = (0..unit.coeffs.len())
            .map(|i| {
                let e = unit.modulus_exp(i);
                if e == 0 {
                    BigInt::zero()
                } else {
                    BigInt::from(unit.p).pow(e as u32)
                }
            })
            .collect();
        Self::unshift_vec(&mut unit.coeffs, unit.p, w, &moduli);
        unit.shift = 0;
        unit.prec = rel;
        unit.reduce();
        let pb = BigInt::from(unit.p);
        let c0 = unit.coeffs[0].clone();
        let rel_mod = pb.pow(div_ceil_i64(rel, unit.d()) as u32 + 1);
        let y0 = mod_inverse(&c0.mod_floor(&rel_mod), &rel_mod)
            .ok_or_else(|| Error::PrecisionExhausted("unit has non-invertible head".into()))?;
        let mut y = PiAdic::from_bigint(unit.p, y0, rel);
        for _ in 0..64 {
            let e = PiAdic::one(unit.p, rel).sub(&unit.mul(&y));
            if e.is_zero_at_precision() {
                break;
            }
            y = y.add(&y.mul(&e));
        }
        debug_assert!(PiAdic::one(unit.p, rel).sub(&unit.mul(&y)).is_zero_at_precision());
        y.shift -= o;
        y.prec = rel - o;
        Ok(y)
    }

    pub fn pow(&self, n: i64) -> Result<PiAdic> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut result = PiAdic::one(self.p, self.prec + self.ord().unwrap_or(0) * n.max(1));
        let mut base = self.clone();
        let mut m = n;
        while m > 0 {
            if m & 1 == 1 {
                result = result.mul(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Order of the difference, clamped to the joint precision: the number
    /// of pi-adic digits on which the two values provably agree.
    pub fn agreement(&self, other: &PiAdic) -> i64 {
        let diff = self.sub(other);
        diff.ord().unwrap_or(diff.prec)
    }

    /// Congruence modulo `pi^k`, reported together with the precision at
    /// which the comparison was possible.
    pub fn congruent(&self, other: &PiAdic, k: i64) -> (bool, i64) {
        let diff = self.sub(other);
        let avail = diff.prec;
        let target = k.min(avail);
        let ok = match diff.ord() {
            None => true,
            Some(o) => o >= target,
        };
        (ok, avail)
    }
}

fn strip_p(mut n: BigInt, p: &BigInt) -> (i64, BigInt) {
    if n.is_zero() {
        return (0, n);
    }
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        v += 1;
        n = q;
    }
}

fn div_ceil_i64(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a <= 0 {
        // toward zero is fine: nonpositive precisions clamp to zero anyway
        return (a + b - 1).div_euclid(b).max(0).max((a + b - 1) / b);
    }
    (a + b - 1) / b
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd != BigInt::one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn primes() -> [u32; 3] {
        [2, 3, 5]
    }

    #[test]
    fn pi_power_relation() {
        for p in primes() {
            let prec = 30;
            let pi = PiAdic::pi(p, prec);
            let lhs = pi.pow((p - 1) as i64).unwrap();
            let rhs = PiAdic::from_i64(p, -(p as i64), prec);
            let (ok, _) = lhs.congruent(&rhs, prec);
            assert!(ok, "pi^(p-1) = -p fails for p={p}");
            assert_eq!(pi.ord(), Some(1));
        }
    }

    #[test]
    fn ring_axioms_on_sample_triples() {
        for p in primes() {
            let prec = 24;
            let vals = [
                PiAdic::from_i64(p, 7, prec),
                PiAdic::pi(p, prec),
                PiAdic::from_ratio(p, &BigInt::from(3), &BigInt::from((p + 1) as i64), prec)
                    .unwrap(),
                PiAdic::pi(p, prec).mul(&PiAdic::from_i64(p, -2, prec)),
            ];
            for a in &vals {
                for b in &vals {
                    for c in &vals {
                        let ab_c = a.mul(b).mul(c);
                        let a_bc = a.mul(&b.mul(c));
                        let (ok, _) = ab_c.congruent(&a_bc, 20);
                        assert!(ok, "associativity p={p}");
                        let dist = a.mul(&b.add(c));
                        let dist2 = a.mul(b).add(&a.mul(c));
                        let (ok, _) = dist.congruent(&dist2, 20);
                        assert!(ok, "distributivity p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn ord_is_additive() {
        for p in primes() {
            let prec = 30;
            let a = PiAdic::pi(p, prec).mul(&PiAdic::from_i64(p, 3, prec));
            let b = PiAdic::from_i64(p, p as i64, prec);
            let expected_b = (p - 1) as i64;
            assert_eq!(b.ord(), Some(expected_b));
            assert_eq!(
                a.mul(&b).ord(),
                Some(a.ord().unwrap() + expected_b),
                "p={p}"
            );
        }
    }

    #[test]
    fn rational_embedding_and_inverse() {
        for p in primes() {
            let prec = 30;
            // 1/p has negative order
            let x = PiAdic::from_ratio(p, &BigInt::one(), &BigInt::from(p as i64), prec).unwrap();
            assert_eq!(x.ord(), Some(-((p - 1) as i64)));
            let y = x.inv().unwrap();
            let (ok, _) = y.congruent(&PiAdic::from_i64(p, p as i64, y.precision()), 20);
            assert!(ok);
            // unit inversion round-trips
            let u = PiAdic::from_i64(p, (p + 3) as i64, prec);
            let ui = u.inv().unwrap();
            let (ok, _) = u.mul(&ui).congruent(&PiAdic::one(p, prec), 24);
            assert!(ok);
        }
    }

    #[test]
    fn precision_loss_under_negative_powers() {
        let p = 3;
        let prec = 20;
        let pi = PiAdic::pi(p, prec);
        let inv = pi.inv().unwrap();
        assert_eq!(inv.ord(), Some(-1));
        // inverting an order-1 value costs two digits of absolute precision
        assert_eq!(inv.precision(), prec - 2);
        let prod = pi.mul(&inv);
        let (ok, avail) = prod.congruent(&PiAdic::one(p, prec), 18);
        assert!(ok);
        assert!(avail >= 18);
    }

    #[test]
    fn p_power_scaling_is_exact() {
        for p in primes() {
            let prec = 24;
            let x = PiAdic::from_i64(p, 7, prec);
            let scaled = x.mul_p_pow(3);
            assert_eq!(scaled.ord(), Some(3 * (p - 1) as i64));
            let back = scaled.mul_p_pow(-3);
            let (ok, _) = back.congruent(&x, 20);
            assert!(ok);
        }
    }
}
