//! Fourier-Motzkin elimination over exact integers, with two consumers:
//! real feasibility of a linear system (strict inequalities allowed) and
//! lattice-point enumeration of a bounded region.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{content, dot};

/// `coeffs . x >= rhs`, or `> rhs` when `strict`.
#[derive(Clone, Debug)]
pub struct Ineq {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
    pub strict: bool,
}

impl Ineq {
    pub fn ge(coeffs: Vec<BigInt>, rhs: BigInt) -> Self {
        Ineq {
            coeffs,
            rhs,
            strict: false,
        }
    }

    pub fn gt(coeffs: Vec<BigInt>, rhs: BigInt) -> Self {
        Ineq {
            coeffs,
            rhs,
            strict: true,
        }
    }

    fn normalize(&mut self) {
        let mut g = content(&self.coeffs);
        g = g.gcd(&self.rhs);
        if g > BigInt::from(1) {
            for c in self.coeffs.iter_mut() {
                *c = &*c / &g;
            }
            self.rhs = &self.rhs / &g;
        }
    }

    fn key(&self) -> (Vec<BigInt>, BigInt, bool) {
        (self.coeffs.clone(), self.rhs.clone(), self.strict)
    }
}

#[derive(Clone, Debug)]
pub struct IneqSystem {
    pub nvars: usize,
    pub ineqs: Vec<Ineq>,
}

const SYSTEM_CAP: usize = 20_000;

impl IneqSystem {
    pub fn new(nvars: usize) -> Self {
        IneqSystem {
            nvars,
            ineqs: Vec::new(),
        }
    }

    pub fn push(&mut self, ineq: Ineq) {
        debug_assert_eq!(ineq.coeffs.len(), self.nvars);
        self.ineqs.push(ineq);
    }

    /// Add the equality `coeffs . x = rhs` as a pair of inequalities.
    pub fn push_eq(&mut self, coeffs: Vec<BigInt>, rhs: BigInt) {
        self.push(Ineq::ge(coeffs.clone(), rhs.clone()));
        self.push(Ineq::ge(
            coeffs.iter().map(|c| -c.clone()).collect(),
            -rhs,
        ));
    }

    fn dedup(&mut self) {
        let mut seen = std::collections::BTreeSet::new();
        self.ineqs.retain_mut(|i| {
            i.normalize();
            seen.insert(i.key())
        });
    }

    /// Eliminate variable `k`, producing a system over the remaining
    /// variables (coefficients for `k` become zero but the width is kept so
    /// indices stay stable).
    fn eliminate(&self, k: usize) -> Result<IneqSystem> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut out = IneqSystem::new(self.nvars);
        for i in &self.ineqs {
            match i.coeffs[k].sign() {
                num_bigint::Sign::Plus => pos.push(i),
                num_bigint::Sign::Minus => neg.push(i),
                num_bigint::Sign::NoSign => out.ineqs.push(i.clone()),
            }
        }
        for p in &pos {
            for n in &neg {
                let a = p.coeffs[k].clone();
                let b = -n.coeffs[k].clone();
                // b * p + a * n eliminates x_k; both multipliers positive
                let coeffs: Vec<BigInt> = (0..self.nvars)
                    .map(|c| &b * &p.coeffs[c] + &a * &n.coeffs[c])
                    .collect();
                let rhs = &b * &p.rhs + &a * &n.rhs;
                let mut i = Ineq {
                    coeffs,
                    rhs,
                    strict: p.strict || n.strict,
                };
                i.normalize();
                out.ineqs.push(i);
                if out.ineqs.len() > SYSTEM_CAP {
                    return Err(Error::SystemTooLarge(out.ineqs.len()));
                }
            }
        }
        out.dedup();
        Ok(out)
    }

    /// Exact feasibility over the reals (Fourier-Motzkin is complete for
    /// linear systems with strict and non-strict inequalities).
    pub fn real_feasible(&self) -> Result<bool> {
        let mut sys = self.clone();
        sys.dedup();
        for k in (0..self.nvars).rev() {
            sys = sys.eliminate(k)?;
        }
        for i in &sys.ineqs {
            debug_assert!(i.coeffs.iter().all(|c| c.is_zero()));
            let zero_ok = if i.strict {
                BigInt::zero() > i.rhs
            } else {
                BigInt::zero() >= i.rhs
            };
            if !zero_ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Enumerate all integer points, in lexicographic order. The region must
    /// be bounded; an unbounded direction is reported as an error. Strict
    /// inequalities are tightened to `>= rhs+1` first (valid on integers).
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>> {
        let mut base = self.clone();
        for i in base.ineqs.iter_mut() {
            if i.strict {
                i.strict = false;
                i.rhs += 1;
            }
        }
        base.dedup();
        // levels[k] = system over variables 0..=k
        let mut levels: Vec<IneqSystem> = Vec::with_capacity(self.nvars);
        let mut cur = base;
        for k in (0..self.nvars).rev() {
            levels.push(cur.clone());
            cur = cur.eliminate(k)?;
        }
        for i in &cur.ineqs {
            if BigInt::zero() < i.rhs {
                return Ok(Vec::new()); // infeasible
            }
        }
        levels.reverse();
        let mut out = Vec::new();
        let mut point = vec![0i64; self.nvars];
        self.descend(&levels, 0, &mut point, &mut out)?;
        Ok(out)
    }

    fn descend(
        &self,
        levels: &[IneqSystem],
        k: usize,
        point: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        if k == self.nvars {
            out.push(point.clone());
            return Ok(());
        }
        let sys = &levels[k];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for i in &sys.ineqs {
            let ck = &i.coeffs[k];
            if ck.is_zero() {
                // involves only earlier variables; already satisfied upstream
                continue;
            }
            let mut partial = i.rhs.clone();
            for j in 0..k {
                partial -= &i.coeffs[j] * BigInt::from(point[j]);
            }
            if ck.is_positive() {
                let bound = partial.div_ceil(ck);
                lo = Some(match lo {
                    Some(b) => b.max(bound),
                    None => bound,
                });
            } else {
                let bound = partial.div_floor(ck);
                hi = Some(match hi {
                    Some(b) => b.min(bound),
                    None => bound,
                });
            }
        }
        let (lo, hi) = match (lo, hi) {
            (Some(l), Some(h)) => (l, h),
            _ => return Err(Error::Unbounded(k)),
        };
        let mut v = lo;
        while v <= hi {
            point[k] = i64::try_from(&v).map_err(|_| Error::Unbounded(k))?;
            self.descend(levels, k + 1, point, out)?;
            v += 1;
        }
        Ok(())
    }
}

/// Convenience: evaluate an inequality at an integer point.
pub fn holds_at(ineq: &Ineq, x: &[BigInt]) -> bool {
    let lhs = dot(&ineq.coeffs, x);
    if ineq.strict {
        lhs > ineq.rhs
    } else {
        lhs >= ineq.rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn triangle_lattice_points() {
        // x >= 0, y >= 0, x + y <= 2
        let mut sys = IneqSystem::new(2);
        sys.push(Ineq::ge(bi(&[1, 0]), BigInt::zero()));
        sys.push(Ineq::ge(bi(&[0, 1]), BigInt::zero()));
        sys.push(Ineq::ge(bi(&[-1, -1]), BigInt::from(-2)));
        let pts = sys.lattice_points().unwrap();
        assert_eq!(
            pts,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0]
            ]
        );
    }

    #[test]
    fn strict_inequalities_shrink_the_region() {
        // 0 < x < 3 over integers: {1, 2}
        let mut sys = IneqSystem::new(1);
        sys.push(Ineq::gt(bi(&[1]), BigInt::zero()));
        sys.push(Ineq::gt(bi(&[-1]), BigInt::from(-3)));
        let pts = sys.lattice_points().unwrap();
        assert_eq!(pts, vec![vec![1], vec![2]]);
    }

    #[test]
    fn equality_slice() {
        // x + y = 3 in the box [0,3]^2
        let mut sys = IneqSystem::new(2);
        for k in 0..2 {
            let mut c = vec![BigInt::zero(); 2];
            c[k] = BigInt::from(1);
            sys.push(Ineq::ge(c.clone(), BigInt::zero()));
            let mut c2 = vec![BigInt::zero(); 2];
            c2[k] = BigInt::from(-1);
            sys.push(Ineq::ge(c2, BigInt::from(-3)));
        }
        sys.push_eq(bi(&[1, 1]), BigInt::from(3));
        let pts = sys.lattice_points().unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p[0] + p[1] == 3));
    }

    #[test]
    fn infeasible_real_system() {
        // x >= 1 and x <= 0
        let mut sys = IneqSystem::new(1);
        sys.push(Ineq::ge(bi(&[1]), BigInt::from(1)));
        sys.push(Ineq::ge(bi(&[-1]), BigInt::zero()));
        assert!(!sys.real_feasible().unwrap());
        assert!(sys.lattice_points().unwrap().is_empty());
    }

    #[test]
    fn strict_feasibility_differs_from_closed() {
        // x >= 0, x <= 0 feasible; x > 0, x <= 0 not
        let mut sys = IneqSystem::new(1);
        sys.push(Ineq::ge(bi(&[1]), BigInt::zero()));
        sys.push(Ineq::ge(bi(&[-1]), BigInt::zero()));
        assert!(sys.real_feasible().unwrap());
        let mut sys2 = IneqSystem::new(1);
        sys2.push(Ineq::gt(bi(&[1]), BigInt::zero()));
        sys2.push(Ineq::ge(bi(&[-1]), BigInt::zero()));
        assert!(!sys2.real_feasible().unwrap());
    }

    #[test]
    fn unbounded_region_is_reported() {
        let mut sys = IneqSystem::new(1);
        sys.push(Ineq::ge(bi(&[1]), BigInt::zero()));
        assert!(matches!(sys.lattice_points(), Err(Error::Unbounded(_))));
    }
}
