//! Truncated expansion of the hypergeometric series attached to a
//! configuration, the contiguity relation under formal differentiation, and
//! the annihilating box and Euler operators.
//!
//! A term is indexed by its solution vector `l` in `N^N`; the monomial it
//! stands for has exponents `-l_j - 1` on the distinguished variables and
//! `+l_j` on the rest, so `l` determines the monomial and vice versa.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::matrix::left_kernel_basis;
use crate::polytope::{Ineq, IneqSystem};
use crate::report::VerificationReport;

/// A finitely truncated series with exact rational coefficients, keyed by
/// the solution vector `l`.
#[derive(Clone, Debug)]
pub struct SparseSeries {
    pub u: Vec<i64>,
    /// Truncation bound on the distinguished-part degree `sum_{j<=M} l_j`.
    pub trunc: i64,
    pub terms: BTreeMap<Vec<i64>, BigRational>,
    /// Whether `u` lies in the parameter set (group member with `-u` in the
    /// relative interior of the beta face).
    pub in_parameter_set: bool,
}

impl SparseSeries {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomial exponent vector of a term key.
    pub fn exponents(cfg: &LatticeConfig, l: &[i64]) -> Vec<i64> {
        let m = cfg.aprime_len();
        l.iter()
            .enumerate()
            .map(|(j, &lj)| if j < m { -lj - 1 } else { lj })
            .collect()
    }
}

/// All solutions `l` in `N^N` of the parameter equation for `u`, with
/// `l_j = 0` whenever the point `a_j` lies off the beta face, truncated by
/// `sum_{j<=M} l_j <= trunc`. Lexicographic order.
pub fn enumerate_solutions(cfg: &LatticeConfig, u: &[i64], trunc: i64) -> Result<Vec<Vec<i64>>> {
    if u.len() != cfg.dim() {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim(),
            got: u.len(),
        });
    }
    if trunc < 0 {
        return Ok(Vec::new());
    }
    if !cfg.za_member(u)? {
        return Ok(Vec::new());
    }
    let n = cfg.num_points();
    let m = cfg.aprime_len();
    let on_face = &cfg.beta_face().generator_on_face;
    let free: Vec<usize> = (0..n).filter(|&j| on_face[j]).collect();
    let nf = free.len();

    // the equation: sum_{j>m} l_j a_j - sum_{j<=m} l_j a_j = u + beta
    let mut w = vec![0i64; cfg.dim()];
    for c in 0..cfg.dim() {
        w[c] = u[c] + cfg.beta()[c];
    }

    let mut sys = IneqSystem::new(nf);
    for k in 0..nf {
        let mut c = vec![BigInt::zero(); nf];
        c[k] = BigInt::one();
        sys.push(Ineq::ge(c, BigInt::zero()));
    }
    for row in 0..cfg.dim() {
        let coeffs: Vec<BigInt> = free
            .iter()
            .map(|&j| {
                let a = BigInt::from(cfg.points()[j][row]);
                if j < m {
                    -a
                } else {
                    a
                }
            })
            .collect();
        sys.push_eq(coeffs, BigInt::from(w[row]));
    }
    let dcoeffs: Vec<BigInt> = free
        .iter()
        .map(|&j| {
            if j < m {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    sys.push(Ineq::ge(dcoeffs, BigInt::from(-trunc)));

    let pts = sys.lattice_points()?;
    let mut out: Vec<Vec<i64>> = pts
        .into_iter()
        .map(|x| {
            let mut l = vec![0i64; n];
            for (k, &j) in free.iter().enumerate() {
                l[j] = x[k];
            }
            l
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Sign and factorial-ratio coefficient of a term.
pub fn term_coefficient(cfg: &LatticeConfig, l: &[i64]) -> BigRational {
    let m = cfg.aprime_len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut sign_exp = 0i64;
    for (j, &lj) in l.iter().enumerate() {
        if j < m {
            num *= factorial(lj as u64);
            sign_exp += lj;
        } else {
            den *= factorial(lj as u64);
        }
    }
    if sign_exp % 2 != 0 {
        num = -num;
    }
    BigRational::new(num, den)
}

/// Expand the series for parameter `u` up to the truncation bound.
pub fn expand(cfg: &LatticeConfig, u: &[i64], trunc: i64) -> Result<SparseSeries> {
    if !cfg.za_member(u)? {
        return Err(Error::NotInGroup);
    }
    let neg_u: Vec<i64> = u.iter().map(|&x| -x).collect();
    let in_parameter_set = cfg
        .beta_face()
        .cone
        .relative_interior_contains_int(&neg_u);
    let sols = enumerate_solutions(cfg, u, trunc)?;
    let mut terms = BTreeMap::new();
    for l in sols {
        let c = term_coefficient(cfg, &l);
        terms.insert(l, c);
    }
    Ok(SparseSeries {
        u: u.to_vec(),
        trunc,
        terms,
        in_parameter_set,
    })
}

/// A series obtained from a truncated expansion by iterated formal
/// differentiation, together with the window on which its coefficients are
/// not truncation artifacts.
#[derive(Clone, Debug)]
pub struct DerivedSeries {
    pub terms: BTreeMap<Vec<i64>, BigRational>,
    pub u: Vec<i64>,
    /// Number of derivatives taken in each variable so far.
    pub dcounts: Vec<i64>,
    /// Original truncation bound of the source expansion.
    pub base_trunc: i64,
}

impl DerivedSeries {
    pub fn from_series(s: &SparseSeries, n: usize) -> Self {
        DerivedSeries {
            terms: s.terms.clone(),
            u: s.u.clone(),
            dcounts: vec![0; n],
            base_trunc: s.trunc,
        }
    }

    /// Valid-window test: coefficients at `l` inside the window are exact
    /// coefficients of the fully derived series.
    pub fn window_contains(&self, cfg: &LatticeConfig, l: &[i64]) -> bool {
        let m = cfg.aprime_len();
        let mut dsum = 0i64;
        for j in 0..m {
            if l[j] < self.dcounts[j] {
                return false;
            }
            dsum += self.dcounts[j];
        }
        let head: i64 = l.iter().take(m).sum();
        head <= self.base_trunc + dsum
    }
}

/// Formal derivative with respect to variable `k` (0-based internal index).
pub fn derivative(cfg: &LatticeConfig, s: &DerivedSeries, k: usize) -> DerivedSeries {
    let m = cfg.aprime_len();
    let mut terms: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (l, c) in &s.terms {
        if k < m {
            let mut l2 = l.clone();
            l2[k] += 1;
            let factor = BigRational::from_integer(BigInt::from(-l[k] - 1));
            terms.insert(l2, c * factor);
        } else {
            if l[k] == 0 {
                continue;
            }
            let mut l2 = l.clone();
            l2[k] -= 1;
            let factor = BigRational::from_integer(BigInt::from(l[k]));
            terms.insert(l2, c * factor);
        }
    }
    let mut u = s.u.clone();
    for c in 0..cfg.dim() {
        u[c] -= cfg.points()[k][c];
    }
    let mut dcounts = s.dcounts.clone();
    dcounts[k] += 1;
    DerivedSeries {
        terms,
        u,
        dcounts,
        base_trunc: s.base_trunc,
    }
}

/// Check the contiguity relation: differentiating the expansion for `u` in
/// variable `k` reproduces the expansion for `u - a_k` (or zero when the
/// point lies off the beta face).
pub fn contiguity_check(
    cfg: &LatticeConfig,
    u: &[i64],
    k: usize,
    trunc: i64,
) -> Result<VerificationReport> {
    let m = cfg.aprime_len();
    let mut report = VerificationReport::new(
        "contiguity",
        &format!("{} u={u:?} k={k} d={trunc}", cfg.name),
    );
    report.set_param("k", k);
    report.set_param("trunc", trunc);
    let base = expand(cfg, u, trunc)?;
    let derived = derivative(cfg, &DerivedSeries::from_series(&base, cfg.num_points()), k);

    if !cfg.beta_face().generator_on_face[k] {
        if derived.terms.is_empty() {
            report.pass("derivative-vanishes-off-face");
        } else {
            report.fail(
                "derivative-vanishes-off-face",
                format!("nonzero term {:?}", derived.terms.keys().next().unwrap()),
            );
        }
        return Ok(report);
    }

    let target_trunc = if k < m { trunc + 1 } else { trunc };
    let mut shifted = u.to_vec();
    for c in 0..cfg.dim() {
        shifted[c] -= cfg.points()[k][c];
    }
    let target = expand(cfg, &shifted, target_trunc)?;

    let mut compared = 0usize;
    let mut mismatch = None;
    let keys: std::collections::BTreeSet<Vec<i64>> = derived
        .terms
        .keys()
        .chain(target.terms.keys())
        .cloned()
        .collect();
    for l in keys {
        let a = derived.terms.get(&l).cloned().unwrap_or_else(BigRational::zero);
        let b = target.terms.get(&l).cloned().unwrap_or_else(BigRational::zero);
        compared += 1;
        if a != b && mismatch.is_none() {
            mismatch = Some((l, a, b));
        }
    }
    if compared == 0 {
        return Err(Error::TruncationTooSmall(format!(
            "no comparable coefficients for u={u:?}, k={k}, trunc={trunc}"
        )));
    }
    match mismatch {
        None => report.pass_detail("contiguity-equal", format!("compared={compared}")),
        Some((l, a, b)) => report.fail(
            "contiguity-equal",
            format!("l={l:?} derivative={a} direct={b}"),
        ),
    }
    Ok(report)
}

/// Termwise Euler-operator check: every monomial is an eigenvector, so the
/// operator annihilates the truncation exactly.
pub fn euler_check(cfg: &LatticeConfig, u: &[i64], row: usize, trunc: i64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "euler",
        &format!("{} u={u:?} i={row} d={trunc}", cfg.name),
    );
    let s = expand(cfg, u, trunc)?;
    let mut bad = None;
    for l in s.terms.keys() {
        let eps = SparseSeries::exponents(cfg, l);
        let mut acc = 0i64;
        for (j, p) in cfg.points().iter().enumerate() {
            acc += p[row] * eps[j];
        }
        if acc != u[row] {
            bad = Some(l.clone());
            break;
        }
    }
    match bad {
        None => report.pass_detail("euler-annihilates", format!("terms={}", s.terms.len())),
        Some(l) => report.fail("euler-annihilates", format!("l={l:?}")),
    }
    Ok(report)
}

/// Canonical basis of the relation lattice `{ l : sum_j l_j a_j = 0 }`.
pub fn relation_basis(cfg: &LatticeConfig) -> Vec<Vec<i64>> {
    let m = crate::matrix::to_bigint_matrix(cfg.points());
    left_kernel_basis(&m)
        .into_iter()
        .map(|row| {
            row.iter()
                .map(|x| i64::try_from(x).expect("relation entry fits in i64"))
                .collect()
        })
        .collect()
}

/// Verify that the box operator attached to a relation annihilates the
/// expansion: both derivative branches agree on the window where neither is
/// a truncation artifact.
pub fn box_annihilates(
    cfg: &LatticeConfig,
    u: &[i64],
    relation: &[i64],
    trunc: i64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "box",
        &format!("{} u={u:?} l={relation:?} d={trunc}", cfg.name),
    );
    // the relation must be in the kernel
    let mut acc = vec![0i64; cfg.dim()];
    for (j, p) in cfg.points().iter().enumerate() {
        for c in 0..cfg.dim() {
            acc[c] += relation[j] * p[c];
        }
    }
    if acc.iter().any(|&x| x != 0) {
        return Err(Error::InvalidConfig(format!(
            "vector {relation:?} is not a relation on the configuration"
        )));
    }

    let base = expand(cfg, u, trunc)?;
    let n = cfg.num_points();
    let mut plus = DerivedSeries::from_series(&base, n);
    let mut minus = plus.clone();
    for (j, &lj) in relation.iter().enumerate() {
        for _ in 0..lj.max(0) {
            plus = derivative(cfg, &plus, j);
        }
        for _ in 0..(-lj).max(0) {
            minus = derivative(cfg, &minus, j);
        }
    }
    debug_assert_eq!(plus.u, minus.u);

    let mut compared = 0usize;
    let mut mismatch = None;
    let keys: std::collections::BTreeSet<Vec<i64>> = plus
        .terms
        .keys()
        .chain(minus.terms.keys())
        .cloned()
        .collect();
    for l in keys {
        if !plus.window_contains(cfg, &l) || !minus.window_contains(cfg, &l) {
            continue;
        }
        let a = plus.terms.get(&l).cloned().unwrap_or_else(BigRational::zero);
        let b = minus.terms.get(&l).cloned().unwrap_or_else(BigRational::zero);
        compared += 1;
        if a != b && mismatch.is_none() {
            mismatch = Some((l, a, b));
        }
    }
    match mismatch {
        None => report.pass_detail("box-annihilates", format!("compared={compared}")),
        Some((l, a, b)) => report.fail("box-annihilates", format!("l={l:?} plus={a} minus={b}")),
    }
    Ok(report)
}

/// Three-valued nonvanishing test for the series at parameter `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonzeroAnswer {
    /// A solution exists; the lexicographically least witness is attached.
    Nonzero(Vec<i64>),
    /// The defining system has no real solution at all, so the series is
    /// identically zero.
    Zero,
    /// Real solutions exist but no lattice solution was found up to the cap.
    Undetermined { cap: i64 },
}

pub fn is_nonzero(cfg: &LatticeConfig, u: &[i64], cap: i64) -> Result<NonzeroAnswer> {
    if !cfg.za_member(u)? {
        return Ok(NonzeroAnswer::Zero);
    }
    // quick exact emptiness certificate over the reals (no truncation)
    let n = cfg.num_points();
    let m = cfg.aprime_len();
    let on_face = &cfg.beta_face().generator_on_face;
    let free: Vec<usize> = (0..n).filter(|&j| on_face[j]).collect();
    let mut sys = IneqSystem::new(free.len());
    for k in 0..free.len() {
        let mut c = vec![BigInt::zero(); free.len()];
        c[k] = BigInt::one();
        sys.push(Ineq::ge(c, BigInt::zero()));
    }
    for row in 0..cfg.dim() {
        let coeffs: Vec<BigInt> = free
            .iter()
            .map(|&j| {
                let a = BigInt::from(cfg.points()[j][row]);
                if j < m {
                    -a
                } else {
                    a
                }
            })
            .collect();
        sys.push_eq(coeffs, BigInt::from(u[row] + cfg.beta()[row]));
    }
    if !sys.real_feasible()? {
        return Ok(NonzeroAnswer::Zero);
    }
    let sols = enumerate_solutions(cfg, u, cap)?;
    match sols.into_iter().next() {
        Some(l) => Ok(NonzeroAnswer::Nonzero(l)),
        None => Ok(NonzeroAnswer::Undetermined { cap }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::{config_30_15_10_6, cubic_surface, smallest};
    use num_traits::ToPrimitive;

    fn big(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn cubic_solutions_are_two_parameter() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        let sols = enumerate_solutions(&cfg, &u, 6).unwrap();
        // (l3, l6) with 3(l3 + l6) <= 6: (0,0),(1,0),(0,1),(1,1),(2,0),(0,2)
        assert_eq!(sols.len(), 6);
        for l in &sols {
            assert_eq!(l[0], 3 * l[2]);
            assert_eq!(l[1], 3 * l[5]);
            assert_eq!(l[3], l[2] + l[5]);
            assert_eq!(l[4], l[2] + l[5]);
        }
    }

    #[test]
    fn cubic_coefficients_match_factorial_ratios() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        let s = expand(&cfg, &u, 6).unwrap();
        // (l3,l6) = (1,1): ratio 3! 3! / (1! 1! 2! 2!) = 9, sign (+1)^6
        let l = vec![3, 3, 1, 2, 2, 1];
        assert_eq!(s.terms.get(&l).unwrap(), &big(9));
        // l = 0 has coefficient 1
        assert_eq!(s.terms.get(&vec![0i64; 6]).unwrap(), &big(1));
    }

    #[test]
    fn cubic_second_parameter_family() {
        let cfg = cubic_surface();
        let u = vec![-2, -1, -1, -2, -2];
        let s = expand(&cfg, &u, 8).unwrap();
        assert!(s.in_parameter_set);
        // solutions: l1 = 3 l3 + 1, l2 = 3 l6 + 1, l4 = l5 = l3 + l6 + 1
        for l in s.terms.keys() {
            assert_eq!(l[0], 3 * l[2] + 1);
            assert_eq!(l[1], 3 * l[5] + 1);
            assert_eq!(l[3], l[2] + l[5] + 1);
        }
        // (l3,l6) = (0,0): coefficient 1!1!/(0!0!1!1!) = 1, sign (-1)^2
        let l0 = vec![1, 1, 0, 1, 1, 0];
        assert_eq!(s.terms.get(&l0).unwrap(), &big(1));
        // (1,1): (3l3+1)!(3l6+1)!/(l3!l6!(l3+l6+1)!^2) = 4!4!/(1!1!3!3!) = 16
        let l11 = vec![4, 4, 1, 3, 3, 1];
        assert_eq!(s.terms.get(&l11).unwrap().to_integer().to_i64(), Some(16));
    }

    #[test]
    fn thirty_config_solutions_follow_the_line() {
        let cfg = config_30_15_10_6();
        let u = vec![-1, -1, -1, 0, 0, 0];
        let sols = enumerate_solutions(&cfg, &u, 96).unwrap();
        assert_eq!(sols.len(), 4); // m = 0..3 at 32m <= 96
        for (m, l) in sols.iter().enumerate() {
            let m = m as i64;
            assert_eq!(l, &vec![m, 30 * m, m, 15 * m, 10 * m, 6 * m, m]);
        }
    }

    #[test]
    fn zero_parameter_is_outside_the_family() {
        // the defining sum is still evaluated for group members outside the
        // parameter set; its terms satisfy the lattice equation but the
        // series carries the diagnostic flag
        let cfg = cubic_surface();
        let s = expand(&cfg, &[0, 0, 0, 0, 0], 10).unwrap();
        assert!(!s.in_parameter_set);
        for l in s.terms.keys() {
            let eps = SparseSeries::exponents(&cfg, l);
            let mut acc = vec![0i64; cfg.dim()];
            for (j, p) in cfg.points().iter().enumerate() {
                for c in 0..cfg.dim() {
                    acc[c] += eps[j] * p[c];
                }
            }
            assert_eq!(acc, vec![0, 0, 0, 0, 0]);
        }
        // the smallest config really does have an empty series at zero
        let s2 = expand(&smallest(), &[0, 0], 10).unwrap();
        assert!(s2.is_zero());
    }

    #[test]
    fn height_identity_on_stored_terms() {
        let cfg = config_30_15_10_6();
        let u = vec![-1, -7, -1, 3, 2, 1];
        let s = expand(&cfg, &u, 70).unwrap();
        assert!(!s.is_zero());
        let m = cfg.aprime_len();
        let cu: i64 = cfg.height_of(&u);
        for l in s.terms.keys() {
            let head: i64 = l.iter().take(m).sum();
            let tail: i64 = l.iter().skip(m).sum();
            assert_eq!(tail - head, cu + m as i64);
        }
    }

    #[test]
    fn exponent_map_is_injective() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        let s = expand(&cfg, &u, 9).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for l in s.terms.keys() {
            assert!(seen.insert(SparseSeries::exponents(&cfg, l)));
        }
    }

    #[test]
    fn contiguity_distinguished_variable() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        let r = contiguity_check(&cfg, &u, 0, 6).unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
    }

    #[test]
    fn contiguity_tail_variable_thirty_config() {
        let cfg = config_30_15_10_6();
        let u = vec![-1, -1, -1, 0, 0, 0];
        let r = contiguity_check(&cfg, &u, 6, 64).unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
    }

    #[test]
    fn contiguity_off_face_derivative_vanishes() {
        // beta on the ray through a3: every other variable is off the face
        let cfg = LatticeConfig::new(
            "cubic-face",
            vec![
                vec![1, 1, 1, 0, 1],
                vec![0, 1, 1, 1, 1],
                vec![3, 0, 0, 0, 1],
                vec![0, 3, 0, 0, 1],
                vec![0, 0, 3, 0, 1],
                vec![0, 0, 0, 3, 1],
            ],
            &[2],
            None,
        )
        .unwrap();
        let u = vec![-3, 0, 0, 0, -1];
        // internal index 1 is one of the off-face points
        let r = contiguity_check(&cfg, &u, 1, 5).unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
    }

    #[test]
    fn mixed_partials_commute() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        let base = expand(&cfg, &u, 9).unwrap();
        let d0 = DerivedSeries::from_series(&base, cfg.num_points());
        let ab = derivative(&cfg, &derivative(&cfg, &d0, 0), 3);
        let ba = derivative(&cfg, &derivative(&cfg, &d0, 3), 0);
        assert_eq!(ab.terms, ba.terms);
    }

    #[test]
    fn euler_checks_pass() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        for i in 0..cfg.dim() {
            let r = euler_check(&cfg, &u, i, 6).unwrap();
            assert!(r.all_passed());
        }
        let cfg30 = config_30_15_10_6();
        let u30 = vec![-1, -1, -1, 0, 0, 0];
        let r = euler_check(&cfg30, &u30, 1, 64).unwrap();
        assert!(r.all_passed());
        // empty series passes vacuously
        let r = euler_check(&cfg, &[0, 0, 0, 0, 0], 4, 3).unwrap();
        assert!(r.all_passed());
    }

    #[test]
    fn relation_bases() {
        let cfg = cubic_surface();
        let rels = relation_basis(&cfg);
        assert_eq!(rels.len(), 2);
        for rel in &rels {
            let mut acc = vec![0i64; cfg.dim()];
            for (j, p) in cfg.points().iter().enumerate() {
                for c in 0..cfg.dim() {
                    acc[c] += rel[j] * p[c];
                }
            }
            assert!(acc.iter().all(|&x| x == 0));
        }
        let cfg30 = config_30_15_10_6();
        let rels30 = relation_basis(&cfg30);
        assert_eq!(rels30.len(), 1);
        assert_eq!(rels30[0], vec![1, 30, 1, -15, -10, -6, -1]);
    }

    #[test]
    fn box_operators_annihilate() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        for rel in relation_basis(&cfg) {
            let r = box_annihilates(&cfg, &u, &rel, 6).unwrap();
            assert!(r.all_passed(), "{}", r.to_lines());
        }
        // zero relation: both branches identical
        let r = box_annihilates(&cfg, &u, &[0, 0, 0, 0, 0, 0], 4).unwrap();
        assert!(r.all_passed());
        // the thirty config needs a wide window before any coefficient is
        // comparable; at trunc 96 the m <= 1 terms are
        let cfg30 = config_30_15_10_6();
        let u30 = vec![-1, -1, -1, 0, 0, 0];
        let rel = relation_basis(&cfg30).remove(0);
        let r = box_annihilates(&cfg30, &u30, &rel, 96).unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
        // a non-relation is rejected
        assert!(box_annihilates(&cfg30, &u30, &[1, 0, 0, 0, 0, 0, 0], 5).is_err());
    }

    #[test]
    fn nonzero_answers() {
        let cfg = cubic_surface();
        let u: Vec<i64> = cfg.beta().iter().map(|&x| -x).collect();
        assert_eq!(
            is_nonzero(&cfg, &u, 12).unwrap(),
            NonzeroAnswer::Nonzero(vec![0, 0, 0, 0, 0, 0])
        );
        // outside the group: definitively zero
        assert_eq!(
            is_nonzero(&cfg, &[-1, -1, -1, -1, 0], 12).unwrap(),
            NonzeroAnswer::Zero
        );
        let cfg30 = config_30_15_10_6();
        match is_nonzero(&cfg30, &[-1, -7, -1, 3, 2, 1], 40).unwrap() {
            NonzeroAnswer::Nonzero(l) => assert_eq!(l, vec![0, 6, 0, 3, 2, 1, 0]),
            other => panic!("expected nonzero, got {other:?}"),
        }
    }

    #[test]
    fn smallest_config_series_is_single_term() {
        let cfg = smallest();
        let s = expand(&cfg, &[-1, -2], 8).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms.get(&vec![0, 0]).unwrap(), &big(1));
        let s2 = expand(&cfg, &[-2, -5], 8).unwrap();
        // l2 = v1 - 1 = 1, l1 = v2 - v1 - 1 = 2
        assert_eq!(s2.terms.len(), 1);
        let coeff = s2.terms.get(&vec![2, 1]).unwrap();
        // (-1)^3 2! 1! = -2
        assert_eq!(coeff, &big(-2));
    }
}
