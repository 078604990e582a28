//! Prime-by-prime integrality verification for series coefficients: a fast
//! valuation path through factorials and an exact big-rational path that
//! must agree with it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::report::VerificationReport;
use crate::series::expand;

/// Sum of base-`p` digits of `n`.
pub fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// Valuation of `n!` at the prime `p`, by summing floor quotients.
pub fn factorial_valuation(n: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidConfig(format!("{p} is not prime")));
    }
    let mut s = 0u64;
    let mut q = p;
    while q <= n {
        s += n / q;
        if q > n / p {
            break;
        }
        q *= p;
    }
    Ok(s)
}

/// The same valuation through the digit-sum identity.
pub fn factorial_valuation_digit_sum(n: u64, p: u64) -> u64 {
    (n - digit_sum(n, p)) / (p - 1)
}

/// Valuation at `p` of the factorial-ratio coefficient indexed by `l`.
pub fn coeff_valuation(cfg: &LatticeConfig, l: &[i64], p: u64) -> Result<i64> {
    let m = cfg.aprime_len();
    let mut v = 0i64;
    for (j, &lj) in l.iter().enumerate() {
        let w = factorial_valuation(lj as u64, p)? as i64;
        if j < m {
            v += w;
        } else {
            v -= w;
        }
    }
    Ok(v)
}

/// Exact valuation of a nonzero rational at `p`.
pub fn rational_valuation(x: &num_rational::BigRational, p: u64) -> i64 {
    fn int_val(mut n: BigInt, p: &BigInt) -> i64 {
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(p);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            n = q;
        }
    }
    let pb = BigInt::from(p);
    int_val(x.numer().abs(), &pb) - int_val(x.denom().abs(), &pb)
}

/// Verify integrality of every coefficient of the expansion at `u`, both by
/// per-prime valuations and by the exact denominator. When `primes` is
/// omitted, all primes up to the largest tail factorial argument are used,
/// which makes the claim exact rather than sampled.
pub fn verify_integrality(
    cfg: &LatticeConfig,
    u: &[i64],
    trunc: i64,
    primes: Option<&[u64]>,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "p-integrality",
        &format!("{} u={u:?} d={trunc}", cfg.name),
    );
    report.set_param("trunc", trunc);
    let s = expand(cfg, u, trunc)?;
    let m = cfg.aprime_len();
    let max_tail: i64 = s
        .terms
        .keys()
        .flat_map(|l| l.iter().skip(m).copied())
        .max()
        .unwrap_or(0);
    let default_primes;
    let primes = match primes {
        Some(ps) => ps,
        None => {
            default_primes = primes_up_to(max_tail.max(1) as u64);
            &default_primes
        }
    };
    report.set_param("primes", format!("{primes:?}"));
    report.set_param("terms", s.terms.len());

    let mut failures = 0usize;
    for (l, coeff) in &s.terms {
        // exact path: the denominator must be one
        if !coeff.is_integer() {
            report.fail(
                "denominator-one",
                format!("l={l:?} coeff={coeff}"),
            );
            failures += 1;
        }
        // denominator support: no prime factor above the largest tail entry
        for &p in primes {
            let fast = coeff_valuation(cfg, l, p)?;
            let exact = if coeff.is_zero() {
                fast
            } else {
                rational_valuation(coeff, p)
            };
            if fast != exact {
                report.fail(
                    "valuation-paths-agree",
                    format!("l={l:?} p={p} legendre={fast} exact={exact}"),
                );
                failures += 1;
            }
            if fast < 0 {
                report.fail(
                    "valuation-nonnegative",
                    format!("l={l:?} p={p} v={fast}"),
                );
                failures += 1;
            }
        }
    }
    if failures == 0 {
        report.pass_detail(
            "all-coefficients-integral",
            format!("terms={} primes={}", s.terms.len(), primes.len()),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::{config_30_15_10_6, cubic_surface};
    use crate::lattice::LatticeConfig;

    #[test]
    fn legendre_values() {
        assert_eq!(factorial_valuation(0, 5).unwrap(), 0);
        assert_eq!(factorial_valuation(4, 2).unwrap(), 3);
        assert_eq!(factorial_valuation(30, 5).unwrap(), 7);
        assert!(factorial_valuation(5, 6).is_err());
    }

    #[test]
    fn digit_sum_identity() {
        for p in [2u64, 3, 5, 7] {
            for n in 0..200u64 {
                assert_eq!(
                    factorial_valuation(n, p).unwrap(),
                    factorial_valuation_digit_sum(n, p),
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn coefficient_valuations_cubic() {
        let cfg = cubic_surface();
        // (l3,l6) = (1,1): the coefficient is 9
        let l = vec![3i64, 3, 1, 2, 2, 1];
        assert_eq!(coeff_valuation(&cfg, &l, 2).unwrap(), 0);
        assert_eq!(coeff_valuation(&cfg, &l, 3).unwrap(), 2);
        assert_eq!(coeff_valuation(&cfg, &vec![0; 6], 7).unwrap(), 0);
    }

    #[test]
    fn coefficient_valuation_thirty_config() {
        let cfg = config_30_15_10_6();
        let l = vec![1i64, 30, 1, 15, 10, 6, 1];
        // v7(30!) - v7(15!) - v7(10!) - v7(6!) = 4 - 2 - 1 - 0 = 1
        assert_eq!(coeff_valuation(&cfg, &l, 7).unwrap(), 1);
    }

    #[test]
    fn integrality_of_thirty_config() {
        let cfg = config_30_15_10_6();
        let u = vec![-1, -1, -1, 0, 0, 0];
        let r = verify_integrality(&cfg, &u, 10 * 32, Some(&[2, 3, 5, 7, 11, 13])).unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
    }

    #[test]
    fn integrality_of_cubic_second_family() {
        let cfg = cubic_surface();
        let u = vec![-2, -1, -1, -2, -2];
        let r = verify_integrality(&cfg, &u, 12, None).unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
    }

    #[test]
    fn half_integral_family_fails_at_two() {
        // the configuration attached to m! m! / (2m)!
        let cfg = LatticeConfig::new(
            "inverse-central-binomial",
            vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 1, 1, -2],
            ],
            &[0, 1, 2],
            None,
        )
        .unwrap();
        let u = vec![-1, -1, -1, 0];
        let r = verify_integrality(&cfg, &u, 12, Some(&[2])).unwrap();
        assert!(r.any_failed());
        let text = r.to_lines();
        // witness at m = 1: l = (1,1,1,2,1)
        assert!(text.contains("l=[1, 1, 1, 2, 1]"), "{text}");
    }

    #[test]
    fn denominator_support_bound() {
        let cfg = config_30_15_10_6();
        let u = vec![-1, -7, -1, 3, 2, 1];
        let s = expand(&cfg, &u, 2 * 32 + 6).unwrap();
        let m = cfg.aprime_len();
        for (l, coeff) in &s.terms {
            let max_tail = l.iter().skip(m).copied().max().unwrap_or(0) as u64;
            if coeff.is_integer() {
                continue;
            }
            let den = coeff.denom().abs();
            for p in primes_up_to(10_000) {
                let pb = BigInt::from(p);
                if (&den % &pb).is_zero() {
                    assert!(p <= max_tail, "denominator prime {p} above tail bound");
                }
            }
        }
    }
}
