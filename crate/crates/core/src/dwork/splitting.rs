//! The splitting-function tower: the Artin-Hasse exponential, the root
//! gamma0 of its exponent, the one-variable splitting series and its
//! infinite-product companions, the tail series of negative powers, and the
//! one-variable multiplication identity that drives the eigenvector
//! theorem.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binomial, factorial, is_prime};
use crate::error::{Error, Result};
use crate::padic::digit_sum;
use crate::report::VerificationReport;

use super::pi_adic::PiAdic;

/// Rational coefficients of the Artin-Hasse exponential
/// `exp(sum_i t^(p^i)/p^i)` up to degree `deg`.
pub fn artin_hasse_coeffs(p: u32, deg: usize) -> Vec<BigRational> {
    // exponent series s(t), then e' = s' e termwise
    let mut s = vec![BigRational::zero(); deg + 1];
    let mut q = 1u64;
    let mut denom = BigInt::one();
    while q as usize <= deg {
        s[q as usize] = BigRational::new(BigInt::one(), denom.clone());
        match q.checked_mul(p as u64) {
            Some(next) if next as usize <= deg => {
                q = next;
                denom *= BigInt::from(p);
            }
            _ => break,
        }
    }
    let mut e = vec![BigRational::zero(); deg + 1];
    e[0] = BigRational::one();
    for n in 1..=deg {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            if !s[k].is_zero() {
                acc += BigRational::from_integer(BigInt::from(k as i64)) * s[k].clone()
                    * e[n - k].clone();
            }
        }
        e[n] = acc / BigRational::from_integer(BigInt::from(n as i64));
    }
    e
}

/// Precomputed tower of splitting constants at a fixed prime and working
/// precision. All downstream verifications draw from this context; the
/// precision each value carries is tracked by the arithmetic itself.
pub struct DworkContext {
    pub p: u32,
    /// Precision the caller wants conclusions at.
    pub target_prec: i64,
    /// Internal working precision (pi-adic).
    pub work_prec: i64,
    pub gamma0: PiAdic,
    pub gamma0_inv: PiAdic,
    /// Splitting-series coefficients `theta_i`.
    pub theta: Vec<PiAdic>,
    /// Product-series coefficients `hat_theta_i` (normalized form).
    pub theta_hat: Vec<PiAdic>,
    /// Companion coefficients `hat_theta_{1,i}` (normalized form).
    pub theta1_hat: Vec<PiAdic>,
    pub sigma: Vec<PiAdic>,
    pub tau: Vec<PiAdic>,
}

/// Size requests for the context.
#[derive(Clone, Copy, Debug)]
pub struct ContextSizes {
    /// Highest index of sigma/tau needed.
    pub sigma_max: usize,
    /// Degree to which the splitting-series coefficients are computed.
    pub theta_deg: usize,
    /// Extra pi-adic headroom on top of the derived working precision.
    pub extra_headroom: i64,
}

impl Default for ContextSizes {
    fn default() -> Self {
        ContextSizes {
            sigma_max: 16,
            theta_deg: 48,
            extra_headroom: 0,
        }
    }
}

impl DworkContext {
    pub fn new(p: u32, target_prec: i64, sizes: ContextSizes) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        if target_prec < 1 {
            return Err(Error::PrecisionExhausted("precision must be positive".into()));
        }
        let d = (p - 1) as i64;
        // sigma_i is later multiplied by gamma0^(-i-1), so it must carry
        // `sigma_target` digits; its defining sum needs companion
        // coefficients up to index `kcut` (where the tail order bound
        // i (p-1)^2 / p passes sigma_target), and each of those costs one
        // digit of headroom per index
        let sigma_target = target_prec + 2 * sizes.sigma_max as i64 + 8 + sizes.extra_headroom;
        let kcut = ((sigma_target * p as i64 + d * d - 1) / (d * d)).max(8) as usize;
        let work_prec = sigma_target + kcut as i64 + 8;

        let gamma0 = newton_gamma0(p, work_prec)?;
        let gamma0_inv = gamma0.inv()?;

        // gamma_j, truncated where the order bound passes the precision
        let mut gammas: Vec<PiAdic> = Vec::new();
        let mut j = 0i64;
        loop {
            let mut g = PiAdic::zero(p, work_prec + 4);
            for i in 0..=j {
                let t = gamma0.pow(pow_u(p, i as u32))?.mul_p_pow(-i);
                g = g.add(&t);
            }
            gammas.push(g);
            let next_bound = pow_u(p, (j + 2) as u32) - (j + 2) * d;
            if next_bound > work_prec + 4 {
                break;
            }
            j += 1;
        }

        // hat product over j >= 1 to the degree needed by the sigma sums
        let hat_deg = kcut;
        let theta1_series = exp_product(p, work_prec, &gammas, 1, hat_deg)?;
        let theta1_hat = normalize_hat(&theta1_series, &gamma0_inv)?;
        let theta_hat_series = exp_product(p, work_prec, &gammas, 0, hat_deg)?;
        let theta_hat = normalize_hat(&theta_hat_series, &gamma0_inv)?;

        // splitting series theta_i = ah_i * gamma0^i
        let ah = artin_hasse_coeffs(p, sizes.theta_deg);
        let mut theta = Vec::with_capacity(sizes.theta_deg + 1);
        for (i, c) in ah.iter().enumerate() {
            let embedded = PiAdic::from_ratio(p, c.numer(), c.denom(), work_prec + 4)?;
            theta.push(embedded.mul(&gamma0.pow(i as i64)?));
        }

        // sigma_i: alternating binomial sums of theta1_hat, with the
        // truncation tail folded into the precision
        let kcap = theta1_hat.len() - 1;
        let tail_prec = ((kcap as i64 + 1) * d * d) / (p as i64);
        let mut sigma = Vec::with_capacity(sizes.sigma_max + 1);
        for i in 0..=sizes.sigma_max {
            let mut s = PiAdic::zero(p, work_prec);
            for (k, th) in theta1_hat.iter().enumerate() {
                let b = binomial((i + k) as u64, k as u64);
                let sign = if k % 2 == 0 { b } else { -b };
                s = s.add(&th.mul(&PiAdic::from_bigint(p, sign, work_prec)));
            }
            let s = clamp_precision(&s, tail_prec);
            sigma.push(s);
        }
        let mut tau = Vec::with_capacity(sizes.sigma_max + 1);
        for i in 0..=sizes.sigma_max {
            let mut s = PiAdic::zero(p, work_prec);
            for k in 0..=i.min(theta1_hat.len() - 1) {
                let b = binomial(i as u64, k as u64);
                s = s.add(&theta1_hat[k].mul(&PiAdic::from_bigint(p, b, work_prec)));
            }
            tau.push(s);
        }

        Ok(DworkContext {
            p,
            target_prec,
            work_prec,
            gamma0,
            gamma0_inv,
            theta,
            theta_hat,
            theta1_hat,
            sigma,
            tau,
        })
    }

    /// Tail-series coefficient at exponent `-(i+1)`:
    /// `(-1)^i i! sigma_i gamma0^(-i-1)`.
    pub fn q_coeff(&self, i: usize) -> Result<PiAdic> {
        if i >= self.sigma.len() {
            return Err(Error::PrecisionExhausted(format!(
                "tail coefficient {i} beyond the computed sigma range"
            )));
        }
        let mut f = factorial(i as u64);
        if i % 2 != 0 {
            f = -f;
        }
        let c = PiAdic::from_bigint(self.p, f, self.work_prec);
        Ok(self.sigma[i]
            .mul(&c)
            .mul(&self.gamma0_inv.pow((i + 1) as i64)?))
    }

    /// Product of sigma factors over the distinguished block and tau
    /// factors over the rest.
    pub fn sigma_of(&self, l: &[i64], distinguished: usize) -> Result<PiAdic> {
        let mut acc = PiAdic::one(self.p, self.work_prec);
        for (j, &lj) in l.iter().enumerate() {
            let idx = lj as usize;
            let table = if j < distinguished { &self.sigma } else { &self.tau };
            let v = table.get(idx).ok_or_else(|| {
                Error::PrecisionExhausted(format!(
                    "sigma/tau index {idx} beyond the computed range"
                ))
            })?;
            acc = acc.mul(v);
        }
        Ok(acc)
    }
}

fn pow_u(p: u32, e: u32) -> i64 {
    (p as i64).pow(e)
}

fn clamp_precision(v: &PiAdic, prec: i64) -> PiAdic {
    // rebuild at the lower precision via adding a zero of that precision
    if v.precision() <= prec {
        v.clone()
    } else {
        v.add(&PiAdic::zero(v.prime(), prec))
    }
}

/// Root of the exponent series `sum_i t^(p^i)/p^i` with order `1/(p-1)`,
/// by Newton iteration from `pi`.
fn newton_gamma0(p: u32, prec: i64) -> Result<PiAdic> {
    let d = (p - 1) as i64;
    let limit = prec + 4;
    let series = |x: &PiAdic| -> Result<PiAdic> {
        let mut s = PiAdic::zero(p, limit);
        let mut i = 0u32;
        loop {
            let e = pow_u(p, i);
            if i > 0 && e - (i as i64) * d > limit {
                break;
            }
            let t = x.pow(e)?.mul_p_pow(-(i as i64));
            s = s.add(&t);
            i += 1;
        }
        Ok(s)
    };
    let derivative = |x: &PiAdic| -> Result<PiAdic> {
        let mut s = PiAdic::zero(p, limit);
        let mut i = 0u32;
        loop {
            let e = pow_u(p, i) - 1;
            if i > 0 && e > limit {
                break;
            }
            s = s.add(&x.pow(e)?);
            i += 1;
        }
        Ok(s)
    };
    let mut g = PiAdic::pi(p, limit);
    for _ in 0..64 {
        let fg = series(&g)?;
        if fg.is_zero_at_precision() {
            let out = clamp_precision(&g, prec);
            if out.ord() != Some(1) {
                return Err(Error::NewtonDiverged);
            }
            return Ok(out);
        }
        let fp = derivative(&g)?;
        g = g.sub(&fg.mul(&fp.inv()?));
    }
    Err(Error::NewtonDiverged)
}

/// Coefficients of `prod_{j >= j0} exp(gamma_j t^(p^j))` to degree `deg`.
fn exp_product(
    p: u32,
    prec: i64,
    gammas: &[PiAdic],
    j0: usize,
    deg: usize,
) -> Result<Vec<PiAdic>> {
    let mut acc: Vec<PiAdic> = (0..=deg)
        .map(|i| {
            if i == 0 {
                PiAdic::one(p, prec + 4)
            } else {
                PiAdic::zero(p, prec + 4)
            }
        })
        .collect();
    for (j, gamma) in gammas.iter().enumerate().skip(j0) {
        let step = pow_u(p, j as u32) as usize;
        if step > deg {
            break;
        }
        // exp(gamma t^step) = sum_k gamma^k / k! t^(k step)
        let mut factor: Vec<(usize, PiAdic)> = Vec::new();
        let mut k = 0usize;
        while k * step <= deg {
            let kf = factorial(k as u64);
            let num = gamma.pow(k as i64)?;
            let kf_inv = PiAdic::from_ratio(p, &BigInt::one(), &kf, prec + 4)?;
            factor.push((k * step, num.mul(&kf_inv)));
            k += 1;
        }
        let mut next: Vec<PiAdic> = (0..=deg).map(|_| PiAdic::zero(p, prec + 4)).collect();
        for (a, ca) in acc.iter().enumerate() {
            if ca.is_zero_at_precision() && a > 0 {
                continue;
            }
            for (b, cb) in &factor {
                if a + b > deg {
                    break;
                }
                next[a + b] = next[a + b].add(&ca.mul(cb));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Convert raw series coefficients `c_i` into the normalized form
/// `c_i * i! * gamma0^(-i)`.
fn normalize_hat(series: &[PiAdic], gamma0_inv: &PiAdic) -> Result<Vec<PiAdic>> {
    let p = gamma0_inv.prime();
    series
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let f = PiAdic::from_bigint(p, factorial(i as u64), c.precision());
            Ok(c.mul(&f).mul(&gamma0_inv.pow(i as i64)?))
        })
        .collect()
}

/// Order bounds, congruences, and construction identities of the splitting
/// tower, checked for indices up to `imax`.
pub fn verify_splitting(ctx: &DworkContext, imax: usize) -> Result<VerificationReport> {
    let p = ctx.p;
    let d = (p - 1) as i64;
    let mut report = VerificationReport::new(
        "splitting-tower",
        &format!("p={p} K={} imax={imax}", ctx.target_prec),
    );
    report.set_param("p", p);
    report.set_param("K", ctx.target_prec);

    // defining property and order of gamma0
    let mut resid = PiAdic::zero(p, ctx.work_prec);
    let mut i = 0u32;
    loop {
        let e = pow_u(p, i);
        if i > 0 && e - (i as i64) * d > ctx.work_prec {
            break;
        }
        resid = resid.add(&ctx.gamma0.pow(e)?.mul_p_pow(-(i as i64)));
        i += 1;
    }
    if resid.is_zero_at_precision() {
        report.pass_detail("gamma0-root", format!("residual-ord>={}", resid.precision()));
    } else {
        report.fail("gamma0-root", format!("residual ord {:?}", resid.ord()));
    }
    if ctx.gamma0.ord() == Some(1) {
        report.pass("gamma0-order");
    } else {
        report.fail("gamma0-order", format!("{:?}", ctx.gamma0.ord()));
    }
    let diff = ctx.gamma0.sub(&PiAdic::pi(p, ctx.work_prec));
    if diff.ord().map_or(true, |o| o >= 2) {
        report.pass("gamma0-congruent-pi-mod-pi2");
    } else {
        report.fail("gamma0-congruent-pi-mod-pi2", format!("{:?}", diff.ord()));
    }

    // Artin-Hasse p-integrality
    let ah = artin_hasse_coeffs(p, 40);
    let pb = BigInt::from(p);
    let ah_ok = ah
        .iter()
        .all(|c| !(c.denom() % &pb).is_zero());
    if ah_ok {
        report.pass_detail("artin-hasse-p-integral", "deg<=40".to_string());
    } else {
        report.fail("artin-hasse-p-integral", "denominator divisible by p");
    }

    // order bounds on the three coefficient families
    type BoundFn = fn(usize, u32) -> i64;
    let theta_bound: BoundFn = |i, _p| i as i64;
    let hat_bound: BoundFn = |_i, _p| 0;
    let hat1_bound: BoundFn = |i, p| {
        let d = (p - 1) as i64;
        (i as i64 * d * d + p as i64 - 1) / p as i64
    };
    let families: [(&str, &[PiAdic], BoundFn); 3] = [
        ("theta-order-bound", ctx.theta.as_slice(), theta_bound),
        ("theta-hat-order-bound", ctx.theta_hat.as_slice(), hat_bound),
        ("theta1-hat-order-bound", ctx.theta1_hat.as_slice(), hat1_bound),
    ];
    for (name, seq, bound) in families {
        let mut bad = None;
        for (i, c) in seq.iter().enumerate().take(imax + 1) {
            let want = bound(i, p);
            let got = c.ord();
            if let Some(o) = got {
                if o < want.min(c.precision()) {
                    bad = Some((i, o, want));
                    break;
                }
            }
        }
        match bad {
            None => report.pass_detail(name, format!("indices<=min({imax},len)")),
            Some((i, o, want)) => report.fail(name, format!("i={i} ord={o} bound={want}")),
        }
    }

    // congruences modulo gamma0 and the exact head of tau
    let one = PiAdic::one(p, ctx.work_prec);
    for (name, seq) in [("sigma-congruence", &ctx.sigma), ("tau-congruence", &ctx.tau)] {
        let mut bad = None;
        for (i, v) in seq.iter().enumerate() {
            let diff = v.sub(&one);
            if let Some(o) = diff.ord() {
                if o < 1 {
                    bad = Some((i, o));
                    break;
                }
            }
        }
        match bad {
            None => report.pass(name),
            Some((i, o)) => report.fail(name, format!("i={i} ord={o}")),
        }
    }
    if ctx.tau[0].sub(&one).is_zero_at_precision() {
        report.pass("tau0-exactly-one");
    } else {
        report.fail("tau0-exactly-one", format!("{:?}", ctx.tau[0].ord()));
    }

    // sigma(l) congruence on small random-ish vectors
    let mut bad = None;
    'outer: for a in 0..3i64 {
        for b in 0..3i64 {
            let l = vec![a, b, a + b];
            let s = ctx.sigma_of(&l, 2)?;
            let diff = s.sub(&one);
            if let Some(o) = diff.ord() {
                if o < 1 {
                    bad = Some((l, o));
                    break 'outer;
                }
            }
        }
    }
    match bad {
        None => report.pass("sigma-product-congruence"),
        Some((l, o)) => report.fail("sigma-product-congruence", format!("l={l:?} ord={o}")),
    }

    // hat-theta factorization: hat(t) = exp(gamma0 t) * hat1(t)
    let deg = imax.min(ctx.theta_hat.len() - 1).min(ctx.theta1_hat.len() - 1);
    let mut bad = None;
    for i in 0..=deg {
        // normalized form: hat_i = sum_k C(i,k) hat1_k  (the exp factor
        // contributes gamma0^a/a!, absorbed by the normalization)
        let mut acc = PiAdic::zero(p, ctx.work_prec);
        for k in 0..=i {
            let b = PiAdic::from_bigint(p, binomial(i as u64, k as u64), ctx.work_prec);
            acc = acc.add(&ctx.theta1_hat[k].mul(&b));
        }
        let (ok, _) = acc.congruent(&ctx.theta_hat[i], ctx.target_prec);
        if !ok {
            bad = Some(i);
            break;
        }
    }
    match bad {
        None => report.pass_detail("hat-theta-factorization", format!("deg<={deg}")),
        Some(i) => report.fail("hat-theta-factorization", format!("i={i}")),
    }

    // multiplicativity: theta(t) * hat-theta(t^p) = hat-theta(t)
    let max_deg = (ctx.theta.len() - 1).min(ctx.theta_hat.len() - 1).min(imax);
    let mut bad = None;
    for n in 0..=max_deg {
        let mut acc = PiAdic::zero(p, ctx.work_prec);
        let mut k = 0usize;
        while p as usize * k <= n {
            let m = n - p as usize * k;
            if m < ctx.theta.len() {
                // hat-theta raw coefficient of t^k is hat_k gamma0^k / k!
                let raw = ctx.theta_hat[k]
                    .mul(&ctx.gamma0.pow(k as i64)?)
                    .mul(&PiAdic::from_ratio(
                        p,
                        &BigInt::one(),
                        &factorial(k as u64),
                        ctx.work_prec,
                    )?);
                acc = acc.add(&ctx.theta[m].mul(&raw));
            }
            k += 1;
        }
        let rhs = ctx.theta_hat[n]
            .mul(&ctx.gamma0.pow(n as i64)?)
            .mul(&PiAdic::from_ratio(
                p,
                &BigInt::one(),
                &factorial(n as u64),
                ctx.work_prec,
            )?);
        let (ok, _) = acc.congruent(&rhs, ctx.target_prec);
        if !ok {
            bad = Some(n);
            break;
        }
    }
    match bad {
        None => report.pass_detail("splitting-multiplicativity", format!("deg<={max_deg}")),
        Some(n) => report.fail("splitting-multiplicativity", format!("n={n}")),
    }

    Ok(report)
}

/// The one-variable tail identity: projecting the negative powers of
/// `theta(t) Q(t^p)` yields `p Q(t)` coefficientwise.
pub fn verify_key_identity(ctx: &DworkContext, neg_depth: usize) -> Result<VerificationReport> {
    let p = ctx.p as i64;
    let mut report = VerificationReport::new(
        "tail-identity",
        &format!("p={p} K={} depth={neg_depth}", ctx.target_prec),
    );
    report.set_param("p", ctx.p);
    report.set_param("K", ctx.target_prec);
    report.set_param("depth", neg_depth);

    for e in 1..=neg_depth as i64 {
        // coefficient of t^(-e) in theta(t) Q(t^p)
        let mut acc = PiAdic::zero(ctx.p, ctx.work_prec);
        let mut tail_floor = ctx.work_prec;
        let mut i = 0i64;
        loop {
            let m = p * (i + 1) - e;
            if m < 0 {
                i += 1;
                continue;
            }
            // per-term order lower bound: m + ord q_i >= m - s(i) - 1
            let lower = m - digit_sum(i as u64, ctx.p as u64) as i64 - 1;
            if lower >= ctx.work_prec {
                tail_floor = tail_floor.min(lower);
                break;
            }
            if m as usize >= ctx.theta.len() || i as usize >= ctx.sigma.len() {
                // cannot extend further; record the honest floor
                tail_floor = tail_floor.min(lower);
                break;
            }
            acc = acc.add(&ctx.theta[m as usize].mul(&ctx.q_coeff(i as usize)?));
            i += 1;
        }
        let acc = clamp_precision(&acc, tail_floor);
        let rhs = ctx
            .q_coeff((e - 1) as usize)?
            .mul(&PiAdic::from_i64(ctx.p, p, ctx.work_prec));
        let (ok, avail) = acc.congruent(&rhs, ctx.target_prec);
        let id = format!("tail-coefficient-e{e}");
        if avail < ctx.target_prec {
            report.inconclusive(id, format!("available-prec={avail}"));
        } else if ok {
            report.pass_detail(id, format!("prec={}", ctx.target_prec.min(avail)));
        } else {
            report.fail(id, format!("agreement={}", acc.agreement(&rhs)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artin_hasse_heads() {
        // every prime: 1 + t + ...
        for p in [2u32, 3, 5] {
            let c = artin_hasse_coeffs(p, 8);
            assert_eq!(c[0], BigRational::one());
            assert_eq!(c[1], BigRational::one());
        }
        // p = 2: coefficient of t^2 is 1, of t^3 is 2/3
        let c2 = artin_hasse_coeffs(2, 8);
        assert_eq!(c2[2], BigRational::one());
        assert_eq!(
            c2[3],
            BigRational::new(BigInt::from(2), BigInt::from(3))
        );
    }

    #[test]
    fn context_builds_for_small_primes() {
        for p in [2u32, 3, 5] {
            let ctx = DworkContext::new(p, 10, ContextSizes::default()).unwrap();
            assert_eq!(ctx.gamma0.ord(), Some(1));
            let one = PiAdic::one(p, ctx.work_prec);
            assert!(ctx.theta[0].sub(&one).is_zero_at_precision());
            // theta_1 = gamma0
            assert!(ctx.theta[1].sub(&ctx.gamma0).is_zero_at_precision());
        }
    }

    #[test]
    fn splitting_report_passes() {
        for p in [2u32, 3, 5] {
            let ctx = DworkContext::new(p, 10, ContextSizes::default()).unwrap();
            let r = verify_splitting(&ctx, 30).unwrap();
            assert!(r.all_passed(), "p={p}\n{}", r.to_lines());
        }
    }

    #[test]
    fn key_identity_small_depths() {
        for (p, k, depth) in [(2u32, 14i64, 12usize), (3, 12, 10), (5, 12, 10)] {
            let sizes = ContextSizes {
                sigma_max: depth + 8,
                theta_deg: (k + 3 * depth as i64 + 16) as usize,
                extra_headroom: 8,
            };
            let ctx = DworkContext::new(p, k, sizes).unwrap();
            let r = verify_key_identity(&ctx, depth).unwrap();
            assert!(r.all_passed(), "p={p}\n{}", r.to_lines());
        }
    }

    #[test]
    fn tiny_precision_is_inconclusive_not_failing() {
        let ctx = DworkContext::new(3, 1, ContextSizes {
            sigma_max: 4,
            theta_deg: 12,
            extra_headroom: 0,
        })
        .unwrap();
        let r = verify_key_identity(&ctx, 2).unwrap();
        assert!(!r.any_failed(), "{}", r.to_lines());
    }
}
