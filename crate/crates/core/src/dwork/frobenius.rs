//! Coefficientwise verification that the normalized generating series is an
//! eigenvector of the semilinear operator built from the splitting
//! function, and of the height-descent recursion that drives integrality.
//!
//! The multivariate series is never materialized: every check computes one
//! monomial coefficient at a time from the finite sums the operator induces
//! at a fixed pair of exponents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::padic::digit_sum;
use crate::report::VerificationReport;
use crate::series::{enumerate_solutions, SparseSeries};

use super::pi_adic::PiAdic;
use super::splitting::{ContextSizes, DworkContext};

/// Normalized-series expansion: same support as the rational expansion,
/// with each coefficient decorated by the sigma/tau product.
pub fn expand_normalized(
    ctx: &DworkContext,
    cfg: &LatticeConfig,
    u: &[i64],
    trunc: i64,
) -> Result<BTreeMap<Vec<i64>, PiAdic>> {
    let m = cfg.aprime_len();
    let mut out = BTreeMap::new();
    for l in enumerate_solutions(cfg, u, trunc)? {
        let coeff = normalized_coefficient(ctx, m, &l)?;
        out.insert(l, coeff);
    }
    Ok(out)
}

fn normalized_coefficient(ctx: &DworkContext, m: usize, l: &[i64]) -> Result<PiAdic> {
    let mut head = BigInt::one();
    let mut tail = BigInt::one();
    let mut sign = 0i64;
    for (j, &lj) in l.iter().enumerate() {
        if j < m {
            head *= factorial(lj as u64);
            sign += lj;
        } else {
            tail *= factorial(lj as u64);
        }
    }
    if sign % 2 != 0 {
        head = -head;
    }
    let ratio = PiAdic::from_ratio(ctx.p, &head, &tail, ctx.work_prec)?;
    Ok(ctx.sigma_of(l, m)?.mul(&ratio))
}

/// Coefficient of the operator image at x-exponent `rho` and
/// variable-exponent `mu`: the finite double sum over digit decompositions
/// `mu_j = m_j - p(l_j + 1)` (distinguished block) and `mu_j = m_j + p l_j`
/// (the rest), with every term below the skip threshold accumulated and the
/// rest accounted into the precision floor.
pub fn operator_coefficient(
    ctx: &DworkContext,
    cfg: &LatticeConfig,
    rho: &[i64],
    mu: &[i64],
    skip_threshold: i64,
) -> Result<PiAdic> {
    let n = cfg.num_points();
    let m = cfg.aprime_len();
    debug_assert_eq!(mu.len(), n);

    // consistency: sum_j mu_j a_j = rho, else the coefficient is empty
    let mut acc = vec![0i64; cfg.dim()];
    for (j, pt) in cfg.points().iter().enumerate() {
        for c in 0..cfg.dim() {
            acc[c] += mu[j] * pt[c];
        }
    }
    if acc != rho {
        return Ok(PiAdic::zero(ctx.p, skip_threshold));
    }
    for (j, &mj) in mu.iter().enumerate() {
        if j >= m && mj < 0 {
            return Ok(PiAdic::zero(ctx.p, skip_threshold));
        }
    }

    let mut sum = PiAdic::zero(ctx.p, ctx.work_prec);
    let mut l = vec![0i64; n];
    let mut state = DfsState {
        ctx,
        cfg,
        mu,
        skip_threshold,
        sum: &mut sum,
        floor: ctx.work_prec,
    };
    dfs_terms(&mut state, &mut l, 0)?;
    let floor = state.floor.min(skip_threshold);
    // fold the floor from skipped terms into the precision
    return Ok(sum.add(&PiAdic::zero(ctx.p, floor)));

    // recursive enumeration of the digit decompositions
    struct DfsState<'a> {
        ctx: &'a DworkContext,
        cfg: &'a LatticeConfig,
        mu: &'a [i64],
        skip_threshold: i64,
        sum: &'a mut PiAdic,
        floor: i64,
    }

    fn contrib_head(p: i64, mu_j: i64, lj: i64, pp: u64) -> i64 {
        mu_j + p * (lj + 1) - 1 - digit_sum(lj as u64, pp) as i64
    }

    fn contrib_tail(mu_j: i64, p: i64, lj: i64, pp: u64) -> i64 {
        (mu_j - p * lj) + digit_sum(lj as u64, pp) as i64
    }

    fn min_rest(state: &DfsState, j: usize) -> i64 {
        let m = state.cfg.aprime_len();
        let p = state.ctx.p as i64;
        let mut acc = 0i64;
        for k in j..state.cfg.num_points() {
            if k < m {
                acc += state.mu[k] + p - 1;
            }
            // tail coordinates contribute at least zero
        }
        acc
    }

    fn dfs_terms(state: &mut DfsState, l: &mut Vec<i64>, j: usize) -> Result<()> {
        let n = state.cfg.num_points();
        let m = state.cfg.aprime_len();
        let p = state.ctx.p as i64;
        let pp = state.ctx.p as u64;
        if j == n {
            emit(state, l)?;
            return Ok(());
        }
        let fixed: i64 = (0..j)
            .map(|k| {
                if k < m {
                    contrib_head(p, state.mu[k], l[k], pp)
                } else {
                    contrib_tail(state.mu[k], p, l[k], pp)
                }
            })
            .sum();
        if j < m {
            let mut lj = 0i64;
            loop {
                let c = contrib_head(p, state.mu[j], lj, pp);
                let lower = fixed + c + min_rest(state, j + 1);
                if lower >= state.skip_threshold {
                    // contributions are monotone in this coordinate, so
                    // every larger digit is also below the threshold
                    state.floor = state.floor.min(lower);
                    break;
                }
                l[j] = lj;
                dfs_terms(state, l, j + 1)?;
                l[j] = 0;
                lj += 1;
                if lj > 4 * (state.skip_threshold.max(4)) {
                    return Err(Error::PrecisionExhausted(
                        "digit cap failed to terminate".into(),
                    ));
                }
            }
            Ok(())
        } else {
            let mut lj = 0i64;
            while p * lj <= state.mu[j] {
                l[j] = lj;
                dfs_terms(state, l, j + 1)?;
                l[j] = 0;
                lj += 1;
            }
            Ok(())
        }
    }

    fn emit(state: &mut DfsState, l: &[i64]) -> Result<()> {
        let m = state.cfg.aprime_len();
        let p = state.ctx.p as i64;
        let ctx = state.ctx;
        let mut head = BigInt::one();
        let mut tail = BigInt::one();
        let mut sign = 0i64;
        let mut gamma_pow = 0i64;
        let mut term_prec_guard = 0i64;
        for (j, &lj) in l.iter().enumerate() {
            let m_j = if j < m {
                state.mu[j] + p * (lj + 1)
            } else {
                state.mu[j] - p * lj
            };
            debug_assert!(m_j >= 0);
            if m_j as usize >= ctx.theta.len() {
                return Err(Error::PrecisionExhausted(format!(
                    "splitting series degree {} exceeds computed {}",
                    m_j,
                    ctx.theta.len() - 1
                )));
            }
            term_prec_guard += m_j;
            if j < m {
                head *= factorial(lj as u64);
                sign += lj;
                gamma_pow += -(lj + 1);
            } else {
                tail *= factorial(lj as u64);
                gamma_pow += lj;
            }
        }
        let _ = term_prec_guard;
        if sign % 2 != 0 {
            head = -head;
        }
        let mut term = ctx.sigma_of(l, m)?;
        term = term.mul(&PiAdic::from_ratio(ctx.p, &head, &tail, ctx.work_prec)?);
        term = term.mul(&ctx.gamma0.pow(gamma_pow)?);
        for (j, &lj) in l.iter().enumerate() {
            let m_j = if j < m {
                state.mu[j] + p * (lj + 1)
            } else {
                state.mu[j] - p * lj
            };
            term = term.mul(&ctx.theta[m_j as usize]);
        }
        *state.sum = state.sum.add(&term);
        Ok(())
    }
}

/// Parameters shared by the eigenvector and recursion drivers.
#[derive(Clone, Copy, Debug)]
pub struct VerifyParams {
    pub prime: u32,
    pub precision: i64,
    pub trunc: i64,
    pub height_cap: i64,
}

fn context_for(cfg: &LatticeConfig, params: &VerifyParams, supports: &[Vec<Vec<i64>>]) -> Result<DworkContext> {
    let m = cfg.aprime_len();
    let p = params.prime as i64;
    let mut max_head = 0i64;
    let mut max_tail = 0i64;
    let mut max_mu = 0i64;
    for sols in supports {
        for l in sols {
            for (j, &lj) in l.iter().enumerate() {
                if j < m {
                    max_head = max_head.max(lj);
                    max_mu = max_mu.max(lj + 1);
                } else {
                    max_tail = max_tail.max(lj);
                    max_mu = max_mu.max(lj);
                }
            }
        }
    }
    let skip = params.precision + 4;
    // distinguished-block digit caps: p l - s(l) reaches skip + slack
    let mut lcap = 0i64;
    while p * lcap - (digit_sum(lcap as u64, params.prime as u64) as i64)
        < skip + (m as i64) * (max_mu + p) + 8
    {
        lcap += 1;
    }
    let sigma_max = (max_head.max(max_tail).max(lcap) + 4) as usize;
    let theta_deg = (max_mu + p * (lcap + 2) + 8) as usize;
    DworkContext::new(
        params.prime,
        params.precision,
        ContextSizes {
            sigma_max,
            theta_deg,
            extra_headroom: 2 * params.height_cap + 8,
        },
    )
}

fn parameter_points(cfg: &LatticeConfig, height_cap: i64) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for h in 1..=height_cap {
        for v in cfg.interior_points_at_height(h)? {
            out.push(v.iter().map(|&x| -x).collect());
        }
    }
    Ok(out)
}

/// Eigenvector verification: at every parameter within the height cap and
/// every monomial of the truncated normalized series, the operator
/// coefficient equals `p^M` times the normalized coefficient.
pub fn verify_eigenvector(cfg: &LatticeConfig, params: VerifyParams) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "frobenius-eigenvector",
        &format!(
            "{} p={} K={} d={} hcap={}",
            cfg.name, params.prime, params.precision, params.trunc, params.height_cap
        ),
    );
    report.set_param("p", params.prime);
    report.set_param("K", params.precision);
    report.set_param("trunc", params.trunc);
    report.set_param("height_cap", params.height_cap);
    if !cfg.beta_interior() {
        return Err(Error::InvalidConfig(
            "the eigenvector verification needs an interior distinguished sum".into(),
        ));
    }
    if !cfg.aprime_minimal()? {
        return Err(Error::InvalidConfig(
            "the distinguished subset is not minimal".into(),
        ));
    }

    let rhos = parameter_points(cfg, params.height_cap)?;
    let supports: Vec<Vec<Vec<i64>>> = rhos
        .iter()
        .map(|rho| enumerate_solutions(cfg, rho, params.trunc))
        .collect::<Result<_>>()?;
    let ctx = context_for(cfg, &params, &supports)?;

    let m = cfg.aprime_len() as i64;
    let p_pow_m = PiAdic::from_bigint(
        ctx.p,
        BigInt::from(params.prime).pow(m as u32),
        ctx.work_prec,
    );
    let skip = params.precision + 4;
    let kernel = crate::series::relation_basis(cfg);

    for rho in &rhos {
        let gser = expand_normalized(&ctx, cfg, rho, params.trunc)?;
        let rho_n = cfg.height_of(rho);
        let scale = ctx.gamma0.pow(rho_n)?;
        for (lstar, gcoeff) in &gser {
            let mu = SparseSeries::exponents(cfg, lstar);
            let lhs = operator_coefficient(&ctx, cfg, rho, &mu, skip)?;
            let rhs = gcoeff.mul(&scale).mul(&p_pow_m);
            let (ok, avail) = lhs.congruent(&rhs, params.precision);
            let id = format!("eigenvector-rho={rho:?}-l={lstar:?}");
            if avail < params.precision {
                report.inconclusive(id, format!("available-prec={avail}"));
            } else if ok {
                report.pass_detail(id, format!("prec={}", params.precision));
            } else {
                report.fail(id, format!("agreement={}", lhs.agreement(&rhs)));
            }

            // unit check: the ratio of matched coefficients is exactly p^M
            if !gcoeff.is_zero_at_precision() {
                let denom = gcoeff.mul(&scale);
                if let Ok(inv) = denom.inv() {
                    let ratio = lhs.mul(&inv);
                    let k2 = params.precision.min(ratio.precision());
                    let (rok, ravail) = ratio.congruent(&p_pow_m, k2);
                    let id = format!("eigenvalue-ratio-rho={rho:?}-l={lstar:?}");
                    if ravail < 1 {
                        report.inconclusive(id, format!("available-prec={ravail}"));
                    } else if rok {
                        report.pass_detail(id, format!("prec={k2}"));
                    } else {
                        report.fail(id, format!("agreement={}", ratio.agreement(&p_pow_m)));
                    }
                }
            }
        }
        // off-support exponents must map to zero
        if let Some(lstar) = gser.keys().next() {
            for kappa in &kernel {
                let shifted: Vec<i64> = lstar.iter().zip(kappa).map(|(a, b)| a - b).collect();
                if shifted.iter().all(|&x| x >= 0) {
                    continue; // still in the support lattice
                }
                if shifted
                    .iter()
                    .skip(cfg.aprime_len())
                    .any(|&x| x < 0)
                {
                    continue; // trivially empty operator sum
                }
                let mu = SparseSeries::exponents(cfg, &shifted);
                let lhs = operator_coefficient(&ctx, cfg, rho, &mu, skip)?;
                let zero = PiAdic::zero(ctx.p, params.precision);
                let (ok, avail) = lhs.congruent(&zero, params.precision);
                let id = format!("offsupport-vanishes-rho={rho:?}-l={shifted:?}");
                if avail < params.precision {
                    report.inconclusive(id, format!("available-prec={avail}"));
                } else if ok {
                    report.pass(id);
                } else {
                    report.fail(id, format!("ord={:?}", lhs.ord()));
                }
            }
        }
    }
    Ok(report)
}

/// Recursion verification: the height-descent identity expressing each
/// normalized coefficient through coefficients at smaller tail degree, with
/// unit and integrality assertions on the assembled multipliers.
pub fn verify_recursion(cfg: &LatticeConfig, params: VerifyParams) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "height-recursion",
        &format!(
            "{} p={} K={} d={} hcap={}",
            cfg.name, params.prime, params.precision, params.trunc, params.height_cap
        ),
    );
    report.set_param("p", params.prime);
    report.set_param("K", params.precision);
    report.set_param("trunc", params.trunc);
    report.set_param("height_cap", params.height_cap);
    if !cfg.beta_interior() {
        return Err(Error::InvalidConfig(
            "the recursion verification needs an interior distinguished sum".into(),
        ));
    }

    let rhos = parameter_points(cfg, params.height_cap)?;
    let supports: Vec<Vec<Vec<i64>>> = rhos
        .iter()
        .map(|rho| enumerate_solutions(cfg, rho, params.trunc))
        .collect::<Result<_>>()?;
    let ctx = context_for(cfg, &params, &supports)?;

    let p = ctx.p as i64;
    let m = cfg.aprime_len();
    let skip = params.precision + 4;

    // gamma-tilde = gamma0^((p-1) M) / p^M, a unit
    let gamma_tilde = ctx
        .gamma0
        .pow((p - 1) * m as i64)?
        .mul_p_pow(-(m as i64));
    if gamma_tilde.ord() == Some(0) {
        report.pass("gamma-tilde-unit");
    } else {
        report.fail("gamma-tilde-unit", format!("ord={:?}", gamma_tilde.ord()));
    }

    for (rho, sols) in rhos.iter().zip(&supports) {
        let gser = expand_normalized(&ctx, cfg, rho, params.trunc)?;
        // base case: no tail degree means a p-integral coefficient
        for l in sols {
            if l.iter().skip(m).all(|&x| x == 0) {
                let c = &gser[l];
                let id = format!("base-case-integral-rho={rho:?}-l={l:?}");
                if c.ord().map_or(true, |o| o >= 0) {
                    report.pass(id);
                } else {
                    report.fail(id, format!("ord={:?}", c.ord()));
                }
            }
        }
        for (lstar, target_coeff) in &gser {
            let assembled = assemble_recursion(
                &ctx,
                cfg,
                &gamma_tilde,
                rho,
                lstar,
                skip,
                &mut report,
            )?;
            let (ok, avail) = assembled.congruent(target_coeff, params.precision);
            let id = format!("recursion-rho={rho:?}-l={lstar:?}");
            if avail < params.precision {
                report.inconclusive(id, format!("available-prec={avail}"));
            } else if ok {
                report.pass_detail(id, format!("prec={}", params.precision));
            } else {
                report.fail(
                    id,
                    format!("agreement={}", assembled.agreement(target_coeff)),
                );
            }
        }
    }
    Ok(report)
}

/// Right-hand side of the descent identity for one target monomial: sum
/// over source indices of multiplier times source coefficient, where the
/// multiplier is checked to be p-integral term by term.
fn assemble_recursion(
    ctx: &DworkContext,
    cfg: &LatticeConfig,
    gamma_tilde: &PiAdic,
    rho: &[i64],
    lstar: &[i64],
    skip: i64,
    report: &mut VerificationReport,
) -> Result<PiAdic> {
    let n = cfg.num_points();
    let mut sum = PiAdic::zero(ctx.p, ctx.work_prec);
    let mut floor = ctx.work_prec;
    let mut lprime = vec![0i64; n];
    let mut integrality_violation: Option<String> = None;
    dfs(
        ctx,
        cfg,
        gamma_tilde,
        lstar,
        skip,
        &mut lprime,
        0,
        &mut sum,
        &mut floor,
        &mut integrality_violation,
    )?;
    match integrality_violation {
        None => report.pass(format!("multiplier-integral-rho={rho:?}-l={lstar:?}")),
        Some(w) => report.fail(format!("multiplier-integral-rho={rho:?}-l={lstar:?}"), w),
    }
    return Ok(sum.add(&PiAdic::zero(ctx.p, floor.min(skip))));

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        ctx: &DworkContext,
        cfg: &LatticeConfig,
        gamma_tilde: &PiAdic,
        lstar: &[i64],
        skip: i64,
        lprime: &mut Vec<i64>,
        j: usize,
        sum: &mut PiAdic,
        floor: &mut i64,
        violation: &mut Option<String>,
    ) -> Result<()> {
        let p = ctx.p as i64;
        let pp = ctx.p as u64;
        let m = cfg.aprime_len();
        let n = cfg.num_points();
        if j == n {
            return emit(ctx, cfg, gamma_tilde, lstar, lprime, sum, violation);
        }
        if j < m {
            // ord lower bound grows like p*l - s(l) in this coordinate
            let fixed: i64 = (0..j)
                .map(|k| p * lprime[k] - digit_sum(lprime[k] as u64, pp) as i64)
                .sum();
            let tail_allowance: i64 = (m..n).map(|k| lstar[k]).sum();
            let mut lj = 0i64;
            loop {
                let here = p * lj - digit_sum(lj as u64, pp) as i64;
                let lower = fixed + here - p * tail_allowance - (p - 1) * m as i64;
                if lower >= skip {
                    *floor = (*floor).min(lower);
                    break;
                }
                lprime[j] = lj;
                dfs(
                    ctx,
                    cfg,
                    gamma_tilde,
                    lstar,
                    skip,
                    lprime,
                    j + 1,
                    sum,
                    floor,
                    violation,
                )?;
                lprime[j] = 0;
                lj += 1;
                if lj > 8 * skip.max(4) + 8 {
                    return Err(Error::PrecisionExhausted(
                        "recursion digit cap failed to terminate".into(),
                    ));
                }
            }
            Ok(())
        } else {
            let mut lj = 0i64;
            while p * lj <= lstar[j] {
                lprime[j] = lj;
                dfs(
                    ctx,
                    cfg,
                    gamma_tilde,
                    lstar,
                    skip,
                    lprime,
                    j + 1,
                    sum,
                    floor,
                    violation,
                )?;
                lprime[j] = 0;
                lj += 1;
            }
            Ok(())
        }
    }

    fn emit(
        ctx: &DworkContext,
        cfg: &LatticeConfig,
        gamma_tilde: &PiAdic,
        lstar: &[i64],
        lprime: &[i64],
        sum: &mut PiAdic,
        violation: &mut Option<String>,
    ) -> Result<()> {
        let p = ctx.p as i64;
        let m = cfg.aprime_len();
        let n = cfg.num_points();
        // source parameter and its height
        let mut u = vec![0i64; cfg.dim()];
        for (j, pt) in cfg.points().iter().enumerate() {
            let e = if j < m { -lprime[j] - 1 } else { lprime[j] };
            for c in 0..cfg.dim() {
                u[c] += e * pt[c];
            }
        }
        let neg_u: Vec<i64> = u.iter().map(|&x| -x).collect();
        if !cfg.cone().relative_interior_contains_int(&neg_u) {
            // outside the parameter set: projected away
            return Ok(());
        }
        // digit polynomial coefficient: m_j = eps(lstar)_j - p * eps(lprime)_j
        let mut mvec = vec![0i64; n];
        let mut nu_n = 0i64;
        for j in 0..n {
            let e = if j < m { -lprime[j] - 1 } else { lprime[j] };
            let estar = if j < m { -lstar[j] - 1 } else { lstar[j] };
            let mj = estar - p * e;
            if mj < 0 {
                return Ok(());
            }
            if mj as usize >= ctx.theta.len() {
                return Err(Error::PrecisionExhausted(format!(
                    "splitting series degree {} exceeds computed {}",
                    mj,
                    ctx.theta.len() - 1
                )));
            }
            mvec[j] = mj;
            nu_n += mj;
        }
        let mut theta_prod = PiAdic::one(ctx.p, ctx.work_prec);
        for &mj in &mvec {
            theta_prod = theta_prod.mul(&ctx.theta[mj as usize]);
        }
        // digit-polynomial order bound: the product is divisible by
        // gamma0^(nu_n)
        if theta_prod.ord().map_or(false, |o| o < nu_n) {
            *violation = Some(format!(
                "digit-polynomial ord {:?} below height {nu_n} at m={mvec:?}",
                theta_prod.ord()
            ));
        }
        let theta_tilde = theta_prod.mul(&ctx.gamma0_inv.pow(nu_n)?);
        let u_n = cfg.height_of(&u);
        let u_n_prime = -u_n - m as i64;
        let multiplier = gamma_tilde
            .mul(&ctx.gamma0.pow((p - 1) * u_n_prime)?)
            .mul(&theta_tilde);
        if violation.is_none() {
            if let Some(o) = multiplier.ord() {
                if o < 0 {
                    *violation = Some(format!(
                        "multiplier ord {o} at u={u:?} m={mvec:?}"
                    ));
                }
            }
        }
        let source = normalized_coefficient(ctx, m, lprime)?;
        *sum = sum.add(&multiplier.mul(&source));
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fixtures::{cubic_surface, smallest};

    #[test]
    fn normalized_matches_rational_mod_gamma0() {
        let cfg = smallest();
        let params = VerifyParams {
            prime: 3,
            precision: 8,
            trunc: 4,
            height_cap: 3,
        };
        let rhos = parameter_points(&cfg, params.height_cap).unwrap();
        let supports: Vec<_> = rhos
            .iter()
            .map(|r| enumerate_solutions(&cfg, r, params.trunc).unwrap())
            .collect();
        let ctx = context_for(&cfg, &params, &supports).unwrap();
        for rho in &rhos {
            let gser = expand_normalized(&ctx, &cfg, rho, params.trunc).unwrap();
            for (l, gc) in &gser {
                let rational = crate::series::term_coefficient(&cfg, l);
                let embedded = PiAdic::from_ratio(
                    ctx.p,
                    rational.numer(),
                    rational.denom(),
                    ctx.work_prec,
                )
                .unwrap();
                let diff = gc.sub(&embedded);
                // congruent modulo gamma0 (the sigma product is 1 mod gamma0
                // and the rational part is a p-unit times a power of p)
                assert!(
                    diff.ord().map_or(true, |o| o >= 1),
                    "l={l:?} ord={:?}",
                    diff.ord()
                );
            }
        }
    }

    #[test]
    fn eigenvector_on_smallest_config() {
        let cfg = smallest();
        for p in [2u32, 3] {
            let r = verify_eigenvector(
                &cfg,
                VerifyParams {
                    prime: p,
                    precision: 10,
                    trunc: 4,
                    height_cap: 3,
                },
            )
            .unwrap();
            assert!(r.all_passed(), "p={p}\n{}", r.to_lines());
        }
    }

    #[test]
    fn recursion_on_smallest_config() {
        let cfg = smallest();
        for p in [2u32, 3] {
            let r = verify_recursion(
                &cfg,
                VerifyParams {
                    prime: p,
                    precision: 10,
                    trunc: 4,
                    height_cap: 3,
                },
            )
            .unwrap();
            assert!(r.all_passed(), "p={p}\n{}", r.to_lines());
        }
    }

    #[test]
    fn eigenvector_on_cubic_surface_small_window() {
        let cfg = cubic_surface();
        let r = verify_eigenvector(
            &cfg,
            VerifyParams {
                prime: 2,
                precision: 8,
                trunc: 3,
                height_cap: 2,
            },
        )
        .unwrap();
        assert!(r.all_passed(), "{}", r.to_lines());
    }

    #[test]
    fn operator_coefficient_empty_cases() {
        let cfg = smallest();
        let params = VerifyParams {
            prime: 3,
            precision: 6,
            trunc: 2,
            height_cap: 2,
        };
        let rhos = parameter_points(&cfg, params.height_cap).unwrap();
        let supports: Vec<_> = rhos
            .iter()
            .map(|r| enumerate_solutions(&cfg, r, params.trunc).unwrap())
            .collect();
        let ctx = context_for(&cfg, &params, &supports).unwrap();
        // inconsistent mu: wrong weighted sum
        let c = operator_coefficient(&ctx, &cfg, &[-1, -2], &[0, 0], 10).unwrap();
        assert!(c.is_zero_at_precision());
    }
}
