//! Consistency ledger for anticyclotomic tower data.
//!
//! Ingests per-level arithmetic records (class-number exponents along the
//! quadratic tower and its non-normal subtower, plus the order of the
//! distinguished ideal class) and verifies the finite relations tying them
//! together: the doubled-exponent growth law, the order bookkeeping between
//! the unit-quotient and the kernel of the join map, the bounded quotient
//! exponent, and the affine/Iwasawa-type growth fits with their parity
//! constraints. The ledger validates relations among supplied data; it
//! never computes class groups.

use serde::Deserialize;
use thiserror::Error;

use crate::linalg::{big, det_exact, is_prime_u64, rat, BigRat, RatMatrix};
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("p = {0} must be an odd prime")]
    BadPrime(u64),
    #[error("g = {g} and split = {split} are inconsistent (g = 2 iff split)")]
    SplitMismatch { g: u8, split: bool },
    #[error("f = {f} < n0 = {n0}: the quotient bound forces p^n0 | h_L^(p)")]
    FBelowN0 { f: u32, n0: u32 },
    #[error("for p = 3 the tower field must be declared distinct from Q(sqrt(-3))")]
    EisensteinFieldExcluded,
    #[error("level n = {n} is below n0 = {n0}")]
    LevelBelowN0 { n: u32, n0: u32 },
    #[error("h_n = {h} exceeds n - n0 = {max} at level {n}: impossible order")]
    HTooLarge { n: u32, h: u32, max: u32 },
    #[error("need at least {need} data points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("no exact tail fit: {0}")]
    NotStabilized(String),
    #[error("fitted slope {0} of the class order is outside {{0, 1}}")]
    BadAffineSlope(i64),
}

/// Per-level arithmetic record: |A_{L_n}| = p^e, |A_{K_n}| = p^eps, and the
/// order p^h of the class of the product of primes above p. Optional
/// measured idele-unit cohomology exponents can be attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct TowerDatum {
    pub n: u32,
    pub e: u32,
    pub eps: u32,
    pub h: u32,
    #[serde(default)]
    pub h0_exp: Option<u32>,
    #[serde(default)]
    pub h1_exp: Option<u32>,
}

/// Tower-wide configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct TowerConfig {
    pub p: u64,
    /// smallest level from which the tower is totally ramified above p
    pub n0: u32,
    /// number of primes of the quadratic field above p (1 or 2)
    pub g: u8,
    /// exponent of the p-part of the base class number
    pub f: u32,
    pub split: bool,
    /// set when total ramification holds from the base, upgrading the
    /// quotient bound to an exact order
    pub totally_ramified_from_base: bool,
    /// declared level from which the growth formulas apply (defaults to n0)
    #[serde(default)]
    pub stable_from: Option<u32>,
    /// declaration that the quadratic field is not Q(sqrt(-3)); only
    /// consulted when p = 3
    #[serde(default)]
    pub l_is_not_q_sqrt_minus_3: Option<bool>,
}

impl TowerConfig {
    pub fn validate(&self) -> Result<(), TowerError> {
        if self.p < 3 || !is_prime_u64(self.p) {
            return Err(TowerError::BadPrime(self.p));
        }
        if (self.g == 2) != self.split || !(1..=2).contains(&self.g) {
            return Err(TowerError::SplitMismatch {
                g: self.g,
                split: self.split,
            });
        }
        if self.f < self.n0 {
            return Err(TowerError::FBelowN0 {
                f: self.f,
                n0: self.n0,
            });
        }
        if self.p == 3 && !self.l_is_not_q_sqrt_minus_3.unwrap_or(true) {
            return Err(TowerError::EisensteinFieldExcluded);
        }
        Ok(())
    }

    pub fn stable_from(&self) -> u32 {
        self.stable_from.unwrap_or(self.n0).max(self.n0)
    }
}

/// A full ledger input: configuration plus per-level records.
#[derive(Debug, Clone, Deserialize)]
pub struct TowerInput {
    #[serde(flatten)]
    pub config: TowerConfig,
    pub levels: Vec<TowerDatum>,
}

/// Fitted growth law e_n = mu p^n + lambda n + nu, exact from `from_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IwasawaTriple {
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
    pub from_level: u32,
}

/// Fitted affine law h_n = lambda n + nu, exact from `from_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineFit {
    pub lambda: i64,
    pub nu: i64,
    pub from_level: u32,
}

/// r_n = n - n0 - h_n, the exponent of the unit-quotient order at level n.
/// Rejects data the short exact sequence forbids.
pub fn r_exponent(n: u32, config: &TowerConfig, h_n: u32) -> Result<u32, TowerError> {
    if n < config.n0 {
        return Err(TowerError::LevelBelowN0 { n, n0: config.n0 });
    }
    let max = n - config.n0;
    if h_n > max {
        return Err(TowerError::HTooLarge { n, h: h_n, max });
    }
    Ok(max - h_n)
}

/// One verified identity line.
#[derive(Debug, Clone)]
pub struct LedgerLine {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

/// Report for one level.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub n: u32,
    pub lines: Vec<LedgerLine>,
}

impl LevelReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

/// Checks every per-level identity on one datum:
/// the doubled-exponent relation 2 eps = e - r + n - f, the kernel order
/// |Ker iota_n| = p^h, the bookkeeping |R_n| * |Ker iota_n| = p^(n-n0),
/// the nonnegative quotient exponent f - n0, and (when measured) the
/// idele-unit cohomology exponents (g-1)(n-n0) and n-n0.
pub fn check_level(datum: &TowerDatum, config: &TowerConfig) -> Result<LevelReport, TowerError> {
    config.validate()?;
    let n = datum.n;
    let r_n = r_exponent(n, config, datum.h)?;
    let mut lines = Vec::new();

    let lhs = 2 * datum.eps as i64;
    let rhs = datum.e as i64 - r_n as i64 + n as i64 - config.f as i64;
    lines.push(LedgerLine {
        name: "2*eps_n = e_n - r_n + n - f".into(),
        detail: format!("2*{} = {} - {} + {} - {}", datum.eps, datum.e, r_n, n, config.f),
        pass: lhs == rhs,
    });
    lines.push(LedgerLine {
        name: "|Ker iota_n| = p^h_n".into(),
        detail: format!("kernel exponent {}", datum.h),
        pass: datum.h <= datum.e,
    });
    lines.push(LedgerLine {
        name: "|R_n| * |Ker iota_n| = p^(n - n0)".into(),
        detail: format!("{} + {} = {}", r_n, datum.h, n - config.n0),
        pass: r_n + datum.h == n - config.n0,
    });
    lines.push(LedgerLine {
        name: "quotient exponent f - n0 >= 0".into(),
        detail: format!("{} - {} = {}", config.f, config.n0, config.f - config.n0),
        pass: config.f >= config.n0,
    });
    if let Some(h0) = datum.h0_exp {
        let expected = (config.g as u32 - 1) * (n - config.n0);
        lines.push(LedgerLine {
            name: "idele-unit H^0 exponent = (g-1)(n - n0)".into(),
            detail: format!("{h0} vs {expected}"),
            pass: h0 == expected,
        });
    }
    if let Some(h1) = datum.h1_exp {
        let expected = n - config.n0;
        lines.push(LedgerLine {
            name: "idele-unit H^1 exponent = n - n0".into(),
            detail: format!("{h1} vs {expected}"),
            pass: h1 == expected,
        });
    }
    Ok(LevelReport { n, lines })
}

/// The quotient exponent f - n0, with its interpretation: 0 forces the
/// limit class group to be the product of the two subtower limits; with
/// total ramification from the base the bound is attained exactly.
#[derive(Debug, Clone)]
pub struct QuotientConclusion {
    pub exponent: u32,
    pub exact: bool,
    pub statement: String,
}

pub fn quotient_conclusion(config: &TowerConfig) -> Result<QuotientConclusion, TowerError> {
    config.validate()?;
    let exponent = config.f - config.n0;
    let (exact, statement) = if exponent == 0 {
        (
            true,
            "X_L = X_K X_K' (the quotient is trivial)".to_string(),
        )
    } else if config.totally_ramified_from_base {
        (
            true,
            format!(
                "X_L / X_K X_K' has exact order {}^{} (norms surjective down the tower)",
                config.p, exponent
            ),
        )
    } else {
        (
            false,
            format!("X_L / X_K X_K' has order dividing {}^{}", config.p, exponent),
        )
    };
    Ok(QuotientConclusion {
        exponent,
        exact,
        statement,
    })
}

/// Fits h_n = lambda n + nu on the tail of the data, scanning backwards for
/// the minimal from_level; the law must be confirmed by at least one point
/// beyond the two that determine it, and the slope must be 0 or 1.
pub fn fit_affine_h(points: &[(u32, u32)]) -> Result<AffineFit, TowerError> {
    if points.len() < 3 {
        return Err(TowerError::TooFewPoints {
            need: 3,
            got: points.len(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort_by_key(|&(n, _)| n);
    let k = pts.len();
    let (n1, h1) = (pts[k - 2].0 as i64, pts[k - 2].1 as i64);
    let (n2, h2) = (pts[k - 1].0 as i64, pts[k - 1].1 as i64);
    let dn = n2 - n1;
    if dn == 0 || (h2 - h1) % dn != 0 {
        return Err(TowerError::NotStabilized(
            "last two points give no integer slope".into(),
        ));
    }
    let lambda = (h2 - h1) / dn;
    let nu = h2 - lambda * n2;
    // scan backwards for the minimal matching level
    let mut from_idx = k - 2;
    while from_idx > 0 {
        let (n, h) = (pts[from_idx - 1].0 as i64, pts[from_idx - 1].1 as i64);
        if lambda * n + nu == h {
            from_idx -= 1;
        } else {
            break;
        }
    }
    if k - from_idx < 3 {
        return Err(TowerError::NotStabilized(
            "affine law not confirmed past the two determining points".into(),
        ));
    }
    if !(0..=1).contains(&lambda) {
        return Err(TowerError::BadAffineSlope(lambda));
    }
    Ok(AffineFit {
        lambda,
        nu,
        from_level: pts[from_idx].0,
    })
}

/// Parity findings attached to a doubled subtower fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityFlags {
    pub lambda_even: bool,
    pub mu_nu_congruent: bool,
}

/// Fits e_n = mu p^n + lambda n + nu exactly on the data tail. For
/// doubled = true the input points are eps_n and the fit runs on 2 eps_n,
/// additionally reporting the parity constraints (lambda even,
/// mu = nu mod 2).
pub fn fit_iwasawa(
    points: &[(u32, u32)],
    p: u64,
    doubled: bool,
) -> Result<(IwasawaTriple, Option<ParityFlags>), TowerError> {
    if points.len() < 4 {
        return Err(TowerError::TooFewPoints {
            need: 4,
            got: points.len(),
        });
    }
    let mut pts: Vec<(u32, i64)> = points
        .iter()
        .map(|&(n, y)| (n, if doubled { 2 * y as i64 } else { y as i64 }))
        .collect();
    pts.sort_by_key(|&(n, _)| n);
    let k = pts.len();
    let last3 = &pts[k - 3..];

    // solve [p^n, n, 1] * (mu, lambda, nu) = y on the last three points
    let mat = RatMatrix::from_fn(3, 3, |i, j| {
        let n = last3[i].0;
        match j {
            0 => BigRat::from_integer(big(p as i64).pow(n)),
            1 => rat(n as i64),
            _ => rat(1),
        }
    });
    if det_exact(&mat).expect("square").is_zero() {
        return Err(TowerError::NotStabilized(
            "determining system is singular".into(),
        ));
    }
    let rhs: Vec<BigRat> = last3.iter().map(|&(_, y)| rat(y)).collect();
    let sol = crate::linalg::solve_rational(&mat, &rhs)
        .ok_or_else(|| TowerError::NotStabilized("determining system is singular".into()))?;
    if sol.iter().any(|x| !x.is_integer()) {
        return Err(TowerError::NotStabilized(
            "determining points give non-integer invariants".into(),
        ));
    }
    let mu = sol[0].to_integer().to_i64().unwrap();
    let lambda = sol[1].to_integer().to_i64().unwrap();
    let nu = sol[2].to_integer().to_i64().unwrap();
    if mu < 0 {
        return Err(TowerError::NotStabilized("negative mu".into()));
    }
    let predict = |n: u32| -> i64 {
        let pn = big(p as i64).pow(n);
        (pn * big(mu) + big(lambda * n as i64) + big(nu))
            .to_i64()
            .expect("levels are small")
    };
    let mut from_idx = k - 3;
    while from_idx > 0 {
        let (n, y) = pts[from_idx - 1];
        if predict(n) == y {
            from_idx -= 1;
        } else {
            break;
        }
    }
    if k - from_idx < 4 {
        return Err(TowerError::NotStabilized(
            "growth law not confirmed past the three determining points".into(),
        ));
    }
    let triple = IwasawaTriple {
        mu,
        lambda,
        nu,
        from_level: pts[from_idx].0,
    };
    let parity = doubled.then(|| ParityFlags {
        lambda_even: lambda % 2 == 0,
        mu_nu_congruent: (mu - nu).rem_euclid(2) == 0,
    });
    Ok((triple, parity))
}

/// Derives the subtower invariants from the quadratic-tower invariants:
/// mu_K = mu_L, lambda_K = lambda_L + lambda_P, nu_K = nu_L - f + n0 + nu_P.
pub fn derive_subtower_invariants(
    mu_l: i64,
    lambda_l: i64,
    nu_l: i64,
    config: &TowerConfig,
    lambda_p: i64,
    nu_p: i64,
) -> (IwasawaTriple, ParityFlags) {
    let mu = mu_l;
    let lambda = lambda_l + lambda_p;
    let nu = nu_l - config.f as i64 + config.n0 as i64 + nu_p;
    (
        IwasawaTriple {
            mu,
            lambda,
            nu,
            from_level: config.stable_from(),
        },
        ParityFlags {
            lambda_even: lambda % 2 == 0,
            mu_nu_congruent: (mu - nu).rem_euclid(2) == 0,
        },
    )
}

/// Consistency of the splitting behaviour with the affine slope: the slope
/// is 1 exactly when p splits, and the limits follow.
#[derive(Debug, Clone)]
pub struct SplitReport {
    pub consistent: bool,
    pub conclusions: Vec<String>,
}

pub fn split_consistency(config: &TowerConfig, lambda_p: i64) -> SplitReport {
    let consistent = (lambda_p == 1) == config.split;
    let mut conclusions = Vec::new();
    if consistent {
        if config.split {
            conclusions.push("Ker(iota_infinity) has Z_p-rank 1".to_string());
            conclusions.push("R_infinity = 0".to_string());
        } else {
            conclusions.push("Ker(iota_infinity) is finite".to_string());
            conclusions.push("R_infinity is free of rank 1 over Z_p".to_string());
        }
    } else {
        conclusions.push(format!(
            "inconsistent: split = {} but fitted slope = {}",
            config.split, lambda_p
        ));
    }
    SplitReport {
        consistent,
        conclusions,
    }
}

/// Predicted corank relation: rk X_L = 2 rk X_K (+1 if p splits).
pub fn rank_relation(rank_xk: u64, split: bool) -> u64 {
    2 * rank_xk + if split { 1 } else { 0 }
}

// ---------------------------------------------------------------------------
// synthetic towers

/// A synthetic tower with the invariants that generated it.
#[derive(Debug, Clone)]
pub struct SyntheticTower {
    pub input: TowerInput,
    pub mu_l: i64,
    pub lambda_l: i64,
    pub nu_l: i64,
    pub lambda_p: i64,
    pub nu_p: i64,
}

impl SyntheticTower {
    pub fn expected_subtower(&self) -> IwasawaTriple {
        derive_subtower_invariants(
            self.mu_l,
            self.lambda_l,
            self.nu_l,
            &self.input.config,
            self.lambda_p,
            self.nu_p,
        )
        .0
    }
}

/// Generates an internally consistent synthetic tower from random
/// invariants via the growth formulas: e_n = mu_L p^n + lambda_L n + nu_L,
/// h_n = lambda_P n + nu_P, r_n = n - n0 - h_n, and
/// 2 eps_n = e_n - r_n + n - f.
pub fn random_synthetic_tower<R: rand::Rng>(rng: &mut R) -> SyntheticTower {
    loop {
        let p = *[3u64, 5, 7, 11, 13].get(rng.gen_range(0..5)).unwrap();
        let n0 = rng.gen_range(0..=2u32);
        let f = n0 + rng.gen_range(0..=2u32);
        let lambda_p: i64 = rng.gen_range(0..=1);
        let split = lambda_p == 1;
        let g = if split { 2 } else { 1 };
        let mu_l: i64 = rng.gen_range(0..=2);
        // lambda_K = lambda_L + lambda_P must be even
        let lambda_l: i64 = {
            let raw: i64 = rng.gen_range(0..=5);
            if (raw + lambda_p) % 2 == 0 {
                raw
            } else if raw == 5 {
                raw - 1
            } else {
                raw + 1
            }
        };
        let nu_p: i64 = if lambda_p == 1 {
            -(n0 as i64) - rng.gen_range(0..=1i64)
        } else {
            rng.gen_range(0..=2i64)
        };
        // mu_K = nu_K mod 2 with nu_K = nu_L - f + n0 + nu_P
        let nu_l: i64 = {
            let raw: i64 = rng.gen_range(0..=4);
            let nu_k = raw - f as i64 + n0 as i64 + nu_p;
            if (mu_l - nu_k).rem_euclid(2) == 0 {
                raw
            } else {
                raw + 1
            }
        };
        // emitted levels must carry consistent nonnegative data
        let start = if lambda_p == 0 {
            (n0 as i64 + nu_p).max(2) as u32
        } else {
            (-nu_p).max(2) as u32
        };
        let levels: Option<Vec<TowerDatum>> = (start..start + 6)
            .map(|n| {
                let h = lambda_p * n as i64 + nu_p;
                let e = mu_l * (p as i64).pow(n) + lambda_l * n as i64 + nu_l;
                if h < 0 || h > (n - n0) as i64 || e < h || e > 500_000_000 {
                    return None;
                }
                let two_eps = e - ((n - n0) as i64 - h) + n as i64 - f as i64;
                if two_eps < 0 || two_eps % 2 != 0 {
                    return None;
                }
                Some(TowerDatum {
                    n,
                    e: e as u32,
                    eps: (two_eps / 2) as u32,
                    h: h as u32,
                    h0_exp: Some((g as u32 - 1) * (n - n0)),
                    h1_exp: Some(n - n0),
                })
            })
            .collect();
        let Some(levels) = levels else { continue };
        let config = TowerConfig {
            p,
            n0,
            g,
            f,
            split,
            totally_ramified_from_base: n0 == 0,
            stable_from: Some(start),
            l_is_not_q_sqrt_minus_3: Some(true),
        };
        if config.validate().is_err() {
            continue;
        }
        return SyntheticTower {
            input: TowerInput { config, levels },
            mu_l,
            lambda_l,
            nu_l,
            lambda_p,
            nu_p,
        };
    }
}
