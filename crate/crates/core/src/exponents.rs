//! Minimax exponent machinery: rate profiles built from group data, the
//! one-parameter path solver for the exponent γ, and the Lambert-W closed
//! form for regular (normal) actions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::groups::{ratio_to_f64, GroupRecord};
use crate::ratefn::{rate_function, Extended, RateVector};
use crate::rng::CounterRng;
use crate::Result;

/// The data needed to evaluate the minimax objective for one group: class
/// weights `c`, fixed-point-weighted counterparts `c' = c·λ`, the degree and
/// the sequence exponent θ.
#[derive(Clone, Debug)]
pub struct RateProfile {
    pub labels: Vec<String>,
    pub c: RateVector,
    pub cprime: RateVector,
    pub lambda_of: BTreeMap<String, u32>,
    pub degree: u32,
    pub theta: f64,
}

impl RateProfile {
    pub fn new(
        c: RateVector,
        cprime: RateVector,
        lambda_of: BTreeMap<String, u32>,
        degree: u32,
        theta: f64,
    ) -> Result<Self> {
        if theta < 0.0 || !theta.is_finite() {
            return Err(Error::Domain("theta must be a finite nonnegative real".into()));
        }
        let labels: Vec<String> = c.labels().map(String::from).collect();
        let other: Vec<String> = cprime.labels().map(String::from).collect();
        if labels != other {
            return Err(Error::Shape("c and c' have different label sets".into()));
        }
        for label in &labels {
            let lambda = *lambda_of
                .get(label)
                .ok_or_else(|| Error::Shape(alloc::format!("label {label} missing lambda")))?;
            let cj = c.get(label).unwrap();
            let cpj = cprime.get(label).unwrap();
            if (cpj - cj * lambda as f64).abs() > 1e-12 {
                return Err(Error::InvariantViolation(alloc::format!(
                    "c'_{label} != c_{label} * lambda"
                )));
            }
        }
        if (c.sum() - 1.0).abs() > 1e-9 || (cprime.sum() - 1.0).abs() > 1e-9 {
            return Err(Error::InvariantViolation(
                "class weights and their fixed-point means must both sum to 1".into(),
            ));
        }
        Ok(RateProfile { labels, c, cprime, lambda_of, degree, theta })
    }

    /// Labels with both `c_j > 0` and `c'_j > 0`.
    pub fn support(&self) -> Vec<&str> {
        self.labels
            .iter()
            .filter(|l| self.c.get(l).unwrap() > 0.0 && self.cprime.get(l).unwrap() > 0.0)
            .map(|l| l.as_str())
            .collect()
    }
}

/// Builds the profile of a catalog group, with classes aggregated by
/// fixed-point count.
pub fn profile_from_group(
    record: &GroupRecord,
    theta: f64,
    degree_override: Option<u32>,
) -> Result<RateProfile> {
    let mut c_pairs: BTreeMap<String, f64> = BTreeMap::new();
    let mut cp_pairs: BTreeMap<String, f64> = BTreeMap::new();
    let mut lambda_of: BTreeMap<String, u32> = BTreeMap::new();
    for &(lambda, weight) in &record.distribution.entries {
        let label = lambda.to_string();
        let w = ratio_to_f64(weight);
        c_pairs.insert(label.clone(), w);
        cp_pairs.insert(label.clone(), w * lambda as f64);
        lambda_of.insert(label, lambda);
    }
    RateProfile::new(
        RateVector::new(c_pairs)?,
        RateVector::new(cp_pairs)?,
        lambda_of,
        degree_override.unwrap_or(record.degree),
        theta,
    )
}

/// The geometric-interpolation path `x_j(α) = c_j^α (c'_j)^{1−α}`, zero off
/// the joint support.
pub fn alpha_path(profile: &RateProfile, alpha: f64) -> Result<RateVector> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(alloc::format!("alpha = {alpha} outside [0,1]")));
    }
    let pairs: BTreeMap<String, f64> = profile
        .labels
        .iter()
        .map(|l| {
            let cj = profile.c.get(l).unwrap();
            let cpj = profile.cprime.get(l).unwrap();
            let x = if cj > 0.0 && cpj > 0.0 {
                libm::exp(alpha * libm::log(cj) + (1.0 - alpha) * libm::log(cpj))
            } else {
                0.0
            };
            (l.clone(), x)
        })
        .collect();
    RateVector::new(pairs)
}

/// How the minimizer was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// The two objective branches cross strictly inside (0,1).
    InteriorRoot,
    /// The minimum sits at an endpoint of the path; closed form applies.
    Endpoint,
    /// Joint support is empty, so the only candidate is the zero vector.
    ZeroVector,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::InteriorRoot => "interior_root",
            Branch::Endpoint => "endpoint",
            Branch::ZeroVector => "zero_vector",
        }
    }
}

/// Output of the path solver.
#[derive(Clone, Debug)]
pub struct GammaResult {
    pub alpha: Option<f64>,
    pub x: RateVector,
    pub gamma: f64,
    pub g_value: f64,
    pub branch: Branch,
    pub g1: f64,
    pub g2: f64,
}

fn finite(e: Extended, what: &str) -> Result<f64> {
    e.finite().ok_or_else(|| {
        Error::InternalInconsistency(alloc::format!("{what} is infinite on the path support"))
    })
}

fn branches_at(profile: &RateProfile, x: &RateVector) -> Result<(f64, f64)> {
    let d = profile.degree as f64;
    let ic = finite(rate_function(&profile.c, x)?, "I_c")?;
    let icp = finite(rate_function(&profile.cprime, x)?, "I_c'")?;
    Ok(((d - 1.0) / d + ic / d, profile.theta + icp))
}

/// Minimizes `g(x) = max(g1, g2)` over the path and reports γ = g − θ.
pub fn gamma_min(profile: &RateProfile) -> Result<GammaResult> {
    let support = profile.support();
    if support.is_empty() {
        let zero: BTreeMap<String, f64> =
            profile.labels.iter().map(|l| (l.clone(), 0.0)).collect();
        let x = RateVector::new(zero)?;
        let (g1, g2) = branches_at(profile, &x)?;
        let g = if 1.0 > profile.theta + 1.0 { 1.0 } else { profile.theta + 1.0 };
        return Ok(GammaResult {
            alpha: None,
            x,
            gamma: g - profile.theta,
            g_value: g,
            branch: Branch::ZeroVector,
            g1,
            g2,
        });
    }

    let delta = |alpha: f64| -> Result<f64> {
        let x = alpha_path(profile, alpha)?;
        let (g1, g2) = branches_at(profile, &x)?;
        Ok(g1 - g2)
    };
    let d0 = delta(0.0)?;
    let d1 = delta(1.0)?;

    let result = if d0 == 0.0 || d1 == 0.0 || (d0 < 0.0) != (d1 < 0.0) {
        // The branches cross: bisect Δ(α) to the solver tolerance.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut alpha = if d0 == 0.0 {
            0.0
        } else if d1 == 0.0 {
            1.0
        } else {
            let mut dlo = d0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let dm = delta(mid)?;
                if dm.abs() <= 1e-13 || hi - lo < 1e-15 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (dm < 0.0) == (dlo < 0.0) {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        if alpha < 0.0 {
            alpha = 0.0;
        }
        let x = alpha_path(profile, alpha)?;
        let (g1, g2) = branches_at(profile, &x)?;
        let g = g1.max(g2);
        GammaResult {
            alpha: Some(alpha),
            x,
            gamma: g - profile.theta,
            g_value: g,
            branch: Branch::InteriorRoot,
            g1,
            g2,
        }
    } else {
        // No crossing: the minimum is at an endpoint, where the objective
        // has the closed form max(1 − Σc/d, θ + 1 − Σc').
        let c_sum: f64 = support.iter().map(|l| profile.c.get(l).unwrap()).sum();
        let cp_sum: f64 = support.iter().map(|l| profile.cprime.get(l).unwrap()).sum();
        let d = profile.degree as f64;
        let closed = (1.0 - c_sum / d).max(profile.theta + 1.0 - cp_sum);

        let mut best: Option<(f64, f64, f64, f64)> = None; // (g, alpha, g1, g2)
        for alpha in [0.0, 1.0] {
            let x = alpha_path(profile, alpha)?;
            let (g1, g2) = branches_at(profile, &x)?;
            let g = g1.max(g2);
            if best.map_or(true, |(bg, _, _, _)| g < bg) {
                best = Some((g, alpha, g1, g2));
            }
        }
        let (g, alpha, g1, g2) = best.unwrap();
        if (g - closed).abs() > 1e-12 {
            return Err(Error::InternalInconsistency(alloc::format!(
                "endpoint value {g} disagrees with closed form {closed}"
            )));
        }
        GammaResult {
            alpha: Some(alpha),
            x: alpha_path(profile, alpha)?,
            gamma: g - profile.theta,
            g_value: g,
            branch: Branch::Endpoint,
            g1,
            g2,
        }
    };

    grid_guard(profile, &support, result.g_value)?;
    Ok(result)
}

/// Defensive check: no point of the coordinate box between `c` and `c'`
/// (restricted to the joint support) beats the solver's value.
fn grid_guard(profile: &RateProfile, support: &[&str], g_solver: f64) -> Result<()> {
    let rng = CounterRng::new(0x67726964);
    for trial in 0..1000u64 {
        let pairs: BTreeMap<String, f64> = profile
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let v = if support.contains(&l.as_str()) {
                    let cj = profile.c.get(l).unwrap();
                    let cpj = profile.cprime.get(l).unwrap();
                    let (lo, hi) = if cj < cpj { (cj, cpj) } else { (cpj, cj) };
                    lo + (hi - lo) * rng.uniform(trial, i as u64)
                } else {
                    0.0
                };
                (l.clone(), v)
            })
            .collect();
        let x = RateVector::new(pairs)?;
        let (g1, g2) = branches_at(profile, &x)?;
        if g1.max(g2) < g_solver - 1e-9 {
            return Err(Error::InternalInconsistency(alloc::format!(
                "box point beats path minimum: {} < {g_solver}",
                g1.max(g2)
            )));
        }
    }
    Ok(())
}

/// The lower real branch of the Lambert W function on `[−1/e, 0)`.
pub fn lambert_w_minus1(x: f64) -> Result<f64> {
    let brink = -libm::exp(-1.0);
    if !(x >= brink && x < 0.0) {
        return Err(Error::Domain(alloc::format!("{x} outside [-1/e, 0)")));
    }
    if x == brink {
        return Ok(-1.0);
    }
    let l = libm::log(-x);
    let mut y = l - libm::log(-l);
    for _ in 0..100 {
        let ey = libm::exp(y);
        let f = y * ey - x;
        if libm::fabs(f) <= 1e-15 * libm::fabs(x) {
            break;
        }
        // Halley step.
        let denom = ey * (y + 1.0) - (y + 2.0) * f / (2.0 * (y + 1.0));
        y -= f / denom;
    }
    Ok(y)
}

/// Closed form for γ of the regular degree-`d` action over primes (θ = 1).
pub fn gamma_normal_closed_form(d: u32) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain(alloc::format!("d = {d} < 3")));
    }
    let df = d as f64;
    let arg = -libm::pow(df, (df - 2.0) / (df - 1.0)) / (libm::exp(1.0) * (df - 1.0));
    let w = lambert_w_minus1(arg)?;
    Ok(-(df * libm::log(df)) / ((df - 1.0) * (df - 1.0) * w) - 1.0 / (df - 1.0))
}

/// Whether the entropy clears the positivity threshold `(k+1)θ − k`.
pub fn entropy_threshold_check(i_f: f64, theta: f64, k: u32) -> bool {
    debug_assert!(k >= 2);
    i_f > (k as f64 + 1.0) * theta - k as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::enumerate_transitive_groups;

    fn record(degree: u32, name: &str) -> GroupRecord {
        enumerate_transitive_groups(degree)
            .unwrap()
            .into_iter()
            .find(|r| r.chm_name == name)
            .unwrap()
    }

    #[test]
    fn a3_profile_shape() {
        let p = profile_from_group(&record(3, "A_3"), 1.0, None).unwrap();
        assert_eq!(p.degree, 3);
        assert_eq!(p.c.get("3"), Some(1.0 / 3.0));
        assert_eq!(p.c.get("0"), Some(2.0 / 3.0));
        assert_eq!(p.cprime.get("3"), Some(1.0));
        assert_eq!(p.cprime.get("0"), Some(0.0));
        assert_eq!(p.support(), alloc::vec!["3"]);
    }

    #[test]
    fn s3_profile_values() {
        let p = profile_from_group(&record(3, "S_3"), 0.5, None).unwrap();
        assert!((p.c.get("1").unwrap() - 0.5).abs() < 1e-15);
        assert!((p.cprime.get("3").unwrap() - 0.5).abs() < 1e-15);
        assert!((p.cprime.sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_path_endpoints() {
        let p = profile_from_group(&record(3, "A_3"), 1.0, None).unwrap();
        let x0 = alpha_path(&p, 0.0).unwrap();
        assert!((x0.get("3").unwrap() - 1.0).abs() < 1e-15);
        let x1 = alpha_path(&p, 1.0).unwrap();
        assert!((x1.get("3").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(alpha_path(&p, 1.5).is_err());
    }

    #[test]
    fn gamma_prime_sequence_a3() {
        let p = profile_from_group(&record(3, "A_3"), 1.0, None).unwrap();
        let r = gamma_min(&p).unwrap();
        assert!((r.gamma - 0.0035671).abs() < 1e-7, "{}", r.gamma);
    }

    #[test]
    fn gamma_two_squares_a3_endpoint() {
        let p = profile_from_group(&record(3, "A_3"), 0.5, None).unwrap();
        let r = gamma_min(&p).unwrap();
        assert!((r.gamma - 0.3888889).abs() < 1e-7, "{}", r.gamma);
        assert_eq!(r.branch, Branch::Endpoint);
        assert!((r.g_value - 8.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_two_squares_c6_interior() {
        let p = profile_from_group(&record(6, "C(6)"), 0.5, None).unwrap();
        let r = gamma_min(&p).unwrap();
        assert!((r.gamma - 0.4728484).abs() < 1e-7, "{}", r.gamma);
        assert_eq!(r.branch, Branch::InteriorRoot);
        assert!((r.g1 - r.g2).abs() < 1e-9);
    }

    #[test]
    fn gamma_integers_a3() {
        let p = profile_from_group(&record(3, "A_3"), 0.0, None).unwrap();
        let r = gamma_min(&p).unwrap();
        assert!((r.g_value - 8.0 / 9.0).abs() < 1e-12);
        let s = profile_from_group(&record(3, "S_3"), 0.0, None).unwrap();
        let rs = gamma_min(&s).unwrap();
        assert!((rs.g_value - 7.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn lambert_w_values() {
        assert_eq!(lambert_w_minus1(-libm::exp(-1.0)).unwrap(), -1.0);
        let y = lambert_w_minus1(-0.2).unwrap();
        assert!((y - -2.542641).abs() < 1e-6, "{y}");
        assert!(lambert_w_minus1(-0.5).is_err());
        assert!(lambert_w_minus1(0.1).is_err());
        // Round trips.
        let rng = CounterRng::new(5);
        for i in 0..1000u64 {
            let x = -libm::exp(-1.0) * rng.uniform(i, 0).max(1e-12);
            let w = lambert_w_minus1(x).unwrap();
            assert!(w <= -1.0 + 1e-12);
            assert!(libm::fabs(w * libm::exp(w) - x) <= 1e-13, "x = {x}");
        }
    }

    #[test]
    fn closed_form_matches_tables() {
        assert!((gamma_normal_closed_form(3).unwrap() - 0.0035671).abs() < 1e-7);
        assert!((gamma_normal_closed_form(4).unwrap() - 0.0265166).abs() < 1e-7);
        assert!((gamma_normal_closed_form(5).unwrap() - 0.0417891).abs() < 1e-7);
        assert!(gamma_normal_closed_form(2).is_err());
    }

    #[test]
    fn closed_form_matches_solver() {
        for d in 3..=6u32 {
            let regular = enumerate_transitive_groups(d)
                .unwrap()
                .into_iter()
                .filter(|r| r.order == d as u64)
                .collect::<alloc::vec::Vec<_>>();
            assert!(!regular.is_empty());
            for rec in regular {
                let p = profile_from_group(&rec, 1.0, None).unwrap();
                let r = gamma_min(&p).unwrap();
                let cf = gamma_normal_closed_form(d).unwrap();
                assert!((r.gamma - cf).abs() < 1e-9, "d={d} {}: {} vs {cf}", rec.chm_name, r.gamma);
            }
        }
    }

    #[test]
    fn threshold_check() {
        assert!(entropy_threshold_check(1.0986123, 1.0, 2));
        assert!(!entropy_threshold_check(0.5493061, 1.0, 2));
        assert!(entropy_threshold_check(1e-9, 0.5, 2));
    }

    #[test]
    fn rate_identity_entropy() {
        for d in 3..=6u32 {
            for rec in enumerate_transitive_groups(d).unwrap() {
                let p = profile_from_group(&rec, 1.0, None).unwrap();
                let v = rate_function(&p.c, &p.cprime).unwrap().finite().unwrap();
                assert!((v - rec.entropy).abs() < 1e-12, "{}", rec.chm_name);
            }
        }
    }
}
