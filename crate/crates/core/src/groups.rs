//! Transitive permutation groups of degree 3..=6: enumeration up to
//! conjugacy, fixed-point distributions, entropies, and the fixed-point
//! statistics of large random permutations.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::perm::{ElemSet, Perm, SymmetricGroup};
use crate::Result;

/// A concrete permutation group with materialized element list.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    pub degree: u32,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
    pub order: u64,
}

impl PermutationGroup {
    /// Builds the group generated by `generators` acting on `{0..degree}`.
    pub fn from_generators(degree: u32, generators: Vec<Perm>) -> Result<Self> {
        if !(1..=6).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        let mut elements = alloc::vec![Perm::identity()];
        let mut frontier = alloc::vec![Perm::identity()];
        while let Some(x) = frontier.pop() {
            for g in &generators {
                let y = x.compose(g);
                if !elements.contains(&y) {
                    elements.push(y);
                    frontier.push(y);
                }
            }
        }
        elements.sort();
        let order = elements.len() as u64;
        Ok(PermutationGroup { degree, generators, elements, order })
    }

    pub fn is_transitive(&self) -> bool {
        let mut reached = [false; 6];
        reached[0] = true;
        let mut count = 1u32;
        for e in &self.elements {
            let im = e.apply(0) as usize;
            if !reached[im] {
                reached[im] = true;
                count += 1;
            }
        }
        count == self.degree
    }
}

/// Distribution of fixed-point counts over a transitive group, with exact
/// rational weights. Classes with equal fixed-point count are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointDistribution {
    pub degree: u32,
    /// `(lambda, weight)` pairs sorted by ascending lambda; weights sum to 1.
    pub entries: Vec<(u32, Ratio<i64>)>,
    pub group_order: u64,
}

impl FixedPointDistribution {
    /// Weight of elements with at least one fixed point.
    pub fn sigma_ratio(&self) -> Ratio<i64> {
        self.entries
            .iter()
            .filter(|(l, _)| *l > 0)
            .map(|(_, w)| *w)
            .fold(Ratio::zero(), |a, b| a + b)
    }

    /// Checks the structural invariants of a transitive action.
    pub fn validate(&self) -> Result<()> {
        let total: Ratio<i64> = self.entries.iter().map(|(_, w)| *w).fold(Ratio::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(Error::InvariantViolation("weights do not sum to 1".into()));
        }
        let mean: Ratio<i64> = self
            .entries
            .iter()
            .map(|(l, w)| w * Ratio::from_integer(*l as i64))
            .fold(Ratio::zero(), |a, b| a + b);
        if !mean.is_one() {
            return Err(Error::InvariantViolation(
                "mean fixed-point count is not 1 (action not transitive)".into(),
            ));
        }
        if self.entries.iter().any(|(l, _)| *l + 1 == self.degree) {
            return Err(Error::InvariantViolation(
                "a permutation cannot fix exactly degree-1 points".into(),
            ));
        }
        Ok(())
    }
}

/// One catalog entry: a named transitive group with its entropy data.
#[derive(Clone, Debug)]
pub struct GroupRecord {
    pub chm_name: String,
    pub degree: u32,
    pub order: u64,
    pub distribution: FixedPointDistribution,
    pub entropy: f64,
    pub sigma_ratio: Ratio<i64>,
    /// `(element order, count)` pairs; used for naming and diagnostics.
    pub element_orders: Vec<(u32, u32)>,
    /// Number of odd permutations in the group.
    pub odd_elements: u32,
}

/// Fixed-point distribution of a transitive permutation group.
pub fn fixed_point_distribution(group: &PermutationGroup) -> Result<FixedPointDistribution> {
    if !group.is_transitive() {
        return Err(Error::InvariantViolation("group is not transitive".into()));
    }
    let mut hist: BTreeMap<u32, i64> = BTreeMap::new();
    for e in &group.elements {
        *hist.entry(e.fixed_points(group.degree as usize)).or_insert(0) += 1;
    }
    let order = group.order as i64;
    let entries = hist.into_iter().map(|(l, c)| (l, Ratio::new(c, order))).collect();
    let dist =
        FixedPointDistribution { degree: group.degree, entries, group_order: group.order };
    dist.validate()?;
    Ok(dist)
}

/// Entropy `Σ_{λ≥1} weight·λ·log λ` of a fixed-point distribution.
pub fn entropy(dist: &FixedPointDistribution) -> f64 {
    dist.entries
        .iter()
        .filter(|(l, _)| *l >= 2)
        .map(|(l, w)| {
            let lf = *l as f64;
            ratio_to_f64(*w) * lf * libm::log(lf)
        })
        .sum()
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

// ---------------------------------------------------------------------------
// Subgroup enumeration
// ---------------------------------------------------------------------------

struct Subgroup {
    elems: Vec<u16>,
    set: ElemSet,
    gens: Vec<u16>,
    fix_hist: [u32; 7],
    order_hist: BTreeMap<u32, u32>,
    odd_count: u32,
}

fn make_subgroup(sym: &SymmetricGroup, elems: Vec<u16>, gens: Vec<u16>) -> Subgroup {
    let mut set = ElemSet::new();
    let mut fix_hist = [0u32; 7];
    let mut order_hist = BTreeMap::new();
    let mut odd_count = 0;
    for &e in &elems {
        set.insert(e);
        let p = &sym.elems[e as usize];
        fix_hist[p.fixed_points(sym.degree) as usize] += 1;
        *order_hist.entry(p.order()).or_insert(0) += 1;
        if !p.is_even(sym.degree) {
            odd_count += 1;
        }
    }
    Subgroup { elems, set, gens, fix_hist, order_hist, odd_count }
}

fn conjugate_subgroups(sym: &SymmetricGroup, a: &Subgroup, b: &Subgroup) -> bool {
    if a.elems.len() != b.elems.len()
        || a.fix_hist != b.fix_hist
        || a.order_hist != b.order_hist
        || a.odd_count != b.odd_count
    {
        return false;
    }
    (0..sym.order() as u16)
        .any(|s| a.elems.iter().all(|&e| b.set.contains(sym.conj(s, e))))
}

/// All subgroups of the symmetric group up to conjugacy, found by repeatedly
/// extending known subgroups by elements of prime-power order. Every finite
/// group is generated by such elements, so every conjugacy class is reached.
fn subgroup_classes(sym: &SymmetricGroup) -> Vec<Subgroup> {
    let prime_power_elems: Vec<u16> = (0..sym.order() as u16)
        .filter(|&i| is_prime_power(sym.elems[i as usize].order()))
        .collect();
    let id = sym.index_of(&Perm::identity()).expect("identity present");
    let mut classes = alloc::vec![make_subgroup(sym, alloc::vec![id], Vec::new())];
    let mut queue = alloc::vec![0usize];
    while let Some(qi) = queue.pop() {
        for &g in &prime_power_elems {
            if classes[qi].set.contains(g) {
                continue;
            }
            let mut gens = classes[qi].gens.clone();
            gens.push(g);
            let elems = sym.closure(&gens);
            let cand = make_subgroup(sym, elems, gens);
            if !classes.iter().any(|c| conjugate_subgroups(sym, c, &cand)) {
                classes.push(cand);
                queue.push(classes.len() - 1);
            }
        }
    }
    classes
}

fn is_prime_power(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut n = n;
    for p in [2u32, 3, 5] {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            return n == 1;
        }
    }
    true // orders in S_6 are at most 6, so any remaining n is prime
}

// ---------------------------------------------------------------------------
// Naming
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Tiebreak {
    None,
    /// Maximum element order in the group equals the given value.
    MaxElemOrder(u32),
    /// Number of odd permutations equals the given value.
    OddElements(u32),
}

struct NameSpec {
    name: &'static str,
    degree: u32,
    order: u64,
    entropy: f64,
    tiebreak: Tiebreak,
}

/// Names follow the transitive-group nomenclature used in the classical
/// degree <= 7 classification tables.
const NAME_TABLE: &[NameSpec] = &[
    NameSpec { name: "A_3", degree: 3, order: 3, entropy: 1.0986123, tiebreak: Tiebreak::None },
    NameSpec { name: "S_3", degree: 3, order: 6, entropy: 0.5493061, tiebreak: Tiebreak::None },
    NameSpec { name: "C(4)", degree: 4, order: 4, entropy: 1.3862944, tiebreak: Tiebreak::MaxElemOrder(4) },
    NameSpec { name: "E(4)", degree: 4, order: 4, entropy: 1.3862944, tiebreak: Tiebreak::MaxElemOrder(2) },
    NameSpec { name: "D(4)", degree: 4, order: 8, entropy: 1.0397208, tiebreak: Tiebreak::None },
    NameSpec { name: "A_4", degree: 4, order: 12, entropy: 0.4620981, tiebreak: Tiebreak::None },
    NameSpec { name: "S_4", degree: 4, order: 24, entropy: 0.5776227, tiebreak: Tiebreak::None },
    NameSpec { name: "C(5)", degree: 5, order: 5, entropy: 1.6094379, tiebreak: Tiebreak::None },
    NameSpec { name: "D(5)", degree: 5, order: 10, entropy: 0.8047190, tiebreak: Tiebreak::None },
    NameSpec { name: "F(5)", degree: 5, order: 20, entropy: 0.4023595, tiebreak: Tiebreak::None },
    NameSpec { name: "A_5", degree: 5, order: 60, entropy: 0.5962179, tiebreak: Tiebreak::None },
    NameSpec { name: "S_5", degree: 5, order: 120, entropy: 0.5727620, tiebreak: Tiebreak::None },
    NameSpec { name: "C(6)", degree: 6, order: 6, entropy: 1.7917595, tiebreak: Tiebreak::MaxElemOrder(6) },
    NameSpec { name: "D_6(6)", degree: 6, order: 6, entropy: 1.7917595, tiebreak: Tiebreak::MaxElemOrder(3) },
    NameSpec { name: "D(6)", degree: 6, order: 12, entropy: 1.2424533, tiebreak: Tiebreak::MaxElemOrder(6) },
    NameSpec { name: "A_4(6)", degree: 6, order: 12, entropy: 1.2424533, tiebreak: Tiebreak::MaxElemOrder(3) },
    NameSpec { name: "F_18(6)", degree: 6, order: 18, entropy: 1.3296613, tiebreak: Tiebreak::None },
    NameSpec { name: "2A_4(6)", degree: 6, order: 24, entropy: 1.3143738, tiebreak: Tiebreak::None },
    NameSpec { name: "S_4(6d)", degree: 6, order: 24, entropy: 0.9678003, tiebreak: Tiebreak::OddElements(12) },
    NameSpec { name: "S_4(6c)", degree: 6, order: 24, entropy: 0.9678003, tiebreak: Tiebreak::OddElements(0) },
    NameSpec { name: "F_18(6):2", degree: 6, order: 36, entropy: 1.0114043, tiebreak: Tiebreak::MaxElemOrder(6) },
    NameSpec { name: "F_36(6)", degree: 6, order: 36, entropy: 1.0114043, tiebreak: Tiebreak::MaxElemOrder(4) },
    NameSpec { name: "2S_4(6)", degree: 6, order: 48, entropy: 1.0037605, tiebreak: Tiebreak::None },
    NameSpec { name: "L(6)", degree: 6, order: 60, entropy: 0.5257495, tiebreak: Tiebreak::None },
    NameSpec { name: "F_36(6):2", degree: 6, order: 72, entropy: 0.9678003, tiebreak: Tiebreak::None },
    NameSpec { name: "L(6):2", degree: 6, order: 120, entropy: 0.6094484, tiebreak: Tiebreak::None },
    NameSpec { name: "A_6", degree: 6, order: 360, entropy: 0.5693535, tiebreak: Tiebreak::None },
    NameSpec { name: "S_6", degree: 6, order: 720, entropy: 0.5734881, tiebreak: Tiebreak::None },
];

/// Expected number of transitive classes per degree, from the classical
/// classification.
fn expected_class_count(degree: u32) -> usize {
    match degree {
        3 => 2,
        4 => 5,
        5 => 5,
        6 => 16,
        _ => unreachable!(),
    }
}

fn assign_name(
    degree: u32,
    order: u64,
    entropy: f64,
    element_orders: &[(u32, u32)],
    odd_elements: u32,
) -> Result<&'static str> {
    let candidates: Vec<&NameSpec> = NAME_TABLE
        .iter()
        .filter(|s| s.degree == degree && s.order == order && (s.entropy - entropy).abs() < 1e-5)
        .collect();
    match candidates.len() {
        0 => Err(Error::InternalInconsistency(alloc::format!(
            "no name for degree-{degree} group of order {order} with entropy {entropy:.7}"
        ))),
        1 => Ok(candidates[0].name),
        _ => {
            let max_order = element_orders.iter().map(|(o, _)| *o).max().unwrap_or(1);
            let hit: Vec<&&NameSpec> = candidates
                .iter()
                .filter(|s| match s.tiebreak {
                    Tiebreak::None => false,
                    Tiebreak::MaxElemOrder(o) => o == max_order,
                    Tiebreak::OddElements(n) => n == odd_elements,
                })
                .collect();
            if hit.len() == 1 {
                Ok(hit[0].name)
            } else {
                Err(Error::InternalInconsistency(alloc::format!(
                    "ambiguous name for degree-{degree} order-{order} group"
                )))
            }
        }
    }
}

/// Enumerates the transitive permutation groups of the given degree up to
/// conjugacy, as named catalog records sorted by (order, name).
pub fn enumerate_transitive_groups(degree: u32) -> Result<Vec<GroupRecord>> {
    if !(3..=6).contains(&degree) {
        return Err(Error::UnsupportedDegree(degree));
    }
    let sym = SymmetricGroup::new(degree as usize);
    let mut records = Vec::new();
    for sub in subgroup_classes(&sym) {
        if !sym.is_transitive(&sub.elems) {
            continue;
        }
        let elements: Vec<Perm> = sub.elems.iter().map(|&i| sym.elems[i as usize]).collect();
        let group = PermutationGroup {
            degree,
            generators: sub.gens.iter().map(|&i| sym.elems[i as usize]).collect(),
            order: elements.len() as u64,
            elements,
        };
        let distribution = fixed_point_distribution(&group)?;
        let ent = entropy(&distribution);
        let element_orders: Vec<(u32, u32)> =
            sub.order_hist.iter().map(|(&o, &c)| (o, c)).collect();
        let name = assign_name(degree, group.order, ent, &element_orders, sub.odd_count)?;
        records.push(GroupRecord {
            chm_name: name.to_string(),
            degree,
            order: group.order,
            sigma_ratio: distribution.sigma_ratio(),
            entropy: ent,
            distribution,
            element_orders,
            odd_elements: sub.odd_count,
        });
    }
    if records.len() != expected_class_count(degree) {
        return Err(Error::InternalInconsistency(alloc::format!(
            "found {} transitive classes of degree {degree}, expected {}",
            records.len(),
            expected_class_count(degree)
        )));
    }
    records.sort_by(|a, b| a.order.cmp(&b.order).then(a.chm_name.cmp(&b.chm_name)));
    Ok(records)
}

/// Catalog over all supported degrees, in degree order.
pub fn full_catalog() -> Result<Vec<GroupRecord>> {
    let mut out = Vec::new();
    for d in 3..=6 {
        out.extend(enumerate_transitive_groups(d)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Fixed points of random permutations
// ---------------------------------------------------------------------------

/// Exact distribution of the number of fixed points of a uniform random
/// permutation of `n` letters: `P(Y_n = k) = C(n,k)·D_{n-k}/n!`.
pub fn rencontres_distribution(n: u32) -> Result<Vec<Ratio<i64>>> {
    if n == 0 || n > 12 {
        return Err(Error::Domain(alloc::format!("n = {n} outside 1..=12")));
    }
    let fact: Vec<i64> = (0..=n as i64).scan(1i64, |acc, k| {
        if k > 0 {
            *acc *= k;
        }
        Some(*acc)
    })
    .collect();
    // Derangement counts D_0..D_n.
    let mut der = alloc::vec![1i64; n as usize + 1];
    if n >= 1 {
        der[1] = 0;
    }
    for m in 2..=n as usize {
        der[m] = (m as i64 - 1) * (der[m - 1] + der[m - 2]);
    }
    let n_us = n as usize;
    let out = (0..=n_us)
        .map(|k| {
            let binom = fact[n_us] / (fact[k] * fact[n_us - k]);
            Ratio::new(binom * der[n_us - k], fact[n_us])
        })
        .collect();
    Ok(out)
}

/// The limit constant `Σ_{k≥1} e^{-1}·k·log k / k!` of the entropy of large
/// generic polynomials, summed with a rigorous factorial tail bound.
pub fn poisson_limit_constant(tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let einv = libm::exp(-1.0);
    let mut sum = 0.0f64;
    let mut fact = 1.0f64; // (k-1)! for current k
    let mut k = 2u32;
    loop {
        fact *= (k - 1) as f64; // now (k-1)!
        let term = einv * libm::log(k as f64) / fact;
        sum += term;
        // Terms decay faster than geometrically with ratio 1/2 for k >= 3,
        // so the tail after k is at most the next term times 2.
        let next = einv * libm::log((k + 1) as f64) / (fact * k as f64);
        if 2.0 * next < tolerance {
            break;
        }
        k += 1;
        if k > 200 {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_3_catalog() {
        let recs = enumerate_transitive_groups(3).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].chm_name, "A_3");
        assert_eq!(recs[0].order, 3);
        assert_eq!(
            recs[0].distribution.entries,
            alloc::vec![(0, Ratio::new(2, 3)), (3, Ratio::new(1, 3))]
        );
        assert_eq!(recs[1].chm_name, "S_3");
        assert_eq!(
            recs[1].distribution.entries,
            alloc::vec![(0, Ratio::new(1, 3)), (1, Ratio::new(1, 2)), (3, Ratio::new(1, 6))]
        );
    }

    #[test]
    fn degree_4_catalog_names() {
        let recs = enumerate_transitive_groups(4).unwrap();
        let names: Vec<&str> = recs.iter().map(|r| r.chm_name.as_str()).collect();
        assert_eq!(names, ["C(4)", "E(4)", "D(4)", "A_4", "S_4"]);
    }

    #[test]
    fn dihedral_4_distribution() {
        let recs = enumerate_transitive_groups(4).unwrap();
        let d4 = recs.iter().find(|r| r.chm_name == "D(4)").unwrap();
        assert_eq!(
            d4.distribution.entries,
            alloc::vec![(0, Ratio::new(5, 8)), (2, Ratio::new(1, 4)), (4, Ratio::new(1, 8))]
        );
    }

    #[test]
    fn degree_counts() {
        assert_eq!(enumerate_transitive_groups(5).unwrap().len(), 5);
        assert_eq!(enumerate_transitive_groups(6).unwrap().len(), 16);
    }

    #[test]
    fn unsupported_degree_rejected() {
        assert!(matches!(enumerate_transitive_groups(7), Err(Error::UnsupportedDegree(7))));
        assert!(matches!(enumerate_transitive_groups(2), Err(Error::UnsupportedDegree(2))));
    }

    #[test]
    fn entropy_of_a3() {
        let dist = FixedPointDistribution {
            degree: 3,
            entries: alloc::vec![(0, Ratio::new(2, 3)), (3, Ratio::new(1, 3))],
            group_order: 3,
        };
        assert!((entropy(&dist) - libm::log(3.0)).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_point_mass_at_one() {
        let dist = FixedPointDistribution {
            degree: 1,
            entries: alloc::vec![(1, Ratio::one())],
            group_order: 1,
        };
        assert_eq!(entropy(&dist), 0.0);
    }

    #[test]
    fn regular_actions_reach_log_degree() {
        for d in 3..=6u32 {
            for rec in enumerate_transitive_groups(d).unwrap() {
                let bound = libm::log(d as f64);
                assert!(rec.entropy <= bound + 1e-12, "{} exceeds log d", rec.chm_name);
                if rec.order == d as u64 {
                    assert!((rec.entropy - bound).abs() < 1e-12, "{}", rec.chm_name);
                } else {
                    assert!(rec.entropy < bound - 1e-9, "{}", rec.chm_name);
                }
            }
        }
    }

    #[test]
    fn rencontres_small_cases() {
        let p3 = rencontres_distribution(3).unwrap();
        assert_eq!(p3[1], Ratio::new(1, 2));
        assert_eq!(p3[2], Ratio::zero());
        assert_eq!(p3[3], Ratio::new(1, 6));
        for n in 1..=12 {
            let p = rencontres_distribution(n).unwrap();
            let total: Ratio<i64> = p.iter().copied().fold(Ratio::zero(), |a, b| a + b);
            assert!(total.is_one());
            assert_eq!(p[n as usize], Ratio::new(1, (1..=n as i64).product()));
            if n >= 2 {
                assert_eq!(p[n as usize - 1], Ratio::zero());
            }
        }
    }

    #[test]
    fn rencontres_poisson_bound() {
        // max_k |P(Y_n=k) - e^{-1}/k!| <= 2^{n+1}/(n+1)!
        let einv = libm::exp(-1.0);
        for n in 1..=12u32 {
            let p = rencontres_distribution(n).unwrap();
            let bound = libm::pow(2.0, n as f64 + 1.0)
                / (1..=n as i32 + 1).map(|k| k as f64).product::<f64>();
            let mut kfact = 1.0;
            for (k, prob) in p.iter().enumerate() {
                if k > 0 {
                    kfact *= k as f64;
                }
                let diff = (ratio_to_f64(*prob) - einv / kfact).abs();
                assert!(diff <= bound + 1e-15, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn rencontres_domain() {
        assert!(rencontres_distribution(0).is_err());
        assert!(rencontres_distribution(13).is_err());
    }

    #[test]
    fn poisson_constant_value() {
        let c = poisson_limit_constant(1e-9).unwrap();
        assert!((c - 0.5734028).abs() < 1e-6, "{c}");
        // Truncation stability: more terms change nothing at 1e-15.
        let tight = poisson_limit_constant(1e-13).unwrap();
        assert!((c - tight).abs() < 1e-9);
    }

    #[test]
    fn non_transitive_distribution_rejected() {
        let g = PermutationGroup::from_generators(
            4,
            alloc::vec![Perm::from_images(&[1, 0, 2, 3])],
        )
        .unwrap();
        assert!(fixed_point_distribution(&g).is_err());
    }
}
