//! Command implementations. Every command yields a JSON document (numbers
//! carrying their provenance tag), a CSV rendering, and an overall pass flag
//! that drives the exit status.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{anyhow, bail, Context, Result};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use powerfree_core::catalog::{reference_value, ReferenceRow, TABLE1, TABLE2, TABLE3};
use powerfree_core::exponents::{gamma_min, profile_from_group, GammaResult};
use powerfree_core::groups::{full_catalog, GroupRecord};
use powerfree_core::localarith::{
    euler_product_density, mobius_series_density, obstruction_check, DensityVariant,
    FrobeniusClass, FrobeniusClassifier, IntPolynomial,
};
use powerfree_core::ratefn::{
    exact_region_probability, simulate_omega_model_range, RateVector, SanovModel,
    SimulationReport,
};
use powerfree_core::sequences::SequenceKind;
use powerfree_core::survey::{
    assemble_survey_report, exceptional_threshold, survey_members, SurveyPartial,
};

pub struct Outcome {
    pub json: Value,
    pub csv: String,
    pub pass: bool,
}

const TABLE_TOLERANCE: f64 = 1e-6;

fn paper(value: f64) -> Value {
    json!({ "value": value, "provenance": "paper" })
}

fn derived(value: f64) -> Value {
    json!({ "value": value, "provenance": "derived" })
}

fn catalog() -> Result<Vec<GroupRecord>> {
    full_catalog().map_err(|e| anyhow!("group enumeration failed: {e}"))
}

fn find<'a>(records: &'a [GroupRecord], name: &str) -> Result<&'a GroupRecord> {
    records
        .iter()
        .find(|r| r.chm_name == name)
        .ok_or_else(|| anyhow!("unknown group {name:?}; see table1 for the catalog"))
}

fn variant_for(kind: SequenceKind) -> DensityVariant {
    match kind {
        SequenceKind::Integers => DensityVariant::AllResidues,
        SequenceKind::Primes => DensityVariant::UnitResidues,
        SequenceKind::TwoSquares => DensityVariant::TwoSquares,
    }
}

pub fn table1() -> Result<Outcome> {
    let records = catalog()?;
    let mut rows = Vec::new();
    let mut csv = String::from("group,degree,expected,computed,diff,pass\n");
    let mut all = true;
    for rec in &records {
        let expected = reference_value(TABLE1, &rec.chm_name)
            .ok_or_else(|| anyhow!("{} missing from the reference table", rec.chm_name))?;
        let diff = rec.entropy - expected;
        let pass = diff.abs() < TABLE_TOLERANCE;
        all &= pass;
        rows.push(json!({
            "group": rec.chm_name,
            "degree": rec.degree,
            "order": rec.order,
            "expected": paper(expected),
            "computed": derived(rec.entropy),
            "diff": diff,
            "pass": pass,
        }));
        csv.push_str(&format!(
            "{},{},{:.7},{:.7},{:+.1e},{}\n",
            rec.chm_name, rec.degree, expected, rec.entropy, diff, pass
        ));
    }
    Ok(Outcome {
        json: json!({ "command": "table1", "rows": rows, "all_pass": all }),
        csv,
        pass: all,
    })
}

pub fn gamma_table(theta: f64) -> Result<Outcome> {
    let (reference, command): (&[ReferenceRow], &str) = if theta == 1.0 {
        (TABLE2, "table2")
    } else {
        (TABLE3, "table3")
    };
    let records = catalog()?;
    let mut rows = Vec::new();
    let mut csv = String::from("group,degree,expected,computed,diff,branch,pass\n");
    let mut all = true;
    for row in reference {
        let rec = find(&records, row.name)?;
        let result = solve(rec, theta)?;
        let diff = result.gamma - row.value;
        let pass = diff.abs() < TABLE_TOLERANCE;
        all &= pass;
        rows.push(json!({
            "group": rec.chm_name,
            "degree": rec.degree,
            "expected": paper(row.value),
            "computed": derived(result.gamma),
            "diff": diff,
            "branch": result.branch.as_str(),
            "alpha": result.alpha,
            "pass": pass,
        }));
        csv.push_str(&format!(
            "{},{},{:.7},{:.7},{:+.1e},{},{}\n",
            rec.chm_name,
            rec.degree,
            row.value,
            result.gamma,
            diff,
            result.branch.as_str(),
            pass
        ));
    }
    Ok(Outcome {
        json: json!({ "command": command, "theta": theta, "rows": rows, "all_pass": all }),
        csv,
        pass: all,
    })
}

fn solve(rec: &GroupRecord, theta: f64) -> Result<GammaResult> {
    let profile = profile_from_group(rec, theta, None)
        .map_err(|e| anyhow!("profile for {}: {e}", rec.chm_name))?;
    gamma_min(&profile).map_err(|e| anyhow!("solver for {}: {e}", rec.chm_name))
}

pub fn gamma_one(group: &str, theta: f64) -> Result<Outcome> {
    let records = catalog()?;
    let rec = find(&records, group)?;
    let result = solve(rec, theta)?;
    let reference = if theta == 1.0 {
        reference_value(TABLE2, group)
    } else if theta == 0.5 {
        reference_value(TABLE3, group)
    } else {
        None
    };
    let pass = reference.map_or(true, |v| (result.gamma - v).abs() < TABLE_TOLERANCE);
    let json = json!({
        "command": "gamma",
        "group": rec.chm_name,
        "degree": rec.degree,
        "order": rec.order,
        "theta": theta,
        "entropy": derived(rec.entropy),
        "gamma": derived(result.gamma),
        "g": result.g_value,
        "g1": result.g1,
        "g2": result.g2,
        "branch": result.branch.as_str(),
        "alpha": result.alpha,
        "reference": reference.map(paper),
        "pass": pass,
    });
    let csv = format!(
        "group,theta,gamma,g,branch,alpha,reference,pass\n{},{},{:.7},{:.7},{},{},{},{}\n",
        rec.chm_name,
        theta,
        result.gamma,
        result.g_value,
        result.branch.as_str(),
        result.alpha.map_or(String::from(""), |a| format!("{a:.7}")),
        reference.map_or(String::from(""), |v| format!("{v:.7}")),
        pass
    );
    Ok(Outcome { json, csv, pass })
}

pub fn density(
    f: &IntPolynomial,
    k: u32,
    kind: SequenceKind,
    cutoff: u64,
    z: Option<u64>,
) -> Result<Outcome> {
    let euler = euler_product_density(f, k, variant_for(kind), cutoff)
        .map_err(|e| anyhow!("local product: {e}"))?;
    let mut json = json!({
        "command": "density",
        "poly": poly_string(f),
        "k": k,
        "sequence": kind.as_str(),
        "euler": {
            "cutoff": cutoff,
            "value": derived(euler.value),
            "tail_bound": euler.tail_bound,
            "obstructing_prime": euler.obstructing_prime,
        },
    });
    let mut csv = String::from("route,value,bound\n");
    csv.push_str(&format!("euler,{:.10},{:.3e}\n", euler.value, euler.tail_bound));
    let mut pass = true;
    if let Some(z) = z {
        let m_cap = (z.saturating_mul(z)).clamp(10_000, 1_000_000);
        let mobius = mobius_series_density(f, k, kind, z, m_cap)
            .map_err(|e| anyhow!("mobius series: {e}"))?;
        // The two routes must agree within their reported error budgets.
        let budget =
            euler.value * (euler.tail_bound.exp() - 1.0) + mobius.truncation_bound + 1e-12;
        let diff = (euler.value - mobius.value).abs();
        pass = euler.obstructing_prime.is_some() || diff <= budget;
        json["mobius"] = json!({
            "smoothness": mobius.smoothness,
            "modulus_cap": mobius.modulus_cap,
            "terms": mobius.terms,
            "value": derived(mobius.value),
            "truncation_bound": mobius.truncation_bound,
            "diff_vs_euler": diff,
            "agreement_budget": budget,
            "pass": pass,
        });
        csv.push_str(&format!("mobius,{:.10},{:.3e}\n", mobius.value, mobius.truncation_bound));
    }
    json["pass"] = json!(pass);
    Ok(Outcome { json, csv, pass })
}

fn poly_string(f: &IntPolynomial) -> String {
    let coeffs: Vec<String> = f.coefficients().iter().map(|c| c.to_string()).collect();
    coeffs.join(",")
}

const CHECKPOINT_STRIDE: usize = 1_000_000;

pub fn survey(
    f: &IntPolynomial,
    k: u32,
    kind: SequenceKind,
    n: u64,
    seed: u64,
    cutoff: u64,
    workers: usize,
    out: Option<&Path>,
) -> Result<Outcome> {
    let members = powerfree_core::sequences::enumerate(kind, n)
        .map_err(|e| anyhow!("enumeration: {e}"))?;
    let threshold = exceptional_threshold(n);
    let blocks: Vec<(usize, usize)> = (0..members.len())
        .step_by(CHECKPOINT_STRIDE)
        .map(|start| (start, (start + CHECKPOINT_STRIDE).min(members.len())))
        .collect();
    let checkpoint_path = out.map(|p| {
        let mut name = p.as_os_str().to_owned();
        name.push(".checkpoint");
        std::path::PathBuf::from(name)
    });

    let next = AtomicUsize::new(0);
    let done: Mutex<(usize, Vec<Option<SurveyPartial>>)> =
        Mutex::new((0, vec![None; blocks.len()]));
    let errors: Mutex<Vec<String>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(start, end)) = blocks.get(idx) else { break };
                match survey_members(f, k, &members[start..end], start as u64, threshold, seed) {
                    Ok(partial) => {
                        let mut guard = done.lock().unwrap();
                        guard.0 += 1;
                        guard.1[idx] = Some(partial);
                        if let Some(path) = &checkpoint_path {
                            let processed: u64 =
                                guard.1.iter().flatten().map(|p| p.members).sum();
                            let _ = std::fs::write(
                                path,
                                serde_json::to_string_pretty(&json!({
                                    "blocks_done": guard.0,
                                    "blocks_total": blocks.len(),
                                    "members_processed": processed,
                                }))
                                .unwrap(),
                            );
                        }
                    }
                    Err(e) => {
                        errors.lock().unwrap().push(format!("{e}"));
                        break;
                    }
                }
            });
        }
    });
    let errors = errors.into_inner().unwrap();
    if let Some(first) = errors.first() {
        bail!("survey worker failed: {first}");
    }
    let partials: Vec<SurveyPartial> = done
        .into_inner()
        .unwrap()
        .1
        .into_iter()
        .map(|p| p.expect("all blocks processed"))
        .collect();
    let report = assemble_survey_report(f, k, kind, n, threshold, &partials, cutoff)
        .map_err(|e| anyhow!("assembling report: {e}"))?;

    let (pass, tolerance) = match report.predicted_density {
        None => (report.kfree_count == 0, 0.0),
        Some(pred) => {
            let se = (pred * (1.0 - pred) / report.members_total.max(1) as f64).sqrt();
            let tolerance = pred * (report.predicted_tail_bound.exp() - 1.0) + 3.0 * se + 0.005;
            ((report.empirical_density - pred).abs() <= tolerance, tolerance)
        }
    };
    let json = json!({
        "command": "survey",
        "poly": poly_string(f),
        "k": k,
        "sequence": kind.as_str(),
        "N": report.n_limit,
        "seed": seed,
        "members_total": report.members_total,
        "kfree_count": report.kfree_count,
        "empirical_density": derived(report.empirical_density),
        "predicted_density": report.predicted_density.map(derived),
        "predicted_tail_bound": report.predicted_tail_bound,
        "obstructing_prime": report.obstructing_prime,
        "exceptional_threshold": report.exceptional_threshold,
        "exceptional_n": report.exceptional_n,
        "skipped_n": report.skipped_n,
        "crosschecked": report.crosschecked,
        "partitions": report.partitions,
        "tolerance": tolerance,
        "pass": pass,
    });
    let mut csv = String::from("field,value\n");
    csv.push_str(&format!("members_total,{}\n", report.members_total));
    csv.push_str(&format!("kfree_count,{}\n", report.kfree_count));
    csv.push_str(&format!("empirical_density,{:.10}\n", report.empirical_density));
    if let Some(pred) = report.predicted_density {
        csv.push_str(&format!("predicted_density,{pred:.10}\n"));
    }
    csv.push_str(&format!("exceptional_count,{}\n", report.exceptional_n.len()));
    csv.push_str(&format!("pass,{pass}\n"));
    Ok(Outcome { json, csv, pass })
}

pub fn ldp_sim(
    f: &IntPolynomial,
    model_primes: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Outcome> {
    if model_primes == 0 || model_primes > 20 {
        bail!("--cutoff must be between 1 and 20 model primes");
    }
    if trials == 0 {
        bail!("--N must be positive");
    }
    let classifier = FrobeniusClassifier::new(f.clone())
        .map_err(|e| anyhow!("polynomial must be irreducible: {e}"))?;
    // First primes with at least one root (λ ≥ 1): those are the ones that
    // can divide values of f.
    let mut primes = Vec::new();
    let mut classes = Vec::new();
    for p in powerfree_core::arith::primes_up_to(100_000) {
        match classifier.classify(p).map_err(|e| anyhow!("classifying {p}: {e}"))? {
            FrobeniusClass::Lambda(l) if l >= 1 => {
                primes.push(p);
                classes.push(l.to_string());
            }
            _ => {}
        }
        if primes.len() == model_primes {
            break;
        }
    }
    if primes.len() < model_primes {
        bail!("not enough split primes below 100000");
    }
    let mut s_pairs: Vec<(String, f64)> = Vec::new();
    let mut share: std::collections::BTreeMap<String, f64> = Default::default();
    for class in &classes {
        let lambda: f64 = class.parse().unwrap();
        if !s_pairs.iter().any(|(l, _)| l == class) {
            s_pairs.push((class.clone(), lambda));
        }
        *share.entry(class.clone()).or_insert(0.0) += 1.0 / primes.len() as f64;
    }
    let model = SanovModel::new(
        primes.clone(),
        classes.clone(),
        RateVector::from_pairs(s_pairs.iter().map(|(l, v)| (l.as_str(), *v)))
            .map_err(|e| anyhow!("{e}"))?,
        RateVector::new(share).map_err(|e| anyhow!("{e}"))?,
    )
    .map_err(|e| anyhow!("{e}"))?;

    let report = simulate_parallel(&model, trials, seed, workers)?;

    // Exact per-class expected counts and the exact zero-vector probability.
    let labels = report.labels.clone();
    let mut expected = vec![0.0f64; labels.len()];
    for (p, class) in primes.iter().zip(&classes) {
        let idx = labels.iter().position(|l| l == class).unwrap();
        let lambda: f64 = class.parse().unwrap();
        expected[idx] += lambda / *p as f64;
    }
    let zero = vec![0u32; labels.len()];
    let exact_zero = exact_region_probability(&model, |v| v == zero.as_slice())
        .map_err(|e| anyhow!("{e}"))?
        .to_f64()
        .context("exact probability out of range")?;

    let mut rows = Vec::new();
    let mut csv = String::from("class,observed_mean,expected_mean,pass\n");
    let mut all = true;
    for (idx, label) in labels.iter().enumerate() {
        let observed: f64 = report
            .counts
            .iter()
            .map(|(v, &c)| v[idx] as f64 * c as f64)
            .sum::<f64>()
            / trials as f64;
        // Variance of the class count is a sum of Bernoulli variances.
        let var: f64 = primes
            .iter()
            .zip(&classes)
            .filter(|(_, c)| *c == label)
            .map(|(&p, c)| {
                let q = c.parse::<f64>().unwrap() / p as f64;
                q * (1.0 - q)
            })
            .sum();
        let se = (var / trials as f64).sqrt();
        let pass = (observed - expected[idx]).abs() <= 3.0 * se;
        all &= pass;
        rows.push(json!({
            "class": label,
            "observed_mean": derived(observed),
            "expected_mean": derived(expected[idx]),
            "stderr": se,
            "pass": pass,
        }));
        csv.push_str(&format!("{label},{observed:.6},{:.6},{pass}\n", expected[idx]));
    }
    let zero_freq = report.frequency(&zero);
    let zero_se = (exact_zero * (1.0 - exact_zero) / trials as f64).sqrt();
    let zero_pass = (zero_freq - exact_zero).abs() <= 3.0 * zero_se;
    all &= zero_pass;
    csv.push_str(&format!("zero_vector,{zero_freq:.6},{exact_zero:.6},{zero_pass}\n"));
    let json = json!({
        "command": "ldp-sim",
        "poly": poly_string(f),
        "primes": primes,
        "trials": trials,
        "seed": seed,
        "workers": workers,
        "classes": rows,
        "zero_vector": {
            "observed": derived(zero_freq),
            "exact": derived(exact_zero),
            "stderr": zero_se,
            "pass": zero_pass,
        },
        "pass": all,
    });
    Ok(Outcome { json, csv, pass: all })
}

fn simulate_parallel(
    model: &SanovModel,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SimulationReport> {
    let workers = workers.max(1) as u64;
    let chunk = trials.div_ceil(workers);
    let mut parts: Vec<Option<SimulationReport>> = Vec::new();
    parts.resize_with(workers as usize, || None);
    std::thread::scope(|scope| {
        for (w, slot) in parts.iter_mut().enumerate() {
            let lo = w as u64 * chunk;
            let hi = ((w as u64 + 1) * chunk).min(trials);
            if lo >= hi {
                continue;
            }
            scope.spawn(move || {
                *slot = simulate_omega_model_range(model, lo, hi, seed).ok();
            });
        }
    });
    let mut merged: Option<SimulationReport> = None;
    for part in parts.into_iter().flatten() {
        merged = Some(match merged {
            None => part,
            Some(acc) => acc.merge(part).map_err(|e| anyhow!("{e}"))?,
        });
    }
    merged.ok_or_else(|| anyhow!("no trials simulated"))
}

pub fn check(f: &IntPolynomial, k: u32) -> Result<Outcome> {
    let report = obstruction_check(f, k).map_err(|e| anyhow!("{e}"))?;
    let pass = report.product_positive;
    let json = json!({
        "command": "check",
        "poly": poly_string(f),
        "k": k,
        "content": f.content().to_string(),
        "content_ok": report.content_ok,
        "small_primes": report
            .small_prime_ok
            .iter()
            .map(|&(p, ok)| json!({ "p": p, "ok": ok }))
            .collect::<Vec<_>>(),
        "positive_density": report.product_positive,
        "pass": pass,
    });
    let mut csv = String::from("field,value\n");
    csv.push_str(&format!("content_ok,{}\n", report.content_ok));
    for (p, ok) in &report.small_prime_ok {
        csv.push_str(&format!("p_{p}_ok,{ok}\n"));
    }
    csv.push_str(&format!("positive_density,{pass}\n"));
    Ok(Outcome { json, csv, pass })
}
