//! Exhaustive sweep over small posets: every poset up to isomorphism, every
//! poset involution, and a fixed sample of `(μ, σ)` twists.

use std::collections::BTreeMap;
use std::sync::Arc;

use incalg_core::starmaps::{
    decompose_jsd, inner_space_basis, jordan_vanishing_space_basis, jsd_space_basis, span_contains,
    span_dimension, star_derivation_space_basis,
};
use incalg_core::{Element, Field, InvolutionSpec, MultiplicativeElement, Poset, PosetInvolution, Result, Scalar};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct Instance {
    pub theta: InvolutionSpec,
}

impl Instance {
    pub fn poset(&self) -> &Arc<Poset> {
        self.theta.poset()
    }

    pub fn describe(&self) -> Value {
        let p = self.poset();
        let covers: Vec<String> = p
            .covers()
            .iter()
            .map(|&(x, y)| format!("{} < {}", p.name(x), p.name(y)))
            .collect();
        let lambda: Vec<String> = self
            .theta
            .lambda()
            .swaps(p)
            .into_iter()
            .filter(|(x, y)| x != y)
            .map(|(x, y)| format!("{x} <-> {y}"))
            .collect();
        let sigma: BTreeMap<String, String> = self
            .theta
            .sigma()
            .cover_values()
            .iter()
            .filter(|(_, v)| !v.is_one())
            .map(|(&(x, y), v)| (format!("{} {}", p.name(x), p.name(y)), v.to_string()))
            .collect();
        json!({
            "size": p.len(),
            "covers": covers,
            "lambda": lambda,
            "sigma": sigma,
            "mu": self.theta.mu().to_string(),
        })
    }
}

/// `δ`, then `δ + e_xy` and `δ + 2 e_xy` for each cover.
pub fn mu_samples(poset: &Arc<Poset>, field: Field) -> Vec<Element> {
    let delta = Element::delta(poset, field);
    let mut out = vec![delta.clone()];
    for &(x, y) in poset.covers() {
        for c in [1, 2] {
            let e = Element::basis(poset, field, x, y).expect("cover is comparable");
            out.push(delta.add(&e.scale(&field.from_i64(c)).expect("same field")).expect("same poset"));
        }
    }
    out
}

/// All ones; per cover `c`, `c → 2`; and the self-consistent twists
/// `{c → 2, λ(c) → 1/2}` when `λ` moves `c`, `{c → -1}` when it fixes `c`.
pub fn sigma_samples(
    poset: &Arc<Poset>,
    field: Field,
    lambda: &PosetInvolution,
) -> Vec<MultiplicativeElement> {
    let two = field.from_i64(2);
    let half = two.inv().expect("characteristic is not 2");
    let mut specs: Vec<BTreeMap<(usize, usize), Scalar>> = vec![BTreeMap::new()];
    for &(x, y) in poset.covers() {
        specs.push(BTreeMap::from([((x, y), two.clone())]));
        let mirror = (lambda.apply(y), lambda.apply(x));
        if mirror == (x, y) {
            specs.push(BTreeMap::from([((x, y), field.from_i64(-1))]));
        } else {
            specs.push(BTreeMap::from([((x, y), two.clone()), (mirror, half.clone())]));
        }
    }
    let mut out: Vec<MultiplicativeElement> = Vec::new();
    for covers in specs {
        // Cover values around a non-chain interval may be inconsistent.
        if let Ok(sigma) = MultiplicativeElement::from_covers(poset, field, &covers) {
            if !out.contains(&sigma) {
                out.push(sigma);
            }
        }
    }
    out
}

/// Every validated `(μ, σ, λ)` from the samples, over all posets with
/// `1..=max_size` elements, in a fixed order.
pub fn sample_instances(max_size: usize, field: Field) -> Vec<Instance> {
    let posets: Vec<Arc<Poset>> = (1..=max_size)
        .flat_map(Poset::enumerate_all)
        .map(Arc::new)
        .collect();
    posets
        .par_iter()
        .map(|p| instances_for(p, field))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn instances_for(poset: &Arc<Poset>, field: Field) -> Vec<Instance> {
    let mut out = Vec::new();
    let mus = mu_samples(poset, field);
    for lambda in poset.involutions() {
        for sigma in sigma_samples(poset, field, &lambda) {
            for mu in &mus {
                let theta = InvolutionSpec::new(mu.clone(), sigma.clone(), lambda.clone())
                    .expect("sampled components are valid");
                if theta.validate() {
                    out.push(Instance { theta });
                }
            }
        }
    }
    out
}

/// Outcome of the sweep checks on one instance.
#[derive(Clone, Debug)]
pub struct InstanceResult {
    pub jd_dimension: usize,
    pub star_dimension: usize,
    pub inner_dimension: usize,
    pub vanishing_dimension: usize,
    /// Dimension of the span of the inner maps together with the Jordan
    /// maps vanishing on the idempotents.
    pub sum_dimension: usize,
    pub star_contained: bool,
    /// One message per JD basis map that failed to decompose.
    pub failures: Vec<String>,
}

impl InstanceResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.star_contained
    }
}

pub fn check_instance(inst: &Instance) -> Result<InstanceResult> {
    let theta = &inst.theta;
    let jd = jsd_space_basis(theta)?;
    let star = star_derivation_space_basis(theta)?;
    let inner = inner_space_basis(theta)?;
    let vanishing = jordan_vanishing_space_basis(theta)?;
    let mut failures = Vec::new();
    for (i, d) in jd.iter().enumerate() {
        match decompose_jsd(d, theta) {
            Ok(dec) if dec.residual.is_zero() => {}
            Ok(_) => failures.push(format!("basis map {i}: nonzero residual")),
            Err(e) => failures.push(format!("basis map {i}: {e}")),
        }
    }
    let star_contained = star.iter().all(|s| span_contains(&jd, s));
    let (inner_dimension, vanishing_dimension) = (inner.len(), vanishing.len());
    let mut both = inner;
    both.extend(vanishing);
    Ok(InstanceResult {
        jd_dimension: jd.len(),
        star_dimension: star.len(),
        inner_dimension,
        vanishing_dimension,
        sum_dimension: span_dimension(&both),
        star_contained,
        failures,
    })
}

/// Runs the sweep and assembles its report; the flag is true iff every
/// instance passed.
pub fn sweep(max_size: usize, field: Field) -> Result<(Value, bool)> {
    let instances = sample_instances(max_size, field);
    let results: Vec<Result<InstanceResult>> = instances.par_iter().map(check_instance).collect();
    let mut rows = Vec::with_capacity(instances.len());
    let mut failures = 0usize;
    let mut basis_maps = 0usize;
    let mut by_size: BTreeMap<String, usize> = BTreeMap::new();
    for (inst, res) in instances.iter().zip(results) {
        let res = res?;
        if !res.passed() {
            failures += 1;
        }
        basis_maps += res.jd_dimension;
        *by_size.entry(inst.poset().len().to_string()).or_default() += 1;
        let mut row = inst.describe();
        row["jd_dimension"] = json!(res.jd_dimension);
        row["star_dimension"] = json!(res.star_dimension);
        row["inner_dimension"] = json!(res.inner_dimension);
        row["vanishing_dimension"] = json!(res.vanishing_dimension);
        row["inner_plus_vanishing_dimension"] = json!(res.sum_dimension);
        row["star_contained"] = json!(res.star_contained);
        row["failures"] = json!(res.failures);
        rows.push(row);
    }
    let posets_by_size: BTreeMap<String, usize> = (1..=max_size)
        .map(|n| (n.to_string(), Poset::enumerate_all(n).len()))
        .collect();
    let report = json!({
        "max_size": max_size,
        "posets_by_size": posets_by_size,
        "instances": instances.len(),
        "instances_by_size": by_size,
        "basis_maps_decomposed": basis_maps,
        "failures": failures,
        "results": rows,
    });
    Ok((report, failures == 0))
}
