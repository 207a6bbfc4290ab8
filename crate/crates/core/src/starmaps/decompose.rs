//! Splitting a Jordan *-derivation into an inner *-derivation plus a
//! transposed part.
//!
//! For `θ = ψ_μ ∘ φ` with `φ = M_σ ∘ λ̂`, the map `D₀ = D · μ` is a Jordan
//! *-derivation of `φ`. It agrees with an inner *-derivation `Δ_f^φ` on the
//! diagonal idempotents; the difference `T = D₀ - Δ_f^φ` kills them and is
//! transposed. Transporting back by `μ⁻¹` gives
//! `D = Δ_{f μ⁻¹}^θ + T · μ⁻¹`.

use std::collections::BTreeMap;

use super::{
    basis_label, inner_star_derivation, is_transposed, jordan_witness, right_mult_compose,
    sigma_zero,
};
use crate::error::{Error, Result};
use crate::incidence::Element;
use crate::involution::{InvolutionSpec, MultiplicativeElement};
use crate::maps::LinearMap;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `f μ⁻¹`: the inner part is `Δ_{f μ⁻¹}^θ`.
    pub inner_f: Element,
    /// `f` with `D₀(e_xx) = Δ_f^φ(e_xx)`.
    pub phi_inner_f: Element,
    pub inner_part: LinearMap,
    /// Column coefficients of `T = D₀ - Δ_f^φ` as a transposed map of `φ`.
    pub gamma: BTreeMap<usize, Scalar>,
    /// `T` itself, a transposed Jordan *-derivation of `φ`.
    pub phi_transposed: LinearMap,
    /// `T · μ⁻¹`.
    pub transposed_part: LinearMap,
    pub sigma_zero: MultiplicativeElement,
    /// `D - inner_part - transposed_part`; zero whenever decomposition
    /// succeeds.
    pub residual: LinearMap,
}

/// The element `f` with `f(x, y) = -D₀(e_xx)(x, y)`.
///
/// For a Jordan *-derivation `D₀` of an involution without inner part, row
/// `x` of `D₀(e_xx)` is minus row `x` of `f` away from `(x, λ(x))`, where
/// `D₀(e_xx)` vanishes; so `Δ_f^φ(e_xx) = D₀(e_xx)` for all `x`.
pub fn extract_inner_f(d0: &LinearMap) -> Result<Element> {
    let poset = d0.poset();
    let mut entries = Vec::new();
    for x in 0..poset.len() {
        let img = d0.image_of(x, x)?;
        for (&(u, v), c) in img.entries() {
            if u == x {
                entries.push(((u, v), -c));
            }
        }
    }
    Element::from_entries(poset, d0.field(), entries)
}

pub fn decompose_jsd(d: &LinearMap, theta: &InvolutionSpec) -> Result<Decomposition> {
    let poset = theta.poset();
    if let Some((a, b)) = jordan_witness(d, theta)? {
        return Err(Error::NotJordan(basis_label(poset, a), basis_label(poset, b)));
    }
    let phi = theta.phi();
    let d0 = right_mult_compose(d, theta.mu())?;

    let f = extract_inner_f(&d0)?;
    let inner_phi = inner_star_derivation(&f, &phi)?;
    let t = d0.sub(&inner_phi)?;
    for x in 0..poset.len() {
        if !t.image_of(x, x)?.is_zero() {
            return Err(Error::DecompositionFailed(format!(
                "D₀ - Δ_f^φ does not vanish on e {0} {0}",
                poset.name(x)
            )));
        }
    }
    let gamma = is_transposed(&t, phi.sigma(), phi.lambda())?.ok_or_else(|| {
        Error::DecompositionFailed(format!(
            "D₀ - Δ_f^φ vanishes on idempotents but is not transposed:\n{t}"
        ))
    })?;

    let mu_inv = theta.mu_inv();
    let inner_f = f.convolve(mu_inv)?;
    let inner_part = inner_star_derivation(&inner_f, theta)?;
    let transposed_part = right_mult_compose(&t, mu_inv)?;
    let residual = d.sub(&inner_part)?.sub(&transposed_part)?;
    if !residual.is_zero() {
        return Err(Error::DecompositionFailed(format!(
            "nonzero residual:\n{residual}"
        )));
    }
    Ok(Decomposition {
        inner_f,
        phi_inner_f: f,
        inner_part,
        gamma,
        phi_transposed: t,
        transposed_part,
        sigma_zero: sigma_zero(phi.sigma(), phi.lambda(), mu_inv)?,
        residual,
    })
}
