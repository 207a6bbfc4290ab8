//! Linear maps twisted by an involution: *-derivations, Jordan
//! *-derivations, inner *-derivations `Δ_f^θ(g) = f θ(g) - g f` and the
//! transposed Jordan *-derivations.
//!
//! Every check here reduces to identities on pairs of basis elements, which
//! suffices by bilinearity. Jordan membership uses the polarized identity
//! `D(fg + gf) = D(f)θ(g) + D(g)θ(f) + f D(g) + g D(f)`, equivalent to
//! `D(f²) = D(f)θ(f) + f D(f)` away from characteristic 2.

mod decompose;
mod oracle;

use std::collections::BTreeMap;

pub use decompose::{decompose_jsd, extract_inner_f, Decomposition};
pub use oracle::{jordan_vanishing_space_basis, jsd_space_basis, star_derivation_space_basis};

use crate::error::{Error, Result};
use crate::incidence::Element;
use crate::involution::{InvolutionSpec, MultiplicativeElement};
use crate::linalg::{in_span, solve, span_rank, Matrix};
use crate::maps::LinearMap;
use crate::poset::{Poset, PosetInvolution};
use crate::scalar::{Field, Scalar};

/// Multiplication table of the standard basis: `e_a e_b = e_c` or zero.
pub(crate) struct BasisTable {
    n: usize,
    prod: Vec<Option<usize>>,
    /// For each `c`, the pairs `(d, k)` with `e_c e_d = e_k`.
    right: Vec<Vec<(usize, usize)>>,
}

impl BasisTable {
    pub(crate) fn new(poset: &Poset) -> Self {
        let pairs = poset.pairs();
        let n = pairs.len();
        let mut prod = vec![None; n * n];
        let mut right = vec![Vec::new(); n];
        for (a, &(x, y)) in pairs.iter().enumerate() {
            for (b, &(u, v)) in pairs.iter().enumerate() {
                if y == u {
                    let k = poset.pair_index(x, v).expect("transitivity");
                    prod[a * n + b] = Some(k);
                    right[a].push((b, k));
                }
            }
        }
        BasisTable { n, prod, right }
    }

    pub(crate) fn prod(&self, a: usize, b: usize) -> Option<usize> {
        self.prod[a * self.n + b]
    }

    pub(crate) fn right(&self, c: usize) -> &[(usize, usize)] {
        &self.right[c]
    }

    /// Product of two coordinate vectors.
    pub(crate) fn mul(&self, field: Field, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.n];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for &(b, k) in &self.right[a] {
                if !v[b].is_zero() {
                    out[k] = &out[k] + &(ua * &v[b]);
                }
            }
        }
        out
    }

    /// Coordinates of `e_a · w`.
    fn left_basis(&self, field: Field, a: usize, w: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.n];
        for &(b, k) in &self.right[a] {
            out[k] = &out[k] + &w[b];
        }
        out
    }
}

fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = &*a + b;
        }
    }
}

fn column_or_zero(d: &LinearMap, c: Option<usize>) -> Vec<Scalar> {
    match c {
        Some(c) => d.matrix().column(c),
        None => vec![d.field().zero(); d.dim()],
    }
}

fn check_context(d: &LinearMap, theta: &InvolutionSpec) -> Result<()> {
    if d.field() != theta.field() {
        return Err(Error::FieldMismatch);
    }
    if d.poset() != theta.poset() {
        return Err(Error::PosetMismatch);
    }
    Ok(())
}

/// Renders basis element `j` as `e x y`.
pub fn basis_label(poset: &Poset, j: usize) -> String {
    let (x, y) = poset.pairs()[j];
    format!("e {} {}", poset.name(x), poset.name(y))
}

/// A basis pair `(a, b)` violating `D(e_a e_b) = D(e_a)θ(e_b) + e_a D(e_b)`,
/// scanning right factors from the top of the basis down and left factors
/// upward. `None` means `D` is a *-derivation.
pub fn star_derivation_witness(d: &LinearMap, theta: &InvolutionSpec) -> Result<Option<(usize, usize)>> {
    check_context(d, theta)?;
    let field = d.field();
    let table = BasisTable::new(d.poset());
    let t = theta.matrix();
    let n = d.dim();
    let cols: Vec<Vec<Scalar>> = (0..n).map(|j| d.matrix().column(j)).collect();
    let tcols: Vec<Vec<Scalar>> = (0..n).map(|j| t.matrix().column(j)).collect();
    for b in (0..n).rev() {
        for a in 0..n {
            let lhs = column_or_zero(d, table.prod(a, b));
            let mut rhs = table.mul(field, &cols[a], &tcols[b]);
            add_into(&mut rhs, &table.left_basis(field, a, &cols[b]));
            if lhs != rhs {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn is_star_derivation(d: &LinearMap, theta: &InvolutionSpec) -> Result<bool> {
    Ok(star_derivation_witness(d, theta)?.is_none())
}

/// A basis pair `(a, b)`, `a ≤ b`, violating the polarized Jordan identity.
pub fn jordan_witness(d: &LinearMap, theta: &InvolutionSpec) -> Result<Option<(usize, usize)>> {
    check_context(d, theta)?;
    let field = d.field();
    let table = BasisTable::new(d.poset());
    let t = theta.matrix();
    let n = d.dim();
    let cols: Vec<Vec<Scalar>> = (0..n).map(|j| d.matrix().column(j)).collect();
    let tcols: Vec<Vec<Scalar>> = (0..n).map(|j| t.matrix().column(j)).collect();
    for a in 0..n {
        for b in a..n {
            let mut lhs = column_or_zero(d, table.prod(a, b));
            add_into(&mut lhs, &column_or_zero(d, table.prod(b, a)));
            let mut rhs = table.mul(field, &cols[a], &tcols[b]);
            add_into(&mut rhs, &table.mul(field, &cols[b], &tcols[a]));
            add_into(&mut rhs, &table.left_basis(field, a, &cols[b]));
            add_into(&mut rhs, &table.left_basis(field, b, &cols[a]));
            if lhs != rhs {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn is_jordan_star_derivation(d: &LinearMap, theta: &InvolutionSpec) -> Result<bool> {
    Ok(jordan_witness(d, theta)?.is_none())
}

/// Checks `D(f²) = D(f)θ(f) + f D(f)` for one element `f`.
pub fn jordan_identity_holds(d: &LinearMap, theta: &InvolutionSpec, f: &Element) -> Result<bool> {
    check_context(d, theta)?;
    let df = d.apply(f)?;
    let lhs = d.apply(&f.convolve(f)?)?;
    let rhs = df.convolve(&theta.apply(f)?)?.add(&f.convolve(&df)?)?;
    Ok(lhs == rhs)
}

/// The inner *-derivation `Δ_f^θ : g ↦ f θ(g) - g f`.
pub fn inner_star_derivation(f: &Element, theta: &InvolutionSpec) -> Result<LinearMap> {
    if f.field() != theta.field() {
        return Err(Error::FieldMismatch);
    }
    if f.poset() != theta.poset() {
        return Err(Error::PosetMismatch);
    }
    let poset = theta.poset();
    let field = theta.field();
    let t = theta.matrix();
    let table = BasisTable::new(poset);
    let fc = f.to_coords();
    let n = poset.dim();
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let mut img = table.mul(field, &fc, &t.matrix().column(j));
        // g f with g = e_j
        for (k, v) in table.left_basis(field, j, &fc).iter().enumerate() {
            if !v.is_zero() {
                img[k] = &img[k] - v;
            }
        }
        images.push(Element::from_coords(poset, field, &img)?);
    }
    LinearMap::from_images(poset, field, &images)
}

/// Some `f` with `Δ_f^θ = D`, or `None` when `D` is not inner. Free
/// coordinates of `f` are set to zero.
pub fn is_inner(d: &LinearMap, theta: &InvolutionSpec) -> Result<Option<Element>> {
    check_context(d, theta)?;
    let poset = theta.poset();
    let field = theta.field();
    let n = poset.dim();
    let columns = inner_generators(theta)?
        .iter()
        .map(LinearMap::to_vec)
        .collect::<Vec<_>>();
    let a = Matrix::from_columns(field, n * n, &columns)?;
    Ok(match solve(&a, &d.to_vec())? {
        Some(coords) => Some(Element::from_coords(poset, field, &coords)?),
        None => None,
    })
}

/// `Δ_{e_j}^θ` for every basis element.
fn inner_generators(theta: &InvolutionSpec) -> Result<Vec<LinearMap>> {
    let poset = theta.poset();
    let field = theta.field();
    poset
        .pairs()
        .iter()
        .map(|&(x, y)| inner_star_derivation(&Element::basis(poset, field, x, y)?, theta))
        .collect()
}

/// Spanning maps of the inner *-derivations, reduced to a basis.
pub fn inner_space_basis(theta: &InvolutionSpec) -> Result<Vec<LinearMap>> {
    let gens = inner_generators(theta)?;
    Ok(independent_subset(&gens))
}

/// Whether `x < y` contributes to a transposed map: `x ≤ λ(y)`, which is
/// equivalent to `y ≤ λ(x)`.
fn transposed_active(poset: &Poset, lambda: &PosetInvolution, x: usize, y: usize) -> bool {
    poset.lt(x, y) && poset.leq(x, lambda.apply(y))
}

/// The transposed map with column coefficients `γ_y`:
/// `D(e_xx) = 0` and, for `x < y`,
/// `D(e_xy) = γ_y e_{x λ(y)} - γ_y σ(λ(y), λ(x)) e_{y λ(x)}`,
/// each term present only when its index pair is comparable.
/// Missing `γ_y` are zero.
pub fn transposed_jsd(
    gamma: &BTreeMap<usize, Scalar>,
    sigma: &MultiplicativeElement,
    lambda: &PosetInvolution,
) -> Result<LinearMap> {
    let poset = sigma.poset();
    let field = sigma.field();
    if let Some(why) = lambda.invalidity(poset) {
        return Err(Error::InvalidInvolution(why));
    }
    if let Some(&bad) = gamma.keys().find(|&&y| y >= poset.len()) {
        return Err(Error::UnknownElement(format!("#{bad}")));
    }
    LinearMap::from_fn(poset, field, |x, y| {
        let g = gamma.get(&y).cloned().unwrap_or_else(|| field.zero());
        if x == y || g.is_zero() {
            return Ok(Element::zero(poset, field));
        }
        let (lx, ly) = (lambda.apply(x), lambda.apply(y));
        let mut entries = Vec::with_capacity(2);
        if poset.leq(x, ly) {
            entries.push(((x, ly), g.clone()));
        }
        if poset.leq(y, lx) {
            entries.push(((y, lx), -(&g * &sigma.get(ly, lx))));
        }
        Element::from_entries(poset, field, entries)
    })
}

/// Elements `y` carrying a transposed coefficient: those with at least one
/// strict predecessor.
pub fn gamma_support(poset: &Poset) -> Vec<usize> {
    (0..poset.len())
        .filter(|&y| (0..poset.len()).any(|x| poset.lt(x, y)))
        .collect()
}

/// Recovers `γ` with `transposed_jsd(γ, σ, λ) = D`, reading
/// `γ_y = D(e_xy)(x, λ(y))` from the first contributing `x < y`. Elements
/// with predecessors but no contributing one get `γ_y = 0`.
pub fn is_transposed(
    d: &LinearMap,
    sigma: &MultiplicativeElement,
    lambda: &PosetInvolution,
) -> Result<Option<BTreeMap<usize, Scalar>>> {
    let poset = sigma.poset();
    if d.poset() != poset {
        return Err(Error::PosetMismatch);
    }
    let field = sigma.field();
    let mut gamma = BTreeMap::new();
    for y in gamma_support(poset) {
        let value = match (0..poset.len()).find(|&x| transposed_active(poset, lambda, x, y)) {
            Some(x) => d.image_of(x, y)?.get(x, lambda.apply(y)),
            None => field.zero(),
        };
        gamma.insert(y, value);
    }
    let rebuilt = transposed_jsd(&gamma, sigma, lambda)?;
    Ok((rebuilt == *d).then_some(gamma))
}

/// One transposed map per `y` that has a contributing predecessor, with
/// `γ_y = 1` and all other coefficients zero.
pub fn transposed_space_basis(
    sigma: &MultiplicativeElement,
    lambda: &PosetInvolution,
) -> Result<Vec<LinearMap>> {
    let poset = sigma.poset();
    let field = sigma.field();
    gamma_support(poset)
        .into_iter()
        .filter(|&y| (0..poset.len()).any(|x| transposed_active(poset, lambda, x, y)))
        .map(|y| transposed_jsd(&BTreeMap::from([(y, field.one())]), sigma, lambda))
        .collect()
}

/// `g ↦ D(g) m`.
pub fn right_mult_compose(d: &LinearMap, m: &Element) -> Result<LinearMap> {
    if m.field() != d.field() {
        return Err(Error::FieldMismatch);
    }
    if m.poset() != d.poset() {
        return Err(Error::PosetMismatch);
    }
    let poset = d.poset();
    let images = (0..d.dim())
        .map(|j| d.image(j).convolve(m))
        .collect::<Result<Vec<_>>>()?;
    LinearMap::from_images(poset, d.field(), &images)
}

/// The multiplicative element
/// `σ₀(λ(y), λ(x)) = σ(λ(y), λ(x)) m(y, y)⁻¹ m(x, x)` for `x ≤ y`.
pub fn sigma_zero(
    sigma: &MultiplicativeElement,
    lambda: &PosetInvolution,
    m: &Element,
) -> Result<MultiplicativeElement> {
    let poset = sigma.poset();
    if m.poset() != poset {
        return Err(Error::PosetMismatch);
    }
    if let Some(why) = lambda.invalidity(poset) {
        return Err(Error::InvalidInvolution(why));
    }
    if let Some(x) = (0..poset.len()).find(|&x| m.get(x, x).is_zero()) {
        return Err(Error::NotInvertible(poset.name(x).to_string()));
    }
    let mut entries = Vec::with_capacity(poset.dim());
    for &(x, y) in poset.pairs() {
        let (ly, lx) = (lambda.apply(y), lambda.apply(x));
        let v = &(&sigma.get(ly, lx) * &m.get(y, y).inv()?) * &m.get(x, x);
        entries.push(((ly, lx), v));
    }
    MultiplicativeElement::from_element(&Element::from_entries(poset, sigma.field(), entries)?)
}

/// True iff `Δ_f^θ(e_xx) = 0` for every `x`.
pub fn inner_vanishes_on_idempotents(f: &Element, theta: &InvolutionSpec) -> Result<bool> {
    let delta = inner_star_derivation(f, theta)?;
    let poset = theta.poset();
    for x in 0..poset.len() {
        if !delta.image_of(x, x)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff, for all `x ≤ y`, `Δ_f^φ(e_xy)` equals
/// `f(y, λ(y)) σ(λ(y), λ(x)) e_{y λ(x)} - f(y, λ(y)) e_{x λ(y)}`, with
/// terms on incomparable pairs omitted. `φ` must have no inner part.
pub fn inner_has_idempotent_free_form(f: &Element, phi: &InvolutionSpec) -> Result<bool> {
    let delta = inner_star_derivation(f, phi)?;
    let poset = phi.poset();
    let field = phi.field();
    let sigma = phi.sigma();
    let lambda = phi.lambda();
    for &(x, y) in poset.pairs() {
        let (lx, ly) = (lambda.apply(x), lambda.apply(y));
        let c = if poset.leq(y, ly) { f.get(y, ly) } else { field.zero() };
        let mut entries = Vec::new();
        if !c.is_zero() {
            if poset.leq(y, lx) {
                entries.push(((y, lx), &c * &sigma.get(ly, lx)));
            }
            if poset.leq(x, ly) {
                entries.push(((x, ly), -&c));
            }
        }
        if delta.image_of(x, y)? != Element::from_entries(poset, field, entries)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximal linearly independent prefix-greedy subset of `maps`.
pub fn independent_subset(maps: &[LinearMap]) -> Vec<LinearMap> {
    let Some(first) = maps.first() else {
        return Vec::new();
    };
    let len = first.dim() * first.dim();
    let field = first.field();
    let mut kept: Vec<Vec<Scalar>> = Vec::new();
    let mut out = Vec::new();
    for m in maps {
        let v = m.to_vec();
        if !in_span(field, len, &kept, &v) {
            kept.push(v);
            out.push(m.clone());
        }
    }
    out
}

/// Dimension of the span of `maps` (all on the same poset and field).
pub fn span_dimension(maps: &[LinearMap]) -> usize {
    let Some(first) = maps.first() else {
        return 0;
    };
    let vecs: Vec<Vec<Scalar>> = maps.iter().map(LinearMap::to_vec).collect();
    span_rank(first.field(), first.dim() * first.dim(), &vecs)
}

/// True iff `d` is a linear combination of `basis`.
pub fn span_contains(basis: &[LinearMap], d: &LinearMap) -> bool {
    let vecs: Vec<Vec<Scalar>> = basis.iter().map(LinearMap::to_vec).collect();
    in_span(d.field(), d.dim() * d.dim(), &vecs, &d.to_vec())
}

#[cfg(test)]
mod tests;
