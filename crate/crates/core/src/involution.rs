//! Involutions of `I(X, K)` assembled from an inner automorphism `ψ_μ`, a
//! multiplicative automorphism `M_σ` and the map `λ̂` induced by a poset
//! involution, together with the inverse problem of factoring a given
//! involution matrix.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::incidence::Element;
use crate::linalg::{kernel_basis, Matrix};
use crate::maps::LinearMap;
use crate::poset::{Poset, PosetInvolution};
use crate::scalar::{Field, Scalar};

/// A multiplicative element `σ`: `σ(x, x) = 1` and `σ(x, y) = σ(x, z) σ(z, y)`
/// whenever `x ≤ z ≤ y`. It is determined by its values on covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeElement {
    cover_values: BTreeMap<(usize, usize), Scalar>,
    values: Element,
}

impl MultiplicativeElement {
    /// The all-ones element.
    pub fn ones(poset: &Arc<Poset>, field: Field) -> Self {
        Self::from_covers(poset, field, &BTreeMap::new()).expect("all-ones is multiplicative")
    }

    /// Extends cover values to every comparable pair by multiplying along
    /// chains. Covers missing from `cover_values` take the value 1.
    pub fn from_covers(
        poset: &Arc<Poset>,
        field: Field,
        cover_values: &BTreeMap<(usize, usize), Scalar>,
    ) -> Result<Self> {
        let name = |i: usize| poset.name(i).to_string();
        for (&(x, y), v) in cover_values {
            if x >= poset.len() || y >= poset.len() || !poset.is_cover(x, y) {
                return Err(Error::NotCover(
                    poset.names().get(x).cloned().unwrap_or_default(),
                    poset.names().get(y).cloned().unwrap_or_default(),
                ));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch);
            }
            if v.is_zero() {
                return Err(Error::ZeroValue(name(x), name(y)));
            }
        }
        let cover = |z: usize, y: usize| {
            cover_values
                .get(&(z, y))
                .cloned()
                .unwrap_or_else(|| field.one())
        };

        let mut order: Vec<(usize, usize)> = poset.pairs().to_vec();
        order.sort_by_key(|&(x, y)| poset.interval(x, y).len());
        let mut values: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for (x, y) in order {
            if x == y {
                values.insert((x, y), field.one());
                continue;
            }
            let mut value: Option<Scalar> = None;
            for &(z, w) in poset.covers() {
                if w != y || !poset.leq(x, z) {
                    continue;
                }
                let candidate = &values[&(x, z)] * &cover(z, y);
                match &value {
                    None => value = Some(candidate),
                    Some(v) if *v != candidate => {
                        return Err(Error::Inconsistent(name(x), name(y)));
                    }
                    Some(_) => {}
                }
            }
            values.insert((x, y), value.expect("a strict relation has a lower cover"));
        }
        let cover_values = poset
            .covers()
            .iter()
            .map(|&(z, y)| ((z, y), cover(z, y)))
            .collect();
        Ok(MultiplicativeElement {
            cover_values,
            values: Element::from_entries(poset, field, values)?,
        })
    }

    /// Validates an arbitrary element as multiplicative.
    pub fn from_element(e: &Element) -> Result<Self> {
        let poset = e.poset();
        let field = e.field();
        for &(x, y) in poset.pairs() {
            let v = e.get(x, y);
            if v.is_zero() {
                return Err(Error::NotMultiplicative(format!(
                    "zero value at ({}, {})",
                    poset.name(x),
                    poset.name(y)
                )));
            }
            if x == y && !v.is_one() {
                return Err(Error::NotMultiplicative(format!(
                    "diagonal value at {} is {}",
                    poset.name(x),
                    v
                )));
            }
            for z in poset.interval(x, y) {
                if e.get(x, z) * e.get(z, y) != v {
                    return Err(Error::NotMultiplicative(format!(
                        "value at ({}, {}) is not the product through {}",
                        poset.name(x),
                        poset.name(y),
                        poset.name(z)
                    )));
                }
            }
        }
        let covers = poset
            .covers()
            .iter()
            .map(|&(x, y)| ((x, y), e.get(x, y)))
            .collect();
        let sigma = Self::from_covers(poset, field, &covers)?;
        debug_assert_eq!(&sigma.values, e);
        Ok(sigma)
    }

    pub fn get(&self, x: usize, y: usize) -> Scalar {
        self.values.get(x, y)
    }

    pub fn cover_values(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.cover_values
    }

    pub fn as_element(&self) -> &Element {
        &self.values
    }

    pub fn poset(&self) -> &Arc<Poset> {
        self.values.poset()
    }

    pub fn field(&self) -> Field {
        self.values.field()
    }
}

/// `λ̂(f)(x, y) = f(λ(y), λ(x))`.
pub fn lambda_hat(lambda: &PosetInvolution, f: &Element) -> Result<Element> {
    if let Some(why) = lambda.invalidity(f.poset()) {
        return Err(Error::InvalidInvolution(why));
    }
    Ok(lambda_hat_unchecked(lambda, f))
}

pub(crate) fn lambda_hat_unchecked(lambda: &PosetInvolution, f: &Element) -> Element {
    Element::from_entries(
        f.poset(),
        f.field(),
        f.entries()
            .map(|(&(x, y), v)| ((lambda.apply(y), lambda.apply(x)), v.clone())),
    )
    .expect("λ reverses the order")
}

/// `M_σ(f) = σ ⊙ f`.
pub fn m_sigma(sigma: &MultiplicativeElement, f: &Element) -> Result<Element> {
    sigma.values.hadamard(f)
}

/// `ψ_μ(f) = μ f μ⁻¹`.
pub fn psi_mu(mu: &Element, f: &Element) -> Result<Element> {
    let mu_inv = mu.invert()?;
    mu.convolve(f)?.convolve(&mu_inv)
}

/// A candidate involution `θ = ψ_μ ∘ M_σ ∘ λ̂`. Construction only checks the
/// components; whether `θ` is actually an involution is decided by
/// [`InvolutionSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionSpec {
    mu: Element,
    mu_inv: Element,
    sigma: MultiplicativeElement,
    lambda: PosetInvolution,
}

impl InvolutionSpec {
    pub fn new(mu: Element, sigma: MultiplicativeElement, lambda: PosetInvolution) -> Result<Self> {
        if mu.field() != sigma.field() {
            return Err(Error::FieldMismatch);
        }
        if mu.poset() != sigma.poset() {
            return Err(Error::PosetMismatch);
        }
        if let Some(why) = lambda.invalidity(mu.poset()) {
            return Err(Error::InvalidInvolution(why));
        }
        let mu_inv = mu.invert()?;
        Ok(InvolutionSpec {
            mu,
            mu_inv,
            sigma,
            lambda,
        })
    }

    /// `θ = M_σ ∘ λ̂` (no inner part).
    pub fn without_inner(sigma: MultiplicativeElement, lambda: PosetInvolution) -> Result<Self> {
        let mu = Element::delta(sigma.poset(), sigma.field());
        Self::new(mu, sigma, lambda)
    }

    /// `θ = λ̂`.
    pub fn from_lambda(poset: &Arc<Poset>, field: Field, lambda: PosetInvolution) -> Result<Self> {
        Self::without_inner(MultiplicativeElement::ones(poset, field), lambda)
    }

    pub fn mu(&self) -> &Element {
        &self.mu
    }

    pub fn mu_inv(&self) -> &Element {
        &self.mu_inv
    }

    pub fn sigma(&self) -> &MultiplicativeElement {
        &self.sigma
    }

    pub fn lambda(&self) -> &PosetInvolution {
        &self.lambda
    }

    pub fn poset(&self) -> &Arc<Poset> {
        self.mu.poset()
    }

    pub fn field(&self) -> Field {
        self.mu.field()
    }

    /// The factor `φ = M_σ ∘ λ̂`, so that `θ = ψ_μ ∘ φ`.
    pub fn phi(&self) -> InvolutionSpec {
        Self::without_inner(self.sigma.clone(), self.lambda.clone())
            .expect("components were validated")
    }

    /// `θ(f) = μ (σ ⊙ λ̂(f)) μ⁻¹`.
    pub fn apply(&self, f: &Element) -> Result<Element> {
        let twisted = m_sigma(&self.sigma, &lambda_hat_unchecked(&self.lambda, f))?;
        self.mu.convolve(&twisted)?.convolve(&self.mu_inv)
    }

    pub fn matrix(&self) -> LinearMap {
        let poset = self.poset();
        let field = self.field();
        LinearMap::from_fn(poset, field, |x, y| {
            self.apply(&Element::basis(poset, field, x, y)?)
        })
        .expect("θ maps the algebra into itself")
    }

    /// True iff `θ` reverses products of basis elements and squares to the
    /// identity on the basis.
    pub fn validate(&self) -> bool {
        involution_defect(&self.matrix()).is_none()
    }

    pub fn validation_failure(&self) -> Option<String> {
        involution_defect(&self.matrix())
    }
}

/// Why a linear map fails to be an involution of the algebra, if it does.
pub fn involution_defect(t: &LinearMap) -> Option<String> {
    let poset = t.poset();
    let field = t.field();
    let n = poset.dim();
    let basis: Vec<Element> = (0..n)
        .map(|j| {
            let (x, y) = poset.pairs()[j];
            Element::basis(poset, field, x, y).expect("basis pair")
        })
        .collect();
    let images: Vec<Element> = (0..n).map(|j| t.image(j)).collect();
    let label = |j: usize| {
        let (x, y) = poset.pairs()[j];
        format!("e {} {}", poset.name(x), poset.name(y))
    };
    for a in 0..n {
        for b in 0..n {
            let lhs = t.apply(&basis[a].convolve(&basis[b]).ok()?).ok()?;
            let rhs = images[b].convolve(&images[a]).ok()?;
            if lhs != rhs {
                return Some(format!(
                    "θ({}·{}) ≠ θ({})θ({})",
                    label(a),
                    label(b),
                    label(b),
                    label(a)
                ));
            }
        }
    }
    let square = t.compose(t).ok()?;
    for j in 0..n {
        if square.image(j) != basis[j] {
            return Some(format!("θ(θ({})) ≠ {}", label(j), label(j)));
        }
    }
    None
}

/// Recovers `(μ, σ, λ)` with `ψ_μ ∘ M_σ ∘ λ̂ = T` for an involution matrix
/// `T`.
///
/// `λ(x)` is read off the diagonal of `T(e_xx)`. The automorphism
/// `α = T ∘ λ̂` fixes the diagonal idempotents up to conjugation, and
/// `μ = Σ_x α(e_xx) e_xx` solves `μ e_xx = α(e_xx) μ` with unit diagonal.
/// Conjugating back, `μ⁻¹ α(e_xy) μ = σ(x, y) e_xy`.
pub fn factor_involution(t: &LinearMap) -> Result<InvolutionSpec> {
    if let Some(why) = involution_defect(t) {
        return Err(Error::NotInvolution(why));
    }
    let poset = t.poset();
    let field = t.field();
    let n = poset.len();
    let failed = |reason: String, solution_basis: Vec<Vec<String>>| Error::FactorizationFailed {
        reason,
        solution_basis,
    };

    let mut images = Vec::with_capacity(n);
    for x in 0..n {
        let img = t.image_of(x, x)?;
        let diag: Vec<usize> = (0..n).filter(|&z| !img.get(z, z).is_zero()).collect();
        match diag.as_slice() {
            [z] => images.push(*z),
            _ => {
                return Err(failed(
                    format!(
                        "θ(e {0} {0}) does not have exactly one nonzero diagonal entry",
                        poset.name(x)
                    ),
                    Vec::new(),
                ))
            }
        }
    }
    let lambda = PosetInvolution::from_images(images);
    if let Some(why) = lambda.invalidity(poset) {
        return Err(failed(format!("recovered λ is invalid: {why}"), Vec::new()));
    }

    let lam = LinearMap::from_fn(poset, field, |x, y| {
        Ok(lambda_hat_unchecked(&lambda, &Element::basis(poset, field, x, y)?))
    })?;
    let alpha = t.compose(&lam)?;

    let idempotents: Vec<Element> = (0..n)
        .map(|x| Element::basis(poset, field, x, x))
        .collect::<Result<_>>()?;
    let alpha_idem: Vec<Element> = (0..n)
        .map(|x| alpha.image_of(x, x))
        .collect::<Result<_>>()?;

    let mut mu = Element::zero(poset, field);
    for x in 0..n {
        mu = mu.add(&alpha_idem[x].convolve(&idempotents[x])?)?;
    }
    let conjugates = |m: &Element| -> Result<bool> {
        for x in 0..n {
            if m.convolve(&idempotents[x])? != alpha_idem[x].convolve(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if !conjugates(&mu)? || !mu.is_invertible() {
        let basis = conjugator_space(poset, field, &idempotents, &alpha_idem)?;
        return Err(failed(
            "no invertible solution of μ e_xx = α(e_xx) μ".into(),
            basis
                .iter()
                .map(|v| v.iter().map(Scalar::to_string).collect())
                .collect(),
        ));
    }
    if n > 0 {
        mu = mu.scale(&mu.get(0, 0).inv()?)?;
    }
    let mu_inv = mu.invert()?;

    let mut sigma_entries = Vec::with_capacity(poset.dim());
    for &(x, y) in poset.pairs() {
        let conj = mu_inv.convolve(&alpha.image_of(x, y)?)?.convolve(&mu)?;
        let s = conj.get(x, y);
        let expected = Element::basis(poset, field, x, y)?.scale(&s)?;
        if conj != expected {
            return Err(failed(
                format!(
                    "μ⁻¹ α(e {0} {1}) μ is not a multiple of e {0} {1}",
                    poset.name(x),
                    poset.name(y)
                ),
                Vec::new(),
            ));
        }
        sigma_entries.push(((x, y), s));
    }
    let sigma_el = Element::from_entries(poset, field, sigma_entries)?;
    let sigma = MultiplicativeElement::from_element(&sigma_el)
        .map_err(|e| failed(format!("recovered σ: {e}"), Vec::new()))?;

    let spec = InvolutionSpec::new(mu, sigma, lambda)?;
    if spec.matrix() != *t {
        return Err(failed("recomposition differs from the input".into(), Vec::new()));
    }
    Ok(spec)
}

/// Kernel of `m ↦ (m e_xx - α(e_xx) m)_x`, in coordinates.
fn conjugator_space(
    poset: &Arc<Poset>,
    field: Field,
    idempotents: &[Element],
    alpha_idem: &[Element],
) -> Result<Vec<Vec<Scalar>>> {
    let dim = poset.dim();
    let mut columns = Vec::with_capacity(dim);
    for &(u, v) in poset.pairs() {
        let e = Element::basis(poset, field, u, v)?;
        let mut col = Vec::with_capacity(dim * idempotents.len());
        for (idem, aidem) in idempotents.iter().zip(alpha_idem) {
            col.extend(e.convolve(idem)?.sub(&aidem.convolve(&e)?)?.to_coords());
        }
        columns.push(col);
    }
    let rows = dim * idempotents.len();
    Ok(kernel_basis(&Matrix::from_columns(field, rows, &columns)?))
}
