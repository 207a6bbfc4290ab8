//! Elements of the incidence algebra `I(X, K)` of a finite poset.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::scalar::{Field, Scalar};

/// A function on comparable pairs of a poset, stored sparsely. Keys are
/// `(x, y)` index pairs with `x <= y`; zero coefficients are never stored, so
/// equality of representations is equality of elements.
#[derive(Clone, Debug)]
pub struct Element {
    poset: Arc<Poset>,
    field: Field,
    coeffs: BTreeMap<(usize, usize), Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && (Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset)
            && self.coeffs == other.coeffs
    }
}

impl Eq for Element {}

impl Element {
    pub fn zero(poset: &Arc<Poset>, field: Field) -> Self {
        Element {
            poset: Arc::clone(poset),
            field,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit `δ`.
    pub fn delta(poset: &Arc<Poset>, field: Field) -> Self {
        let mut e = Self::zero(poset, field);
        for x in 0..poset.len() {
            e.coeffs.insert((x, x), field.one());
        }
        e
    }

    /// The zeta function: 1 on every comparable pair.
    pub fn zeta(poset: &Arc<Poset>, field: Field) -> Self {
        let mut e = Self::zero(poset, field);
        for &p in poset.pairs() {
            e.coeffs.insert(p, field.one());
        }
        e
    }

    /// The basis element `e_xy`.
    pub fn basis(poset: &Arc<Poset>, field: Field, x: usize, y: usize) -> Result<Self> {
        Self::from_entries(poset, field, [((x, y), field.one())])
    }

    pub fn basis_by_name(poset: &Arc<Poset>, field: Field, x: &str, y: &str) -> Result<Self> {
        Self::basis(poset, field, poset.index_of(x)?, poset.index_of(y)?)
    }

    /// Builds an element from `(x, y) -> value` entries. Repeated keys are
    /// summed; entries on incomparable pairs are rejected.
    pub fn from_entries<I>(poset: &Arc<Poset>, field: Field, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Scalar)>,
    {
        let mut e = Self::zero(poset, field);
        for ((x, y), v) in entries {
            if x >= poset.len() || y >= poset.len() {
                return Err(Error::UnknownElement(format!("#{}", x.max(y))));
            }
            if !poset.leq(x, y) {
                return Err(Error::NotComparable(
                    poset.name(x).to_string(),
                    poset.name(y).to_string(),
                ));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch);
            }
            e.accumulate((x, y), &v);
        }
        Ok(e)
    }

    /// Builds an element from coordinates in the basis order of the poset.
    pub fn from_coords(poset: &Arc<Poset>, field: Field, coords: &[Scalar]) -> Result<Self> {
        if coords.len() != poset.dim() {
            return Err(Error::DimensionMismatch {
                expected: poset.dim(),
                found: coords.len(),
            });
        }
        let mut e = Self::zero(poset, field);
        for (&pair, v) in poset.pairs().iter().zip(coords) {
            if !v.is_zero() {
                e.coeffs.insert(pair, v.clone());
            }
        }
        Ok(e)
    }

    pub fn to_coords(&self) -> Vec<Scalar> {
        self.poset.pairs().iter().map(|&(x, y)| self.get(x, y)).collect()
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, x: usize, y: usize) -> Scalar {
        self.coeffs
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn accumulate(&mut self, key: (usize, usize), v: &Scalar) {
        if v.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&key) {
            Some(cur) => {
                let sum = &*cur + v;
                if sum.is_zero() {
                    self.coeffs.remove(&key);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.coeffs.insert(key, v.clone());
            }
        }
    }

    fn check_compatible(&self, other: &Element) -> Result<()> {
        if !(Arc::ptr_eq(&self.poset, &other.poset) || self.poset == other.poset) {
            return Err(Error::PosetMismatch);
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&k, v) in &other.coeffs {
            out.accumulate(k, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            poset: Arc::clone(&self.poset),
            field: self.field,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, -v)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Element> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut out = Self::zero(&self.poset, self.field);
        if c.is_zero() {
            return Ok(out);
        }
        out.coeffs = self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect();
        Ok(out)
    }

    /// The convolution product `(fg)(x, y) = Σ_{x ≤ z ≤ y} f(x, z) g(z, y)`.
    pub fn convolve(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.poset, self.field);
        for (&(x, z), a) in &self.coeffs {
            for (&(_, y), b) in other.coeffs.range((z, 0)..(z + 1, 0)) {
                out.accumulate((x, y), &(a * b));
            }
        }
        Ok(out)
    }

    /// The entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.poset, self.field);
        for (k, a) in &self.coeffs {
            if let Some(b) = other.coeffs.get(k) {
                out.coeffs.insert(*k, a * b);
            }
        }
        Ok(out)
    }

    /// The convolution inverse, defined exactly when every diagonal entry is
    /// nonzero. Off-diagonal entries are solved by recursion on interval
    /// size: `g(x, y) = -f(x, x)⁻¹ Σ_{x < z ≤ y} f(x, z) g(z, y)`.
    pub fn invert(&self) -> Result<Element> {
        let poset = &self.poset;
        let n = poset.len();
        let mut diag_inv = Vec::with_capacity(n);
        for x in 0..n {
            let d = self.get(x, x);
            if d.is_zero() {
                return Err(Error::NotInvertible(poset.name(x).to_string()));
            }
            diag_inv.push(d.inv()?);
        }
        let mut order: Vec<(usize, usize)> = poset.pairs().to_vec();
        order.sort_by_key(|&(x, y)| poset.interval(x, y).len());
        let mut g = Self::zero(poset, self.field);
        for (x, y) in order {
            if x == y {
                g.coeffs.insert((x, x), diag_inv[x].clone());
                continue;
            }
            let mut acc = self.field.zero();
            for z in poset.interval(x, y) {
                if z == x {
                    continue;
                }
                let (a, b) = (self.get(x, z), g.get(z, y));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(&a * &b);
                }
            }
            let v = -(&acc * &diag_inv[x]);
            if !v.is_zero() {
                g.coeffs.insert((x, y), v);
            }
        }
        Ok(g)
    }

    pub fn is_invertible(&self) -> bool {
        (0..self.poset.len()).all(|x| !self.get(x, x).is_zero())
    }
}

impl fmt::Display for Element {
    /// Semicolon-separated `x y value` entries; `0` for the zero element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(x, y), v) in &self.coeffs {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{} {} {}", self.poset.name(x), self.poset.name(y), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<Poset> {
        Arc::new(Poset::chain(2))
    }

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn delta_and_basis() {
        let p = c2();
        let f = Field::Rationals;
        let d = Element::delta(&p, f);
        assert_eq!(d.entries().map(|(k, _)| *k).collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);
        let e12 = Element::basis(&p, f, 0, 1).unwrap();
        assert_eq!(e12.get(0, 1), q(1));
        assert!(matches!(Element::basis(&p, f, 1, 0), Err(Error::NotComparable(..))));
        let e11 = Element::basis(&p, f, 0, 0).unwrap();
        let e22 = Element::basis(&p, f, 1, 1).unwrap();
        assert_eq!(e11.add(&e22).unwrap(), d);
        let single = Arc::new(Poset::chain(1));
        assert_eq!(Element::delta(&single, f).to_coords(), vec![q(1)]);
    }

    #[test]
    fn add_and_scale() {
        let p = c2();
        let f = Element::from_coords(&p, Field::Rationals, &[q(1), q(2), q(3)]).unwrap();
        assert!(f.scale(&q(0)).unwrap().is_zero());
        assert!(f.add(&f.scale(&q(-1)).unwrap()).unwrap().is_zero());
        let g = Element::delta(&p, Field::prime(3).unwrap());
        assert_eq!(f.add(&g), Err(Error::FieldMismatch));
        let other = Element::delta(&Arc::new(Poset::chain(3)), Field::Rationals);
        assert_eq!(f.add(&other), Err(Error::PosetMismatch));
    }

    #[test]
    fn basis_products() {
        let p = c2();
        let f = Field::Rationals;
        let e = |x, y| Element::basis(&p, f, x, y).unwrap();
        assert_eq!(e(0, 1).convolve(&e(1, 1)).unwrap(), e(0, 1));
        assert!(e(0, 1).convolve(&e(0, 0)).unwrap().is_zero());
        assert_ne!(e(0, 1).convolve(&e(1, 1)).unwrap(), e(1, 1).convolve(&e(0, 1)).unwrap());
    }

    #[test]
    fn zeta_squared_counts_intervals() {
        let p = Arc::new(Poset::chain(3));
        let z = Element::zeta(&p, Field::Rationals);
        let zz = z.convolve(&z).unwrap();
        assert_eq!(zz.get(0, 2), q(p.interval(0, 2).len() as i64));
        assert_eq!(zz.get(0, 2), q(3));
    }

    #[test]
    fn hadamard_basics() {
        let p = c2();
        let f = Element::from_coords(&p, Field::Rationals, &[q(4), q(-2), q(7)]).unwrap();
        let z = Element::zeta(&p, Field::Rationals);
        assert_eq!(z.hadamard(&f).unwrap(), f);
        let e12 = Element::basis(&p, Field::Rationals, 0, 1).unwrap();
        let e11 = Element::basis(&p, Field::Rationals, 0, 0).unwrap();
        assert!(e12.hadamard(&e11).unwrap().is_zero());
    }

    #[test]
    fn inverses() {
        let p = c2();
        let f = Field::Rationals;
        let d = Element::delta(&p, f);
        assert_eq!(d.invert().unwrap(), d);
        let e12 = Element::basis(&p, f, 0, 1).unwrap();
        let m = d.add(&e12).unwrap();
        let expected = d.sub(&e12).unwrap();
        assert_eq!(m.convolve(&expected).unwrap(), d);
        assert_eq!(m.invert().unwrap(), expected);
        assert_eq!(e12.invert(), Err(Error::NotInvertible("1".into())));
    }

    #[test]
    fn display() {
        let p = c2();
        let d = Element::delta(&p, Field::Rationals);
        assert_eq!(d.to_string(), "1 1 1; 2 2 1");
        assert_eq!(Element::zero(&p, Field::Rationals).to_string(), "0");
    }
}
