//! K-linear endomorphisms of `I(X, K)` in the basis `{e_xy : x ≤ y}`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::incidence::Element;
use crate::linalg::Matrix;
use crate::poset::Poset;
use crate::scalar::{Field, Scalar};

/// A linear map stored as an `N x N` matrix whose column `j` holds the
/// coordinates of the image of the `j`-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    poset: Arc<Poset>,
    field: Field,
    matrix: Matrix,
}

impl LinearMap {
    /// The unique linear map sending the `j`-th basis element to
    /// `images[j]`.
    pub fn from_images(poset: &Arc<Poset>, field: Field, images: &[Element]) -> Result<Self> {
        let n = poset.dim();
        if images.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: images.len(),
            });
        }
        let mut matrix = Matrix::zeros(field, n, n);
        for (j, img) in images.iter().enumerate() {
            if img.field() != field {
                return Err(Error::FieldMismatch);
            }
            if **img.poset() != **poset {
                return Err(Error::PosetMismatch);
            }
            for (&(x, y), v) in img.entries() {
                let i = poset.pair_index(x, y).expect("element keys are comparable");
                matrix.set(i, j, v.clone());
            }
        }
        Ok(LinearMap {
            poset: Arc::clone(poset),
            field,
            matrix,
        })
    }

    /// Builds the map from a function giving the image of each basis
    /// element `(x, y)`.
    pub fn from_fn<F>(poset: &Arc<Poset>, field: Field, mut image: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<Element>,
    {
        let images = poset
            .pairs()
            .iter()
            .map(|&(x, y)| image(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(poset, field, &images)
    }

    pub fn from_matrix(poset: &Arc<Poset>, matrix: Matrix) -> Result<Self> {
        let n = poset.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        Ok(LinearMap {
            poset: Arc::clone(poset),
            field: matrix.field(),
            matrix,
        })
    }

    /// Inverse of [`LinearMap::to_vec`].
    pub fn from_vec(poset: &Arc<Poset>, field: Field, v: &[Scalar]) -> Result<Self> {
        let n = poset.dim();
        if v.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: v.len(),
            });
        }
        let mut matrix = Matrix::zeros(field, n, n);
        for j in 0..n {
            for i in 0..n {
                matrix.set(i, j, v[j * n + i].clone());
            }
        }
        Ok(LinearMap {
            poset: Arc::clone(poset),
            field,
            matrix,
        })
    }

    pub fn identity(poset: &Arc<Poset>, field: Field) -> Self {
        LinearMap {
            poset: Arc::clone(poset),
            field,
            matrix: Matrix::identity(field, poset.dim()),
        }
    }

    pub fn zero(poset: &Arc<Poset>, field: Field) -> Self {
        LinearMap {
            poset: Arc::clone(poset),
            field,
            matrix: Matrix::zeros(field, poset.dim(), poset.dim()),
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Coordinates flattened column by column: entry `j * N + i` is the
    /// `i`-th coordinate of the image of basis element `j`.
    pub fn to_vec(&self) -> Vec<Scalar> {
        let n = self.dim();
        (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .map(|(i, j)| self.matrix.get(i, j).clone())
            .collect()
    }

    /// Image of the `j`-th basis element.
    pub fn image(&self, j: usize) -> Element {
        Element::from_coords(&self.poset, self.field, &self.matrix.column(j))
            .expect("column length matches the basis")
    }

    pub fn image_of(&self, x: usize, y: usize) -> Result<Element> {
        let j = self.poset.pair_index(x, y).ok_or_else(|| {
            Error::NotComparable(self.poset.name(x).to_string(), self.poset.name(y).to_string())
        })?;
        Ok(self.image(j))
    }

    pub fn apply(&self, f: &Element) -> Result<Element> {
        if f.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if **f.poset() != *self.poset {
            return Err(Error::PosetMismatch);
        }
        let out = self.matrix.mul_vec(&f.to_coords())?;
        Element::from_coords(&self.poset, self.field, &out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        self.check(inner)?;
        Ok(LinearMap {
            poset: Arc::clone(&self.poset),
            field: self.field,
            matrix: self.matrix.mul(&inner.matrix)?,
        })
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check(other)?;
        Ok(LinearMap {
            poset: Arc::clone(&self.poset),
            field: self.field,
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check(other)?;
        Ok(LinearMap {
            poset: Arc::clone(&self.poset),
            field: self.field,
            matrix: self.matrix.sub(&other.matrix)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        let n = self.dim();
        let mut matrix = self.matrix.clone();
        for i in 0..n {
            for j in 0..n {
                let v = matrix.get(i, j) * c;
                matrix.set(i, j, v);
            }
        }
        LinearMap {
            poset: Arc::clone(&self.poset),
            field: self.field,
            matrix,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn check(&self, other: &LinearMap) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.poset != other.poset {
            return Err(Error::PosetMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for LinearMap {
    /// One line per basis element: `e x y -> <element>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, &(x, y)) in self.poset.pairs().iter().enumerate() {
            writeln!(
                f,
                "e {} {} -> {}",
                self.poset.name(x),
                self.poset.name(y),
                self.image(j)
            )?;
        }
        Ok(())
    }
}
