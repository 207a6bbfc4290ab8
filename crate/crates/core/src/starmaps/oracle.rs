//! Solution spaces of the *-derivation and Jordan *-derivation conditions.
//!
//! The unknowns are the `N²` matrix entries of `D`, indexed `j * N + c` for
//! coordinate `c` of `D(e_j)` (the layout of [`LinearMap::to_vec`]). Each
//! basis pair contributes `N` sparse linear equations.

use std::collections::BTreeMap;

use super::BasisTable;
use crate::error::Result;
use crate::involution::InvolutionSpec;
use crate::linalg::RowReducer;
use crate::maps::LinearMap;
use crate::scalar::{Field, Scalar};

struct Equations<'a> {
    field: Field,
    n: usize,
    table: &'a BasisTable,
    /// Sparse images `θ(e_b)`.
    theta: Vec<Vec<(usize, Scalar)>>,
    rows: BTreeMap<usize, Vec<(usize, Scalar)>>,
}

impl<'a> Equations<'a> {
    fn new(theta: &InvolutionSpec, table: &'a BasisTable) -> Self {
        let t = theta.matrix();
        let n = t.dim();
        let theta = (0..n)
            .map(|j| {
                t.matrix()
                    .column(j)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Equations {
            field: t.field(),
            n,
            table,
            theta,
            rows: BTreeMap::new(),
        }
    }

    fn unknown(&self, coord: usize, basis: usize) -> usize {
        basis * self.n + coord
    }

    /// `+ D(e_c)`, if the product index exists.
    fn add_d_of(&mut self, c: Option<usize>, sign: &Scalar) {
        if let Some(c) = c {
            for k in 0..self.n {
                let u = self.unknown(k, c);
                self.rows.entry(k).or_default().push((u, sign.clone()));
            }
        }
    }

    /// `+ sign · D(e_a) θ(e_b)`.
    fn add_d_times_theta(&mut self, a: usize, b: usize, sign: &Scalar) {
        for c in 0..self.n {
            for &(d, k) in self.table.right(c) {
                if let Some((_, t)) = self.theta[b].iter().find(|(i, _)| *i == d) {
                    let u = self.unknown(c, a);
                    let coeff = sign * t;
                    self.rows.entry(k).or_default().push((u, coeff));
                }
            }
        }
    }

    /// `+ sign · e_a D(e_b)`.
    fn add_basis_times_d(&mut self, a: usize, b: usize, sign: &Scalar) {
        for &(c, k) in self.table.right(a) {
            let u = self.unknown(c, b);
            self.rows.entry(k).or_default().push((u, sign.clone()));
        }
    }

    /// The polarized identity for every unordered basis pair.
    fn push_polarized(&mut self, reducer: &mut RowReducer) {
        let one = self.field.one();
        let minus = -&one;
        let table = self.table;
        for a in 0..self.n {
            for b in a..self.n {
                self.add_d_of(table.prod(a, b), &one);
                self.add_d_of(table.prod(b, a), &one);
                self.add_d_times_theta(a, b, &minus);
                self.add_d_times_theta(b, a, &minus);
                self.add_basis_times_d(a, b, &minus);
                self.add_basis_times_d(b, a, &minus);
                self.flush(reducer);
            }
        }
    }

    fn flush(&mut self, reducer: &mut RowReducer) {
        for (_, row) in std::mem::take(&mut self.rows) {
            reducer.push(row);
        }
    }
}

fn basis_from_reducer(theta: &InvolutionSpec, reducer: &RowReducer) -> Result<Vec<LinearMap>> {
    reducer
        .kernel_basis()
        .iter()
        .map(|v| LinearMap::from_vec(theta.poset(), theta.field(), v))
        .collect()
}

/// Basis of the Jordan *-derivations of `θ`: the kernel of the polarized
/// identity over all unordered basis pairs.
pub fn jsd_space_basis(theta: &InvolutionSpec) -> Result<Vec<LinearMap>> {
    let table = BasisTable::new(theta.poset());
    let mut eq = Equations::new(theta, &table);
    let n = eq.n;
    let mut reducer = RowReducer::new(eq.field, n * n);
    eq.push_polarized(&mut reducer);
    basis_from_reducer(theta, &reducer)
}

/// Basis of the *-derivations of `θ`: the kernel of the Leibniz rule over
/// all ordered basis pairs.
pub fn star_derivation_space_basis(theta: &InvolutionSpec) -> Result<Vec<LinearMap>> {
    let table = BasisTable::new(theta.poset());
    let mut eq = Equations::new(theta, &table);
    let n = eq.n;
    let one = eq.field.one();
    let minus = -&one;
    let mut reducer = RowReducer::new(eq.field, n * n);
    for a in 0..n {
        for b in 0..n {
            eq.add_d_of(table.prod(a, b), &one);
            eq.add_d_times_theta(a, b, &minus);
            eq.add_basis_times_d(a, b, &minus);
            eq.flush(&mut reducer);
        }
    }
    basis_from_reducer(theta, &reducer)
}

/// Basis of the Jordan *-derivations of `θ` that vanish on every `e_xx`.
pub fn jordan_vanishing_space_basis(theta: &InvolutionSpec) -> Result<Vec<LinearMap>> {
    let poset = theta.poset();
    let table = BasisTable::new(poset);
    let mut eq = Equations::new(theta, &table);
    let n = eq.n;
    let one = eq.field.one();
    let mut reducer = RowReducer::new(eq.field, n * n);
    for x in 0..poset.len() {
        let j = poset.pair_index(x, x).expect("reflexive");
        for k in 0..n {
            reducer.push([(eq.unknown(k, j), one.clone())]);
        }
    }
    eq.push_polarized(&mut reducer);
    basis_from_reducer(theta, &reducer)
}
