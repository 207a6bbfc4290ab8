//! Finite posets, intervals and order-reversing involutions.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A finite partial order on declared elements.
///
/// Elements are addressed by their declaration index. The comparable pairs
/// `(x, y)` with `x <= y`, sorted lexicographically by index, form the
/// standard basis `{e_xy}` of the incidence algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize)>,
    pair_index: Vec<Option<usize>>,
}

impl Poset {
    /// Builds the poset generated by `cover_pairs` (each `(x, y)` meaning
    /// `x < y`) under reflexive-transitive closure. The stored covers are
    /// the transitive reduction, so redundant input pairs are dropped.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], cover_pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in cover_pairs {
            let lookup = |s: &S| {
                index
                    .get(s.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
            };
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::CycleDetected(names[i].clone(), names[j].clone()));
            }
            leq[i * n + j] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_relation(names, leq)
    }

    /// Builds a poset from a full `n x n` relation matrix (row-major,
    /// `leq[i * n + j]` meaning `i <= j`). The relation must already be a
    /// partial order.
    pub fn from_relation(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        assert_eq!(leq.len(), n * n, "relation matrix has the wrong size");
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(Error::NotPartialOrder(format!(
                    "relation is not reflexive at `{}`",
                    names[i]
                )));
            }
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected(names[i].clone(), names[j].clone()));
                }
                for k in 0..n {
                    if leq[i * n + j] && leq[j * n + k] && !leq[i * n + k] {
                        return Err(Error::NotPartialOrder(format!(
                            "relation is not transitive at `{}`, `{}`, `{}`",
                            names[i], names[j], names[k]
                        )));
                    }
                }
            }
        }

        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && leq[i * n + j]
                    && !(0..n).any(|z| z != i && z != j && leq[i * n + z] && leq[z * n + j])
                {
                    covers.push((i, j));
                }
            }
        }

        let mut pairs = Vec::new();
        let mut pair_index = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if leq[i * n + j] {
                    pair_index[i * n + j] = Some(pairs.len());
                    pairs.push((i, j));
                }
            }
        }

        Ok(Poset {
            names,
            leq,
            covers,
            pairs,
            pair_index,
        })
    }

    /// The chain `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let covers: Vec<(String, String)> = (1..n)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        Self::from_covers(&names, &covers).expect("a chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Cover relations `(x, y)` with `x` covered by `y`, in lexicographic
    /// index order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, x: usize, y: usize) -> bool {
        self.covers.binary_search(&(x, y)).is_ok()
    }

    /// All comparable pairs in basis order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Dimension of the incidence algebra.
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// Basis position of `e_xy`, or `None` when `x` is not below `y`.
    pub fn pair_index(&self, x: usize, y: usize) -> Option<usize> {
        self.pair_index[x * self.len() + y]
    }

    /// Elements `z` with `x <= z <= y`, in declaration order.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        if !self.leq(x, y) {
            return Vec::new();
        }
        (0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect()
    }

    pub fn interval_by_name(&self, x: &str, y: &str) -> Result<Vec<String>> {
        let (x, y) = (self.index_of(x)?, self.index_of(y)?);
        Ok(self
            .interval(x, y)
            .into_iter()
            .map(|z| self.names[z].clone())
            .collect())
    }

    /// Checks that the order relation is reflexive, antisymmetric and
    /// transitive and that `covers` is its transitive reduction.
    pub fn check_invariants(&self) -> bool {
        let n = self.len();
        let mut closure = vec![false; n * n];
        for i in 0..n {
            closure[i * n + i] = true;
        }
        for &(a, b) in &self.covers {
            closure[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if closure[i * n + k] && closure[k * n + j] {
                        closure[i * n + j] = true;
                    }
                }
            }
        }
        Self::from_relation(self.names.clone(), self.leq.clone()).as_ref() == Ok(self)
            && closure == self.leq
    }

    /// All order-reversing involutions of this poset, in lexicographic order
    /// of their image vectors.
    pub fn involutions(&self) -> Vec<PosetInvolution> {
        let n = self.len();
        let mut out = Vec::new();
        let mut images = vec![usize::MAX; n];
        self.extend_involution(0, &mut images, &mut out);
        out.sort_by(|a, b| a.images.cmp(&b.images));
        debug_assert!(out.iter().all(|l| l.images.len() == n));
        out
    }

    fn extend_involution(
        &self,
        start: usize,
        images: &mut Vec<usize>,
        out: &mut Vec<PosetInvolution>,
    ) {
        let n = self.len();
        let Some(x) = (start..n).find(|&i| images[i] == usize::MAX) else {
            let candidate = PosetInvolution {
                images: images.clone(),
            };
            if candidate.is_valid_for(self) {
                out.push(candidate);
            }
            return;
        };
        for y in x..n {
            if images[y] != usize::MAX {
                continue;
            }
            images[x] = y;
            images[y] = x;
            if self.partial_reversal_ok(images) {
                self.extend_involution(x + 1, images, out);
            }
            images[x] = usize::MAX;
            images[y] = usize::MAX;
        }
    }

    fn partial_reversal_ok(&self, images: &[usize]) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if images[a] == usize::MAX || images[b] == usize::MAX {
                    continue;
                }
                if self.lt(a, b) && !self.lt(images[b], images[a]) {
                    return false;
                }
            }
        }
        true
    }

    /// All posets with `n` elements up to isomorphism. Each representative
    /// is naturally labelled `1..=n` (every relation `i < j` has `i`
    /// declared before `j`).
    pub fn enumerate_all(n: usize) -> Vec<Poset> {
        assert!(n <= 7, "poset enumeration is limited to 7 elements");
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << slots.len()) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (bit, &(i, j)) in slots.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    leq[i * n + j] = true;
                }
            }
            if !is_transitive(&leq, n) {
                continue;
            }
            let code = perms
                .iter()
                .map(|p| relation_code(&leq, n, p))
                .min()
                .unwrap_or(0);
            if seen.insert(code) {
                let names = (1..=n).map(|i| i.to_string()).collect();
                out.push(Poset::from_relation(names, leq).expect("transitive and antisymmetric"));
            }
        }
        out
    }
}

fn is_transitive(leq: &[bool], n: usize) -> bool {
    (0..n).all(|i| {
        (0..n).all(|j| !leq[i * n + j] || (0..n).all(|k| !leq[j * n + k] || leq[i * n + k]))
    })
}

fn relation_code(leq: &[bool], n: usize, perm: &[usize]) -> u64 {
    let mut code = 0u64;
    for i in 0..n {
        for j in 0..n {
            if leq[i * n + j] {
                code |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    code
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// An order-reversing involution `λ` of a poset, stored as an image vector
/// over declaration indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetInvolution {
    images: Vec<usize>,
}

impl PosetInvolution {
    pub fn identity(n: usize) -> Self {
        PosetInvolution {
            images: (0..n).collect(),
        }
    }

    /// Wraps a raw image vector without validating it.
    pub fn from_images(images: Vec<usize>) -> Self {
        PosetInvolution { images }
    }

    /// Builds `λ` from swapped name pairs; elements not mentioned are fixed.
    pub fn from_swaps<S: AsRef<str>>(poset: &Poset, swaps: &[(S, S)]) -> Result<Self> {
        let n = poset.len();
        let mut images: Vec<Option<usize>> = vec![None; n];
        for (a, b) in swaps {
            let (x, y) = (poset.index_of(a.as_ref())?, poset.index_of(b.as_ref())?);
            for (u, v) in [(x, y), (y, x)] {
                match images[u] {
                    Some(w) if w != v => {
                        return Err(Error::InvalidInvolution(format!(
                            "`{}` is mapped to both `{}` and `{}`",
                            poset.name(u),
                            poset.name(w),
                            poset.name(v)
                        )))
                    }
                    _ => images[u] = Some(v),
                }
            }
        }
        Ok(PosetInvolution {
            images: images
                .iter()
                .enumerate()
                .map(|(i, im)| im.unwrap_or(i))
                .collect(),
        })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// True iff `λ` is a bijection of the poset with `λ² = id` that reverses
    /// every strict relation.
    pub fn is_valid_for(&self, poset: &Poset) -> bool {
        self.invalidity(poset).is_none()
    }

    /// Explains why `λ` is not a valid involution of `poset`.
    pub fn invalidity(&self, poset: &Poset) -> Option<String> {
        let n = poset.len();
        if self.images.len() != n {
            return Some(format!("map has {} images for {} elements", self.images.len(), n));
        }
        if let Some(&bad) = self.images.iter().find(|&&i| i >= n) {
            return Some(format!("image index {bad} is out of range"));
        }
        for x in 0..n {
            if self.images[self.images[x]] != x {
                return Some(format!("λ(λ({})) ≠ {}", poset.name(x), poset.name(x)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if poset.lt(x, y) && !poset.lt(self.images[y], self.images[x]) {
                    return Some(format!(
                        "{} < {} but λ does not reverse it",
                        poset.name(x),
                        poset.name(y)
                    ));
                }
            }
        }
        None
    }

    /// Name pairs `(x, λ(x))` for `x` up to its image, fixed points included.
    pub fn swaps<'a>(&self, poset: &'a Poset) -> Vec<(&'a str, &'a str)> {
        (0..self.images.len())
            .filter(|&x| x <= self.images[x])
            .map(|x| (poset.name(x), poset.name(self.images[x])))
            .collect()
    }
}
