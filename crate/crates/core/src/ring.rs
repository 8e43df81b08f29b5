//! Product rings E^f and E^m with the shift Frobenius, plus 2x2 matrices
//! over them.
//!
//! E^f carries phi acting by the cyclic left shift
//! phi(x_0,...,x_{f-1}) = (x_1,...,x_{f-1},x_0); E^m (m = ef) is indexed by
//! embeddings s = f*i + j and carries the replication map from E^f.  VecF and
//! VecM are kept as distinct types on purpose: mixing the two index ranges is
//! the classic source of silent bugs here.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

// ---------------------------------------------------------------------------
// generic coordinate vectors
// ---------------------------------------------------------------------------

macro_rules! coord_vec {
    ($name:ident) => {
        #[derive(Clone, PartialEq, Eq)]
        pub struct $name {
            entries: Vec<FieldElement>,
        }

        impl $name {
            pub fn new(entries: Vec<FieldElement>) -> Result<$name> {
                if entries.is_empty() {
                    return Err(Error::BadInput("empty coordinate vector".into()));
                }
                let spec = entries[0].spec().clone();
                if entries.iter().any(|e| **e.spec() != *spec) {
                    return Err(Error::SpecMismatch("mixed field specs in vector".into()));
                }
                Ok($name { entries })
            }

            pub fn constant(spec: &Arc<FieldSpec>, len: usize, value: &FieldElement) -> $name {
                $name { entries: vec![value.clone(); len.max(1)] }
                    .tap_check_spec(spec)
            }

            fn tap_check_spec(self, _spec: &Arc<FieldSpec>) -> Self {
                self
            }

            pub fn ones(spec: &Arc<FieldSpec>, len: usize) -> $name {
                $name { entries: vec![FieldElement::one(spec); len] }
            }

            pub fn zeros(spec: &Arc<FieldSpec>, len: usize) -> $name {
                $name { entries: vec![FieldElement::zero(spec); len] }
            }

            pub fn len(&self) -> usize {
                self.entries.len()
            }

            pub fn is_empty(&self) -> bool {
                self.entries.is_empty()
            }

            pub fn get(&self, i: usize) -> &FieldElement {
                &self.entries[i]
            }

            pub fn set(&mut self, i: usize, v: FieldElement) {
                self.entries[i] = v;
            }

            pub fn entries(&self) -> &[FieldElement] {
                &self.entries
            }

            pub fn spec(&self) -> &Arc<FieldSpec> {
                self.entries[0].spec()
            }

            pub fn add(&self, o: &$name) -> $name {
                assert_eq!(self.len(), o.len());
                $name {
                    entries: self
                        .entries
                        .iter()
                        .zip(&o.entries)
                        .map(|(a, b)| a.add(b))
                        .collect(),
                }
            }

            pub fn sub(&self, o: &$name) -> $name {
                assert_eq!(self.len(), o.len());
                $name {
                    entries: self
                        .entries
                        .iter()
                        .zip(&o.entries)
                        .map(|(a, b)| a.sub(b))
                        .collect(),
                }
            }

            pub fn mul(&self, o: &$name) -> $name {
                assert_eq!(self.len(), o.len());
                $name {
                    entries: self
                        .entries
                        .iter()
                        .zip(&o.entries)
                        .map(|(a, b)| a.mul(b))
                        .collect(),
                }
            }

            pub fn scale(&self, c: &FieldElement) -> $name {
                $name { entries: self.entries.iter().map(|a| a.mul(c)).collect() }
            }

            pub fn neg(&self) -> $name {
                $name { entries: self.entries.iter().map(|a| a.neg()).collect() }
            }

            pub fn is_zero(&self) -> bool {
                self.entries.iter().all(|a| a.is_zero())
            }

            /// Every coordinate nonzero, i.e. a unit of the product ring.
            pub fn is_unit(&self) -> bool {
                self.entries.iter().all(|a| !a.is_zero())
            }

            pub fn invert(&self) -> Result<$name> {
                let entries: Result<Vec<_>> =
                    self.entries.iter().map(|a| a.inv()).collect();
                Ok($name { entries: entries? })
            }

            /// Coordinates with nonzero entry.
            pub fn support(&self) -> IndexSet {
                IndexSet {
                    universe: self.len(),
                    set: self
                        .entries
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| !a.is_zero())
                        .map(|(i, _)| i)
                        .collect(),
                }
            }

            /// Product of all coordinates.
            pub fn product(&self) -> FieldElement {
                let mut acc = FieldElement::one(self.spec());
                for a in &self.entries {
                    acc = acc.mul(a);
                }
                acc
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(fm, "(")?;
                for (i, a) in self.entries.iter().enumerate() {
                    if i > 0 {
                        write!(fm, ", ")?;
                    }
                    write!(fm, "{a}")?;
                }
                write!(fm, ")")
            }
        }
    };
}

coord_vec!(VecF);
coord_vec!(VecM);

impl VecF {
    /// phi^k, the cyclic left shift by k: coordinate i of the result is
    /// coordinate i+k of the input.
    pub fn phi_shift(&self, k: i64) -> VecF {
        let f = self.len() as i64;
        let k = ((k % f) + f) % f;
        let entries = (0..self.len())
            .map(|i| self.entries[(i + k as usize) % self.len()].clone())
            .collect();
        VecF { entries }
    }

    /// Nm_phi(x) = prod_i phi^i(x); all coordinates equal the product of the
    /// entries.
    pub fn nm_phi(&self) -> VecF {
        let p = self.product();
        VecF { entries: vec![p; self.len()] }
    }

    /// Tr_phi(x) = sum_i phi^i(x); all coordinates equal the sum of the
    /// entries.
    pub fn tr_phi(&self) -> VecF {
        let mut s = FieldElement::zero(self.spec());
        for a in &self.entries {
            s = s.add(a);
        }
        VecF { entries: vec![s; self.len()] }
    }

    /// Replicate e copies: coordinate f*i + j of the result is coordinate j.
    pub fn tensor_e(&self, e: usize) -> VecM {
        let f = self.len();
        let mut entries = Vec::with_capacity(e * f);
        for _ in 0..e {
            for j in 0..f {
                entries.push(self.entries[j].clone());
            }
        }
        VecM { entries }
    }
}

/// Solutions of the twisted equation alpha * gamma = beta * phi(gamma).
#[derive(Clone, Debug)]
pub enum TwistedSolution {
    /// Only gamma = 0 solves the equation.
    OnlyZero,
    /// The solution set is the line through this generator, which has
    /// first coordinate 1 (in particular it is a unit vector).
    Line(VecF),
}

/// Solve alpha*gamma = beta*phi(gamma) for unit vectors alpha, beta.
/// A nonzero solution exists iff Nm_phi(alpha) = Nm_phi(beta); then the
/// solution space is the E-line through
/// (1, a0/b0, a0 a1/(b0 b1), ..., a0...a_{f-2}/(b0...b_{f-2})).
pub fn solve_twisted(alpha: &VecF, beta: &VecF) -> Result<TwistedSolution> {
    if alpha.len() != beta.len() {
        return Err(Error::BadInput("twisted equation with mismatched lengths".into()));
    }
    if !alpha.is_unit() || !beta.is_unit() {
        return Err(Error::BadInput("twisted equation requires unit vectors".into()));
    }
    if alpha.nm_phi() != beta.nm_phi() {
        return Ok(TwistedSolution::OnlyZero);
    }
    let f = alpha.len();
    let spec = alpha.spec();
    let mut entries = Vec::with_capacity(f);
    let mut acc = FieldElement::one(spec);
    entries.push(acc.clone());
    for i in 0..f.saturating_sub(1) {
        acc = acc.mul(alpha.get(i)).div(beta.get(i))?;
        entries.push(acc.clone());
    }
    let gamma = VecF { entries };
    debug_assert!(alpha.mul(&gamma) == beta.mul(&gamma.phi_shift(1)));
    Ok(TwistedSolution::Line(gamma))
}

// ---------------------------------------------------------------------------
// index sets and idempotents
// ---------------------------------------------------------------------------

/// A subset of {0,...,n-1} with its ambient size; stands for the idempotent
/// f_J of the product ring.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexSet {
    universe: usize,
    set: BTreeSet<usize>,
}

impl IndexSet {
    pub fn new(universe: usize, indices: impl IntoIterator<Item = usize>) -> Result<IndexSet> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.iter().any(|&i| i >= universe) {
            return Err(Error::BadInput("index out of range in index set".into()));
        }
        Ok(IndexSet { universe, set })
    }

    pub fn empty(universe: usize) -> IndexSet {
        IndexSet { universe, set: BTreeSet::new() }
    }

    pub fn full(universe: usize) -> IndexSet {
        IndexSet { universe, set: (0..universe).collect() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.set.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.set.iter().copied()
    }

    pub fn intersect(&self, o: &IndexSet) -> IndexSet {
        assert_eq!(self.universe, o.universe);
        IndexSet { universe: self.universe, set: self.set.intersection(&o.set).copied().collect() }
    }

    pub fn union(&self, o: &IndexSet) -> IndexSet {
        assert_eq!(self.universe, o.universe);
        IndexSet { universe: self.universe, set: self.set.union(&o.set).copied().collect() }
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            universe: self.universe,
            set: (0..self.universe).filter(|i| !self.set.contains(i)).collect(),
        }
    }

    pub fn is_subset(&self, o: &IndexSet) -> bool {
        self.set.is_subset(&o.set)
    }

    /// Image under a permutation given as the vector perm with i -> perm[i].
    pub fn image(&self, perm: &[usize]) -> IndexSet {
        IndexSet { universe: self.universe, set: self.set.iter().map(|&i| perm[i]).collect() }
    }

    /// The idempotent f_J as a 0/1 vector of length `universe` in E^m.
    pub fn idempotent_m(&self, spec: &Arc<FieldSpec>) -> VecM {
        let mut v = VecM::zeros(spec, self.universe);
        for i in self.iter() {
            v.set(i, FieldElement::one(spec));
        }
        v
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{{")?;
        for (k, i) in self.set.iter().enumerate() {
            if k > 0 {
                write!(fm, ",")?;
            }
            write!(fm, "{i}")?;
        }
        write!(fm, "}}/{}", self.universe)
    }
}

// ---------------------------------------------------------------------------
// 2x2 matrices over E (single coordinate) and over E^f
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2E {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2E {
    pub fn identity(spec: &Arc<FieldSpec>) -> Mat2E {
        Mat2E {
            a: FieldElement::one(spec),
            b: FieldElement::zero(spec),
            c: FieldElement::zero(spec),
            d: FieldElement::one(spec),
        }
    }

    pub fn mul(&self, o: &Mat2E) -> Mat2E {
        Mat2E {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn det(&self) -> FieldElement {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn trace(&self) -> FieldElement {
        self.a.add(&self.d)
    }

    pub fn inv(&self) -> Result<Mat2E> {
        let det = self.det();
        let di = det.inv().map_err(|_| Error::BadInput("singular 2x2 matrix".into()))?;
        Ok(Mat2E {
            a: self.d.mul(&di),
            b: self.b.neg().mul(&di),
            c: self.c.neg().mul(&di),
            d: self.a.mul(&di),
        })
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Apply to a column vector.
    pub fn apply(&self, x: &FieldElement, y: &FieldElement) -> (FieldElement, FieldElement) {
        (self.a.mul(x).add(&self.b.mul(y)), self.c.mul(x).add(&self.d.mul(y)))
    }
}

/// 2x2 matrix with entries in E^f, i.e. f coordinate blocks in M_2(E).
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2F {
    pub a: VecF,
    pub b: VecF,
    pub c: VecF,
    pub d: VecF,
}

impl Mat2F {
    pub fn new(a: VecF, b: VecF, c: VecF, d: VecF) -> Result<Mat2F> {
        let f = a.len();
        if b.len() != f || c.len() != f || d.len() != f {
            return Err(Error::BadInput("matrix entries of different lengths".into()));
        }
        Ok(Mat2F { a, b, c, d })
    }

    pub fn identity(spec: &Arc<FieldSpec>, f: usize) -> Mat2F {
        Mat2F {
            a: VecF::ones(spec, f),
            b: VecF::zeros(spec, f),
            c: VecF::zeros(spec, f),
            d: VecF::ones(spec, f),
        }
    }

    pub fn zero(spec: &Arc<FieldSpec>, f: usize) -> Mat2F {
        Mat2F {
            a: VecF::zeros(spec, f),
            b: VecF::zeros(spec, f),
            c: VecF::zeros(spec, f),
            d: VecF::zeros(spec, f),
        }
    }

    pub fn diag(a: VecF, d: VecF) -> Mat2F {
        let spec = a.spec().clone();
        let f = a.len();
        Mat2F { a, b: VecF::zeros(&spec, f), c: VecF::zeros(&spec, f), d }
    }

    pub fn f(&self) -> usize {
        self.a.len()
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.a.spec()
    }

    pub fn coord(&self, i: usize) -> Mat2E {
        Mat2E {
            a: self.a.get(i).clone(),
            b: self.b.get(i).clone(),
            c: self.c.get(i).clone(),
            d: self.d.get(i).clone(),
        }
    }

    pub fn from_coords(spec: &Arc<FieldSpec>, blocks: &[Mat2E]) -> Mat2F {
        let get = |sel: fn(&Mat2E) -> &FieldElement| VecF::new(
            blocks.iter().map(|m| sel(m).clone()).collect(),
        )
        .expect("nonempty");
        let _ = spec;
        Mat2F { a: get(|m| &m.a), b: get(|m| &m.b), c: get(|m| &m.c), d: get(|m| &m.d) }
    }

    pub fn mul(&self, o: &Mat2F) -> Mat2F {
        Mat2F {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn add(&self, o: &Mat2F) -> Mat2F {
        Mat2F {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
            c: self.c.add(&o.c),
            d: self.d.add(&o.d),
        }
    }

    pub fn scale(&self, s: &FieldElement) -> Mat2F {
        Mat2F {
            a: self.a.scale(s),
            b: self.b.scale(s),
            c: self.c.scale(s),
            d: self.d.scale(s),
        }
    }

    pub fn phi(&self) -> Mat2F {
        Mat2F {
            a: self.a.phi_shift(1),
            b: self.b.phi_shift(1),
            c: self.c.phi_shift(1),
            d: self.d.phi_shift(1),
        }
    }

    pub fn det(&self) -> VecF {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_unit()
    }

    pub fn inv(&self) -> Result<Mat2F> {
        let det = self.det();
        if !det.is_unit() {
            return Err(Error::BadInput("matrix has non-unit determinant".into()));
        }
        let di = det.invert()?;
        Ok(Mat2F {
            a: self.d.mul(&di),
            b: self.b.neg().mul(&di),
            c: self.c.neg().mul(&di),
            d: self.a.mul(&di),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Nm_phi(M) = M phi(M) ... phi^{f-1}(M), the matrix of phi^f.
    pub fn nm_phi(&self) -> Mat2F {
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 1..self.f() {
            cur = cur.phi();
            acc = acc.mul(&cur);
        }
        acc
    }
}

impl fmt::Debug for Mat2F {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "[[{:?}, {:?}], [{:?}, {:?}]]", self.a, self.b, self.c, self.d)
    }
}

/// The base change new = P * M * phi(P)^{-1}.
pub fn change_basis(m: &Mat2F, p: &Mat2F) -> Result<Mat2F> {
    Ok(p.mul(m).mul(&p.phi().inv()?))
}
