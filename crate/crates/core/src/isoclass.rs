//! Deciding isomorphism of rank two filtered modules, cheap isomorphism
//! invariants, and the crystalline family of Frobenius-twisted diagonal
//! modules with its closed-form pairwise criterion.
//!
//! An isomorphism D_1 -> D_2 is an invertible Q over E^f with
//!   Frob_2 phi(Q) = Q Frob_1,   N_2 Q = Q N_1,
//!   [g]_2 (g Q) = Q [g]_1 for all g,
//! carrying the filtration line of D_1 to that of D_2 at every embedding
//! with positive weight.  The Frobenius relation determines every block of
//! Q from its coordinate-0 block, so the search space is 4-dimensional over
//! E: we collect all the remaining compatibilities as a homogeneous linear
//! system, compute its nullspace, and look for an invertible member.

use std::sync::Arc;

use crate::descent::GaloisActionData;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::filtration::{FilteredModule, FiltrationData, FrobForm, WeightData};
use crate::phimod::FClass;
use crate::ring::{Mat2E, Mat2F, VecF, VecM};

// ---------------------------------------------------------------------------
// linear forms in the four unknown entries of the coordinate-0 block
// ---------------------------------------------------------------------------

const NQ: usize = 4;

#[derive(Debug, Clone)]
struct LinForm {
    coeff: Vec<FieldElement>,
}

impl LinForm {
    fn zero(spec: &Arc<FieldSpec>) -> LinForm {
        LinForm { coeff: vec![FieldElement::zero(spec); NQ] }
    }

    fn unknown(spec: &Arc<FieldSpec>, i: usize) -> LinForm {
        let mut l = LinForm::zero(spec);
        l.coeff[i] = FieldElement::one(spec);
        l
    }

    fn add(&self, o: &LinForm) -> LinForm {
        LinForm {
            coeff: self.coeff.iter().zip(&o.coeff).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn sub(&self, o: &LinForm) -> LinForm {
        LinForm {
            coeff: self.coeff.iter().zip(&o.coeff).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    fn scale(&self, c: &FieldElement) -> LinForm {
        LinForm { coeff: self.coeff.iter().map(|a| a.mul(c)).collect() }
    }

    fn is_zero(&self) -> bool {
        self.coeff.iter().all(|c| c.is_zero())
    }
}

/// 2x2 matrix of linear forms: one coordinate block of Q as a function of
/// the coordinate-0 block.
#[derive(Debug, Clone)]
struct LinMat {
    a: LinForm,
    b: LinForm,
    c: LinForm,
    d: LinForm,
}

impl LinMat {
    fn unknowns(spec: &Arc<FieldSpec>) -> LinMat {
        LinMat {
            a: LinForm::unknown(spec, 0),
            b: LinForm::unknown(spec, 1),
            c: LinForm::unknown(spec, 2),
            d: LinForm::unknown(spec, 3),
        }
    }

    fn left_mul(m: &Mat2E, q: &LinMat) -> LinMat {
        LinMat {
            a: q.a.scale(&m.a).add(&q.c.scale(&m.b)),
            b: q.b.scale(&m.a).add(&q.d.scale(&m.b)),
            c: q.a.scale(&m.c).add(&q.c.scale(&m.d)),
            d: q.b.scale(&m.c).add(&q.d.scale(&m.d)),
        }
    }

    fn right_mul(q: &LinMat, m: &Mat2E) -> LinMat {
        LinMat {
            a: q.a.scale(&m.a).add(&q.b.scale(&m.c)),
            b: q.a.scale(&m.b).add(&q.b.scale(&m.d)),
            c: q.c.scale(&m.a).add(&q.d.scale(&m.c)),
            d: q.c.scale(&m.b).add(&q.d.scale(&m.d)),
        }
    }

    fn sub(&self, o: &LinMat) -> LinMat {
        LinMat {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
            c: self.c.sub(&o.c),
            d: self.d.sub(&o.d),
        }
    }

    /// Apply to a column vector of constants, giving two linear forms.
    fn apply(&self, x: &FieldElement, y: &FieldElement) -> (LinForm, LinForm) {
        (
            self.a.scale(x).add(&self.b.scale(y)),
            self.c.scale(x).add(&self.d.scale(y)),
        )
    }

    fn rows(&self) -> Vec<LinForm> {
        vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

/// Nullspace of a homogeneous system over E by Gaussian elimination.
fn nullspace(spec: &Arc<FieldSpec>, rows: Vec<LinForm>) -> Result<Vec<Vec<FieldElement>>> {
    let mut mat: Vec<Vec<FieldElement>> = rows
        .into_iter()
        .filter(|r| !r.is_zero())
        .map(|r| r.coeff)
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; NQ];
    let mut rank = 0usize;
    for col in 0..NQ {
        let Some(pr) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pr);
        let inv = mat[rank][col].inv()?;
        for c in 0..NQ {
            mat[rank][c] = mat[rank][c].mul(&inv);
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][col].is_zero() {
                let fac = mat[r][col].clone();
                for c in 0..NQ {
                    let sub = mat[rank][c].mul(&fac);
                    mat[r][c] = mat[r][c].sub(&sub);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..NQ {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![FieldElement::zero(spec); NQ];
        v[free] = FieldElement::one(spec);
        for col in 0..NQ {
            if let Some(pr) = pivot_of_col[col] {
                v[col] = mat[pr][free].neg();
            }
        }
        basis.push(v);
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// building and verifying intertwiners
// ---------------------------------------------------------------------------

/// Rebuild the full matrix over E^f from a concrete coordinate-0 block via
/// Q_{j+1} = M2_j^{-1} Q_j M1_j.
fn assemble(frob1: &Mat2F, frob2: &Mat2F, q0: &Mat2E) -> Result<Mat2F> {
    let f = frob1.f();
    let mut blocks = Vec::with_capacity(f);
    let mut cur = q0.clone();
    for j in 0..f {
        blocks.push(cur.clone());
        if j + 1 < f {
            cur = frob2.coord(j).inv()?.mul(&cur).mul(&frob1.coord(j));
        }
    }
    Ok(Mat2F::from_coords(frob1.spec(), &blocks))
}

/// Check every compatibility of a claimed isomorphism Q : D1 -> D2.
pub fn verify_iso(d1: &FilteredModule, d2: &FilteredModule, q: &Mat2F) -> Result<bool> {
    if d1.grp != d2.grp || d1.filt.weights != d2.filt.weights {
        return Ok(false);
    }
    if !q.is_invertible() {
        return Ok(false);
    }
    let f1 = d1.frob.matrix();
    let f2 = d2.frob.matrix();
    if f2.mul(&q.phi()) != q.mul(&f1) {
        return Ok(false);
    }
    let n1 = d1.monodromy_matrix();
    let n2 = d2.monodromy_matrix();
    if n2.mul(q) != q.mul(&n1) {
        return Ok(false);
    }
    let spec = d1.spec();
    let f = d1.grp.ext.f;
    for g in d1.grp.elements() {
        let lhs = d2
            .action
            .matrix(g, &spec, f)
            .mul(&crate::descent::g_act_mat(&d1.grp, g, q));
        let rhs = q.mul(&d1.action.matrix(g, &spec, f));
        if lhs != rhs {
            return Ok(false);
        }
    }
    for s in d1.filt.weights.i0_plus().iter() {
        let j = s % f;
        let (wx, wy) = q.coord(j).apply(d1.filt.x.get(s), d1.filt.y.get(s));
        let cross = wx.mul(d2.filt.y.get(s)).sub(&wy.mul(d2.filt.x.get(s)));
        if !cross.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decide whether D1 and D2 are isomorphic; on success returns a verified
/// isomorphism matrix.
pub fn decide_isomorphic(d1: &FilteredModule, d2: &FilteredModule) -> Result<Option<Mat2F>> {
    if d1.grp != d2.grp {
        return Err(Error::SpecMismatch("modules over different descent groups".into()));
    }
    if *d1.spec() != *d2.spec() {
        return Err(Error::SpecMismatch("modules over different coefficient fields".into()));
    }
    if d1.filt.weights != d2.filt.weights || d1.n_nontrivial != d2.n_nontrivial {
        return Ok(None);
    }
    let spec = d1.spec();
    let f = d1.grp.ext.f;
    let frob1 = d1.frob.matrix();
    let frob2 = d2.frob.matrix();

    // every block as a linear image of the coordinate-0 block
    let mut lin: Vec<LinMat> = Vec::with_capacity(f);
    lin.push(LinMat::unknowns(&spec));
    for j in 0..f - 1 {
        let prev = lin.last().expect("nonempty");
        let next = LinMat::right_mul(
            &LinMat::left_mul(&frob2.coord(j).inv()?, prev),
            &frob1.coord(j),
        );
        lin.push(next);
    }
    let mut rows: Vec<LinForm> = Vec::new();
    // wrap-around: M2_{f-1}^{-1} Q_{f-1} M1_{f-1} must equal Q_0
    let wrap = LinMat::right_mul(
        &LinMat::left_mul(&frob2.coord(f - 1).inv()?, &lin[f - 1]),
        &frob1.coord(f - 1),
    )
    .sub(&lin[0]);
    rows.extend(wrap.rows());
    // Galois: B2(g) Q_{j + n(g)} = Q_j B1(g)
    for g in d1.grp.elements() {
        let b1 = d1.action.block(g, &spec);
        let b2 = d2.action.block(g, &spec);
        let shift = d1.grp.n[g];
        for j in 0..f {
            let lhs = LinMat::left_mul(&b2, &lin[(j + shift) % f]);
            let rhs = LinMat::right_mul(&lin[j], &b1);
            rows.extend(lhs.sub(&rhs).rows());
        }
    }
    // monodromy: with N = [[0,0],[1,0]] constant on both sides, N Q_j = Q_j N
    if d1.n_nontrivial {
        let n = Mat2E {
            a: FieldElement::zero(&spec),
            b: FieldElement::zero(&spec),
            c: FieldElement::one(&spec),
            d: FieldElement::zero(&spec),
        };
        for l in &lin {
            let lhs = LinMat::left_mul(&n, l);
            let rhs = LinMat::right_mul(l, &n);
            rows.extend(lhs.sub(&rhs).rows());
        }
    }
    // filtration lines at every embedding with positive weight
    for s in d1.filt.weights.i0_plus().iter() {
        let j = s % f;
        let (wx, wy) = lin[j].apply(d1.filt.x.get(s), d1.filt.y.get(s));
        rows.push(wx.scale(d2.filt.y.get(s)).sub(&wy.scale(d2.filt.x.get(s))));
    }

    let basis = nullspace(&spec, rows)?;
    if basis.is_empty() {
        return Ok(None);
    }
    // the set of singular members is cut out by prod_j det Q_j, of degree
    // at most 2f in each parameter; a grid with 2f + 1 values per parameter
    // misses it unless it is everything
    let dim = basis.len();
    let grid: Vec<FieldElement> = (0..=(2 * f as i64))
        .map(|v| FieldElement::from_int(&spec, v))
        .collect();
    let mut counters = vec![0usize; dim];
    loop {
        if counters.iter().any(|&c| c != 0) {
            let mut q0 = vec![FieldElement::zero(&spec); NQ];
            for (k, &ci) in counters.iter().enumerate() {
                for (t, q) in q0.iter_mut().enumerate() {
                    *q = q.add(&basis[k][t].mul(&grid[ci]));
                }
            }
            let block = Mat2E {
                a: q0[0].clone(),
                b: q0[1].clone(),
                c: q0[2].clone(),
                d: q0[3].clone(),
            };
            if !block.det().is_zero() {
                let q = assemble(&frob1, &frob2, &block)?;
                if q.is_invertible() {
                    debug_assert!(verify_iso(d1, d2, &q)?);
                    return Ok(Some(q));
                }
            }
        }
        // advance odometer
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(None);
            }
            counters[k] += 1;
            if counters[k] < grid.len() {
                break;
            }
            counters[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// cheap invariants
// ---------------------------------------------------------------------------

/// Data preserved by every isomorphism: an isomorphism conjugates the
/// phi^f block at coordinate 0 over E, fixes the labelled weights, and
/// respects the monodromy flag and Frobenius class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub f_class: FClass,
    pub n_nontrivial: bool,
    pub weights: Vec<u32>,
    pub weight_offsets: Vec<u32>,
    pub nm_trace: FieldElement,
    pub nm_det: FieldElement,
}

pub fn iso_fingerprint(d: &FilteredModule) -> Result<Fingerprint> {
    let nm = d.frob.matrix().nm_phi().coord(0);
    Ok(Fingerprint {
        f_class: d.f_class()?,
        n_nontrivial: d.n_nontrivial,
        weights: d.filt.weights.k.clone(),
        weight_offsets: d.filt.weights.offset.clone(),
        nm_trace: nm.trace(),
        nm_det: nm.det(),
    })
}

// ---------------------------------------------------------------------------
// the crystalline diagonal family
// ---------------------------------------------------------------------------

/// D(lambda, mu): diagonal Frobenius with unit parameters in the first
/// f - 1 slots and eigenvalue products eps0 = varpi^a, eps1 = varpi^(k-a)
/// where varpi is an e-th root of p and k is the weight total; trivial
/// descent group, filtration line (1, 1) everywhere, positive weights.
///
/// eps0 and eps1 are the roots of X^2 - alpha X + varpi^k for
/// alpha = eps0 + eps1 in the maximal ideal; 2a = k is the degenerate
/// alpha^2 = 4 varpi^k case and is rejected.
pub fn family_module(
    spec: &Arc<FieldSpec>,
    f: usize,
    e: usize,
    weights: Vec<u32>,
    lambda: &[FieldElement],
    mu: &[FieldElement],
    varpi: &FieldElement,
    a: u32,
) -> Result<FilteredModule> {
    if lambda.len() != f.saturating_sub(1) || mu.len() != f.saturating_sub(1) {
        return Err(Error::BadInput("family needs f - 1 unit parameters per row".into()));
    }
    let p = spec.p();
    let k64: u64 = weights.iter().map(|&w| w as u64).sum();
    let k = k64 as u32;
    if varpi.vp()? != crate::field::Rat::new(1.into(), (e as i64).into()) {
        return Err(Error::BadInput("varpi must be a uniformizer with v_p = 1/e".into()));
    }
    if a == 0 || a >= k {
        return Err(Error::BadInput("need 0 < a < k for an irreducible member".into()));
    }
    if 2 * a == k {
        return Err(Error::BadInput("alpha^2 = 4*pi^k".into()));
    }
    if weights.iter().any(|&w| w == 0) || weights.len() != e * f {
        return Err(Error::BadInput("family weights must be positive of length e f".into()));
    }
    for u in lambda.iter().chain(mu) {
        if u.vp()? != crate::field::rat_int(0) {
            return Err(Error::BadInput("family parameters must be units".into()));
        }
    }
    let eps0 = varpi.pow(a as i64)?;
    let eps1 = varpi.pow((k - a) as i64)?;
    let mut al: Vec<FieldElement> = lambda.to_vec();
    let mut de: Vec<FieldElement> = mu.to_vec();
    let lprod = lambda.iter().fold(FieldElement::one(spec), |acc, v| acc.mul(v));
    let mprod = mu.iter().fold(FieldElement::one(spec), |acc, v| acc.mul(v));
    al.push(eps0.div(&lprod)?);
    de.push(eps1.div(&mprod)?);
    let ext = crate::extension::ExtensionSpec::new(p, f, e, 1)?;
    let grp = crate::extension::GaloisGroupSpec::trivial(ext)?;
    let frob = FrobForm::Diag {
        alpha: VecF::new(al)?,
        delta: VecF::new(de)?,
    };
    let m = e * f;
    let filt = FiltrationData::new(
        WeightData::new(weights)?,
        VecM::ones(spec, m),
        VecM::ones(spec, m),
    )?;
    let act = GaloisActionData::trivial(&grp, spec);
    FilteredModule::new(grp, frob, false, act, filt)
}

/// Closed-form isomorphism criterion inside the family (same spec, f, e,
/// weights, and a, with 2a != k so both eigenvalue products differ): the
/// only possible intertwiner is diagonal, and it exists iff
/// lambda1_i mu2_i = lambda2_i mu1_i for every i < f - 1.
///
/// When 2a = k the member is F-scalar, off-diagonal intertwiner entries
/// become available, and this formula under-counts; use
/// [`decide_isomorphic`] there.
pub fn family_iso_criterion(
    lambda1: &[FieldElement],
    mu1: &[FieldElement],
    lambda2: &[FieldElement],
    mu2: &[FieldElement],
) -> bool {
    lambda1
        .iter()
        .zip(mu2)
        .zip(lambda2.iter().zip(mu1))
        .all(|((l1, m2), (l2, m1))| l1.mul(m2) == l2.mul(m1))
}
