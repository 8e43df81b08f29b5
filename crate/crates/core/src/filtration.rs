//! Hodge filtrations of rank two modules over E^{|S_L|} and the assembled
//! filtered module type.
//!
//! The filtration of D_L is determined by the labelled weights k_i >= 0 and
//! a coordinatewise line, recorded as a pair of vectors (x, y) in E^m with
//! (x_i, y_i) != (0, 0) for every i.  Two filtrations are equivalent iff they
//! differ by a unit scaling t in (E^x)^m.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::descent::{check_g_stable, validate_action, Character, GaloisActionData};
use crate::error::{Error, Result};
use crate::extension::GaloisGroupSpec;
use crate::field::{rat_int, FieldElement, FieldSpec, Rat};
use crate::phimod::{CanonTag, FClass};
use crate::ring::{IndexSet, Mat2F, VecF, VecM};

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

/// Labelled Hodge-Tate weights per embedding.  The weight pair at
/// embedding i is {-(offset_i + k_i), -offset_i}: k_i is the jump between
/// the two filtration steps and offset_i the common shift picked up by
/// twisting with rank-one modules.  offset = 0 is the reduced shape
/// {-k_i, 0}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightData {
    pub k: Vec<u32>,
    pub offset: Vec<u32>,
}

impl WeightData {
    pub fn new(k: Vec<u32>) -> Result<WeightData> {
        if k.is_empty() {
            return Err(Error::BadInput("empty weight vector".into()));
        }
        let offset = vec![0; k.len()];
        Ok(WeightData { k, offset })
    }

    pub fn with_offset(k: Vec<u32>, offset: Vec<u32>) -> Result<WeightData> {
        if k.is_empty() {
            return Err(Error::BadInput("empty weight vector".into()));
        }
        if offset.len() != k.len() {
            return Err(Error::BadInput("weight offsets must have length m".into()));
        }
        Ok(WeightData { k, offset })
    }

    pub fn m(&self) -> usize {
        self.k.len()
    }

    /// Sum of the jumps alone.
    pub fn total(&self) -> u64 {
        self.k.iter().map(|&x| x as u64).sum()
    }

    pub fn offset_total(&self) -> u64 {
        self.offset.iter().map(|&x| x as u64).sum()
    }

    /// Hodge number of the full rank-two module: each embedding
    /// contributes both weights, offset_i + (offset_i + k_i).
    pub fn hodge_total(&self) -> u64 {
        self.total() + 2 * self.offset_total()
    }

    /// Distinct weights in increasing order (the jumps w_0 < ... < w_{t-1}).
    pub fn jumps(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.k.clone();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// I_r = { i : k_i > w_{r-1} } for r = 0..t (I_0 is everything).
    pub fn level_sets(&self) -> Vec<IndexSet> {
        let jumps = self.jumps();
        let m = self.m();
        let mut out = vec![IndexSet::full(m)];
        for r in 1..jumps.len() {
            let thr = jumps[r - 1];
            out.push(
                IndexSet::new(m, (0..m).filter(|&i| self.k[i] > thr)).expect("in range"),
            );
        }
        out
    }

    /// Level sets whose jump is positive; these are the sets that actually
    /// constrain the filtration (I_0 drops out when w_0 = 0).
    pub fn effective_levels(&self) -> Vec<IndexSet> {
        let jumps = self.jumps();
        self.level_sets()
            .into_iter()
            .zip(jumps)
            .filter(|(_, w)| *w >= 1)
            .map(|(s, _)| s)
            .collect()
    }

    /// I_0^+ = { i : k_i > 0 }, the union of all effective levels.
    pub fn i0_plus(&self) -> IndexSet {
        IndexSet::new(self.m(), (0..self.m()).filter(|&i| self.k[i] > 0)).expect("in range")
    }

    /// Multiset of weights as (weight, multiplicity), increasing.
    pub fn profile(&self) -> Vec<(u32, usize)> {
        let mut map: BTreeMap<u32, usize> = BTreeMap::new();
        for &w in &self.k {
            *map.entry(w).or_insert(0) += 1;
        }
        map.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// filtration lines
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationData {
    pub weights: WeightData,
    pub x: VecM,
    pub y: VecM,
}

impl FiltrationData {
    pub fn new(weights: WeightData, x: VecM, y: VecM) -> Result<FiltrationData> {
        if x.len() != weights.m() || y.len() != weights.m() {
            return Err(Error::BadInput("filtration vectors must have length m".into()));
        }
        for i in 0..x.len() {
            if x.get(i).is_zero() && y.get(i).is_zero() {
                return Err(Error::ZeroCoordinate(i));
            }
        }
        Ok(FiltrationData { weights, x, y })
    }

    pub fn m(&self) -> usize {
        self.weights.m()
    }

    pub fn j_x(&self) -> IndexSet {
        self.x.support()
    }

    pub fn j_y(&self) -> IndexSet {
        self.y.support()
    }

    /// Same line at every coordinate, i.e. equal up to a unit scaling.
    pub fn equivalent(&self, other: &FiltrationData) -> bool {
        if self.weights != other.weights {
            return false;
        }
        for i in 0..self.m() {
            let cross = self
                .x
                .get(i)
                .mul(other.y.get(i))
                .sub(&self.y.get(i).mul(other.x.get(i)));
            if !cross.is_zero() {
                return false;
            }
            if self.x.get(i).is_zero() != other.x.get(i).is_zero()
                || self.y.get(i).is_zero() != other.y.get(i).is_zero()
            {
                return false;
            }
        }
        true
    }

    /// Equivalent presentation with y_i = 1 wherever y_i != 0 and x_i = 1 on
    /// the rest.
    pub fn normalized(&self) -> Result<FiltrationData> {
        let m = self.m();
        let spec = self.x.spec().clone();
        let mut x = VecM::zeros(&spec, m);
        let mut y = VecM::zeros(&spec, m);
        for i in 0..m {
            if !self.y.get(i).is_zero() {
                let t = self.y.get(i).inv()?;
                x.set(i, self.x.get(i).mul(&t));
                y.set(i, FieldElement::one(&spec));
            } else {
                x.set(i, FieldElement::one(&spec));
                // y stays 0
            }
        }
        FiltrationData::new(self.weights.clone(), x, y)
    }
}

// ---------------------------------------------------------------------------
// assembled filtered modules
// ---------------------------------------------------------------------------

/// Frobenius in (generalised) canonical presentation: either a vector
/// diagonal (covers the constant split, scalar and crystalline-family
/// shapes) or the non-semisimple corner form [[a 1, 0], [1, a 1]].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobForm {
    Diag { alpha: VecF, delta: VecF },
    NonSemisimple { alpha: FieldElement, f: usize },
}

impl FrobForm {
    pub fn matrix(&self) -> Mat2F {
        match self {
            FrobForm::Diag { alpha, delta } => Mat2F::diag(alpha.clone(), delta.clone()),
            FrobForm::NonSemisimple { alpha, f } => {
                CanonTag::NonSemisimple { alpha: alpha.clone() }.matrix(*f)
            }
        }
    }

    pub fn f(&self) -> usize {
        match self {
            FrobForm::Diag { alpha, .. } => alpha.len(),
            FrobForm::NonSemisimple { f, .. } => *f,
        }
    }

    /// Nm_phi eigenvalue pair (A, D): phi^f = diag(A, D) for diagonal forms;
    /// for the non-semisimple form both eigenvalues are alpha^f.
    pub fn nm_pair(&self) -> Result<(FieldElement, FieldElement)> {
        match self {
            FrobForm::Diag { alpha, delta } => Ok((alpha.product(), delta.product())),
            FrobForm::NonSemisimple { alpha, f } => {
                let a = alpha.pow(*f as i64)?;
                Ok((a.clone(), a))
            }
        }
    }

    pub fn f_class(&self) -> Result<FClass> {
        match self {
            FrobForm::NonSemisimple { .. } => Ok(FClass::NonFSemisimple),
            FrobForm::Diag { .. } => {
                let (a, d) = self.nm_pair()?;
                if a == d {
                    Ok(FClass::FScalar)
                } else {
                    Ok(FClass::FSemisimpleNonScalar)
                }
            }
        }
    }

    pub fn is_constant_diag(&self) -> bool {
        match self {
            FrobForm::Diag { alpha, delta } => {
                (1..alpha.len()).all(|i| alpha.get(i) == alpha.get(0))
                    && (1..delta.len()).all(|i| delta.get(i) == delta.get(0))
            }
            _ => false,
        }
    }
}

/// The full object: Frobenius form, monodromy flag (always in the
/// normalised shape N = [[0,0],[1,0]] when nontrivial), descent data, and a
/// G-stable filtration.
#[derive(Debug, Clone)]
pub struct FilteredModule {
    pub grp: GaloisGroupSpec,
    pub frob: FrobForm,
    pub n_nontrivial: bool,
    pub action: GaloisActionData,
    pub filt: FiltrationData,
}

impl FilteredModule {
    pub fn new(
        grp: GaloisGroupSpec,
        frob: FrobForm,
        n_nontrivial: bool,
        action: GaloisActionData,
        filt: FiltrationData,
    ) -> Result<FilteredModule> {
        let d = FilteredModule { grp, frob, n_nontrivial, action, filt };
        d.validate()?;
        Ok(d)
    }

    pub fn spec(&self) -> Arc<FieldSpec> {
        self.filt.x.spec().clone()
    }

    pub fn monodromy_matrix(&self) -> Mat2F {
        let spec = self.spec();
        let f = self.grp.ext.f;
        let mut n = Mat2F::zero(&spec, f);
        if self.n_nontrivial {
            n.c = VecF::ones(&spec, f);
        }
        n
    }

    pub fn f_class(&self) -> Result<FClass> {
        self.frob.f_class()
    }

    pub fn validate(&self) -> Result<()> {
        let ext = &self.grp.ext;
        self.grp.validate().into_result()?;
        if self.frob.f() != ext.f {
            return Err(Error::BadInput("Frobenius length does not match f".into()));
        }
        if self.filt.m() != ext.m() {
            return Err(Error::BadInput("filtration length does not match m".into()));
        }
        let fmat = self.frob.matrix();
        if !fmat.is_invertible() {
            return Err(Error::Validation("Frobenius is not invertible".into()));
        }
        let n = self.monodromy_matrix();
        if self.n_nontrivial {
            // normalised presentation: constant diagonal with alpha = p delta
            match &self.frob {
                FrobForm::Diag { alpha, delta } => {
                    if !self.frob.is_constant_diag() {
                        return Err(Error::NotCanonical(
                            "nontrivial monodromy requires the constant diagonal form".into(),
                        ));
                    }
                    let spec = self.spec();
                    let p = FieldElement::from_rat(&spec, rat_int(ext.p as i64));
                    if alpha.get(0) != &p.mul(delta.get(0)) {
                        return Err(Error::NotCanonical(
                            "nontrivial monodromy requires alpha = p delta".into(),
                        ));
                    }
                }
                FrobForm::NonSemisimple { .. } => {
                    return Err(Error::Validation(
                        "nonzero monodromy over a non-semisimple Frobenius".into(),
                    ))
                }
            }
        }
        validate_action(&self.grp, &self.action, &fmat, &n).into_result()?;
        // weights must be constant on G-orbits for any level set to be
        // G-stable; the stability check below subsumes this but this gives a
        // clearer error
        for level in self.filt.weights.effective_levels() {
            if !self.grp.is_orbit_union(&level) {
                return Err(Error::Validation(
                    "a filtration level set is not a union of G-orbits".into(),
                ));
            }
        }
        // the twist offsets must likewise cut out G-stable index sets
        let m = ext.m();
        let offsets = &self.filt.weights.offset;
        let mut thresholds: Vec<u32> = offsets.clone();
        thresholds.sort_unstable();
        thresholds.dedup();
        for thr in thresholds {
            let set = IndexSet::new(m, (0..m).filter(|&i| offsets[i] > thr))?;
            if !self.grp.is_orbit_union(&set) {
                return Err(Error::Validation(
                    "a weight-offset level set is not a union of G-orbits".into(),
                ));
            }
        }
        if !check_g_stable(
            &self.grp,
            &self.action,
            &self.filt.x,
            &self.filt.y,
            &self.filt.weights.effective_levels(),
        ) {
            return Err(Error::Validation("filtration is not G-stable".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// rank one modules and twisting
// ---------------------------------------------------------------------------

/// Rank one object: phi(eta) = u (varpi, ..., varpi) eta with v_p(u) = 0,
/// a character chi of G, and arbitrary integer labelled weights.
#[derive(Debug, Clone)]
pub struct RankOneModule {
    pub grp: GaloisGroupSpec,
    pub u: FieldElement,
    pub varpi: FieldElement,
    pub weights: Vec<i64>,
    pub chi: Character,
}

impl RankOneModule {
    pub fn new(
        grp: GaloisGroupSpec,
        u: FieldElement,
        varpi: FieldElement,
        weights: Vec<i64>,
        chi: Character,
    ) -> Result<RankOneModule> {
        if weights.len() != grp.ext.m() {
            return Err(Error::BadInput("rank one weights must have length m".into()));
        }
        if u.is_zero() || varpi.is_zero() {
            return Err(Error::BadInput("u and varpi must be nonzero".into()));
        }
        if u.vp()? != rat_int(0) {
            return Err(Error::BadInput("u must be a unit".into()));
        }
        chi.validate(&grp)?;
        Ok(RankOneModule { grp, u, varpi, weights, chi })
    }

    pub fn total_weight(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// Newton number t_N = e f v_p(u varpi) = e f v_p(varpi).
    pub fn t_newton(&self) -> Result<Rat> {
        let ef = rat_int((self.grp.ext.e * self.grp.ext.f) as i64);
        Ok(ef * self.varpi.vp()?)
    }

    pub fn t_hodge(&self) -> Rat {
        rat_int(self.total_weight())
    }

    /// Weak admissibility: t_H = t_N and every weight level set a union of
    /// G-orbits (rank one has no proper nonzero submodules to check).
    pub fn check_wa(&self) -> Result<bool> {
        if self.t_hodge() != self.t_newton()? {
            return Ok(false);
        }
        let m = self.grp.ext.m();
        let mut thresholds: Vec<i64> = self.weights.clone();
        thresholds.sort_unstable();
        thresholds.dedup();
        for thr in thresholds {
            let set = IndexSet::new(m, (0..m).filter(|&i| self.weights[i] > thr))?;
            if !self.grp.is_orbit_union(&set) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Isomorphism of rank one modules sharing varpi and weights:
/// u^f = v^f and chi(g) = eps^{n(g)} psi(g) with eps = u/v.
pub fn rank_one_isomorphic(a: &RankOneModule, b: &RankOneModule) -> Result<bool> {
    if a.grp != b.grp {
        return Err(Error::SpecMismatch("rank one modules over different groups".into()));
    }
    if a.varpi != b.varpi || a.weights != b.weights {
        return Ok(false);
    }
    let f = a.grp.ext.f as i64;
    if a.u.pow(f)? != b.u.pow(f)? {
        return Ok(false);
    }
    let eps = a.u.div(&b.u)?;
    for g in a.grp.elements() {
        let twist = eps.pow(a.grp.n[g] as i64)?;
        if a.chi.value(g) != &twist.mul(b.chi.value(g)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Twist a rank two module by a rank one module: Frobenius scales by
/// u varpi, weights shift, characters multiply.  The non-semisimple corner
/// is rescaled back into canonical shape.
pub fn twist_shift_weights(d: &FilteredModule, r: &RankOneModule) -> Result<FilteredModule> {
    if d.grp != r.grp {
        return Err(Error::SpecMismatch("twist across different groups".into()));
    }
    let scale = r.u.mul(&r.varpi);
    if scale.is_zero() {
        return Err(Error::BadInput("twisting scalar is zero".into()));
    }
    // weights {-(b+k), -b} twist to {-(b+r+k), -(b+r)}: the jump k is
    // unchanged, the offset absorbs the rank-one weight
    let mut offsets = Vec::with_capacity(d.filt.m());
    for i in 0..d.filt.m() {
        let b = d.filt.weights.offset[i] as i64 + r.weights[i];
        if b < 0 {
            return Err(Error::BadInput("twisted weight left the normalized range".into()));
        }
        offsets.push(b as u32);
    }
    let frob = match &d.frob {
        FrobForm::Diag { alpha, delta } => FrobForm::Diag {
            alpha: alpha.scale(&scale),
            delta: delta.scale(&scale),
        },
        FrobForm::NonSemisimple { alpha, f } => FrobForm::NonSemisimple {
            alpha: alpha.mul(&scale),
            f: *f,
        },
    };
    if d.n_nontrivial {
        // alpha = p delta is preserved by a common scaling, nothing to fix
    }
    let action = match &d.action {
        GaloisActionData::DiagChars { chi, psi } => GaloisActionData::DiagChars {
            chi: chi.mul(&r.chi),
            psi: psi.mul(&r.chi),
        },
        GaloisActionData::Homo { lambda } => {
            let scaled = d
                .grp
                .elements()
                .map(|g| {
                    let c = r.chi.value(g);
                    let m = &lambda[g];
                    crate::ring::Mat2E {
                        a: m.a.mul(c),
                        b: m.b.mul(c),
                        c: m.c.mul(c),
                        d: m.d.mul(c),
                    }
                })
                .collect();
            GaloisActionData::Homo { lambda: scaled }
        }
    };
    let filt = FiltrationData::new(
        WeightData::with_offset(d.filt.weights.k.clone(), offsets)?,
        d.filt.x.clone(),
        d.filt.y.clone(),
    )?;
    FilteredModule::new(d.grp.clone(), frob, d.n_nontrivial, action, filt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{ExtensionSpec, GaloisGroupSpec};
    use crate::field::FieldSpec;

    fn spec() -> Arc<FieldSpec> {
        FieldSpec::rationals(5).unwrap()
    }

    #[test]
    fn weight_bookkeeping() {
        let w = WeightData::new(vec![0, 2, 2, 5]).unwrap();
        assert_eq!(w.jumps(), vec![0, 2, 5]);
        let ls = w.level_sets();
        assert_eq!(ls.len(), 3);
        assert_eq!(ls[0], IndexSet::full(4));
        assert_eq!(ls[1], IndexSet::new(4, [1, 2, 3]).unwrap());
        assert_eq!(ls[2], IndexSet::new(4, [3]).unwrap());
        assert_eq!(w.effective_levels().len(), 2);
        assert_eq!(w.i0_plus(), IndexSet::new(4, [1, 2, 3]).unwrap());
        // telescoping sum_r w_r (|I_r| - |I_{r+1}|) = sum k_i
        let jumps = w.jumps();
        let mut sizes: Vec<usize> = ls.iter().map(|s| s.len()).collect();
        sizes.push(0);
        let tele: u64 = jumps
            .iter()
            .enumerate()
            .map(|(r, &wr)| wr as u64 * (sizes[r] - sizes[r + 1]) as u64)
            .sum();
        assert_eq!(tele, w.total());
    }

    #[test]
    fn filtration_rules() {
        let s = spec();
        let w = WeightData::new(vec![1, 1]).unwrap();
        let x = VecM::new(vec![FieldElement::from_int(&s, 1), FieldElement::zero(&s)]).unwrap();
        let y = VecM::new(vec![FieldElement::from_int(&s, 2), FieldElement::one(&s)]).unwrap();
        let filt = FiltrationData::new(w.clone(), x.clone(), y.clone()).unwrap();
        assert_eq!(filt.j_x(), IndexSet::new(2, [0]).unwrap());
        // scaling is an equivalence
        let t = FieldElement::from_int(&s, 7);
        let filt2 = FiltrationData::new(w.clone(), x.scale(&t), y.scale(&t)).unwrap();
        assert!(filt.equivalent(&filt2));
        let filt3 = filt.normalized().unwrap();
        assert!(filt.equivalent(&filt3));
        assert!(filt3.y.get(0).is_one());
        // zero pair rejected
        let bad = FiltrationData::new(
            w,
            VecM::zeros(&s, 2),
            VecM::new(vec![FieldElement::one(&s), FieldElement::zero(&s)]).unwrap(),
        );
        assert!(matches!(bad, Err(Error::ZeroCoordinate(1))));
    }

    #[test]
    fn assembled_module_validates() {
        let s = spec();
        let grp = GaloisGroupSpec::trivial(ExtensionSpec::new(5, 2, 1, 1).unwrap()).unwrap();
        let frob = FrobForm::Diag {
            alpha: VecF::new(vec![FieldElement::from_int(&s, 5), FieldElement::one(&s)]).unwrap(),
            delta: VecF::new(vec![FieldElement::one(&s), FieldElement::one(&s)]).unwrap(),
        };
        let filt = FiltrationData::new(
            WeightData::new(vec![1, 0]).unwrap(),
            VecM::new(vec![FieldElement::from_int(&s, 2), FieldElement::one(&s)]).unwrap(),
            VecM::new(vec![FieldElement::one(&s), FieldElement::one(&s)]).unwrap(),
        )
        .unwrap();
        let act = GaloisActionData::trivial(&grp, &s);
        FilteredModule::new(grp, frob, false, act, filt).unwrap();
    }

    #[test]
    fn rank_one_wa_and_twist() {
        let s = spec();
        let grp = GaloisGroupSpec::unramified(5, 2, 1).unwrap();
        // varpi with e f v(varpi) = sum of weights: e = 1, f = 2, weights (1,1)
        let r = RankOneModule::new(
            grp.clone(),
            FieldElement::from_int(&s, 3),
            FieldElement::from_int(&s, 5),
            vec![1, 1],
            Character::trivial(&grp, &s),
        )
        .unwrap();
        assert!(r.check_wa().unwrap());
        // uneven weights break orbit stability under the full Frobenius orbit
        let bad = RankOneModule::new(
            grp.clone(),
            FieldElement::from_int(&s, 3),
            FieldElement::from_int(&s, 5),
            vec![2, 0],
            Character::trivial(&grp, &s),
        )
        .unwrap();
        assert!(!bad.check_wa().unwrap());

        // twisting shifts weights and scales Frobenius
        let frob = FrobForm::Diag {
            alpha: VecF::ones(&s, 2),
            delta: VecF::new(vec![FieldElement::from_int(&s, 2); 2]).unwrap(),
        };
        let filt = FiltrationData::new(
            WeightData::new(vec![1, 1]).unwrap(),
            VecM::ones(&s, 2),
            VecM::ones(&s, 2),
        )
        .unwrap();
        let act = GaloisActionData::trivial(&grp, &s);
        let d = FilteredModule::new(grp, frob, false, act, filt).unwrap();
        let t = twist_shift_weights(&d, &r).unwrap();
        assert_eq!(t.filt.weights.k, vec![1, 1]);
        assert_eq!(t.filt.weights.offset, vec![1, 1]);
        match &t.frob {
            FrobForm::Diag { alpha, .. } => {
                assert_eq!(alpha.get(0), &FieldElement::from_int(&s, 15));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn rank_one_isomorphism_criterion() {
        let s = spec();
        let grp = GaloisGroupSpec::unramified(5, 2, 1).unwrap();
        let chi = Character::trivial(&grp, &s);
        let minus = Character {
            values: vec![FieldElement::one(&s), FieldElement::from_int(&s, -1)],
        };
        let a = RankOneModule::new(
            grp.clone(),
            FieldElement::from_int(&s, 3),
            FieldElement::from_int(&s, 5),
            vec![1, 1],
            chi.clone(),
        )
        .unwrap();
        // u = -3: u^2 matches, eps = -1, so chi must twist by (-1)^{n(g)}
        let b = RankOneModule::new(
            grp.clone(),
            FieldElement::from_int(&s, -3),
            FieldElement::from_int(&s, 5),
            vec![1, 1],
            minus,
        )
        .unwrap();
        assert!(rank_one_isomorphic(&a, &b).unwrap());
        let c = RankOneModule::new(
            grp.clone(),
            FieldElement::from_int(&s, -3),
            FieldElement::from_int(&s, 5),
            vec![1, 1],
            chi,
        )
        .unwrap();
        assert!(!rank_one_isomorphic(&a, &c).unwrap());
    }
}
