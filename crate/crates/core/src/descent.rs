//! Galois descent data on a rank two module in canonical Frobenius basis.
//!
//! For g in G the semilinear action is recorded by a matrix [g] over E^f
//! satisfying the cocycle rule [g1 g2] = [g1] (g1 [g2]) and commuting with
//! Frobenius and monodromy:
//!     [phi] phi([g]) = [g] (g [phi]),      [N][g] = [g] (g [N]).
//! In a canonical basis the matrices are constant: either a pair of
//! characters on the diagonal, or an honest homomorphism lambda into
//! GL_2(E) in the F-scalar case.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::{GaloisGroupSpec, GroupElement, ValidationReport};
use crate::field::{FieldElement, FieldSpec};
use crate::ring::{IndexSet, Mat2E, Mat2F, VecM};

/// A character G -> E^x given by its value list (index = group element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<FieldElement>,
}

impl Character {
    pub fn trivial(grp: &GaloisGroupSpec, spec: &Arc<FieldSpec>) -> Character {
        Character { values: vec![FieldElement::one(spec); grp.order()] }
    }

    pub fn value(&self, g: GroupElement) -> &FieldElement {
        &self.values[g]
    }

    pub fn validate(&self, grp: &GaloisGroupSpec) -> Result<()> {
        if self.values.len() != grp.order() {
            return Err(Error::Validation("character value list has wrong length".into()));
        }
        if self.values.iter().any(|v| v.is_zero()) {
            return Err(Error::Validation("character takes the value zero".into()));
        }
        if !self.values[0].is_one() {
            return Err(Error::Validation("character does not send identity to 1".into()));
        }
        for g in grp.elements() {
            for h in grp.elements() {
                let gh = grp.compose(g, h);
                if self.values[g].mul(&self.values[h]) != self.values[gh] {
                    return Err(Error::Validation(format!(
                        "character is not multiplicative at ({g},{h})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, o: &Character) -> Character {
        Character {
            values: self.values.iter().zip(&o.values).map(|(a, b)| a.mul(b)).collect(),
        }
    }
}

/// Descent data in a canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisActionData {
    /// [g] = diag(chi(g), psi(g)).
    DiagChars { chi: Character, psi: Character },
    /// [g] = lambda(g), a homomorphism G -> GL_2(E); the F-scalar case.
    Homo { lambda: Vec<Mat2E> },
}

impl GaloisActionData {
    pub fn trivial(grp: &GaloisGroupSpec, spec: &Arc<FieldSpec>) -> GaloisActionData {
        GaloisActionData::DiagChars {
            chi: Character::trivial(grp, spec),
            psi: Character::trivial(grp, spec),
        }
    }

    /// The constant 2x2 block of [g].
    pub fn block(&self, g: GroupElement, spec: &Arc<FieldSpec>) -> Mat2E {
        match self {
            GaloisActionData::DiagChars { chi, psi } => Mat2E {
                a: chi.value(g).clone(),
                b: FieldElement::zero(spec),
                c: FieldElement::zero(spec),
                d: psi.value(g).clone(),
            },
            GaloisActionData::Homo { lambda } => lambda[g].clone(),
        }
    }

    /// [g] as a matrix over E^f (constant blocks).
    pub fn matrix(&self, g: GroupElement, spec: &Arc<FieldSpec>, f: usize) -> Mat2F {
        let b = self.block(g, spec);
        Mat2F::from_coords(spec, &vec![b; f])
    }

    pub fn is_homo(&self) -> bool {
        matches!(self, GaloisActionData::Homo { .. })
    }
}

/// Entrywise coordinate action of g on a matrix over E^f: the shift by n(g).
pub fn g_act_mat(grp: &GaloisGroupSpec, g: GroupElement, m: &Mat2F) -> Mat2F {
    Mat2F {
        a: grp.act_vecf(g, &m.a),
        b: grp.act_vecf(g, &m.b),
        c: grp.act_vecf(g, &m.c),
        d: grp.act_vecf(g, &m.d),
    }
}

/// Check the full set of compatibilities of descent data against explicit
/// Frobenius and monodromy matrices.
pub fn validate_action(
    grp: &GaloisGroupSpec,
    act: &GaloisActionData,
    frob: &Mat2F,
    monodromy: &Mat2F,
) -> ValidationReport {
    let mut fails = Vec::new();
    let spec = frob.spec().clone();
    let f = frob.f();
    match act {
        GaloisActionData::DiagChars { chi, psi } => {
            if let Err(e) = chi.validate(grp) {
                fails.push(format!("chi: {e}"));
            }
            if let Err(e) = psi.validate(grp) {
                fails.push(format!("psi: {e}"));
            }
        }
        GaloisActionData::Homo { lambda } => {
            if lambda.len() != grp.order() {
                fails.push("lambda value list has wrong length".into());
            } else {
                if lambda[0] != Mat2E::identity(&spec) {
                    fails.push("lambda(identity) != id".into());
                }
                for g in grp.elements() {
                    if lambda[g].det().is_zero() {
                        fails.push(format!("lambda({g}) is singular"));
                    }
                }
            }
        }
    }
    if !fails.is_empty() {
        return ValidationReport { failures: fails };
    }
    // cocycle: [g h] = [g] (g [h]); the blocks are constant so the
    // coordinate twist is invisible, but we keep the general form
    for g in grp.elements() {
        for h in grp.elements() {
            let gh = grp.compose(g, h);
            let lhs = act.matrix(gh, &spec, f);
            let rhs = act
                .matrix(g, &spec, f)
                .mul(&g_act_mat(grp, g, &act.matrix(h, &spec, f)));
            if lhs != rhs {
                fails.push(format!("cocycle rule fails at ({g},{h})"));
            }
        }
    }
    // commutation with Frobenius and monodromy
    for g in grp.elements() {
        let gm = act.matrix(g, &spec, f);
        let lhs = frob.mul(&gm.phi());
        let rhs = gm.mul(&g_act_mat(grp, g, frob));
        if lhs != rhs {
            fails.push(format!("[phi] phi([g]) != [g] (g [phi]) at g = {g}"));
        }
        let lhs = monodromy.mul(&gm);
        let rhs = gm.mul(&g_act_mat(grp, g, monodromy));
        if lhs != rhs {
            fails.push(format!("[N][g] != [g] (g [N]) at g = {g}"));
        }
    }
    ValidationReport { failures: fails }
}

// ---------------------------------------------------------------------------
// G-stable filtration lines
// ---------------------------------------------------------------------------

/// One seed pair per G-orbit (at the smallest orbit representative).
#[derive(Debug, Clone)]
pub struct FiltrationSeeds {
    pub pairs: Vec<(FieldElement, FieldElement)>,
}

/// Spread seeds over the orbits: with column convention, the line at
/// coordinate i_j * g is A(g)^{-1} applied to the seed line, which makes
/// the resulting filtration G-stable by construction.
pub fn build_stable_filtration(
    grp: &GaloisGroupSpec,
    act: &GaloisActionData,
    seeds: &FiltrationSeeds,
    spec: &Arc<FieldSpec>,
) -> Result<(VecM, VecM)> {
    let orbits = grp.orbits();
    if seeds.pairs.len() != orbits.len() {
        return Err(Error::BadInput(format!(
            "need {} seed pairs (one per orbit), got {}",
            orbits.len(),
            seeds.pairs.len()
        )));
    }
    let m = grp.ext.m();
    let mut x = VecM::zeros(spec, m);
    let mut y = VecM::zeros(spec, m);
    let mut filled = vec![false; m];
    for (orb, (sx, sy)) in orbits.iter().zip(&seeds.pairs) {
        if sx.is_zero() && sy.is_zero() {
            return Err(Error::BadInput("seed pair (0,0) is not a line".into()));
        }
        let base = orb[0];
        for g in grp.elements() {
            let l = grp.pi[g][base];
            if filled[l] {
                return Err(Error::Validation("action is not free".into()));
            }
            let a_inv = act.block(g, spec).inv()?;
            let (vx, vy) = a_inv.apply(sx, sy);
            x.set(l, vx);
            y.set(l, vy);
            filled[l] = true;
        }
    }
    Ok((x, y))
}

/// Is the coordinatewise line filtration with the given effective level
/// sets stable under every g?  `levels` are the I_r with positive jump.
pub fn check_g_stable(
    grp: &GaloisGroupSpec,
    act: &GaloisActionData,
    x: &VecM,
    y: &VecM,
    levels: &[IndexSet],
) -> bool {
    let spec = x.spec().clone();
    for level in levels {
        for g in grp.elements() {
            // index-set stability
            if level.image(&grp.pi[g]) != *level {
                return false;
            }
            let blk = act.block(g, &spec);
            for i in level.iter() {
                let j = grp.pi[g][i];
                let (ix, iy) = blk.apply(x.get(j), y.get(j));
                // line equality against (x_i, y_i): cross product zero and
                // matching zero patterns (the pair (x_i, y_i) is nonzero)
                let cross = ix.mul(y.get(i)).sub(&iy.mul(x.get(i)));
                if !cross.is_zero() {
                    return false;
                }
                let img_zero = ix.is_zero() && iy.is_zero();
                if img_zero {
                    // cannot happen for valid data (blk invertible), but an
                    // all-zero image line would not span the target line
                    return false;
                }
            }
        }
    }
    true
}
