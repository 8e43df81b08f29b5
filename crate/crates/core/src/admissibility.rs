//! Newton and Hodge numbers, the lattice of phi,N-stable rank one
//! submodules, the weak admissibility test with its reducibility
//! trichotomy, and coarse representation-type labels.
//!
//! Weak admissibility only sees the Frobenius, the monodromy and the
//! filtration: submodules here are phi,N-stable lines, with no Galois
//! condition imposed.  Everything works with a single valuation v_p on E;
//! t_N and t_H are exact rationals.

use crate::error::{Error, Result};
use crate::field::{rat_int, FieldElement, Rat};
use crate::filtration::{FilteredModule, FiltrationData, FrobForm};
use crate::phimod::FClass;
use crate::ring::VecF;

// ---------------------------------------------------------------------------
// submodule descriptors and the public invariant formulas
// ---------------------------------------------------------------------------

/// phi,N-stable submodules of a rank two module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubmoduleDescriptor {
    Zero,
    Full,
    /// Standard line E^f (1, 0); phi-stable for diagonal Frobenius only.
    D1,
    /// Standard line E^f (0, 1).
    D2,
    /// Line through the constant vector (1, theta); exists only in the
    /// F-scalar case.  For a vector-diagonal F-scalar Frobenius the line
    /// coordinates follow theta_{j+1} = (alpha_j / delta_j) theta_j from
    /// theta_0 = theta.
    DTheta(FieldElement),
    /// Any member of the theta family whose line misses the filtration at
    /// every embedding; they all share t_H = 0 and the same t_N.
    DThetaGeneric,
}

/// t_N of a submodule: e times the valuation of the relevant eigenvalue
/// product of phi^f.  Full: e v(Nm(alpha) Nm(delta)); D1 and the theta
/// family: e v(Nm(alpha)); D2: e v(Nm(delta)).
pub fn t_newton(d: &FilteredModule, sub: &SubmoduleDescriptor) -> Result<Rat> {
    let (a, dd) = d.frob.nm_pair()?;
    let e = rat_int(d.grp.ext.e as i64);
    match sub {
        SubmoduleDescriptor::Zero => Ok(rat_int(0)),
        SubmoduleDescriptor::Full => Ok(e * (a.vp()? + dd.vp()?)),
        SubmoduleDescriptor::D1 => match &d.frob {
            FrobForm::Diag { .. } => Ok(e * a.vp()?),
            FrobForm::NonSemisimple { .. } => Err(Error::BadInput(
                "D1 is not phi-stable for a non-semisimple Frobenius".into(),
            )),
        },
        SubmoduleDescriptor::D2 => Ok(e * dd.vp()?),
        SubmoduleDescriptor::DTheta(_) | SubmoduleDescriptor::DThetaGeneric => {
            if d.frob.f_class()? != FClass::FScalar {
                return Err(Error::BadInput("theta lines exist only in the F-scalar case".into()));
            }
            Ok(e * a.vp()?)
        }
    }
}

/// t_H of a submodule, read off the filtration alone.  With weights
/// {-(b_i + k_i), -b_i}: the full module collects both weights per
/// embedding; a line always collects b_i plus the jump k_i exactly at the
/// embeddings where it coincides with the filtration line -- y_i = 0 for
/// D1, x_i = 0 for D2, x_i theta = y_i with both nonzero for DTheta
/// (constant-theta form of the canonical F-scalar presentation), and
/// never for a generic theta line.
pub fn t_hodge(filt: &FiltrationData, sub: &SubmoduleDescriptor) -> Rat {
    if matches!(sub, SubmoduleDescriptor::Zero) {
        return rat_int(0);
    }
    let mut total = 0i64;
    for i in 0..filt.m() {
        let k = filt.weights.k[i] as i64;
        let b = filt.weights.offset[i] as i64;
        let hit = match sub {
            SubmoduleDescriptor::Zero => unreachable!(),
            SubmoduleDescriptor::DThetaGeneric => false,
            SubmoduleDescriptor::Full => true,
            SubmoduleDescriptor::D1 => filt.y.get(i).is_zero(),
            SubmoduleDescriptor::D2 => filt.x.get(i).is_zero(),
            SubmoduleDescriptor::DTheta(theta) => {
                !filt.x.get(i).is_zero()
                    && !filt.y.get(i).is_zero()
                    && filt.x.get(i).mul(theta) == *filt.y.get(i)
            }
        };
        total += match sub {
            SubmoduleDescriptor::Full => 2 * b + if hit { k } else { 0 },
            _ => b + if hit { k } else { 0 },
        };
    }
    rat_int(total)
}

pub fn t_newton_full(d: &FilteredModule) -> Result<Rat> {
    t_newton(d, &SubmoduleDescriptor::Full)
}

pub fn t_hodge_full(d: &FilteredModule) -> Rat {
    t_hodge(&d.filt, &SubmoduleDescriptor::Full)
}

// ---------------------------------------------------------------------------
// stable lines
// ---------------------------------------------------------------------------

/// A stable line together with its invariants.
#[derive(Debug, Clone)]
pub struct LineInfo {
    pub desc: SubmoduleDescriptor,
    pub t_hodge: Rat,
    pub t_newton: Rat,
}

/// A line in (E^2)^f, stored as a pair of coordinate vectors with
/// (u_j, v_j) != (0, 0) everywhere.
#[derive(Debug, Clone)]
struct Line {
    u: VecF,
    v: VecF,
}

impl Line {
    fn d1(d: &FilteredModule) -> Line {
        let s = d.spec();
        let f = d.grp.ext.f;
        Line { u: VecF::ones(&s, f), v: VecF::zeros(&s, f) }
    }

    fn d2(d: &FilteredModule) -> Line {
        let s = d.spec();
        let f = d.grp.ext.f;
        Line { u: VecF::zeros(&s, f), v: VecF::ones(&s, f) }
    }

    fn theta(d: &FilteredModule, theta0: &FieldElement) -> Result<Line> {
        let (alpha, delta) = match &d.frob {
            FrobForm::Diag { alpha, delta } => (alpha, delta),
            _ => return Err(Error::BadInput("theta line needs a diagonal Frobenius".into())),
        };
        let s = d.spec();
        let f = d.grp.ext.f;
        let mut v = VecF::zeros(&s, f);
        let mut cur = theta0.clone();
        for j in 0..f {
            v.set(j, cur.clone());
            cur = cur.mul(alpha.get(j)).div(delta.get(j))?;
        }
        Ok(Line { u: VecF::ones(&s, f), v })
    }
}

fn cross(ax: &FieldElement, ay: &FieldElement, bx: &FieldElement, by: &FieldElement) -> bool {
    ax.mul(by).sub(&ay.mul(bx)).is_zero()
}

/// phi_D(w)_j = Frob_j w_{j+1}; the line is stable iff this is parallel to
/// w_j at every j.  Returns the product of the eigenfactors when stable.
fn phi_eigenproduct(d: &FilteredModule, line: &Line) -> Option<FieldElement> {
    let fmat = d.frob.matrix();
    let f = d.grp.ext.f;
    let su = line.u.phi_shift(1);
    let sv = line.v.phi_shift(1);
    let mut prod = FieldElement::one(&d.spec());
    for j in 0..f {
        let (iu, iv) = fmat.coord(j).apply(su.get(j), sv.get(j));
        if !cross(&iu, &iv, line.u.get(j), line.v.get(j)) {
            return None;
        }
        let c = if !line.u.get(j).is_zero() {
            iu.div(line.u.get(j)).ok()?
        } else {
            iv.div(line.v.get(j)).ok()?
        };
        prod = prod.mul(&c);
    }
    Some(prod)
}

/// N(u, v) = (0, u); the line is N-stable iff u = 0 or N acts by zero.
fn n_stable(d: &FilteredModule, line: &Line) -> bool {
    !d.n_nontrivial || line.u.is_zero()
}

fn line_t_hodge(d: &FilteredModule, line: &Line) -> Rat {
    let f = d.grp.ext.f;
    let mut total = 0i64;
    for s in 0..d.filt.m() {
        let j = s % f;
        total += d.filt.weights.offset[s] as i64;
        if cross(line.u.get(j), line.v.get(j), d.filt.x.get(s), d.filt.y.get(s)) {
            total += d.filt.weights.k[s] as i64;
        }
    }
    rat_int(total)
}

fn line_info(d: &FilteredModule, desc: SubmoduleDescriptor, line: &Line) -> Result<Option<LineInfo>> {
    if !n_stable(d, line) {
        return Ok(None);
    }
    let prod = match phi_eigenproduct(d, line) {
        Some(p) => p,
        None => return Ok(None),
    };
    let e = rat_int(d.grp.ext.e as i64);
    Ok(Some(LineInfo {
        desc,
        t_hodge: line_t_hodge(d, line),
        t_newton: e * prod.vp()?,
    }))
}

/// All phi,N-stable rank one submodules: the standard lines when stable,
/// one theta entry per relevant constant (lines meeting the filtration
/// somewhere), and a single generic representative of the rest of the
/// theta family in the F-scalar case.
pub fn submodule_lattice(d: &FilteredModule) -> Result<Vec<LineInfo>> {
    let mut out = Vec::new();
    if let Some(info) = line_info(d, SubmoduleDescriptor::D1, &Line::d1(d))? {
        out.push(info);
    }
    if let Some(info) = line_info(d, SubmoduleDescriptor::D2, &Line::d2(d))? {
        out.push(info);
    }
    if d.f_class()? == FClass::FScalar && !d.n_nontrivial {
        let (alpha, delta) = match &d.frob {
            FrobForm::Diag { alpha, delta } => (alpha.clone(), delta.clone()),
            _ => unreachable!("F-scalar implies diagonal form"),
        };
        let f = d.grp.ext.f;
        // theta_0 values whose line meets the filtration at some embedding
        // with positive weight: theta_j = y_s / x_s pins theta_0 through the
        // recurrence theta_{j+1} = (alpha_j / delta_j) theta_j.
        let mut relevant: Vec<FieldElement> = Vec::new();
        let mut back = FieldElement::one(&d.spec());
        let mut back_at = vec![FieldElement::one(&d.spec()); f];
        for j in 0..f {
            back_at[j] = back.clone();
            back = back.mul(alpha.get(j)).div(delta.get(j))?;
        }
        for s in 0..d.filt.m() {
            if d.filt.weights.k[s] == 0 || d.filt.x.get(s).is_zero() || d.filt.y.get(s).is_zero() {
                continue;
            }
            let j = s % f;
            // theta_j = theta_0 * back_at[j], so theta_0 = theta_j / back_at[j]
            let theta_j = d.filt.y.get(s).div(d.filt.x.get(s))?;
            let theta0 = theta_j.div(&back_at[j])?;
            if !relevant.iter().any(|t| *t == theta0) {
                relevant.push(theta0);
            }
        }
        for theta0 in &relevant {
            let line = Line::theta(d, theta0)?;
            if let Some(info) = line_info(d, SubmoduleDescriptor::DTheta(theta0.clone()), &line)? {
                out.push(info);
            }
        }
        // generic member: any theta off the relevant set gives a line
        // missing the filtration entirely, and such a line is always
        // phi-stable in the F-scalar case
        let mut sample: i64 = 2;
        let generic = loop {
            let t = FieldElement::from_int(&d.spec(), sample);
            if !relevant.iter().any(|r| *r == t) {
                break t;
            }
            sample += 1;
        };
        let line = Line::theta(d, &generic)?;
        let prod = phi_eigenproduct(d, &line)
            .ok_or_else(|| Error::Validation("theta family not phi-stable in F-scalar case".into()))?;
        let e = rat_int(d.grp.ext.e as i64);
        out.push(LineInfo {
            desc: SubmoduleDescriptor::DThetaGeneric,
            t_hodge: rat_int(0),
            t_newton: e * prod.vp()?,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// weak admissibility and the reducibility trichotomy
// ---------------------------------------------------------------------------

/// Structure of the set of weakly admissible proper submodules, defined
/// when the module itself is weakly admissible.  Any two distinct stable
/// lines are complementary, so two or more wa lines give a splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reducibility {
    Irreducible,
    NonSplitReducible(SubmoduleDescriptor),
    SplitReducible(SubmoduleDescriptor, SubmoduleDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisType {
    /// Nonzero monodromy.
    Special,
    /// Split diagonal or non-semisimple Frobenius with zero monodromy.
    PrincipalSeries,
    /// F-scalar: the data does not separate the two sources of
    /// irreducibility, so the label is a disjunction; the flag records
    /// whether the descent matrices pairwise commute.
    SupercuspidalOrPrincipal { lambda_abelian: bool },
    /// Labels are only asserted for odd p.
    NotLabeled,
}

#[derive(Debug, Clone)]
pub struct WaReport {
    pub t_hodge: Rat,
    pub t_newton: Rat,
    pub lines: Vec<LineInfo>,
    pub weakly_admissible: bool,
    /// Present exactly when weakly admissible.
    pub reducibility: Option<Reducibility>,
    pub galois_type: GaloisType,
    /// First reason for failure, when not weakly admissible.
    pub failure: Option<String>,
}

/// D is weakly admissible iff t_H(D) = t_N(D) and t_H(D') <= t_N(D') for
/// every phi,N-stable rank one submodule D'.
pub fn check_wa(d: &FilteredModule) -> Result<WaReport> {
    let th = t_hodge_full(d);
    let tn = t_newton_full(d)?;
    let lines = submodule_lattice(d)?;
    let mut failure = None;
    if th != tn {
        failure = Some(format!("t_H = {} but t_N = {}", th, tn));
    } else {
        for info in &lines {
            if info.t_hodge > info.t_newton {
                failure = Some(format!(
                    "submodule {:?} has t_H = {} > t_N = {}",
                    info.desc, info.t_hodge, info.t_newton
                ));
                break;
            }
        }
    }
    let reducibility = if failure.is_none() {
        let wa_lines: Vec<&LineInfo> =
            lines.iter().filter(|l| l.t_hodge == l.t_newton).collect();
        Some(if wa_lines.is_empty() {
            Reducibility::Irreducible
        } else if wa_lines.len() == 1 {
            // a wa generic theta stands for infinitely many wa lines, any
            // two of which are complementary
            if wa_lines[0].desc == SubmoduleDescriptor::DThetaGeneric {
                Reducibility::SplitReducible(
                    SubmoduleDescriptor::DThetaGeneric,
                    SubmoduleDescriptor::DThetaGeneric,
                )
            } else {
                Reducibility::NonSplitReducible(wa_lines[0].desc.clone())
            }
        } else {
            Reducibility::SplitReducible(wa_lines[0].desc.clone(), wa_lines[1].desc.clone())
        })
    } else {
        None
    };
    Ok(WaReport {
        t_hodge: th,
        t_newton: tn,
        weakly_admissible: failure.is_none(),
        reducibility,
        galois_type: galois_type(d)?,
        lines,
        failure,
    })
}

/// Weakly admissible with no weakly admissible proper submodule.
pub fn is_wa_irreducible(d: &FilteredModule) -> Result<bool> {
    let rep = check_wa(d)?;
    Ok(rep.weakly_admissible && rep.reducibility == Some(Reducibility::Irreducible))
}

/// Coarse label of the associated representation type, determined by the
/// Frobenius class and the monodromy.
pub fn galois_type(d: &FilteredModule) -> Result<GaloisType> {
    if d.grp.ext.p == 2 {
        return Ok(GaloisType::NotLabeled);
    }
    if d.n_nontrivial {
        return Ok(GaloisType::Special);
    }
    match d.f_class()? {
        FClass::FSemisimpleNonScalar | FClass::NonFSemisimple => Ok(GaloisType::PrincipalSeries),
        FClass::FScalar => {
            let lambda_abelian = match &d.action {
                crate::descent::GaloisActionData::DiagChars { .. } => true,
                crate::descent::GaloisActionData::Homo { lambda } => {
                    let n = lambda.len();
                    (0..n).all(|i| {
                        (0..n).all(|j| lambda[i].mul(&lambda[j]) == lambda[j].mul(&lambda[i]))
                    })
                }
            };
            Ok(GaloisType::SupercuspidalOrPrincipal { lambda_abelian })
        }
    }
}
