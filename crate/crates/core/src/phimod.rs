//! Rank two phi-modules over E^f and their canonical Frobenius forms.
//!
//! The Frobenius of a rank two module over E^{|S|} is a matrix P in
//! GL_2(E^f) acting semilinearly; base change is new = Q P phi(Q)^{-1}.
//! The linear map phi^f has matrix Nm_phi(P), whose coordinate blocks are
//! pairwise conjugate, so everything is classified by the single 2x2 block
//! Q_0 = P_0 P_1 ... P_{f-1}:
//!
//!   * two distinct eigenvalues in E  -> diag(alpha 1, delta 1), alpha^f != delta^f
//!   * scalar                          -> diag(alpha 1, alpha 1)
//!   * non-semisimple                  -> [[alpha 1, 0], [1, alpha 1]]
//!
//! Root extractions go through the witness protocol of the field layer and
//! surface as FieldTooSmall when E is too small.

use crate::error::{Error, Result};
use crate::extension::ExtensionSpec;
use crate::field::{rat_int, FieldElement, Rat};
use crate::ring::{change_basis, solve_twisted, Mat2E, Mat2F, TwistedSolution, VecF};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FClass {
    FSemisimpleNonScalar,
    FScalar,
    NonFSemisimple,
}

/// Canonical Frobenius shape, with the scalars pinned down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonTag {
    SplitDiag { alpha: FieldElement, delta: FieldElement },
    Scalar { alpha: FieldElement },
    NonSemisimple { alpha: FieldElement },
}

impl CanonTag {
    pub fn f_class(&self) -> FClass {
        match self {
            CanonTag::SplitDiag { .. } => FClass::FSemisimpleNonScalar,
            CanonTag::Scalar { .. } => FClass::FScalar,
            CanonTag::NonSemisimple { .. } => FClass::NonFSemisimple,
        }
    }

    /// The canonical matrix this tag stands for.
    pub fn matrix(&self, f: usize) -> Mat2F {
        match self {
            CanonTag::SplitDiag { alpha, delta } => Mat2F::diag(
                VecF::new(vec![alpha.clone(); f]).unwrap(),
                VecF::new(vec![delta.clone(); f]).unwrap(),
            ),
            CanonTag::Scalar { alpha } => Mat2F::diag(
                VecF::new(vec![alpha.clone(); f]).unwrap(),
                VecF::new(vec![alpha.clone(); f]).unwrap(),
            ),
            CanonTag::NonSemisimple { alpha } => {
                let spec = alpha.spec();
                let mut m = Mat2F::diag(
                    VecF::new(vec![alpha.clone(); f]).unwrap(),
                    VecF::new(vec![alpha.clone(); f]).unwrap(),
                );
                m.c = VecF::ones(spec, f);
                m
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub tag: CanonTag,
    /// The base change P with P * frob * phi(P)^{-1} equal to the canonical
    /// matrix.
    pub basechange: Mat2F,
    pub canonical: Mat2F,
}

/// A rank two phi-module presented by explicit Frobenius and monodromy
/// matrices over E^f.
#[derive(Debug, Clone)]
pub struct PhiModule {
    pub ext: ExtensionSpec,
    pub frob: Mat2F,
    pub monodromy: Mat2F,
}

impl PhiModule {
    pub fn new(ext: ExtensionSpec, frob: Mat2F, monodromy: Mat2F) -> Result<PhiModule> {
        if frob.f() != ext.f || monodromy.f() != ext.f {
            return Err(Error::BadInput("matrix length does not match f".into()));
        }
        let m = PhiModule { ext, frob, monodromy };
        m.validate()?;
        Ok(m)
    }

    /// Structural invariants: invertible Frobenius, nilpotent monodromy,
    /// and the commutation rule N phi = p phi N, which in matrix terms reads
    /// [N][phi] = p [phi] phi([N]).
    pub fn validate(&self) -> Result<()> {
        if !self.frob.is_invertible() {
            return Err(Error::Validation("Frobenius matrix is not invertible".into()));
        }
        let n2 = self.monodromy.mul(&self.monodromy);
        if !n2.is_zero() {
            return Err(Error::Validation("monodromy is not square-zero".into()));
        }
        let spec = self.frob.spec();
        let p = FieldElement::from_rat(spec, Rat::from_integer(self.ext.p.into()));
        let lhs = self.monodromy.mul(&self.frob);
        let rhs = self.frob.mul(&self.monodromy.phi()).scale(&p);
        if lhs != rhs {
            return Err(Error::Validation("N phi != p phi N".into()));
        }
        Ok(())
    }

    /// Coordinate blocks of Nm_phi(frob); block 0 is P_0 P_1 ... P_{f-1}.
    pub fn phi_f_block(&self) -> Mat2E {
        self.frob.nm_phi().coord(0)
    }

    /// Classify phi^f.  FieldTooSmall when the eigenvalues of the block do
    /// not lie in E (and no witness rescues the square root).
    pub fn f_class(&self, witnesses: &[FieldElement]) -> Result<FClass> {
        let q0 = self.phi_f_block();
        if q0.is_scalar() {
            return Ok(FClass::FScalar);
        }
        let disc = discriminant(&q0);
        if disc.is_zero() {
            return Ok(FClass::NonFSemisimple);
        }
        disc.nth_root(2, witnesses)?;
        Ok(FClass::FSemisimpleNonScalar)
    }

    /// Compute a canonical form together with the exact base change.
    pub fn canonicalize(&self, witnesses: &[FieldElement]) -> Result<CanonicalForm> {
        let f = self.ext.f;
        let spec = self.frob.spec().clone();
        let q0 = self.phi_f_block();

        // chain U_0 = given, U_{i+1} = U_i P_i; then U frob phi(U)^{-1}
        // equals (Id,...,Id, U_0 Q_0 U_0^{-1}).
        let chain = |u0: Mat2E| -> Result<Mat2F> {
            let mut blocks = vec![u0];
            for i in 0..f - 1 {
                let next = blocks[i].mul(&self.frob.coord(i));
                blocks.push(next);
            }
            Ok(Mat2F::from_coords(&spec, &blocks))
        };

        if q0.is_scalar() {
            // F-scalar case
            let a = q0.a.clone();
            let u = chain(Mat2E::identity(&spec))?;
            let m1 = change_basis(&self.frob, &u)?;
            // the diagonal vector of m1 is (1,...,1,a)
            let abar = m1.a.clone();
            // scaling vector x_0 = 1, x_i = (a_0 ... a_{i-1}) / a
            let ainv = a.inv().map_err(|_| Error::Validation("singular phi^f".into()))?;
            let mut xs = vec![FieldElement::one(&spec)];
            let mut acc = FieldElement::one(&spec);
            for i in 0..f - 1 {
                acc = acc.mul(abar.get(i));
                xs.push(acc.mul(&ainv));
            }
            let xv = VecF::new(xs)?;
            let r = Mat2F::diag(xv.clone(), xv).mul(&u);
            let m2 = change_basis(&self.frob, &r)?;
            // lower-left correction of the claim: z_0 = 1,
            // z_i = 1 - zeta_i - ... - zeta_{f-1}
            let zeta = m2.c.clone();
            let mut zs = vec![FieldElement::one(&spec)];
            for i in 1..f {
                let mut z = FieldElement::one(&spec);
                for k in i..f {
                    z = z.sub(zeta.get(k));
                }
                zs.push(z);
            }
            let mut s_mat = Mat2F::identity(&spec, f);
            s_mat.c = VecF::new(zs)?;
            let qstar = s_mat.mul(&r);
            let m3 = change_basis(&self.frob, &qstar)?;
            if !m3.b.is_zero() || !m3.c.is_zero() || m3.a != m3.d {
                return Err(Error::Validation("scalar-case triangularisation failed".into()));
            }
            // scale the diagonal (a,1,...,1) down to the constant alpha1
            let alpha1 = a.nth_root(f as u32, witnesses)?;
            let target = VecF::new(vec![alpha1.clone(); f])?;
            let gamma = match solve_twisted(&m3.a, &target)? {
                TwistedSolution::Line(g) => g,
                TwistedSolution::OnlyZero => {
                    return Err(Error::Validation("norm mismatch scaling scalar form".into()))
                }
            };
            let w = Mat2F::diag(gamma.clone(), gamma);
            let p = w.mul(&qstar);
            let tag = CanonTag::Scalar { alpha: alpha1 };
            return finish(self, tag, p, f);
        }

        let disc = discriminant(&q0);
        if disc.is_zero() {
            // non-F-semisimple: repeated eigenvalue a = tr/2
            let half = FieldElement::from_rat(&spec, Rat::new(1.into(), 2.into()));
            let a = q0.trace().mul(&half);
            let mut n0 = q0.clone();
            n0.a = n0.a.sub(&a);
            n0.d = n0.d.sub(&a);
            // w with N0 w != 0
            let (w, n0w) = {
                let c1 = (n0.a.clone(), n0.c.clone());
                if !c1.0.is_zero() || !c1.1.is_zero() {
                    ((FieldElement::one(&spec), FieldElement::zero(&spec)), c1)
                } else {
                    (
                        (FieldElement::zero(&spec), FieldElement::one(&spec)),
                        (n0.b.clone(), n0.d.clone()),
                    )
                }
            };
            let v = Mat2E { a: w.0.clone(), b: n0w.0.clone(), c: w.1.clone(), d: n0w.1.clone() };
            let u0 = v.inv()?;
            let u = chain(u0)?;
            let m1 = change_basis(&self.frob, &u)?;
            // diag vectors equal (1,...,1,a), lower-left (0,...,0,1)
            let alpha1 = a.nth_root(f as u32, witnesses)?;
            let target = VecF::new(vec![alpha1.clone(); f])?;
            let gamma0 = match solve_twisted(&m1.a, &target)? {
                TwistedSolution::Line(g) => g,
                TwistedSolution::OnlyZero => {
                    return Err(Error::Validation("norm mismatch in non-semisimple case".into()))
                }
            };
            let w_mat = Mat2F::diag(gamma0.clone(), gamma0);
            let m2 = change_basis(&m1, &w_mat)?;
            let gamma_p = m2.c.clone();
            let s = gamma_p.tr_phi().get(0).clone();
            if s.is_zero() {
                return Err(Error::Validation(
                    "trace of the lower-left vector vanished in the non-semisimple case".into(),
                ));
            }
            // lower triangular fix [[s 1, 0], [q, f 1]] with
            // q_{i+1} = q_i + (f gamma_i - s)/alpha1; derived from the
            // intertwining equation coordinatewise (wrap-around is automatic)
            let fe = FieldElement::from_rat(&spec, rat_int(f as i64));
            let mut qs = vec![FieldElement::zero(&spec)];
            for i in 0..f - 1 {
                let step = fe.mul(gamma_p.get(i)).sub(&s).div(&alpha1)?;
                qs.push(qs[i].add(&step));
            }
            let mut fix = Mat2F::diag(
                VecF::new(vec![s.clone(); f])?,
                VecF::new(vec![fe.clone(); f])?,
            );
            fix.c = VecF::new(qs)?;
            let p = fix.mul(&w_mat).mul(&u);
            let tag = CanonTag::NonSemisimple { alpha: alpha1 };
            return finish(self, tag, p, f);
        }

        // split semisimple: two distinct eigenvalues in E (or FieldTooSmall)
        let sq = disc.nth_root(2, witnesses)?;
        let half = FieldElement::from_rat(&spec, Rat::new(1.into(), 2.into()));
        let ep = q0.trace().add(&sq).mul(&half);
        let em = q0.trace().sub(&sq).mul(&half);
        let vp = eigenvector(&q0, &ep)?;
        let vm = eigenvector(&q0, &em)?;
        let v = Mat2E { a: vp.0.clone(), b: vm.0.clone(), c: vp.1.clone(), d: vm.1.clone() };
        let u0 = v.inv().map_err(|_| Error::Validation("eigenvectors not independent".into()))?;
        let u = chain(u0)?;
        let m1 = change_basis(&self.frob, &u)?;
        let alpha1 = ep.nth_root(f as u32, witnesses)?;
        let delta1 = em.nth_root(f as u32, witnesses)?;
        let ta = VecF::new(vec![alpha1.clone(); f])?;
        let td = VecF::new(vec![delta1.clone(); f])?;
        let ga = match solve_twisted(&m1.a, &ta)? {
            TwistedSolution::Line(g) => g,
            _ => return Err(Error::Validation("norm mismatch (alpha)".into())),
        };
        let gd = match solve_twisted(&m1.d, &td)? {
            TwistedSolution::Line(g) => g,
            _ => return Err(Error::Validation("norm mismatch (delta)".into())),
        };
        let w = Mat2F::diag(ga, gd);
        let p = w.mul(&u);
        let tag = CanonTag::SplitDiag { alpha: alpha1, delta: delta1 };
        finish(self, tag, p, f)
    }
}

fn discriminant(q: &Mat2E) -> FieldElement {
    let tr = q.trace();
    let four = FieldElement::from_rat(&q.a.spec().clone(), rat_int(4));
    tr.mul(&tr).sub(&four.mul(&q.det()))
}

/// A nonzero eigenvector of q for eigenvalue a (a must be an eigenvalue).
fn eigenvector(q: &Mat2E, a: &FieldElement) -> Result<(FieldElement, FieldElement)> {
    // rows of q - aI are proportional; kill a nonzero row
    let r11 = q.a.sub(a);
    if !r11.is_zero() || !q.b.is_zero() {
        return Ok((q.b.clone(), r11.neg()));
    }
    let r22 = q.d.sub(a);
    if !q.c.is_zero() || !r22.is_zero() {
        return Ok((r22, q.c.neg()));
    }
    Err(Error::Validation("matrix is scalar, no preferred eigenvector".into()))
}

fn finish(module: &PhiModule, tag: CanonTag, p: Mat2F, f: usize) -> Result<CanonicalForm> {
    let canonical = tag.matrix(f);
    let check = change_basis(&module.frob, &p)?;
    if check != canonical {
        return Err(Error::Validation("canonicalisation postcondition failed".into()));
    }
    Ok(CanonicalForm { tag, basechange: p, canonical })
}

// ---------------------------------------------------------------------------
// monodromy
// ---------------------------------------------------------------------------

/// Shape of the nonzero monodromy operators compatible with a canonical
/// Frobenius, if any.
#[derive(Debug, Clone)]
pub enum MonodromyFamily {
    OnlyZero,
    /// N = [[0,0],[c n, 0]] for c in E, n = (1, zeta, ..., zeta^{f-1}).
    Lower { generator: VecF },
    /// N = [[0, c n],[0,0]] for c in E, n = (1, eps, ..., eps^{f-1}).
    Upper { generator: VecF },
}

/// Which nonzero N can live over the canonical Frobenius `tag`.
pub fn monodromy_candidates(tag: &CanonTag, ext: &ExtensionSpec) -> Result<MonodromyFamily> {
    let f = ext.f;
    match tag {
        CanonTag::SplitDiag { alpha, delta } => {
            let spec = alpha.spec();
            let p = FieldElement::from_rat(spec, Rat::from_integer(ext.p.into()));
            let af = alpha.pow(f as i64)?;
            let df = delta.pow(f as i64)?;
            let pf = p.pow(f as i64)?;
            if af == pf.mul(&df) {
                let zeta = alpha.div(&p.mul(delta))?;
                Ok(MonodromyFamily::Lower { generator: geom(spec, &zeta, f)? })
            } else if df == pf.mul(&af) {
                let eps = delta.div(&p.mul(alpha))?;
                Ok(MonodromyFamily::Upper { generator: geom(spec, &eps, f)? })
            } else {
                Ok(MonodromyFamily::OnlyZero)
            }
        }
        CanonTag::Scalar { .. } | CanonTag::NonSemisimple { .. } => Ok(MonodromyFamily::OnlyZero),
    }
}

fn geom(spec: &std::sync::Arc<crate::field::FieldSpec>, r: &FieldElement, f: usize) -> Result<VecF> {
    let mut entries = Vec::with_capacity(f);
    let mut acc = FieldElement::one(spec);
    for _ in 0..f {
        entries.push(acc.clone());
        acc = acc.mul(r);
    }
    VecF::new(entries)
}

/// Result of pushing a nonzero N into the normalised shape
/// N = [[0,0],[1,0]] with alpha = p * delta (lower convention).
#[derive(Debug, Clone)]
pub struct NormalizedMonodromy {
    pub tag: CanonTag,
    /// additional base change applied on top of the canonical basis
    pub basechange: Mat2F,
    pub monodromy: Mat2F,
}

/// Given a canonical SplitDiag module with nonzero N in one of the two
/// admissible families, produce the further base change realising
/// N = [[0,0],[1,0]] and alpha = p delta.
pub fn normalize_monodromy(
    tag: &CanonTag,
    n: &Mat2F,
    ext: &ExtensionSpec,
) -> Result<NormalizedMonodromy> {
    let f = ext.f;
    let spec = n.spec().clone();
    if n.is_zero() {
        return Ok(NormalizedMonodromy {
            tag: tag.clone(),
            basechange: Mat2F::identity(&spec, f),
            monodromy: n.clone(),
        });
    }
    let fam = monodromy_candidates(tag, ext)?;
    let (alpha, delta) = match tag {
        CanonTag::SplitDiag { alpha, delta } => (alpha.clone(), delta.clone()),
        _ => {
            return Err(Error::Validation(
                "nonzero monodromy over a scalar or non-semisimple Frobenius".into(),
            ))
        }
    };
    let p_el = FieldElement::from_rat(&spec, Rat::from_integer(ext.p.into()));
    match fam {
        MonodromyFamily::OnlyZero => Err(Error::Validation(
            "nonzero monodromy but alpha^f != p^{+-f} delta^f".into(),
        )),
        MonodromyFamily::Lower { generator } => {
            check_member(n, &generator, false)?;
            let nbar = n.c.clone();
            let w = Mat2F::diag(VecF::ones(&spec, f), nbar.invert()?);
            let new_n = w.mul(n).mul(&w.inv()?);
            let new_delta = alpha.div(&p_el)?;
            let tag2 = CanonTag::SplitDiag { alpha, delta: new_delta };
            finish_monodromy(tag2, w, new_n, f)
        }
        MonodromyFamily::Upper { generator } => {
            check_member(n, &generator, true)?;
            // swap the basis vectors, then we are in the lower family for
            // the swapped diagonal (delta, alpha)
            let mut swap = Mat2F::zero(&spec, f);
            swap.b = VecF::ones(&spec, f);
            swap.c = VecF::ones(&spec, f);
            let n_sw = swap.mul(n).mul(&swap.inv()?);
            let nbar = n_sw.c.clone();
            let w = Mat2F::diag(VecF::ones(&spec, f), nbar.invert()?);
            let new_n = w.mul(&n_sw).mul(&w.inv()?);
            let new_delta = delta.div(&p_el)?;
            let tag2 = CanonTag::SplitDiag { alpha: delta, delta: new_delta };
            finish_monodromy(tag2, w.mul(&swap), new_n, f)
        }
    }
}

fn check_member(n: &Mat2F, generator: &VecF, upper: bool) -> Result<()> {
    let (line, rest_zero) = if upper {
        (&n.b, n.a.is_zero() && n.c.is_zero() && n.d.is_zero())
    } else {
        (&n.c, n.a.is_zero() && n.b.is_zero() && n.d.is_zero())
    };
    if !rest_zero {
        return Err(Error::Validation("monodromy has entries outside the admissible corner".into()));
    }
    // line must be a scalar multiple of the generator (generator_0 = 1)
    let c = line.get(0).clone();
    if line != &generator.scale(&c) || c.is_zero() {
        return Err(Error::Validation(
            "monodromy vector is not on the admissible line".into(),
        ));
    }
    Ok(())
}

fn finish_monodromy(
    tag: CanonTag,
    basechange: Mat2F,
    n: Mat2F,
    f: usize,
) -> Result<NormalizedMonodromy> {
    let spec = n.spec().clone();
    let mut want = Mat2F::zero(&spec, f);
    want.c = VecF::ones(&spec, f);
    if n != want {
        return Err(Error::Validation("monodromy normalisation postcondition failed".into()));
    }
    Ok(NormalizedMonodromy { tag, basechange, monodromy: n })
}
