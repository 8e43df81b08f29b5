//! End-to-end acceptance suite.  Every computed quantity is cross-checked
//! against an independent oracle written from the definitions, not against
//! the library's own formulas.  All arithmetic is exact; there are no
//! tolerances.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use filtmod::admissibility::{
    check_wa, t_hodge, t_newton_full, Reducibility, SubmoduleDescriptor,
};
use filtmod::descent::{
    build_stable_filtration, check_g_stable, Character, FiltrationSeeds, GaloisActionData,
};
use filtmod::extension::{ExtensionSpec, GaloisGroupSpec};
use filtmod::field::{rat_int, FieldElement, FieldSpec, Int, Rat};
use filtmod::filtration::{
    rank_one_isomorphic, twist_shift_weights, FilteredModule, FiltrationData, FrobForm,
    RankOneModule, WeightData,
};
use filtmod::isoclass::{
    decide_isomorphic, family_iso_criterion, family_module, iso_fingerprint, verify_iso,
};
use filtmod::phimod::{CanonTag, PhiModule};
use filtmod::ring::{change_basis, solve_twisted, IndexSet, Mat2E, Mat2F, TwistedSolution, VecF, VecM};

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

fn rationals() -> Arc<FieldSpec> {
    FieldSpec::rationals(5).unwrap()
}

/// E = Q(sqrt p), certified.
fn quad(p: u64) -> Arc<FieldSpec> {
    FieldSpec::new(p, vec![Int::from(-(p as i64)), Int::from(0), Int::from(1)], true).unwrap()
}

fn fe(s: &Arc<FieldSpec>, n: i64) -> FieldElement {
    FieldElement::from_int(s, n)
}

fn trivial_grp(p: u64, f: usize, e: usize) -> GaloisGroupSpec {
    GaloisGroupSpec::trivial(ExtensionSpec::new(p, f, e, 1).unwrap()).unwrap()
}

const UNITS: [i64; 6] = [1, -1, 2, -2, 3, -3];

fn rand_unit(s: &Arc<FieldSpec>, rng: &mut StdRng) -> FieldElement {
    fe(s, UNITS[rng.gen_range(0..UNITS.len())])
}

/// unit times p^v, v in 0..=2
fn rand_scalar(s: &Arc<FieldSpec>, rng: &mut StdRng) -> FieldElement {
    let u = rand_unit(s, rng);
    let v = rng.gen_range(0..=2);
    u.mul(&fe(s, 5).pow(v).unwrap())
}

fn rand_invertible(s: &Arc<FieldSpec>, f: usize, rng: &mut StdRng) -> Mat2F {
    loop {
        let pick = |rng: &mut StdRng| {
            VecF::new((0..f).map(|_| fe(s, rng.gen_range(-2..=3))).collect()).unwrap()
        };
        let m = Mat2F::new(pick(rng), pick(rng), pick(rng), pick(rng)).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

fn cross_zero(ax: &FieldElement, ay: &FieldElement, bx: &FieldElement, by: &FieldElement) -> bool {
    ax.mul(by) == ay.mul(bx)
}

// ---------------------------------------------------------------------------
// 1. canonical Frobenius forms
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_canonical_frobenius_forms() {
    let mut rng = StdRng::seed_from_u64(101);
    let mut count = 0usize;
    for f in [1usize, 2, 3] {
        for use_quad in [false, true] {
            let s = if use_quad { quad(5) } else { rationals() };
            for _ in 0..100 {
                let mut scalar = rand_scalar(&s, &mut rng);
                if use_quad && rng.gen_bool(0.4) {
                    scalar = scalar.mul(&FieldElement::gen(&s));
                }
                let (tag, wits) = match rng.gen_range(0..3) {
                    0 => {
                        let (a, d) = loop {
                            let a = rand_scalar(&s, &mut rng);
                            let mut d = rand_scalar(&s, &mut rng);
                            if use_quad && rng.gen_bool(0.4) {
                                d = d.mul(&FieldElement::gen(&s));
                            }
                            if a.pow(f as i64).unwrap() != d.pow(f as i64).unwrap() {
                                break (a, d);
                            }
                        };
                        let disc_w = a.pow(f as i64).unwrap().sub(&d.pow(f as i64).unwrap());
                        (
                            CanonTag::SplitDiag { alpha: a.clone(), delta: d.clone() },
                            vec![a, d, disc_w],
                        )
                    }
                    1 => (CanonTag::Scalar { alpha: scalar.clone() }, vec![scalar]),
                    _ => (CanonTag::NonSemisimple { alpha: scalar.clone() }, vec![scalar]),
                };
                let canonical = tag.matrix(f);
                let p = rand_invertible(&s, f, &mut rng);
                // frob conjugate to the canonical shape: change_basis(frob, p)
                // recovers it, so canonicalize must succeed exactly
                let frob = p.inv().unwrap().mul(&canonical).mul(&p.phi());
                let ext = ExtensionSpec::new(5, f, 1, 1).unwrap();
                let pm = PhiModule::new(ext, frob.clone(), Mat2F::zero(&s, f)).unwrap();
                let form = pm.canonicalize(&wits).unwrap();
                // one of exactly the three shapes, pinned by the tag
                assert_eq!(form.canonical, form.tag.matrix(f));
                // base-change identity P [phi] phi(P)^-1 = canonical, exactly
                assert_eq!(change_basis(&frob, &form.basechange).unwrap(), form.canonical);
                assert!(form.basechange.is_invertible());
                count += 1;
            }
        }
    }
    println!("criterion 1 canonical forms: PASS ({count} conjugated matrices over two fields, f = 1,2,3)");
}

// ---------------------------------------------------------------------------
// 2. twisted equation vs. substitution and brute search
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_twisted_equation_oracle() {
    let mut rng = StdRng::seed_from_u64(202);
    let s = rationals();
    let mut lines = 0usize;
    let mut zeros = 0usize;
    for it in 0..200 {
        let f = 1 + it % 3;
        let alpha = VecF::new((0..f).map(|_| rand_scalar(&s, &mut rng)).collect()).unwrap();
        let beta = if rng.gen_bool(0.5) {
            // a cyclic rotation has the same coordinate product, so the
            // norms agree and a solution line must exist
            alpha.phi_shift(rng.gen_range(0..f as i64))
        } else {
            VecF::new((0..f).map(|_| rand_scalar(&s, &mut rng)).collect()).unwrap()
        };
        match solve_twisted(&alpha, &beta).unwrap() {
            TwistedSolution::Line(gamma) => {
                // direct substitution
                assert_eq!(alpha.mul(&gamma), beta.mul(&gamma.phi_shift(1)));
                assert!(gamma.is_unit());
                lines += 1;
            }
            TwistedSolution::OnlyZero => {
                assert_ne!(alpha.nm_phi(), beta.nm_phi());
                // brute search over a 5-element coefficient sample set
                let sample = [0i64, 1, -1, 2, 5];
                let mut idx = vec![0usize; f];
                loop {
                    let gamma = VecF::new(
                        idx.iter().map(|&i| fe(&s, sample[i])).collect(),
                    )
                    .unwrap();
                    if alpha.mul(&gamma) == beta.mul(&gamma.phi_shift(1)) {
                        assert!(gamma.is_zero(), "nonzero solution despite unequal norms");
                    }
                    let mut j = 0;
                    while j < f && idx[j] == sample.len() - 1 {
                        idx[j] = 0;
                        j += 1;
                    }
                    if j == f {
                        break;
                    }
                    idx[j] += 1;
                }
                zeros += 1;
            }
        }
    }
    assert!(lines >= 50 && zeros >= 50);
    println!("criterion 2 twisted equation: PASS (200 pairs; {lines} solution lines verified by substitution, {zeros} empty cases brute-forced)");
}

// ---------------------------------------------------------------------------
// 3. the G-stable filtration families over cyclic extensions
// ---------------------------------------------------------------------------

fn stable_filtration_families(
    s: &Arc<FieldSpec>,
    grp: &GaloisGroupSpec,
    chi: Character,
    psi: Character,
    sample: &[FieldElement],
) {
    let m = grp.ext.m();
    let act = GaloisActionData::DiagChars { chi: chi.clone(), psi: psi.clone() };
    let full = vec![IndexSet::full(m)];
    let seed = |sx: FieldElement, sy: FieldElement| {
        build_stable_filtration(grp, &act, &FiltrationSeeds { pairs: vec![(sx, sy)] }, s).unwrap()
    };
    // axis seeds give the two constant-axis families
    let (x, y) = seed(FieldElement::zero(s), FieldElement::one(s));
    assert!(x.is_zero());
    assert!(check_g_stable(grp, &act, &x, &y, &full));
    let (x, y) = seed(FieldElement::one(s), FieldElement::zero(s));
    assert!(y.is_zero());
    assert!(check_g_stable(grp, &act, &x, &y, &full));
    // seed (x0, 1): the line at position g(0) is x0 psi(g)/chi(g), a
    // geometric progression along the cyclic group
    let x0 = fe(s, 2);
    let (x, y) = seed(x0.clone(), FieldElement::one(s));
    assert!(check_g_stable(grp, &act, &x, &y, &full));
    for g in grp.elements() {
        let l = grp.pi[g][0];
        let expected = x0.mul(psi.value(g)).div(chi.value(g)).unwrap();
        assert_eq!(x.get(l).div(y.get(l)).unwrap(), expected);
    }
    // exhaustive: over a finite sample grid, a filtration is G-stable iff
    // it is an axis family or a fully nonzero geometric family; derived
    // directly from A(g)^{-1} = diag(1/chi, 1/psi) sending the line at 0
    // to the line at g(0)
    let n = sample.len();
    let total = n.pow(2 * m as u32);
    let mut checked = 0usize;
    for code in 0..total {
        let mut c = code;
        let mut xs = Vec::with_capacity(m);
        let mut ys = Vec::with_capacity(m);
        for _ in 0..m {
            xs.push(sample[c % n].clone());
            c /= n;
        }
        for _ in 0..m {
            ys.push(sample[c % n].clone());
            c /= n;
        }
        if (0..m).any(|i| xs[i].is_zero() && ys[i].is_zero()) {
            continue;
        }
        let x = VecM::new(xs.clone()).unwrap();
        let y = VecM::new(ys.clone()).unwrap();
        let got = check_g_stable(grp, &act, &x, &y, &full);
        let all_x_zero = xs.iter().all(FieldElement::is_zero);
        let all_y_zero = ys.iter().all(FieldElement::is_zero);
        let all_nonzero =
            xs.iter().all(|v| !v.is_zero()) && ys.iter().all(|v| !v.is_zero());
        let geometric = all_nonzero
            && grp.elements().all(|g| {
                let l = grp.pi[g][0];
                // x_l y_0 chi(g) = y_l x_0 psi(g)
                xs[l].mul(&ys[0]).mul(chi.value(g)) == ys[l].mul(&xs[0]).mul(psi.value(g))
            });
        let expected = all_x_zero || all_y_zero || geometric;
        assert_eq!(got, expected, "stability mismatch at code {code}");
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn criterion_3_stable_filtration_families() {
    // degree 2: E = Q, chi(tau) = -1, psi trivial
    let s = rationals();
    let grp2 = GaloisGroupSpec::unramified(5, 2, 1).unwrap();
    let chi2 = Character { values: vec![fe(&s, 1), fe(&s, -1)] };
    let psi2 = Character::trivial(&grp2, &s);
    let sample2: Vec<FieldElement> = [0i64, 1, -1, 2, -2].iter().map(|&n| fe(&s, n)).collect();
    stable_filtration_families(&s, &grp2, chi2, psi2, &sample2);
    // degree 3: E = Q(omega) with omega^2 + omega + 1 = 0, chi(tau) = omega
    let sw = FieldSpec::new(5, vec![Int::from(1), Int::from(1), Int::from(1)], true).unwrap();
    let omega = FieldElement::gen(&sw);
    let grp3 = GaloisGroupSpec::unramified(5, 3, 1).unwrap();
    let chi3 = Character {
        values: vec![FieldElement::one(&sw), omega.clone(), omega.mul(&omega)],
    };
    let psi3 = Character::trivial(&grp3, &sw);
    let sample3 = vec![
        FieldElement::zero(&sw),
        FieldElement::one(&sw),
        omega.clone(),
        omega.mul(&omega),
        fe(&sw, 2),
    ];
    stable_filtration_families(&sw, &grp3, chi3, psi3, &sample3);
    println!("criterion 3 stable filtration families: PASS (degree 2 and 3 cyclic cases, seed families reproduced, sample grids exhausted)");
}

// ---------------------------------------------------------------------------
// 4. Hodge numbers vs. dimension counting
// ---------------------------------------------------------------------------

/// Walk the filtration level by level and count dimensions per embedding,
/// straight from the definition of a labelled Hodge-Tate weight.
fn brute_hodge(filt: &FiltrationData, line: Option<(&FieldElement, &FieldElement)>) -> Rat {
    let mut total = 0i64;
    for s in 0..filt.m() {
        let k = filt.weights.k[s];
        let b = filt.weights.offset[s];
        for level in 1..=(b + k) {
            let dim = if level <= b {
                match line {
                    None => 2,
                    Some(_) => 1,
                }
            } else {
                match line {
                    None => 1,
                    Some((u, v)) => {
                        if cross_zero(u, v, filt.x.get(s), filt.y.get(s)) {
                            1
                        } else {
                            0
                        }
                    }
                }
            };
            total += dim as i64;
        }
    }
    rat_int(total)
}

#[test]
fn criterion_4_hodge_formulas_vs_dimension_count() {
    let mut rng = StdRng::seed_from_u64(404);
    let s = rationals();
    let one = FieldElement::one(&s);
    let zero = FieldElement::zero(&s);
    for it in 0..300 {
        let m = 1 + it % 6;
        let k: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=4)).collect();
        let b: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..m {
            loop {
                let x = fe(&s, rng.gen_range(-2..=3));
                let y = fe(&s, rng.gen_range(-2..=3));
                if !(x.is_zero() && y.is_zero()) {
                    xs.push(x);
                    ys.push(y);
                    break;
                }
            }
        }
        let filt = FiltrationData::new(
            WeightData::with_offset(k, b).unwrap(),
            VecM::new(xs).unwrap(),
            VecM::new(ys).unwrap(),
        )
        .unwrap();
        assert_eq!(
            t_hodge(&filt, &SubmoduleDescriptor::Full),
            brute_hodge(&filt, None)
        );
        assert_eq!(
            t_hodge(&filt, &SubmoduleDescriptor::D1),
            brute_hodge(&filt, Some((&one, &zero)))
        );
        assert_eq!(
            t_hodge(&filt, &SubmoduleDescriptor::D2),
            brute_hodge(&filt, Some((&zero, &one)))
        );
        for t in [1i64, 2, rng.gen_range(3..=7)] {
            let theta = fe(&s, t);
            assert_eq!(
                t_hodge(&filt, &SubmoduleDescriptor::DTheta(theta.clone())),
                brute_hodge(&filt, Some((&one, &theta)))
            );
        }
    }
    println!("criterion 4 Hodge numbers: PASS (300 random filtrations, full/axis/theta descriptors against per-embedding dimension counts)");
}

// ---------------------------------------------------------------------------
// 5. weak admissibility vs. brute-force line search
// ---------------------------------------------------------------------------

struct BruteLine {
    coords: Vec<(FieldElement, FieldElement)>,
    t_h: Rat,
    t_n: Rat,
    generic: bool,
}

fn same_line(a: &BruteLine, b: &BruteLine) -> bool {
    a.coords
        .iter()
        .zip(&b.coords)
        .all(|(u, v)| cross_zero(&u.0, &u.1, &v.0, &v.1))
}

/// Independent enumeration of the stable lines: candidate directions at
/// coordinate 0 come from the axes, from back-propagating every positive
/// filtration line, and from off-filtration sample directions (for the
/// scalar class, where every line is stable); each candidate is propagated
/// through the Frobenius blocks and kept only if it closes up.
fn brute_stable_lines(d: &FilteredModule) -> Vec<BruteLine> {
    let s = d.spec();
    let f = d.grp.ext.f;
    let e = d.grp.ext.e;
    let m = d.filt.m();
    let frob = d.frob.matrix();
    let blocks: Vec<Mat2E> = (0..f).map(|j| frob.coord(j)).collect();
    let mut cands: Vec<((FieldElement, FieldElement), bool)> = vec![
        ((FieldElement::one(&s), FieldElement::zero(&s)), false),
        ((FieldElement::zero(&s), FieldElement::one(&s)), false),
    ];
    for pos in 0..m {
        if d.filt.weights.k[pos] == 0 {
            continue;
        }
        // transport the filtration line at embedding pos back to
        // coordinate 0: w_j is proportional to M_j w_{j+1}
        let mut v = (d.filt.x.get(pos).clone(), d.filt.y.get(pos).clone());
        for j in (0..pos % f).rev() {
            v = blocks[j].apply(&v.0, &v.1);
        }
        cands.push((v, false));
    }
    // off-filtration sample directions; skip any that happen to meet a
    // filtration line so they witness the generic behaviour
    let mut found = 0;
    let mut t = 7i64;
    while found < 3 && t < 60 {
        let theta = fe(&s, t);
        let one = FieldElement::one(&s);
        let hits = (0..m).any(|pos| {
            d.filt.weights.k[pos] > 0
                && cross_zero(&one, &theta, d.filt.x.get(pos), d.filt.y.get(pos))
        });
        if !hits {
            cands.push(((one, theta), true));
            found += 1;
        }
        t += 1;
    }
    let mut out: Vec<BruteLine> = Vec::new();
    'cand: for (w0, generic) in cands {
        if w0.0.is_zero() && w0.1.is_zero() {
            continue;
        }
        let mut coords = vec![w0];
        for j in 0..f - 1 {
            let prev = coords.last().unwrap().clone();
            let inv = blocks[j].inv().unwrap();
            coords.push(inv.apply(&prev.0, &prev.1));
        }
        // closure: M_{f-1} w_0 must be proportional to w_{f-1}
        let back = blocks[f - 1].apply(&coords[0].0, &coords[0].1);
        if !cross_zero(&back.0, &back.1, &coords[f - 1].0, &coords[f - 1].1) {
            continue;
        }
        // monodromy N(u, v) = (0, u) preserves the line iff u = 0
        if d.n_nontrivial && coords.iter().any(|c| !c.0.is_zero()) {
            continue;
        }
        // eigenfactors M_j w_{j+1} = c_j w_j
        let mut prod = FieldElement::one(&s);
        for j in 0..f {
            let next = &coords[(j + 1) % f];
            let img = blocks[j].apply(&next.0, &next.1);
            let w = &coords[j];
            let c = if !w.0.is_zero() {
                img.0.div(&w.0).unwrap()
            } else {
                img.1.div(&w.1).unwrap()
            };
            if !cross_zero(&img.0, &img.1, &w.0, &w.1) {
                continue 'cand;
            }
            prod = prod.mul(&c);
        }
        let t_n = Rat::from(Int::from(e as i64)) * prod.vp().unwrap();
        let mut th = 0i64;
        for pos in 0..m {
            th += d.filt.weights.offset[pos] as i64;
            let w = &coords[pos % f];
            if cross_zero(&w.0, &w.1, d.filt.x.get(pos), d.filt.y.get(pos)) {
                th += d.filt.weights.k[pos] as i64;
            }
        }
        let line = BruteLine { coords, t_h: rat_int(th), t_n, generic };
        if !out.iter().any(|o| same_line(o, &line)) {
            out.push(line);
        }
    }
    out
}

fn random_c5_instance(rng: &mut StdRng) -> FilteredModule {
    let s = rationals();
    let f = 1 + rng.gen_range(0..2usize);
    let e = 1 + rng.gen_range(0..2usize);
    let grp = trivial_grp(5, f, e);
    let m = e * f;
    let class = rng.gen_range(0..4);
    let (frob, n_nontrivial) = match class {
        0 => (
            FrobForm::Diag {
                alpha: VecF::new((0..f).map(|_| rand_scalar(&s, rng)).collect()).unwrap(),
                delta: VecF::new((0..f).map(|_| rand_scalar(&s, rng)).collect()).unwrap(),
            },
            false,
        ),
        1 => {
            let a = rand_scalar(&s, rng);
            (
                FrobForm::Diag {
                    alpha: VecF::new(vec![a.clone(); f]).unwrap(),
                    delta: VecF::new(vec![a; f]).unwrap(),
                },
                false,
            )
        }
        2 => (FrobForm::NonSemisimple { alpha: rand_scalar(&s, rng), f }, false),
        _ => {
            let delta = rand_scalar(&s, rng);
            let alpha = delta.mul(&fe(&s, 5));
            (
                FrobForm::Diag {
                    alpha: VecF::new(vec![alpha; f]).unwrap(),
                    delta: VecF::new(vec![delta; f]).unwrap(),
                },
                true,
            )
        }
    };
    let weights: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=3)).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for _ in 0..m {
        // mix axis lines and generic lines
        let (x, y) = match rng.gen_range(0..5) {
            0 => (fe(&s, 1), fe(&s, 0)),
            1 => (fe(&s, 0), fe(&s, 1)),
            _ => (
                fe(&s, *[1, 1, 2, -1].get(rng.gen_range(0..4)).unwrap()),
                fe(&s, rng.gen_range(1..=3)),
            ),
        };
        xs.push(x);
        ys.push(y);
    }
    let filt = FiltrationData::new(
        WeightData::new(weights).unwrap(),
        VecM::new(xs).unwrap(),
        VecM::new(ys).unwrap(),
    )
    .unwrap();
    let act = GaloisActionData::trivial(&grp, &s);
    FilteredModule::new(grp, frob, n_nontrivial, act, filt).unwrap()
}

#[test]
fn criterion_5_weak_admissibility_oracle() {
    let mut rng = StdRng::seed_from_u64(505);
    let mut wa_count = 0usize;
    let mut not_wa = 0usize;
    let mut classes = [0usize; 4];
    let mut monodromy_wa = 0usize;
    for _ in 0..300 {
        let d = random_c5_instance(&mut rng);
        let report = check_wa(&d).unwrap();
        let lines = brute_stable_lines(&d);
        // brute verdict straight from the definition
        let th_full = filtmod::admissibility::t_hodge_full(&d);
        let tn_full = t_newton_full(&d).unwrap();
        let brute_wa =
            th_full == tn_full && lines.iter().all(|l| l.t_h <= l.t_n);
        assert_eq!(report.weakly_admissible, brute_wa, "verdict mismatch");
        if brute_wa {
            wa_count += 1;
            let eq: Vec<&BruteLine> = lines.iter().filter(|l| l.t_h == l.t_n).collect();
            let kind = match &report.reducibility {
                Some(Reducibility::Irreducible) => 0,
                Some(Reducibility::NonSplitReducible(_)) => 1,
                Some(Reducibility::SplitReducible(..)) => 2,
                None => panic!("weakly admissible without a reducibility verdict"),
            };
            let brute_kind = if eq.is_empty() {
                0
            } else if eq.len() == 1 && !eq[0].generic {
                1
            } else {
                2
            };
            assert_eq!(kind, brute_kind, "trichotomy mismatch");
            if d.n_nontrivial {
                // condition block for nontrivial monodromy:
                // 2 e f v_p(delta) + e f equals the weight total
                let (ef, delta_v) = match &d.frob {
                    FrobForm::Diag { delta, .. } => (
                        (d.grp.ext.e * d.grp.ext.f) as i64,
                        delta.get(0).vp().unwrap(),
                    ),
                    _ => unreachable!(),
                };
                let lhs = rat_int(2 * ef) * delta_v + rat_int(ef);
                assert_eq!(lhs, rat_int(d.filt.weights.total() as i64));
                monodromy_wa += 1;
            }
        } else {
            not_wa += 1;
        }
        let class = match (&d.frob, d.n_nontrivial) {
            (_, true) => 3,
            (FrobForm::NonSemisimple { .. }, _) => 2,
            (FrobForm::Diag { alpha, delta }, _) => {
                if alpha.product() == delta.product() {
                    1
                } else {
                    0
                }
            }
        };
        classes[class] += 1;
    }
    assert!(classes.iter().all(|&c| c > 10), "class coverage: {classes:?}");
    assert!(wa_count >= 15 && not_wa >= 15, "wa coverage {wa_count}/{not_wa}");
    assert!(monodromy_wa >= 1, "no weakly admissible nontrivial-monodromy instance seen");
    println!("criterion 5 weak admissibility: PASS (300 instances, classes {classes:?}, {wa_count} admissible / {not_wa} not, {monodromy_wa} with nonzero monodromy)");
}

// ---------------------------------------------------------------------------
// 6. the diagonal crystalline family
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_diagonal_family_suite() {
    let mut rng = StdRng::seed_from_u64(606);
    let mut members = 0usize;
    let unit_mod = |s: &Arc<FieldSpec>, p: u64, rng: &mut StdRng| loop {
        let n = [1i64, -1, 2, -2, 3, 5, 7][rng.gen_range(0..7)];
        if n.unsigned_abs() % p != 0 {
            return fe(s, n);
        }
    };
    for f in [2usize, 3] {
        for e in [1usize, 2] {
            for p in [2u64, 3, 5] {
                let s = if e == 1 { FieldSpec::rationals(p).unwrap() } else { quad(p) };
                let varpi = if e == 1 {
                    fe(&s, p as i64)
                } else {
                    FieldElement::gen(&s)
                };
                let mut weights = vec![1u32; e * f];
                weights[0] = 2; // total e f + 1, odd relative to a = 1
                for _ in 0..3 {
                    let lambda: Vec<FieldElement> =
                        (0..f - 1).map(|_| unit_mod(&s, p, &mut rng)).collect();
                    let mu: Vec<FieldElement> =
                        (0..f - 1).map(|_| unit_mod(&s, p, &mut rng)).collect();
                    let d = family_module(&s, f, e, weights.clone(), &lambda, &mu, &varpi, 1)
                        .unwrap();
                    let report = check_wa(&d).unwrap();
                    assert!(report.weakly_admissible, "family member not admissible");
                    assert_eq!(report.reducibility, Some(Reducibility::Irreducible));
                    members += 1;
                }
            }
        }
    }
    // 10 parameter tuples at f = 2, e = 1, p = 5: all 45 pairs decided and
    // compared with the closed-form criterion
    let s = rationals();
    let varpi = fe(&s, 5);
    let weights = vec![2u32, 1];
    let pool: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = (0..10)
        .map(|i| {
            // include repeats of the ratio lambda/mu so both verdicts occur
            let l = fe(&s, [1, 2, 3, 2, 6, -1, 4, -2, 1, 3][i]);
            let m = fe(&s, [1, 1, 1, 2, 3, 1, 2, -2, 2, -1][i]);
            (vec![l], vec![m])
        })
        .collect();
    let modules: Vec<FilteredModule> = pool
        .iter()
        .map(|(l, m)| family_module(&s, 2, 1, weights.clone(), l, m, &varpi, 1).unwrap())
        .collect();
    let mut agree_true = 0usize;
    let mut agree_false = 0usize;
    for i in 0..10 {
        for j in (i + 1)..10 {
            let criterion =
                family_iso_criterion(&pool[i].0, &pool[i].1, &pool[j].0, &pool[j].1);
            let decision = decide_isomorphic(&modules[i], &modules[j]).unwrap();
            assert_eq!(decision.is_some(), criterion, "pair ({i},{j})");
            if let Some(q) = &decision {
                assert!(verify_iso(&modules[i], &modules[j], q).unwrap());
                agree_true += 1;
            } else {
                agree_false += 1;
            }
        }
    }
    assert!(agree_true >= 3 && agree_false >= 3);
    // representatives D(1, mu) with distinct mu are pairwise non-isomorphic
    let ones = vec![FieldElement::one(&s)];
    let reps: Vec<FilteredModule> = [1i64, 2, 3, -1, 7]
        .iter()
        .map(|&m| {
            family_module(&s, 2, 1, weights.clone(), &ones, &[fe(&s, m)], &varpi, 1).unwrap()
        })
        .collect();
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            assert!(decide_isomorphic(&reps[i], &reps[j]).unwrap().is_none());
        }
    }
    println!("criterion 6 diagonal family: PASS ({members} members admissible+irreducible over 12 (f,e,p) combos; 45 pairs ({agree_true} isomorphic / {agree_false} not) match the closed form; 5 distinct representatives pairwise distinct)");
}

// ---------------------------------------------------------------------------
// 7. isomorphism decision: soundness and completeness sampling
// ---------------------------------------------------------------------------

fn random_c7_instance(rng: &mut StdRng, allow_nonss: bool) -> FilteredModule {
    let s = rationals();
    let f = 1 + rng.gen_range(0..3usize);
    let grp = trivial_grp(5, f, 1);
    let class = if allow_nonss { rng.gen_range(0..3) } else { rng.gen_range(0..2) };
    let (frob, n_nontrivial) = match class {
        0 => (
            FrobForm::Diag {
                alpha: VecF::new((0..f).map(|_| rand_scalar(&s, rng)).collect()).unwrap(),
                delta: VecF::new((0..f).map(|_| rand_scalar(&s, rng)).collect()).unwrap(),
            },
            false,
        ),
        1 => {
            let delta = rand_scalar(&s, rng);
            let alpha = delta.mul(&fe(&s, 5));
            (
                FrobForm::Diag {
                    alpha: VecF::new(vec![alpha; f]).unwrap(),
                    delta: VecF::new(vec![delta; f]).unwrap(),
                },
                true,
            )
        }
        _ => (FrobForm::NonSemisimple { alpha: rand_scalar(&s, rng), f }, false),
    };
    let weights: Vec<u32> = (0..f).map(|_| rng.gen_range(0..=3)).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for _ in 0..f {
        let (x, y) = match rng.gen_range(0..4) {
            0 => (fe(&s, 1), fe(&s, 0)),
            1 => (fe(&s, 0), fe(&s, 1)),
            _ => (fe(&s, 1), fe(&s, rng.gen_range(1..=3))),
        };
        xs.push(x);
        ys.push(y);
    }
    let filt = FiltrationData::new(
        WeightData::new(weights).unwrap(),
        VecM::new(xs).unwrap(),
        VecM::new(ys).unwrap(),
    )
    .unwrap();
    let act = GaloisActionData::trivial(&grp, &s);
    FilteredModule::new(grp, frob, n_nontrivial, act, filt).unwrap()
}

#[test]
fn criterion_7_isomorphism_sampling() {
    let mut rng = StdRng::seed_from_u64(707);
    let s = rationals();
    // soundness: transformed copies must come back isomorphic with a
    // verified witness
    for it in 0..200 {
        let d1 = random_c7_instance(&mut rng, true);
        let f = d1.grp.ext.f;
        let diag_n0 = matches!(&d1.frob, FrobForm::Diag { .. }) && !d1.n_nontrivial;
        let transform = match (it % 3, diag_n0) {
            (1, true) => 1, // diagonal base change
            (2, true) => 2, // swap the two basis lines
            _ => 0,         // rescale the filtration lines
        };
        let d2 = match transform {
            0 => {
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for pos in 0..f {
                    let t = fe(&s, [1, 2, -1, 3][rng.gen_range(0..4)]);
                    xs.push(d1.filt.x.get(pos).mul(&t));
                    ys.push(d1.filt.y.get(pos).mul(&t));
                }
                let filt = FiltrationData::new(
                    d1.filt.weights.clone(),
                    VecM::new(xs).unwrap(),
                    VecM::new(ys).unwrap(),
                )
                .unwrap();
                FilteredModule::new(
                    d1.grp.clone(),
                    d1.frob.clone(),
                    d1.n_nontrivial,
                    d1.action.clone(),
                    filt,
                )
                .unwrap()
            }
            1 => {
                let c = VecF::new((0..f).map(|_| rand_unit(&s, &mut rng)).collect()).unwrap();
                let dd = VecF::new((0..f).map(|_| rand_unit(&s, &mut rng)).collect()).unwrap();
                let q = Mat2F::diag(c.clone(), dd.clone());
                let moved = q.mul(&d1.frob.matrix()).mul(&q.phi().inv().unwrap());
                let frob = FrobForm::Diag { alpha: moved.a.clone(), delta: moved.d.clone() };
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for pos in 0..f {
                    xs.push(d1.filt.x.get(pos).mul(c.get(pos % f)));
                    ys.push(d1.filt.y.get(pos).mul(dd.get(pos % f)));
                }
                let filt = FiltrationData::new(
                    d1.filt.weights.clone(),
                    VecM::new(xs).unwrap(),
                    VecM::new(ys).unwrap(),
                )
                .unwrap();
                FilteredModule::new(
                    d1.grp.clone(),
                    frob,
                    false,
                    d1.action.clone(),
                    filt,
                )
                .unwrap()
            }
            _ => {
                let (alpha, delta) = match &d1.frob {
                    FrobForm::Diag { alpha, delta } => (alpha.clone(), delta.clone()),
                    _ => unreachable!(),
                };
                let frob = FrobForm::Diag { alpha: delta, delta: alpha };
                let filt = FiltrationData::new(
                    d1.filt.weights.clone(),
                    d1.filt.y.clone(),
                    d1.filt.x.clone(),
                )
                .unwrap();
                FilteredModule::new(
                    d1.grp.clone(),
                    frob,
                    false,
                    d1.action.clone(),
                    filt,
                )
                .unwrap()
            }
        };
        let q = decide_isomorphic(&d1, &d2)
            .unwrap()
            .unwrap_or_else(|| panic!("transformed copy not recognized (transform {transform}, f {f})"));
        assert!(verify_iso(&d1, &d2, &q).unwrap());
        assert_eq!(iso_fingerprint(&d1).unwrap(), iso_fingerprint(&d2).unwrap());
    }
    // completeness sampling: fingerprint-distinct pairs must be rejected
    for it in 0..200 {
        let d1 = random_c7_instance(&mut rng, true);
        let f = d1.grp.ext.f;
        let d2 = if it % 2 == 0 {
            // different weight profile
            let mut k = d1.filt.weights.k.clone();
            k[0] += 1;
            let filt = FiltrationData::new(
                WeightData::new(k).unwrap(),
                d1.filt.x.clone(),
                d1.filt.y.clone(),
            )
            .unwrap();
            FilteredModule::new(
                d1.grp.clone(),
                d1.frob.clone(),
                d1.n_nontrivial,
                d1.action.clone(),
                filt,
            )
            .unwrap()
        } else {
            // scale the Frobenius by p: the phi^f characteristic data moves
            let five = fe(&s, 5);
            let frob = match &d1.frob {
                FrobForm::Diag { alpha, delta } => FrobForm::Diag {
                    alpha: alpha.scale(&five),
                    delta: delta.scale(&five),
                },
                FrobForm::NonSemisimple { alpha, f } => {
                    FrobForm::NonSemisimple { alpha: alpha.mul(&five), f: *f }
                }
            };
            FilteredModule::new(
                d1.grp.clone(),
                frob,
                d1.n_nontrivial,
                d1.action.clone(),
                d1.filt.clone(),
            )
            .unwrap()
        };
        assert_ne!(iso_fingerprint(&d1).unwrap(), iso_fingerprint(&d2).unwrap());
        assert!(
            decide_isomorphic(&d1, &d2).unwrap().is_none(),
            "fingerprint-distinct pair declared isomorphic (f {f})"
        );
    }
    println!("criterion 7 isomorphism sampling: PASS (200 transformed pairs recognized with verified witnesses, 200 fingerprint-distinct pairs rejected)");
}

// ---------------------------------------------------------------------------
// 8. rank one modules and twisting
// ---------------------------------------------------------------------------

/// Direct search for a 1x1 intertwiner q over a sample grid: q must
/// satisfy u_a q_j = u_b q_{j+1} at every coordinate and
/// chi_a(g) q = chi_b(g) (g q) for every g.  Solutions are geometric in
/// u_a/u_b, which is a root of unity in Q, so the +-1/+-2 grid is complete
/// for unit parameters drawn from the rationals.
fn brute_rank_one_iso(a: &RankOneModule, b: &RankOneModule) -> bool {
    if a.varpi != b.varpi || a.weights != b.weights {
        return false;
    }
    let f = a.grp.ext.f;
    let s = a.u.spec().clone();
    let vals: [i64; 4] = [1, -1, 2, -2];
    let mut idx = vec![0usize; f];
    loop {
        let q: Vec<FieldElement> = idx.iter().map(|&i| fe(&s, vals[i])).collect();
        let frob_ok = (0..f).all(|j| a.u.mul(&q[j]) == b.u.mul(&q[(j + 1) % f]));
        let galois_ok = a.grp.elements().all(|g| {
            let n = a.grp.n[g];
            (0..f).all(|j| {
                a.chi.value(g).mul(&q[j]) == b.chi.value(g).mul(&q[(j + n) % f])
            })
        });
        if frob_ok && galois_ok {
            return true;
        }
        let mut j = 0;
        while j < f && idx[j] == vals.len() - 1 {
            idx[j] = 0;
            j += 1;
        }
        if j == f {
            return false;
        }
        idx[j] += 1;
    }
}

#[test]
fn criterion_8_rank_one_and_twists() {
    let mut rng = StdRng::seed_from_u64(808);
    let s = rationals();
    let mut agree_true = 0usize;
    let mut agree_false = 0usize;
    for it in 0..100 {
        let f = 1 + it % 3;
        let grp = GaloisGroupSpec::unramified(5, f, 1).unwrap();
        let character = |rng: &mut StdRng| {
            if f % 2 == 0 && rng.gen_bool(0.5) {
                Character {
                    values: (0..f).map(|j| fe(&s, if j % 2 == 0 { 1 } else { -1 })).collect(),
                }
            } else {
                Character::trivial(&grp, &s)
            }
        };
        let varpi = fe(&s, 5).pow(rng.gen_range(0..=2)).unwrap();
        let weights: Vec<i64> = (0..f).map(|_| rng.gen_range(-1..=2)).collect();
        let a = RankOneModule::new(
            grp.clone(),
            rand_unit(&s, &mut rng),
            varpi.clone(),
            weights.clone(),
            character(&mut rng),
        )
        .unwrap();
        let b = RankOneModule::new(
            grp.clone(),
            rand_unit(&s, &mut rng),
            varpi,
            weights,
            character(&mut rng),
        )
        .unwrap();
        let got = rank_one_isomorphic(&a, &b).unwrap();
        assert_eq!(got, brute_rank_one_iso(&a, &b));
        if got {
            agree_true += 1;
        } else {
            agree_false += 1;
        }
    }
    assert!(agree_true >= 5 && agree_false >= 5);
    // twisting: the admissibility verdict survives and both invariants
    // shift by twice the rank-one weight total
    let mut shifted = 0usize;
    for _ in 0..100 {
        let d = random_c5_instance(&mut rng);
        let grp = d.grp.clone();
        let (e, f) = (grp.ext.e, grp.ext.f);
        let m = e * f;
        let t = rng.gen_range(0..=1i64);
        let varpi = fe(&s, 5).pow(t).unwrap();
        // admissible rank one: weight total = e f v(varpi)
        let mut weights = vec![0i64; m];
        let mut left = (e * f) as i64 * t;
        let mut pos = 0;
        while left > 0 {
            weights[pos % m] += 1;
            left -= 1;
            pos += 1;
        }
        let r = RankOneModule::new(
            grp,
            rand_unit(&s, &mut rng),
            varpi,
            weights.clone(),
            Character::trivial(&d.grp, &s),
        )
        .unwrap();
        assert!(r.check_wa().unwrap());
        let dt = twist_shift_weights(&d, &r).unwrap();
        let before = check_wa(&d).unwrap();
        let after = check_wa(&dt).unwrap();
        assert_eq!(before.weakly_admissible, after.weakly_admissible);
        let shift = rat_int(2 * weights.iter().sum::<i64>());
        assert_eq!(after.t_newton.clone() - before.t_newton.clone(), shift);
        assert_eq!(after.t_hodge.clone() - before.t_hodge.clone(), shift);
        if shift != rat_int(0) {
            shifted += 1;
        }
    }
    assert!(shifted >= 20);
    println!("criterion 8 rank one: PASS (100 isomorphism decisions ({agree_true} yes / {agree_false} no) match the intertwiner search; 100 twists preserve admissibility with matching invariant shifts)");
}

// ---------------------------------------------------------------------------
// 9. unit-trace reducibility and the two-line overlap dichotomy
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_unit_trace_and_overlap() {
    let mut rng = StdRng::seed_from_u64(909);
    // a unit trace of phi^f with positive weight forces a unit eigenvalue,
    // whose line realizes equality, so the module cannot be irreducible
    for it in 0..50 {
        let s = rationals();
        let f = 1 + it % 2;
        let grp = trivial_grp(5, f, 1);
        let k: u32 = rng.gen_range(1..=3);
        let alpha = VecF::new((0..f).map(|_| rand_unit(&s, &mut rng)).collect()).unwrap();
        let mut dvec: Vec<FieldElement> = (0..f).map(|_| rand_unit(&s, &mut rng)).collect();
        dvec[0] = dvec[0].mul(&fe(&s, 5).pow((k * f as u32) as i64).unwrap());
        let delta = VecF::new(dvec).unwrap();
        let frob = FrobForm::Diag { alpha: alpha.clone(), delta };
        // unit trace of phi^f
        let (na, nd) = frob.nm_pair().unwrap();
        assert_eq!(na.add(&nd).vp().unwrap(), rat_int(0));
        let weights = vec![k; f];
        let filt = FiltrationData::new(
            WeightData::new(weights).unwrap(),
            VecM::ones(&s, f),
            VecM::new((0..f).map(|_| fe(&s, rng.gen_range(1..=3))).collect()).unwrap(),
        )
        .unwrap();
        let act = GaloisActionData::trivial(&grp, &s);
        let d = FilteredModule::new(grp, frob, false, act, filt).unwrap();
        let report = check_wa(&d).unwrap();
        assert!(report.weakly_admissible);
        assert!(report.weakly_admissible && report.reducibility != Some(Reducibility::Irreducible));
    }
    // overlap dichotomy at f = 2: with both filtration vectors fully
    // nonzero the diagonal family gives >= 2 non-isomorphic admissible
    // modules sharing the phi^2 characteristic polynomial; with overlap
    // <= 1 the same-characteristic admissible modules collapse to one class
    let s = rationals();
    let varpi = fe(&s, 5);
    let weights = vec![2u32, 1];
    let fam: Vec<FilteredModule> = [2i64, 3, 4]
        .iter()
        .map(|&l| {
            family_module(&s, 2, 1, weights.clone(), &[fe(&s, l)], &[fe(&s, 1)], &varpi, 1)
                .unwrap()
        })
        .collect();
    for d in &fam {
        let jx = d.filt.j_x();
        let jy = d.filt.j_y();
        assert!(jx.intersect(&jy).len() > 1);
        assert!(check_wa(d).unwrap().weakly_admissible);
    }
    let fp0 = iso_fingerprint(&fam[0]).unwrap();
    for d in &fam[1..] {
        // same characteristic data of phi^2 ...
        let fp = iso_fingerprint(d).unwrap();
        assert_eq!(fp.nm_trace, fp0.nm_trace);
        assert_eq!(fp.nm_det, fp0.nm_det);
    }
    // ... yet pairwise non-isomorphic
    for i in 0..fam.len() {
        for j in (i + 1)..fam.len() {
            assert!(decide_isomorphic(&fam[i], &fam[j]).unwrap().is_none());
        }
    }
    // overlap one: same Frobenius, one axis coordinate, varying the free
    // line; all weakly admissible with the same characteristic polynomial
    // and all isomorphic
    let grp = trivial_grp(5, 2, 1);
    let alpha = VecF::new(vec![fe(&s, 1), fe(&s, 1)]).unwrap();
    let delta = VecF::new(vec![fe(&s, 25), fe(&s, 1)]).unwrap();
    let small: Vec<FilteredModule> = [1i64, 2, 3]
        .iter()
        .map(|&y0| {
            let frob = FrobForm::Diag { alpha: alpha.clone(), delta: delta.clone() };
            let filt = FiltrationData::new(
                WeightData::new(vec![2, 0]).unwrap(),
                VecM::new(vec![fe(&s, 1), fe(&s, 1)]).unwrap(),
                VecM::new(vec![fe(&s, y0), fe(&s, 0)]).unwrap(),
            )
            .unwrap();
            let act = GaloisActionData::trivial(&grp, &s);
            FilteredModule::new(grp.clone(), frob, false, act, filt).unwrap()
        })
        .collect();
    for d in &small {
        assert!(d.filt.j_x().intersect(&d.filt.j_y()).len() <= 1);
        assert!(check_wa(d).unwrap().weakly_admissible);
    }
    for i in 0..small.len() {
        for j in (i + 1)..small.len() {
            let q = decide_isomorphic(&small[i], &small[j]).unwrap().unwrap();
            assert!(verify_iso(&small[i], &small[j], &q).unwrap());
        }
    }
    println!("criterion 9 unit trace and overlap: PASS (50 unit-trace instances reducible; overlap 2 gives distinct classes with one characteristic polynomial, overlap 1 collapses to a single class)");
}
