//! JSON ingest and emit for every document the command line handles.
//!
//! All rationals serialize as "num/den" strings and field elements as
//! arrays of those, constant coefficient first.  Emission goes through
//! serde_json's default map type, which keeps keys sorted, so identical
//! inputs always produce identical bytes.

use std::str::FromStr;
use std::sync::Arc;

use num::BigInt;
use serde_json::{json, Map, Value};

use crate::admissibility::{GaloisType, Reducibility, SubmoduleDescriptor, WaReport};
use crate::descent::{Character, GaloisActionData};
use crate::error::{Error, Result};
use crate::extension::{ExtensionSpec, GaloisGroupSpec};
use crate::field::{FieldElement, FieldSpec, Int, Rat};
use crate::filtration::{
    FilteredModule, FiltrationData, FrobForm, RankOneModule, WeightData,
};
use crate::phimod::{normalize_monodromy, CanonTag, PhiModule};
use crate::ring::{Mat2E, Mat2F, VecF, VecM};

fn bad(msg: impl Into<String>) -> Error {
    Error::BadInput(msg.into())
}

// ---------------------------------------------------------------------------
// scalars
// ---------------------------------------------------------------------------

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    let s = v.as_str().ok_or_else(|| bad("rational must be a \"num/den\" string"))?;
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num.trim()).map_err(|_| bad(format!("bad numerator in {s:?}")))?;
    let d = BigInt::from_str(den.trim()).map_err(|_| bad(format!("bad denominator in {s:?}")))?;
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

pub fn elem_to_json(e: &FieldElement) -> Value {
    Value::Array(e.coeffs().iter().map(rat_to_json).collect())
}

pub fn elem_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<FieldElement> {
    let arr = v.as_array().ok_or_else(|| bad("field element must be an array"))?;
    let coeffs = arr.iter().map(rat_from_json).collect::<Result<Vec<_>>>()?;
    FieldElement::from_coeffs(spec, coeffs)
}

fn elems_to_json<'a>(it: impl Iterator<Item = &'a FieldElement>) -> Value {
    Value::Array(it.map(elem_to_json).collect())
}

fn elems_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<Vec<FieldElement>> {
    v.as_array()
        .ok_or_else(|| bad("expected an array of field elements"))?
        .iter()
        .map(|e| elem_from_json(spec, e))
        .collect()
}

pub fn vecf_to_json(v: &VecF) -> Value {
    elems_to_json(v.entries().iter())
}

pub fn vecf_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<VecF> {
    VecF::new(elems_from_json(spec, v)?)
}

pub fn vecm_to_json(v: &VecM) -> Value {
    elems_to_json(v.entries().iter())
}

pub fn vecm_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<VecM> {
    VecM::new(elems_from_json(spec, v)?)
}

pub fn mat2f_to_json(m: &Mat2F) -> Value {
    json!({
        "a": vecf_to_json(&m.a),
        "b": vecf_to_json(&m.b),
        "c": vecf_to_json(&m.c),
        "d": vecf_to_json(&m.d),
    })
}

pub fn mat2f_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<Mat2F> {
    let get = |k: &str| -> Result<VecF> {
        vecf_from_json(spec, v.get(k).ok_or_else(|| bad(format!("matrix missing \"{k}\"")))?)
    };
    Mat2F::new(get("a")?, get("b")?, get("c")?, get("d")?)
}

fn mat2e_to_json(m: &Mat2E) -> Value {
    json!({
        "a": elem_to_json(&m.a),
        "b": elem_to_json(&m.b),
        "c": elem_to_json(&m.c),
        "d": elem_to_json(&m.d),
    })
}

fn mat2e_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<Mat2E> {
    let get = |k: &str| -> Result<FieldElement> {
        elem_from_json(spec, v.get(k).ok_or_else(|| bad(format!("matrix missing \"{k}\"")))?)
    };
    Ok(Mat2E { a: get("a")?, b: get("b")?, c: get("c")?, d: get("d")? })
}

// ---------------------------------------------------------------------------
// field / extension / group
// ---------------------------------------------------------------------------

pub fn field_to_json(spec: &FieldSpec) -> Value {
    json!({
        "p": spec.p(),
        "min_poly": spec.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "certified": spec.certified(),
    })
}

pub fn field_from_json(v: &Value) -> Result<Arc<FieldSpec>> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("field: missing integer \"p\""))?;
    let poly = v
        .get("min_poly")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("field: missing \"min_poly\" array"))?
        .iter()
        .map(|c| match c {
            Value::String(s) => Int::from_str(s).map_err(|_| bad("bad min_poly coefficient")),
            Value::Number(n) => n
                .as_i64()
                .map(Int::from)
                .ok_or_else(|| bad("bad min_poly coefficient")),
            _ => Err(bad("bad min_poly coefficient")),
        })
        .collect::<Result<Vec<_>>>()?;
    let attested = v.get("certified").and_then(Value::as_bool).unwrap_or(false);
    FieldSpec::new(p, poly, attested)
}

pub fn group_to_json(grp: &GaloisGroupSpec) -> Value {
    json!({
        "p": grp.ext.p,
        "f": grp.ext.f,
        "e": grp.ext.e,
        "nu": grp.ext.nu,
        "elements": grp.names,
        "mult": grp.mult,
        "pi": grp.pi,
        "n": grp.n,
    })
}

pub fn group_from_json(v: &Value) -> Result<GaloisGroupSpec> {
    let int = |k: &str| -> Result<u64> {
        v.get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| bad(format!("group: missing integer \"{k}\"")))
    };
    let ext = ExtensionSpec::new(
        int("p")?,
        int("f")? as usize,
        int("e")? as usize,
        int("nu")? as usize,
    )?;
    let names = v
        .get("elements")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("group: missing \"elements\""))?
        .iter()
        .map(|n| n.as_str().map(String::from).ok_or_else(|| bad("group element names must be strings")))
        .collect::<Result<Vec<_>>>()?;
    let table = |k: &str| -> Result<Vec<Vec<usize>>> {
        v.get(k)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("group: missing \"{k}\"")))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad(format!("group \"{k}\": rows must be arrays")))?
                    .iter()
                    .map(|x| {
                        x.as_u64()
                            .map(|u| u as usize)
                            .ok_or_else(|| bad(format!("group \"{k}\": entries must be integers")))
                    })
                    .collect()
            })
            .collect()
    };
    let n = v
        .get("n")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("group: missing \"n\""))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|u| u as usize)
                .ok_or_else(|| bad("group \"n\": entries must be integers"))
        })
        .collect::<Result<Vec<_>>>()?;
    let grp = GaloisGroupSpec {
        ext,
        names,
        mult: table("mult")?,
        pi: table("pi")?,
        n,
    };
    grp.validate().into_result()?;
    Ok(grp)
}

// ---------------------------------------------------------------------------
// module pieces
// ---------------------------------------------------------------------------

pub fn frob_to_json(frob: &FrobForm) -> Value {
    match frob {
        FrobForm::Diag { alpha, delta } => json!({
            "form": "diag",
            "alpha": vecf_to_json(alpha),
            "delta": vecf_to_json(delta),
        }),
        FrobForm::NonSemisimple { alpha, f } => json!({
            "form": "non_semisimple",
            "alpha": elem_to_json(alpha),
            "f": f,
        }),
    }
}

pub fn frob_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<FrobForm> {
    match v.get("form").and_then(Value::as_str) {
        Some("diag") => Ok(FrobForm::Diag {
            alpha: vecf_from_json(spec, v.get("alpha").ok_or_else(|| bad("frobenius: missing \"alpha\""))?)?,
            delta: vecf_from_json(spec, v.get("delta").ok_or_else(|| bad("frobenius: missing \"delta\""))?)?,
        }),
        Some("non_semisimple") => Ok(FrobForm::NonSemisimple {
            alpha: elem_from_json(spec, v.get("alpha").ok_or_else(|| bad("frobenius: missing \"alpha\""))?)?,
            f: v.get("f")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("frobenius: missing integer \"f\""))? as usize,
        }),
        _ => Err(bad("frobenius: \"form\" must be \"diag\" or \"non_semisimple\"")),
    }
}

pub fn action_to_json(act: &GaloisActionData) -> Value {
    match act {
        GaloisActionData::DiagChars { chi, psi } => json!({
            "variant": "diag_chars",
            "chi": elems_to_json(chi.values.iter()),
            "psi": elems_to_json(psi.values.iter()),
        }),
        GaloisActionData::Homo { lambda } => json!({
            "variant": "homo",
            "lambda": lambda.iter().map(mat2e_to_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn action_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<GaloisActionData> {
    match v.get("variant").and_then(Value::as_str) {
        Some("diag_chars") => {
            let chi = elems_from_json(spec, v.get("chi").ok_or_else(|| bad("action: missing \"chi\""))?)?;
            let psi = elems_from_json(spec, v.get("psi").ok_or_else(|| bad("action: missing \"psi\""))?)?;
            Ok(GaloisActionData::DiagChars {
                chi: Character { values: chi },
                psi: Character { values: psi },
            })
        }
        Some("homo") => {
            let lambda = v
                .get("lambda")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("action: missing \"lambda\""))?
                .iter()
                .map(|m| mat2e_from_json(spec, m))
                .collect::<Result<Vec<_>>>()?;
            Ok(GaloisActionData::Homo { lambda })
        }
        _ => Err(bad("action: \"variant\" must be \"diag_chars\" or \"homo\"")),
    }
}

pub fn filtration_to_json(filt: &FiltrationData) -> Value {
    json!({
        "weights": filt.weights.k,
        "weight_offsets": filt.weights.offset,
        "x": vecm_to_json(&filt.x),
        "y": vecm_to_json(&filt.y),
    })
}

pub fn filtration_from_json(spec: &Arc<FieldSpec>, v: &Value) -> Result<FiltrationData> {
    let weights = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("filtration: missing \"weights\""))?
        .iter()
        .map(|w| {
            w.as_u64()
                .map(|u| u as u32)
                .ok_or_else(|| bad("filtration: weights must be non-negative integers"))
        })
        .collect::<Result<Vec<_>>>()?;
    let offsets = match v.get("weight_offsets") {
        None => vec![0; weights.len()],
        Some(arr) => arr
            .as_array()
            .ok_or_else(|| bad("filtration: \"weight_offsets\" must be an array"))?
            .iter()
            .map(|w| {
                w.as_u64()
                    .map(|u| u as u32)
                    .ok_or_else(|| bad("filtration: offsets must be non-negative integers"))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    FiltrationData::new(
        WeightData::with_offset(weights, offsets)?,
        vecm_from_json(spec, v.get("x").ok_or_else(|| bad("filtration: missing \"x\""))?)?,
        vecm_from_json(spec, v.get("y").ok_or_else(|| bad("filtration: missing \"y\""))?)?,
    )
}

// ---------------------------------------------------------------------------
// whole documents
// ---------------------------------------------------------------------------

pub fn module_to_json(d: &FilteredModule) -> Value {
    json!({
        "field": field_to_json(&d.spec()),
        "group": group_to_json(&d.grp),
        "frobenius": frob_to_json(&d.frob),
        "monodromy_nontrivial": d.n_nontrivial,
        "action": action_to_json(&d.action),
        "filtration": filtration_to_json(&d.filt),
    })
}

pub fn module_from_json(v: &Value) -> Result<FilteredModule> {
    let spec = field_from_json(v.get("field").ok_or_else(|| bad("document: missing \"field\""))?)?;
    let grp = group_from_json(v.get("group").ok_or_else(|| bad("document: missing \"group\""))?)?;
    let frob = frob_from_json(&spec, v.get("frobenius").ok_or_else(|| bad("document: missing \"frobenius\""))?)?;
    let n_nontrivial = v
        .get("monodromy_nontrivial")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let action = action_from_json(&spec, v.get("action").ok_or_else(|| bad("document: missing \"action\""))?)?;
    let filt = filtration_from_json(&spec, v.get("filtration").ok_or_else(|| bad("document: missing \"filtration\""))?)?;
    FilteredModule::new(grp, frob, n_nontrivial, action, filt)
}

/// A module presented with a raw Frobenius matrix and a raw monodromy
/// matrix, before normalization.
pub struct RawModule {
    pub spec: Arc<FieldSpec>,
    pub grp: GaloisGroupSpec,
    pub frob: Mat2F,
    pub monodromy: Mat2F,
    pub action: GaloisActionData,
    pub filt: FiltrationData,
    pub witnesses: Vec<FieldElement>,
}

pub fn raw_module_from_json(v: &Value) -> Result<RawModule> {
    let spec = field_from_json(v.get("field").ok_or_else(|| bad("document: missing \"field\""))?)?;
    let grp = group_from_json(v.get("group").ok_or_else(|| bad("document: missing \"group\""))?)?;
    let frob = mat2f_from_json(&spec, v.get("frobenius_matrix").ok_or_else(|| bad("document: missing \"frobenius_matrix\""))?)?;
    let monodromy = match v.get("monodromy_matrix") {
        Some(m) => mat2f_from_json(&spec, m)?,
        None => Mat2F::zero(&spec, grp.ext.f),
    };
    let action = action_from_json(&spec, v.get("action").ok_or_else(|| bad("document: missing \"action\""))?)?;
    let filt = filtration_from_json(&spec, v.get("filtration").ok_or_else(|| bad("document: missing \"filtration\""))?)?;
    let witnesses = match v.get("witnesses") {
        Some(w) => elems_from_json(&spec, w)?,
        None => Vec::new(),
    };
    Ok(RawModule { spec, grp, frob, monodromy, action, filt, witnesses })
}

/// Full normalization pipeline: canonicalize the Frobenius, push a nonzero
/// monodromy into the shape [[0,0],[1,0]], and carry the descent action
/// and the filtration through the combined base change.
pub fn normalize_module(raw: &RawModule) -> Result<FilteredModule> {
    let ext = raw.grp.ext.clone();
    let pm = PhiModule::new(ext.clone(), raw.frob.clone(), raw.monodromy.clone())?;
    let canon = pm.canonicalize(&raw.witnesses)?;
    let mut total = canon.basechange.clone();
    let mut tag = canon.tag.clone();
    let mut n_nontrivial = false;
    if !raw.monodromy.is_zero() {
        let moved_n = total.mul(&raw.monodromy).mul(&total.inv()?);
        let norm = normalize_monodromy(&tag, &moved_n, &ext)?;
        total = norm.basechange.mul(&total);
        tag = norm.tag;
        n_nontrivial = true;
    }
    let f = ext.f;
    let frob = match &tag {
        CanonTag::SplitDiag { alpha, delta } => FrobForm::Diag {
            alpha: VecF::constant(&raw.spec, f, alpha),
            delta: VecF::constant(&raw.spec, f, delta),
        },
        CanonTag::Scalar { alpha } => FrobForm::Diag {
            alpha: VecF::constant(&raw.spec, f, alpha),
            delta: VecF::constant(&raw.spec, f, alpha),
        },
        CanonTag::NonSemisimple { alpha } => FrobForm::NonSemisimple {
            alpha: alpha.clone(),
            f,
        },
    };
    // action transforms as [g]' = P [g] (g P)^{-1}; the result must come
    // out constant of one of the two legal shapes
    let spec = raw.spec.clone();
    let action = transform_action(&raw.grp, &raw.action, &total)?;
    // filtration coordinates transform by the block of P at each embedding
    let m = raw.filt.m();
    let mut x = VecM::zeros(&spec, m);
    let mut y = VecM::zeros(&spec, m);
    for s in 0..m {
        let blk = total.coord(s % f);
        let (nx, ny) = blk.apply(raw.filt.x.get(s), raw.filt.y.get(s));
        x.set(s, nx);
        y.set(s, ny);
    }
    let filt = FiltrationData::new(raw.filt.weights.clone(), x, y)?;
    FilteredModule::new(raw.grp.clone(), frob, n_nontrivial, action, filt)
}

fn transform_action(
    grp: &GaloisGroupSpec,
    act: &GaloisActionData,
    p: &Mat2F,
) -> Result<GaloisActionData> {
    let spec = p.spec().clone();
    let f = p.f();
    let mut blocks = Vec::new();
    let mut diagonal = true;
    for g in grp.elements() {
        let gm = act.matrix(g, &spec, f);
        let gp = crate::descent::g_act_mat(grp, g, p);
        let new = p.mul(&gm).mul(&gp.inv()?);
        // must be constant to be expressible as descent data
        let blk = new.coord(0);
        for j in 1..f {
            let c = new.coord(j);
            if c.a != blk.a || c.b != blk.b || c.c != blk.c || c.d != blk.d {
                return Err(Error::Validation(
                    "descent action is not constant in the canonical basis".into(),
                ));
            }
        }
        if !blk.b.is_zero() || !blk.c.is_zero() {
            diagonal = false;
        }
        blocks.push(blk);
    }
    if diagonal {
        Ok(GaloisActionData::DiagChars {
            chi: Character { values: blocks.iter().map(|b| b.a.clone()).collect() },
            psi: Character { values: blocks.iter().map(|b| b.d.clone()).collect() },
        })
    } else {
        Ok(GaloisActionData::Homo { lambda: blocks })
    }
}

// ---------------------------------------------------------------------------
// rank one documents
// ---------------------------------------------------------------------------

pub fn rank_one_to_json(r: &RankOneModule) -> Value {
    json!({
        "field": field_to_json(r.u.spec()),
        "group": group_to_json(&r.grp),
        "u": elem_to_json(&r.u),
        "pi_power": elem_to_json(&r.varpi),
        "weights": r.weights,
        "chi": elems_to_json(r.chi.values.iter()),
    })
}

pub fn rank_one_from_json(v: &Value) -> Result<RankOneModule> {
    let spec = field_from_json(v.get("field").ok_or_else(|| bad("document: missing \"field\""))?)?;
    let grp = group_from_json(v.get("group").ok_or_else(|| bad("document: missing \"group\""))?)?;
    let u = elem_from_json(&spec, v.get("u").ok_or_else(|| bad("document: missing \"u\""))?)?;
    let varpi = elem_from_json(&spec, v.get("pi_power").ok_or_else(|| bad("document: missing \"pi_power\""))?)?;
    let weights = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("document: missing \"weights\""))?
        .iter()
        .map(|w| w.as_i64().ok_or_else(|| bad("weights must be integers")))
        .collect::<Result<Vec<_>>>()?;
    let chi = Character {
        values: elems_from_json(&spec, v.get("chi").ok_or_else(|| bad("document: missing \"chi\""))?)?,
    };
    RankOneModule::new(grp, u, varpi, weights, chi)
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

fn descriptor_to_json(d: &SubmoduleDescriptor) -> Value {
    match d {
        SubmoduleDescriptor::Zero => json!({ "kind": "zero" }),
        SubmoduleDescriptor::Full => json!({ "kind": "full" }),
        SubmoduleDescriptor::D1 => json!({ "kind": "d1" }),
        SubmoduleDescriptor::D2 => json!({ "kind": "d2" }),
        SubmoduleDescriptor::DTheta(t) => json!({ "kind": "d_theta", "theta": elem_to_json(t) }),
        SubmoduleDescriptor::DThetaGeneric => json!({ "kind": "d_theta_generic" }),
    }
}

fn galois_type_to_json(t: &GaloisType) -> Value {
    match t {
        GaloisType::Special => json!({ "label": "special" }),
        GaloisType::PrincipalSeries => json!({ "label": "principal_series" }),
        GaloisType::SupercuspidalOrPrincipal { lambda_abelian } => json!({
            "label": "supercuspidal_or_principal",
            "lambda_abelian": lambda_abelian,
        }),
        GaloisType::NotLabeled => json!({ "label": "not_labeled" }),
    }
}

pub fn wa_report_to_json(rep: &WaReport) -> Value {
    let lines: Vec<Value> = rep
        .lines
        .iter()
        .map(|l| {
            json!({
                "submodule": descriptor_to_json(&l.desc),
                "t_hodge": rat_to_json(&l.t_hodge),
                "t_newton": rat_to_json(&l.t_newton),
            })
        })
        .collect();
    let reducibility = match &rep.reducibility {
        None => Value::Null,
        Some(Reducibility::Irreducible) => json!({ "kind": "irreducible" }),
        Some(Reducibility::NonSplitReducible(w)) => json!({
            "kind": "non_split_reducible",
            "witness": descriptor_to_json(w),
        }),
        Some(Reducibility::SplitReducible(a, b)) => json!({
            "kind": "split_reducible",
            "witnesses": [descriptor_to_json(a), descriptor_to_json(b)],
        }),
    };
    let mut map = Map::new();
    map.insert("t_hodge".into(), rat_to_json(&rep.t_hodge));
    map.insert("t_newton".into(), rat_to_json(&rep.t_newton));
    map.insert("weakly_admissible".into(), Value::Bool(rep.weakly_admissible));
    map.insert("submodules".into(), Value::Array(lines));
    map.insert("reducibility".into(), reducibility);
    map.insert("galois_type".into(), galois_type_to_json(&rep.galois_type));
    if let Some(f) = &rep.failure {
        map.insert("failure".into(), Value::String(f.clone()));
    }
    Value::Object(map)
}

pub fn iso_verdict_to_json(branch: &str, witness: Option<&Mat2F>) -> Value {
    let mut map = Map::new();
    map.insert("isomorphic".into(), Value::Bool(witness.is_some()));
    map.insert("branch".into(), Value::String(branch.into()));
    if let Some(q) = witness {
        map.insert("witness".into(), mat2f_to_json(q));
    }
    Value::Object(map)
}
