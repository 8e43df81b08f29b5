//! The coefficient field E = Q[x]/(m(x)) with its p-adic valuation.
//!
//! Everything is exact: elements are polynomials in the generator theta with
//! rational (arbitrary precision) coefficients, reduced modulo the monic
//! defining polynomial.  The valuation v_p is normalised by v_p(p) = 1 and is
//! computed through the norm, v_p(a) = v_p(Norm_{E/Q}(a)) / [E:Q], which is
//! the unique extension of v_p exactly when p does not split in E.  We do not
//! factor p in E; instead the constructor certifies p-indecomposability by an
//! Eisenstein check, an irreducibility-mod-p check, or a caller attestation.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type Int = BigInt;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

// ---------------------------------------------------------------------------
// dense polynomials over Q, constant coefficient first
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_deg(p: &[Rat]) -> usize {
    let mut d = p.len();
    while d > 1 && p[d - 1].is_zero() {
        d -= 1;
    }
    d - 1
}

fn poly_is_zero(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Remainder of a by b (b nonzero).
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let db = poly_deg(b);
    let lb = &b[db];
    let mut r: Vec<Rat> = a.to_vec();
    poly_trim(&mut r);
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let q = &r[dr] / lb;
        for k in 0..=db {
            let v = &q * &b[k];
            r[dr - db + k] -= v;
        }
        poly_trim(&mut r);
    }
    r
}

/// res(f, g) by the classical PRS recursion.  With f monic this equals
/// the product of g over the roots of f, i.e. the norm of g mod f.
fn resultant(f: &[Rat], g: &[Rat]) -> Rat {
    let mut f: Vec<Rat> = f.to_vec();
    let mut g: Vec<Rat> = g.to_vec();
    poly_trim(&mut f);
    poly_trim(&mut g);
    let mut acc = Rat::one();
    loop {
        if poly_is_zero(&g) {
            return if poly_deg(&f) == 0 { acc } else { Rat::zero() };
        }
        let df = poly_deg(&f);
        let dg = poly_deg(&g);
        if dg == 0 {
            let mut pow = Rat::one();
            for _ in 0..df {
                pow *= &g[0];
            }
            return acc * pow;
        }
        let r = poly_rem(&f, &g);
        let dr = if poly_is_zero(&r) { 0 } else { poly_deg(&r) };
        if (df * dg) % 2 == 1 {
            acc = -acc;
        }
        let lg = g[dg].clone();
        let mut pow = Rat::one();
        for _ in 0..(df - dr) {
            pow *= &lg;
        }
        acc *= pow;
        f = g;
        g = r;
        if poly_is_zero(&g) && poly_deg(&f) != 0 {
            return Rat::zero();
        }
    }
}

/// Exact power of the prime p dividing a nonzero rational.
pub fn padic_val_rational(p: u64, x: &Rat) -> Result<Int> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let p = Int::from(p);
    let mut v = Int::zero();
    let mut n = x.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Ok(v)
}

fn rational_nth_root(x: &Rat, n: u32) -> Option<Rat> {
    if x.is_zero() {
        return Some(Rat::zero());
    }
    if x.is_negative() && n % 2 == 0 {
        return None;
    }
    let (num, den) = (x.numer().abs(), x.denom().abs());
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if num::pow(rn.clone(), n as usize) != num || num::pow(rd.clone(), n as usize) != den {
        return None;
    }
    let mut root = Rat::new(rn, rd);
    if x.is_negative() {
        root = -root;
    }
    Some(root)
}

// ---------------------------------------------------------------------------
// field spec
// ---------------------------------------------------------------------------

/// How p-indecomposability of E was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// Degree one: E = Q, nothing to certify.
    Rational,
    /// Defining polynomial is Eisenstein at p.
    Eisenstein,
    /// Defining polynomial is irreducible modulo p.
    IrreducibleModP,
    /// Caller-supplied attestation that a single prime of E lies above p.
    Attested,
    /// None of the above: valuations are refused.
    None,
}

#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    /// Monic, constant coefficient first, integer coefficients, length d+1.
    min_poly: Vec<Int>,
    min_poly_q: Vec<Rat>,
    degree: usize,
    cert: Certification,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.min_poly == other.min_poly
    }
}
impl Eq for FieldSpec {}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn eisenstein_at(p: u64, poly: &[Int]) -> bool {
    let d = poly.len() - 1;
    let p = Int::from(p);
    let p2 = &p * &p;
    if !poly[d].is_one() {
        return false;
    }
    for c in &poly[..d] {
        if !(c % &p).is_zero() {
            return false;
        }
    }
    !(&poly[0] % p2).is_zero()
}

/// Naive irreducibility test over F_p: no monic factor of degree <= d/2.
fn irreducible_mod_p(p: u64, poly: &[Int]) -> bool {
    let d = poly.len() - 1;
    if d == 1 {
        return true;
    }
    let pm = Int::from(p);
    let red: Vec<u64> = poly
        .iter()
        .map(|c| {
            let r = ((c % &pm) + &pm) % &pm;
            // fits: r < p <= u64
            r.to_string().parse::<u64>().unwrap()
        })
        .collect();
    if red[d] == 0 {
        return false;
    }
    // don't blow up on silly inputs; callers can attest instead
    let half = d / 2;
    if (p as f64).powi(half as i32) > 2_000_000.0 {
        return false;
    }
    // trial division by every monic polynomial of degree 1..=d/2 over F_p
    let modp = |x: i128| -> u64 { (((x % p as i128) + p as i128) % p as i128) as u64 };
    let rem_mod = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let db = b.len() - 1;
        let inv = {
            // b monic in our enumeration
            1u64
        };
        let _ = inv;
        let mut r: Vec<u64> = a.to_vec();
        while r.len() > db && r.len() >= 1 {
            while r.len() > 1 && *r.last().unwrap() == 0 {
                r.pop();
            }
            if r.len() - 1 < db || (r.len() == 1 && r[0] == 0) {
                break;
            }
            let dr = r.len() - 1;
            let q = *r.last().unwrap();
            for k in 0..=db {
                let idx = dr - db + k;
                r[idx] = modp(r[idx] as i128 - q as i128 * b[k] as i128);
            }
            while r.len() > 1 && *r.last().unwrap() == 0 {
                r.pop();
            }
            if r.iter().all(|&c| c == 0) {
                break;
            }
        }
        r
    };
    for deg in 1..=half {
        let count = (p as u128).pow(deg as u32);
        for idx in 0..count {
            let mut b = vec![0u64; deg + 1];
            let mut t = idx;
            for k in 0..deg {
                b[k] = (t % p as u128) as u64;
                t /= p as u128;
            }
            b[deg] = 1;
            let r = rem_mod(&red, &b);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Build a field spec.  `min_poly` is monic with integer coefficients,
    /// constant first.  `attested` asserts that a single prime of E lies
    /// above p when neither automatic certificate applies.
    pub fn new(p: u64, min_poly: Vec<Int>, attested: bool) -> Result<Arc<FieldSpec>> {
        if !is_prime_u64(p) {
            return Err(Error::BadInput(format!("{p} is not prime")));
        }
        if min_poly.len() < 2 {
            return Err(Error::BadInput("defining polynomial must have degree >= 1".into()));
        }
        let d = min_poly.len() - 1;
        if !min_poly[d].is_one() {
            return Err(Error::BadInput("defining polynomial must be monic".into()));
        }
        let cert = if d == 1 {
            Certification::Rational
        } else if eisenstein_at(p, &min_poly) {
            Certification::Eisenstein
        } else if irreducible_mod_p(p, &min_poly) {
            Certification::IrreducibleModP
        } else if attested {
            Certification::Attested
        } else {
            Certification::None
        };
        // both automatic certificates imply irreducibility over Q; for d = 1
        // and for attested specs we take the caller's word for the latter too
        let min_poly_q: Vec<Rat> = min_poly.iter().map(|c| Rat::from_integer(c.clone())).collect();
        Ok(Arc::new(FieldSpec { p, min_poly, min_poly_q, degree: d, cert }))
    }

    pub fn rationals(p: u64) -> Result<Arc<FieldSpec>> {
        // E = Q, theta = 0
        FieldSpec::new(p, vec![Int::zero(), Int::one()], false)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn certification(&self) -> Certification {
        self.cert
    }
    pub fn certified(&self) -> bool {
        self.cert != Certification::None
    }
    pub fn min_poly(&self) -> &[Int] {
        &self.min_poly
    }
}

// ---------------------------------------------------------------------------
// field elements
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    /// length == spec.degree, constant coefficient first
    coeffs: Vec<Rat>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            match i {
                0 => write!(fm, "{c}")?,
                1 => write!(fm, "({c})*t")?,
                _ => write!(fm, "({c})*t^{i}")?,
            }
        }
        if first {
            write!(fm, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn from_coeffs(spec: &Arc<FieldSpec>, mut coeffs: Vec<Rat>) -> Result<FieldElement> {
        if coeffs.len() > spec.degree {
            // reduce mod the defining polynomial
            let r = poly_rem(&coeffs, &spec.min_poly_q);
            coeffs = r;
        }
        coeffs.resize(spec.degree, Rat::zero());
        Ok(FieldElement { spec: Arc::clone(spec), coeffs })
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> FieldElement {
        FieldElement { spec: Arc::clone(spec), coeffs: vec![Rat::zero(); spec.degree] }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> FieldElement {
        FieldElement::from_rat(spec, Rat::one())
    }

    pub fn from_rat(spec: &Arc<FieldSpec>, r: Rat) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); spec.degree];
        coeffs[0] = r;
        FieldElement { spec: Arc::clone(spec), coeffs }
    }

    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> FieldElement {
        FieldElement::from_rat(spec, rat_int(n))
    }

    /// The generator theta (zero when E = Q of our degree-1 convention).
    pub fn gen(spec: &Arc<FieldSpec>) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); spec.degree];
        if spec.degree >= 2 {
            coeffs[1] = Rat::one();
        } else {
            // theta is the root of the degree-1 polynomial
            coeffs[0] = -Rat::from_integer(spec.min_poly[0].clone());
        }
        FieldElement { spec: Arc::clone(spec), coeffs }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn same_spec(&self, other: &FieldElement) -> Result<()> {
        if *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch("elements of different fields".into()))
        }
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.same_spec(other).expect("field mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement { spec: Arc::clone(&self.spec), coeffs }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.same_spec(other).expect("field mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement { spec: Arc::clone(&self.spec), coeffs }
    }

    pub fn neg(&self) -> FieldElement {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        FieldElement { spec: Arc::clone(&self.spec), coeffs }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.same_spec(other).expect("field mismatch");
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        let mut r = poly_rem(&prod, &self.spec.min_poly_q);
        r.resize(self.spec.degree, Rat::zero());
        FieldElement { spec: Arc::clone(&self.spec), coeffs: r }
    }

    pub fn scale(&self, r: &Rat) -> FieldElement {
        let coeffs = self.coeffs.iter().map(|a| a * r).collect();
        FieldElement { spec: Arc::clone(&self.spec), coeffs }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // extended gcd of a and m: s*a + t*m = g
        let mut r0: Vec<Rat> = self.spec.min_poly_q.clone();
        let mut r1: Vec<Rat> = self.coeffs.clone();
        poly_trim(&mut r1);
        let mut s0: Vec<Rat> = vec![Rat::zero()];
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while !poly_is_zero(&r1) && poly_deg(&r1) > 0 {
            // quotient of r0 by r1
            let (q, r) = {
                let db = poly_deg(&r1);
                let lb = r1[db].clone();
                let mut rem: Vec<Rat> = r0.clone();
                poly_trim(&mut rem);
                let mut quo = vec![Rat::zero(); rem.len().max(db + 1) - db];
                while !poly_is_zero(&rem) && poly_deg(&rem) >= db {
                    let dr = poly_deg(&rem);
                    let c = &rem[dr] / &lb;
                    quo[dr - db] = c.clone();
                    for k in 0..=db {
                        let v = &c * &r1[k];
                        rem[dr - db + k] -= v;
                    }
                    poly_trim(&mut rem);
                }
                (quo, rem)
            };
            let qs1 = poly_mul(&q, &s1);
            let mut s2 = s0.clone();
            s2.resize(s2.len().max(qs1.len()), Rat::zero());
            for (i, c) in qs1.iter().enumerate() {
                s2[i] -= c;
            }
            poly_trim(&mut s2);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if poly_is_zero(&r1) {
            // gcd has positive degree: defining polynomial not irreducible
            return Err(Error::BadInput("defining polynomial is reducible over Q".into()));
        }
        // r1 is a nonzero constant g; inverse is s1/g (mod m)
        let g = r1[0].clone();
        let mut inv: Vec<Rat> = s1.iter().map(|c| c / &g).collect();
        let mut red = poly_rem(&inv, &self.spec.min_poly_q);
        red.resize(self.spec.degree, Rat::zero());
        inv = red;
        Ok(FieldElement { spec: Arc::clone(&self.spec), coeffs: inv })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<FieldElement> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = FieldElement::one(&self.spec);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Norm to Q as the resultant of the defining polynomial with a
    /// representative of this element.
    pub fn norm(&self) -> Rat {
        resultant(&self.spec.min_poly_q, &self.coeffs)
    }

    /// p-adic valuation, normalised so v_p(p) = 1.  Exact rational value.
    pub fn vp(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        if !self.spec.certified() {
            return Err(Error::UncertifiedField);
        }
        let n = self.norm();
        let v = padic_val_rational(self.spec.p, &n)?;
        Ok(Rat::new(v, Int::from(self.spec.degree as i64)))
    }

    /// Exact n-th root, by the witness protocol: try supplied witnesses,
    /// then a rational root, then small powers theta^k of the generator.
    /// No general root finding is attempted; failure is FieldTooSmall.
    pub fn nth_root(&self, n: u32, witnesses: &[FieldElement]) -> Result<FieldElement> {
        if n == 0 {
            return Err(Error::BadInput("0th root".into()));
        }
        for w in witnesses {
            if *w.spec == *self.spec && w.pow(n as i64)? == *self {
                return Ok(w.clone());
            }
        }
        if let Some(r) = self.is_rational() {
            if let Some(root) = rational_nth_root(r, n) {
                return Ok(FieldElement::from_rat(&self.spec, root));
            }
        }
        let theta = FieldElement::gen(&self.spec);
        if !theta.is_zero() {
            for k in 0..=(self.spec.degree as i64) {
                let cand = theta.pow(k)?;
                if cand.pow(n as i64)? == *self {
                    return Ok(cand);
                }
            }
            // also try -theta^k and rational multiples of theta^k when the
            // quotient by a found power is a rational n-th power
            for k in 1..=(self.spec.degree as i64) {
                let tk = theta.pow(k)?;
                let tkn = tk.pow(n as i64)?;
                if tkn.is_zero() {
                    continue;
                }
                let q = self.div(&tkn)?;
                if let Some(r) = q.is_rational() {
                    if let Some(root) = rational_nth_root(r, n) {
                        return Ok(tk.scale(&root));
                    }
                }
            }
        }
        Err(Error::FieldTooSmall(format!(
            "no {n}th root of {self} found in E; supply a witness or enlarge E"
        )))
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::add(self, rhs)
    }
}
impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::sub(self, rhs)
    }
}
impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::mul(self, rhs)
    }
}
impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}
