//! Combinatorial data of the tower Q_p <= K <= L and the group G = Gal(L/K).
//!
//! L has inertia degree f and ramification index e over Q_p, m = ef; the m
//! embeddings of L are indexed s = f*i + j.  G is given by an explicit
//! multiplication table together with, for each element g, the permutation
//! pi(g) of {0..m-1} (sigma_s . g = sigma_{pi(g)(s)}) and the residue shift
//! n(g) in {0..f-1} (g restricted to the maximal unramified subfield is the
//! n(g)-th Frobenius power).  The action of G on embeddings must be free,
//! with nu = [K:Q_p] orbits of size |G|.

use crate::error::{Error, Result};
use crate::ring::{IndexSet, VecF, VecM};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub p: u64,
    pub f: usize,
    pub e: usize,
    pub nu: usize,
}

impl ExtensionSpec {
    pub fn new(p: u64, f: usize, e: usize, nu: usize) -> Result<ExtensionSpec> {
        if f == 0 || e == 0 || nu == 0 {
            return Err(Error::BadInput("f, e, nu must be positive".into()));
        }
        if (f * e) % nu != 0 {
            return Err(Error::BadInput("nu must divide m = e*f".into()));
        }
        Ok(ExtensionSpec { p, f, e, nu })
    }

    pub fn m(&self) -> usize {
        self.e * self.f
    }

    /// Expected group order |G| = m / nu.
    pub fn group_order(&self) -> usize {
        self.m() / self.nu
    }
}

/// Explicit finite group with embedding permutations and residue shifts.
/// Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisGroupSpec {
    pub ext: ExtensionSpec,
    pub names: Vec<String>,
    /// mult[i][j] = index of g_i * g_j
    pub mult: Vec<Vec<usize>>,
    /// pi[g][s] = pi(g)(s)
    pub pi: Vec<Vec<usize>>,
    /// n[g] in {0..f-1}
    pub n: Vec<usize>,
}

pub type GroupElement = usize;

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok() {
            Ok(())
        } else {
            Err(Error::Validation(self.failures.join("; ")))
        }
    }
}

impl GaloisGroupSpec {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> GroupElement {
        0
    }

    pub fn compose(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.mult[g][h]
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        (0..self.order())
            .find(|&h| self.mult[g][h] == 0)
            .expect("validated groups have inverses")
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        0..self.order()
    }

    /// Check every structural invariant.  Returns all failures, not just the
    /// first one, so external data can be repaired in one round.
    pub fn validate(&self) -> ValidationReport {
        let mut fails = Vec::new();
        let n = self.order();
        let m = self.ext.m();
        let f = self.ext.f;
        if n == 0 {
            fails.push("empty group".into());
            return ValidationReport { failures: fails };
        }
        if self.mult.len() != n
            || self.mult.iter().any(|r| r.len() != n)
            || self.pi.len() != n
            || self.n.len() != n
        {
            fails.push("table sizes do not match the element list".into());
            return ValidationReport { failures: fails };
        }
        if self.mult.iter().flatten().any(|&x| x >= n) {
            fails.push("multiplication table entry out of range".into());
            return ValidationReport { failures: fails };
        }
        if n != self.ext.group_order() {
            fails.push(format!(
                "|G| = {} but m/nu = {}",
                n,
                self.ext.group_order()
            ));
        }
        // identity
        for g in 0..n {
            if self.mult[0][g] != g || self.mult[g][0] != g {
                fails.push("element 0 is not a two-sided identity".into());
                break;
            }
        }
        // associativity (groups here are tiny)
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]] {
                        fails.push("multiplication is not associative".into());
                        break 'assoc;
                    }
                }
            }
        }
        // inverses
        for g in 0..n {
            if !(0..n).any(|h| self.mult[g][h] == 0 && self.mult[h][g] == 0) {
                fails.push(format!("element {g} has no inverse"));
            }
        }
        // pi: permutations of {0..m-1}
        for g in 0..n {
            let mut seen = vec![false; m];
            if self.pi[g].len() != m {
                fails.push(format!("pi({g}) has wrong length"));
                continue;
            }
            for &s in &self.pi[g] {
                if s >= m || seen[s] {
                    fails.push(format!("pi({g}) is not a permutation"));
                    break;
                }
                seen[s] = true;
            }
        }
        if !fails.is_empty() {
            return ValidationReport { failures: fails };
        }
        // pi(identity) = id
        if (0..m).any(|s| self.pi[0][s] != s) {
            fails.push("pi(identity) is not the identity permutation".into());
        }
        // right action: sigma_s.(gh) = (sigma_s.g).h, i.e. pi(gh) = pi(h) o pi(g)
        for g in 0..n {
            for h in 0..n {
                let gh = self.mult[g][h];
                for s in 0..m {
                    if self.pi[gh][s] != self.pi[h][self.pi[g][s]] {
                        fails.push(format!(
                            "pi is not an anti-homomorphism at ({g},{h})"
                        ));
                        break;
                    }
                }
            }
        }
        // n(g) additive mod f, n(id) = 0
        if self.n[0] != 0 {
            fails.push("n(identity) != 0".into());
        }
        for g in 0..n {
            if self.n[g] >= f {
                fails.push(format!("n({g}) out of range"));
            }
            for h in 0..n {
                let gh = self.mult[g][h];
                if (self.n[g] + self.n[h]) % f != self.n[gh] {
                    fails.push(format!("n is not additive at ({g},{h})"));
                }
            }
        }
        // block constraint pi(g)(f*i + j) = j + n(g) mod f
        for g in 0..n {
            for s in 0..m {
                let j = s % f;
                if self.pi[g][s] % f != (j + self.n[g]) % f {
                    fails.push(format!("pi({g}) violates the residue-block constraint"));
                    break;
                }
            }
        }
        // free action
        for g in 1..n {
            if (0..m).any(|s| self.pi[g][s] == s) {
                fails.push(format!("action of element {g} has a fixed point"));
            }
        }
        // orbit count
        if fails.is_empty() {
            let orbs = self.orbits();
            if orbs.len() != self.ext.nu {
                fails.push(format!(
                    "found {} orbits, expected nu = {}",
                    orbs.len(),
                    self.ext.nu
                ));
            }
            if orbs.iter().any(|o| o.len() != n) {
                fails.push("orbit of size != |G| (action not free/transitive per orbit)".into());
            }
        }
        ValidationReport { failures: fails }
    }

    /// Orbits of the (free) right action on {0..m-1}; each orbit is sorted,
    /// orbits ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let m = self.ext.m();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for s in 0..m {
            if seen[s] {
                continue;
            }
            let mut orb: Vec<usize> = self.elements().map(|g| self.pi[g][s]).collect();
            orb.sort_unstable();
            orb.dedup();
            for &t in &orb {
                seen[t] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn orbit_sets(&self) -> Vec<IndexSet> {
        self.orbits()
            .into_iter()
            .map(|o| IndexSet::new(self.ext.m(), o).expect("orbit indices in range"))
            .collect()
    }

    /// Is J a union of G-orbits?
    pub fn is_orbit_union(&self, j: &IndexSet) -> bool {
        self.elements().all(|g| j.image(&self.pi[g]) == *j)
    }

    /// (g v)_s = v_{pi(g)(s)} on E^m.
    pub fn act_vecm(&self, g: GroupElement, v: &VecM) -> VecM {
        VecM::new(
            (0..v.len()).map(|s| v.get(self.pi[g][s]).clone()).collect(),
        )
        .expect("nonempty")
    }

    /// On E^f the action is the cyclic shift by n(g).
    pub fn act_vecf(&self, g: GroupElement, v: &VecF) -> VecF {
        v.phi_shift(self.n[g] as i64)
    }

    // ---------------------------------------------------------------
    // built-in constructors
    // ---------------------------------------------------------------

    /// Trivial group: L = K, nu = m.
    pub fn trivial(ext: ExtensionSpec) -> Result<GaloisGroupSpec> {
        let ext = ExtensionSpec::new(ext.p, ext.f, ext.e, ext.m())?;
        let m = ext.m();
        let grp = GaloisGroupSpec {
            ext,
            names: vec!["1".into()],
            mult: vec![vec![0]],
            pi: vec![(0..m).collect()],
            n: vec![0],
        };
        grp.validate().into_result()?;
        Ok(grp)
    }

    /// Unramified L of degree f over Q_p with K the unramified subfield of
    /// degree nu | f: cyclic of order f/nu generated by the nu-th Frobenius
    /// power.  e = 1.
    pub fn unramified(p: u64, f: usize, nu: usize) -> Result<GaloisGroupSpec> {
        if nu == 0 || f % nu != 0 {
            return Err(Error::BadInput("nu must divide f".into()));
        }
        let ext = ExtensionSpec::new(p, f, 1, nu)?;
        let ord = f / nu;
        let names = (0..ord)
            .map(|k| if k == 0 { "1".into() } else { format!("tau^{}", k * nu) })
            .collect();
        let mult = (0..ord)
            .map(|i| (0..ord).map(|j| (i + j) % ord).collect())
            .collect();
        let pi = (0..ord)
            .map(|k| (0..f).map(|s| (s + k * nu) % f).collect())
            .collect();
        let n = (0..ord).map(|k| (k * nu) % f).collect();
        let grp = GaloisGroupSpec { ext, names, mult, pi, n };
        grp.validate().into_result()?;
        Ok(grp)
    }

    /// Totally ramified cyclic L of degree e over K = Q_p: f = 1, n = 0,
    /// pi(generator) the cyclic shift.
    pub fn totally_ramified(p: u64, e: usize) -> Result<GaloisGroupSpec> {
        let ext = ExtensionSpec::new(p, 1, e, 1)?;
        let names = (0..e)
            .map(|k| if k == 0 { "1".into() } else { format!("s^{k}") })
            .collect();
        let mult = (0..e).map(|i| (0..e).map(|j| (i + j) % e).collect()).collect();
        let pi = (0..e).map(|k| (0..e).map(|s| (s + k) % e).collect()).collect();
        let n = vec![0; e];
        let grp = GaloisGroupSpec { ext, names, mult, pi, n };
        grp.validate().into_result()?;
        Ok(grp)
    }
}
