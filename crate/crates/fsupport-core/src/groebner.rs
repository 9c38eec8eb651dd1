//! Groebner bases for submodules of free modules `R^a` over `F_p[x_1..x_n]`,
//! plus the derived operations the rest of the engine is built on: membership
//! with coordinate transcripts, syzygies, kernels, preimages, intersections,
//! colon ideals, annihilators of subquotients, and radical membership.
//!
//! The term order on `R^a` is position-over-term: a term in component `i`
//! beats any term in component `j > i`, and ties are broken by the ring's
//! monomial order. Reduced Groebner bases are unique for this order, so every
//! public operation returns submodules in a canonical form (monic, fully
//! tail-reduced, deterministically sorted generators); two submodules are
//! equal iff their canonical generators are equal.
//!
//! Derived operations share one mechanism: append tag components to the
//! generators (`g_j` becomes `g_j ++ e_j`) and run the same Buchberger loop
//! in the larger free module, where the main block dominates the tag block.
//! Main parts of the resulting basis form a basis of the image, reducing
//! `(v, 0)` decides membership and yields coordinates over the original
//! generators, and the tag parts of zero-main elements generate the syzygies.

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::ring::{Monomial, Polynomial, RingSpec};
use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

/// Default S-pair budget per Groebner run.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A finitely generated submodule of `R^ambient`.
///
/// `canonical` marks generator lists that are a reduced Groebner basis in
/// canonical order; operations that produce submodules always canonicalize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    /// Rank of the ambient free module.
    pub ambient: usize,
    gens: Vec<Vec<Polynomial>>,
    canonical: bool,
}

impl Submodule {
    /// Builds a submodule from raw generators (zero vectors dropped).
    pub fn from_gens(ambient: usize, gens: Vec<Vec<Polynomial>>) -> Result<Self> {
        for g in &gens {
            if g.len() != ambient {
                return Err(Error::Validation(format!(
                    "generator has {} components, ambient rank is {ambient}",
                    g.len()
                )));
            }
        }
        let gens: Vec<_> = gens.into_iter().filter(|g| !vec_is_zero(g)).collect();
        Ok(Submodule {
            ambient,
            gens,
            canonical: false,
        })
    }

    /// The zero submodule of `R^ambient`.
    pub fn zero(ambient: usize) -> Self {
        Submodule {
            ambient,
            gens: Vec::new(),
            canonical: true,
        }
    }

    /// The full module `R^ambient` (standard basis generators).
    pub fn full(ring: &RingSpec, ambient: usize) -> Self {
        let gens = (0..ambient)
            .map(|i| {
                let mut v = vec![Polynomial::zero(); ambient];
                v[i] = ring.one();
                v
            })
            .collect();
        Submodule {
            ambient,
            gens,
            canonical: true,
        }
    }

    /// Generator list.
    pub fn gens(&self) -> &[Vec<Polynomial>] {
        &self.gens
    }

    /// True when no generators remain (the zero submodule), assuming the
    /// canonical form has been computed.
    pub fn is_zero_canonical(&self) -> bool {
        self.gens.is_empty()
    }

    /// True when the generator list is in canonical (reduced basis) form.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    fn from_canonical(ambient: usize, gens: Vec<Vec<Polynomial>>) -> Self {
        Submodule {
            ambient,
            gens,
            canonical: true,
        }
    }
}

/// An ideal of `R`, stored as its generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    gens: Vec<Polynomial>,
    canonical: bool,
}

impl Ideal {
    /// Builds an ideal from raw generators (zeros dropped).
    pub fn from_gens(gens: Vec<Polynomial>) -> Self {
        let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            gens,
            canonical: false,
        }
    }

    /// The zero ideal.
    pub fn zero() -> Self {
        Ideal {
            gens: Vec::new(),
            canonical: true,
        }
    }

    /// The unit ideal `(1)`.
    pub fn unit(ring: &RingSpec) -> Self {
        Ideal {
            gens: vec![ring.one()],
            canonical: true,
        }
    }

    /// Generator list.
    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    /// True when the generator list is in canonical form.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// True for a canonical ideal equal to `(1)`.
    pub fn is_unit_canonical(&self) -> bool {
        self.gens.iter().any(|g| g.is_constant())
    }

    /// View as a rank-1 submodule.
    pub fn to_submodule(&self) -> Submodule {
        Submodule {
            ambient: 1,
            gens: self.gens.iter().map(|g| vec![g.clone()]).collect(),
            canonical: self.canonical,
        }
    }

    /// Rebuilds from a rank-1 submodule.
    pub fn from_submodule(sub: &Submodule) -> Result<Self> {
        if sub.ambient != 1 {
            return Err(Error::Validation(format!(
                "expected rank-1 submodule, got rank {}",
                sub.ambient
            )));
        }
        Ok(Ideal {
            gens: sub.gens.iter().map(|v| v[0].clone()).collect(),
            canonical: sub.canonical,
        })
    }
}

/// A subquotient `N/L` of a free module, with `L ⊆ N` verified on
/// construction.
#[derive(Debug, Clone)]
pub struct Subquotient {
    /// Numerator submodule (canonical).
    pub num: Submodule,
    /// Denominator submodule (canonical), contained in `num`.
    pub den: Submodule,
}

// ----- vector helpers -------------------------------------------------------------

pub(crate) fn vec_is_zero(v: &[Polynomial]) -> bool {
    v.iter().all(|p| p.is_zero())
}

pub(crate) fn vec_zero(ambient: usize) -> Vec<Polynomial> {
    vec![Polynomial::zero(); ambient]
}

pub(crate) fn vec_add(ring: &RingSpec, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

pub(crate) fn vec_sub(ring: &RingSpec, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub(crate) fn vec_mul_term(
    ring: &RingSpec,
    a: &[Polynomial],
    m: &Monomial,
    c: u32,
) -> Result<Vec<Polynomial>> {
    a.iter().map(|x| ring.mul_term(x, m, c)).collect()
}

pub(crate) fn vec_mul_poly(
    ring: &RingSpec,
    a: &[Polynomial],
    f: &Polynomial,
) -> Result<Vec<Polynomial>> {
    a.iter().map(|x| ring.mul(x, f)).collect()
}

fn vec_total_degree(v: &[Polynomial]) -> u64 {
    v.iter().map(|p| p.total_degree()).max().unwrap_or(0)
}

/// Leading term of a vector in position-over-term order: the leading term of
/// the first nonzero component.
fn vec_lead(v: &[Polynomial]) -> Option<(usize, &Monomial, u32)> {
    for (i, p) in v.iter().enumerate() {
        if let Some((m, c)) = p.lead() {
            return Some((i, m, *c));
        }
    }
    None
}

/// Deterministic total order on polynomials (for canonical sorting only).
fn cmp_poly(ring: &RingSpec, a: &Polynomial, b: &Polynomial) -> Ordering {
    for ((ma, ca), (mb, cb)) in a.terms.iter().zip(&b.terms) {
        match ring.cmp_mono(ma, mb) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match ca.cmp(cb) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

/// Deterministic total order on vectors: position-over-term on leads, then
/// componentwise comparison.
fn cmp_vec(ring: &RingSpec, a: &[Polynomial], b: &[Polynomial]) -> Ordering {
    let la = vec_lead(a);
    let lb = vec_lead(b);
    match (la, lb) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some((pa, ma, _)), Some((pb, mb, _))) => {
            // Smaller position index = greater in POT; canonical listing is
            // descending, so sort by position ascending then monomial descending.
            match pa.cmp(&pb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {}
            }
            match ring.cmp_mono(ma, mb) {
                Ordering::Equal => {}
                ord => return ord,
            }
            for (x, y) in a.iter().zip(b) {
                match cmp_poly(ring, x, y) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
            Ordering::Equal
        }
    }
}

// ----- Buchberger -----------------------------------------------------------------

#[derive(Debug, Clone)]
struct GbElem {
    v: Vec<Polynomial>,
    lead_pos: usize,
    lead_mono: Monomial,
    lead_coeff: u32,
    sugar: u64,
}

impl GbElem {
    fn new(_ring: &RingSpec, v: Vec<Polynomial>) -> Option<Self> {
        let (pos, mono, coeff) = vec_lead(&v)?;
        let (pos, mono, coeff) = (pos, mono.clone(), coeff);
        let sugar = vec_total_degree(&v);
        Some(GbElem {
            v,
            lead_pos: pos,
            lead_mono: mono,
            lead_coeff: coeff,
            sugar,
        })
    }

    fn monic(mut self, ring: &RingSpec) -> Self {
        if self.lead_coeff != 1 {
            let inv = ring.coeff_inv(self.lead_coeff);
            self.v = self.v.iter().map(|p| ring.scale(p, inv)).collect();
            self.lead_coeff = 1;
        }
        self
    }
}

/// Full normal form of `v` against `basis`; returns (normal form, sugar).
fn normal_form(
    ring: &RingSpec,
    v: Vec<Polynomial>,
    basis: &[&GbElem],
    sugar_in: u64,
) -> Result<(Vec<Polynomial>, u64)> {
    let ambient = v.len();
    let mut work = v;
    let mut rem = vec_zero(ambient);
    let mut sugar = sugar_in;
    'outer: while let Some((pos, mono, coeff)) = vec_lead(&work) {
        let mono = mono.clone();
        for b in basis {
            if b.lead_pos == pos && b.lead_mono.divides(&mono) {
                let mult_mono = b.lead_mono.quotient_into(&mono);
                let mult_coeff = ring.coeff_mul(coeff, ring.coeff_inv(b.lead_coeff));
                let sub = vec_mul_term(ring, &b.v, &mult_mono, mult_coeff)?;
                work = vec_sub(ring, &work, &sub);
                sugar = sugar.max(b.sugar + mult_mono.total_degree());
                continue 'outer;
            }
        }
        // Irreducible leading term: move it to the remainder.
        let (m, c) = work[pos].terms.remove(0);
        rem[pos].terms.push((m, c));
    }
    Ok((rem, sugar))
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: u64,
    lcm_degree: u64,
    i: usize,
    j: usize,
}

/// Configuration and scratch state for Groebner computations.
///
/// The engine is plain configuration (budget, optional basis dump directory);
/// all operations take inputs and return fresh outputs.
pub struct Engine {
    budget: u64,
    dump_dir: Option<PathBuf>,
    dump_counter: AtomicU64,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            budget: DEFAULT_BUDGET,
            dump_dir: None,
            dump_counter: AtomicU64::new(0),
        }
    }
}

impl Engine {
    /// Engine with an explicit S-pair budget.
    pub fn new(budget: u64) -> Self {
        Engine {
            budget: budget.max(1),
            ..Default::default()
        }
    }

    /// Enables writing one text transcript per basis computation into `dir`.
    pub fn with_dump_dir(mut self, dir: PathBuf) -> Self {
        self.dump_dir = Some(dir);
        self
    }

    /// The configured S-pair budget.
    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Reduced Groebner basis of the span of `gens` inside `R^ambient`.
    pub fn reduced_basis(
        &self,
        ring: &RingSpec,
        ambient: usize,
        gens: &[Vec<Polynomial>],
    ) -> Result<Vec<Vec<Polynomial>>> {
        let basis = self.buchberger(ring, ambient, gens)?;
        let reduced = self.reduce_basis(ring, basis)?;
        self.maybe_dump(ring, ambient, gens, &reduced);
        Ok(reduced)
    }

    fn buchberger(
        &self,
        ring: &RingSpec,
        ambient: usize,
        gens: &[Vec<Polynomial>],
    ) -> Result<Vec<GbElem>> {
        for g in gens {
            if g.len() != ambient {
                return Err(Error::Validation(format!(
                    "generator has {} components, ambient rank is {ambient}",
                    g.len()
                )));
            }
        }
        let mut basis: Vec<GbElem> = Vec::new();
        for g in gens {
            if let Some(e) = GbElem::new(ring, g.clone()) {
                basis.push(e.monic(ring));
            }
        }
        let mut heap: BinaryHeap<Reverse<PairKey>> = BinaryHeap::new();
        let mut processed: BTreeSet<(usize, usize)> = BTreeSet::new();
        let push_pair =
            |heap: &mut BinaryHeap<Reverse<PairKey>>, basis: &[GbElem], i: usize, j: usize| {
                let (a, b) = (&basis[i], &basis[j]);
                if a.lead_pos != b.lead_pos {
                    return;
                }
                let lcm = a.lead_mono.lcm(&b.lead_mono);
                let sugar = (a.sugar + lcm.total_degree() - a.lead_mono.total_degree())
                    .max(b.sugar + lcm.total_degree() - b.lead_mono.total_degree());
                heap.push(Reverse(PairKey {
                    sugar,
                    lcm_degree: lcm.total_degree(),
                    i,
                    j,
                }));
            };
        for j in 1..basis.len() {
            for i in 0..j {
                push_pair(&mut heap, &basis, i, j);
            }
        }
        let mut spairs: u64 = 0;
        while let Some(Reverse(PairKey { i, j, .. })) = heap.pop() {
            if processed.contains(&(i, j)) {
                continue;
            }
            let lcm = basis[i].lead_mono.lcm(&basis[j].lead_mono);
            // Product criterion — sound for ideals only (ambient rank 1).
            if ambient == 1
                && basis[i]
                    .lead_mono
                    .exps
                    .iter()
                    .zip(&basis[j].lead_mono.exps)
                    .all(|(&a, &b)| a.min(b) == 0)
            {
                processed.insert((i, j));
                continue;
            }
            // Chain criterion: a third element dividing the lcm whose pairs
            // with both ends are already handled makes this pair redundant.
            let mut skip = false;
            for (k, e) in basis.iter().enumerate() {
                if k == i || k == j || e.lead_pos != basis[i].lead_pos {
                    continue;
                }
                if e.lead_mono.divides(&lcm) {
                    let p1 = (i.min(k), i.max(k));
                    let p2 = (j.min(k), j.max(k));
                    if processed.contains(&p1) && processed.contains(&p2) {
                        skip = true;
                        break;
                    }
                }
            }
            if skip {
                processed.insert((i, j));
                continue;
            }
            spairs += 1;
            if spairs > self.budget {
                return Err(Error::BudgetExceeded {
                    spairs,
                    limit: self.budget,
                });
            }
            let (sv, sugar) = {
                let (a, b) = (&basis[i], &basis[j]);
                let ma = a.lead_mono.quotient_into(&lcm);
                let mb = b.lead_mono.quotient_into(&lcm);
                let ca = ring.coeff_inv(a.lead_coeff);
                let cb = ring.coeff_inv(b.lead_coeff);
                let ta = vec_mul_term(ring, &a.v, &ma, ca)?;
                let tb = vec_mul_term(ring, &b.v, &mb, cb)?;
                let sugar = (a.sugar + ma.total_degree()).max(b.sugar + mb.total_degree());
                (vec_sub(ring, &ta, &tb), sugar)
            };
            let refs: Vec<&GbElem> = basis.iter().collect();
            let (nf, sugar) = normal_form(ring, sv, &refs, sugar)?;
            processed.insert((i, j));
            if let Some(mut e) = GbElem::new(ring, nf) {
                e.sugar = e.sugar.max(sugar);
                let e = e.monic(ring);
                basis.push(e);
                let n = basis.len() - 1;
                for k in 0..n {
                    push_pair(&mut heap, &basis, k, n);
                }
            }
        }
        Ok(basis)
    }

    /// Inter-reduces a completed basis into the unique reduced basis, sorted
    /// canonically (lead position ascending, lead monomial descending).
    fn reduce_basis(&self, ring: &RingSpec, basis: Vec<GbElem>) -> Result<Vec<Vec<Polynomial>>> {
        let mut elems = basis;
        elems.sort_by(|a, b| cmp_vec(ring, &b.v, &a.v));
        // Drop elements whose lead is divisible by another kept element's lead.
        let mut kept: Vec<GbElem> = Vec::new();
        'cand: for e in elems {
            for k in &kept {
                if k.lead_pos == e.lead_pos && k.lead_mono.divides(&e.lead_mono) {
                    continue 'cand;
                }
            }
            kept.retain(|k| !(k.lead_pos == e.lead_pos && e.lead_mono.divides(&k.lead_mono)));
            kept.push(e);
        }
        // Tail-reduce each element against the others.
        let mut out: Vec<Vec<Polynomial>> = Vec::with_capacity(kept.len());
        for i in 0..kept.len() {
            let others: Vec<&GbElem> = kept
                .iter()
                .enumerate()
                .filter_map(|(j, e)| (j != i).then_some(e))
                .collect();
            let (nf, _) = normal_form(ring, kept[i].v.clone(), &others, 0)?;
            if !vec_is_zero(&nf) {
                let e = GbElem::new(ring, nf).expect("nonzero").monic(ring);
                out.push(e.v);
            }
        }
        out.sort_by(|a, b| cmp_vec(ring, b, a));
        Ok(out)
    }

    fn maybe_dump(
        &self,
        ring: &RingSpec,
        ambient: usize,
        gens: &[Vec<Polynomial>],
        reduced: &[Vec<Polynomial>],
    ) {
        let Some(dir) = &self.dump_dir else { return };
        let n = self.dump_counter.fetch_add(1, AtomicOrdering::SeqCst);
        let mut text = String::new();
        text.push_str(&format!(
            "p = {}\nvars = {}\nambient rank = {ambient}\norder = {}\n\ninput generators:\n",
            ring.modulus(),
            ring.vars().join(", "),
            ring.order().name()
        ));
        for g in gens {
            let comps: Vec<String> = g.iter().map(|p| ring.format(p)).collect();
            text.push_str(&format!("  [{}]\n", comps.join(", ")));
        }
        text.push_str("\nreduced basis:\n");
        for g in reduced {
            let comps: Vec<String> = g.iter().map(|p| ring.format(p)).collect();
            text.push_str(&format!("  [{}]\n", comps.join(", ")));
        }
        // Best-effort debugging aid; ignore IO failures.
        let _ = std::fs::create_dir_all(dir);
        let _ = std::fs::write(dir.join(format!("gb_{n:04}.txt")), text);
    }

    // ----- canonical forms and equality ------------------------------------------

    /// Canonicalizes a submodule (reduced basis generators).
    pub fn canonicalize(&self, ring: &RingSpec, sub: &Submodule) -> Result<Submodule> {
        if sub.canonical {
            return Ok(sub.clone());
        }
        let gb = self.reduced_basis(ring, sub.ambient, &sub.gens)?;
        Ok(Submodule::from_canonical(sub.ambient, gb))
    }

    /// Canonicalizes an ideal.
    pub fn canonicalize_ideal(&self, ring: &RingSpec, ideal: &Ideal) -> Result<Ideal> {
        if ideal.canonical {
            return Ok(ideal.clone());
        }
        let sub = self.canonicalize(ring, &ideal.to_submodule())?;
        Ideal::from_submodule(&sub)
    }

    /// True when two submodules of the same ambient rank are equal.
    pub fn same_submodule(&self, ring: &RingSpec, a: &Submodule, b: &Submodule) -> Result<bool> {
        if a.ambient != b.ambient {
            return Err(Error::Validation(format!(
                "cannot compare submodules of ranks {} and {}",
                a.ambient, b.ambient
            )));
        }
        let ca = self.canonicalize(ring, a)?;
        let cb = self.canonicalize(ring, b)?;
        Ok(ca.gens == cb.gens)
    }

    /// True when two ideals are equal.
    pub fn same_ideal(&self, ring: &RingSpec, a: &Ideal, b: &Ideal) -> Result<bool> {
        self.same_submodule(ring, &a.to_submodule(), &b.to_submodule())
    }

    // ----- membership -------------------------------------------------------------

    /// True when `v` lies in the submodule.
    pub fn contains(&self, ring: &RingSpec, sub: &Submodule, v: &[Polynomial]) -> Result<bool> {
        if v.len() != sub.ambient {
            return Err(Error::Validation(format!(
                "vector has {} components, ambient rank is {}",
                v.len(),
                sub.ambient
            )));
        }
        let canon = self.canonicalize(ring, sub)?;
        let elems: Vec<GbElem> = canon
            .gens
            .iter()
            .filter_map(|g| GbElem::new(ring, g.clone()))
            .collect();
        let refs: Vec<&GbElem> = elems.iter().collect();
        let (nf, _) = normal_form(ring, v.to_vec(), &refs, 0)?;
        Ok(vec_is_zero(&nf))
    }

    /// True when `f` lies in the ideal.
    pub fn ideal_contains(&self, ring: &RingSpec, ideal: &Ideal, f: &Polynomial) -> Result<bool> {
        self.contains(ring, &ideal.to_submodule(), std::slice::from_ref(f))
    }

    /// Membership with a coordinate transcript over the original generators:
    /// returns `q` with `v = sum_j q_j * gens_j` when `v` lies in the span.
    /// The transcript is re-verified by direct evaluation before returning.
    pub fn membership(
        &self,
        ring: &RingSpec,
        sub: &Submodule,
        v: &[Polynomial],
    ) -> Result<Option<Vec<Polynomial>>> {
        if v.len() != sub.ambient {
            return Err(Error::Validation(format!(
                "vector has {} components, ambient rank is {}",
                v.len(),
                sub.ambient
            )));
        }
        let k = sub.gens.len();
        let ambient = sub.ambient;
        if k == 0 {
            return Ok(if vec_is_zero(v) {
                Some(Vec::new())
            } else {
                None
            });
        }
        // Tagged generators (g_j ++ e_j) in R^(ambient + k).
        let tagged: Vec<Vec<Polynomial>> = sub
            .gens
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let mut t = g.clone();
                t.extend(vec_zero(k));
                t[ambient + j] = ring.one();
                t
            })
            .collect();
        let gb = self.reduced_basis(ring, ambient + k, &tagged)?;
        let elems: Vec<GbElem> = gb
            .iter()
            .filter_map(|g| GbElem::new(ring, g.clone()))
            .collect();
        let refs: Vec<&GbElem> = elems.iter().collect();
        let mut padded = v.to_vec();
        padded.extend(vec_zero(k));
        let (nf, _) = normal_form(ring, padded, &refs, 0)?;
        if !vec_is_zero(&nf[..ambient]) {
            return Ok(None);
        }
        let coords: Vec<Polynomial> = nf[ambient..].iter().map(|p| ring.neg(p)).collect();
        // Verify the transcript: sum_j q_j g_j must reproduce v exactly.
        let mut check = vec_zero(ambient);
        for (q, g) in coords.iter().zip(&sub.gens) {
            check = vec_add(ring, &check, &vec_mul_poly(ring, g, q)?);
        }
        if check != v {
            return Err(Error::Internal(
                "membership transcript failed verification".into(),
            ));
        }
        Ok(Some(coords))
    }

    // ----- syzygies and kernels ---------------------------------------------------

    /// Generators of the syzygy module `{u in R^k : sum_j u_j g_j = 0}` of an
    /// ordered generator list inside `R^ambient`.
    pub fn syzygies(
        &self,
        ring: &RingSpec,
        ambient: usize,
        gens: &[Vec<Polynomial>],
    ) -> Result<Submodule> {
        let k = gens.len();
        for g in gens {
            if g.len() != ambient {
                return Err(Error::Validation(format!(
                    "generator has {} components, ambient rank is {ambient}",
                    g.len()
                )));
            }
        }
        if k == 0 {
            return Ok(Submodule::zero(0));
        }
        let tagged: Vec<Vec<Polynomial>> = gens
            .iter()
            .enumerate()
            .map(|(j, g)| {
                let mut t = g.clone();
                t.extend(vec_zero(k));
                t[ambient + j] = ring.one();
                t
            })
            .collect();
        let gb = self.reduced_basis(ring, ambient + k, &tagged)?;
        let syz: Vec<Vec<Polynomial>> = gb
            .iter()
            .filter(|g| vec_is_zero(&g[..ambient]))
            .map(|g| g[ambient..].to_vec())
            .collect();
        self.canonicalize(ring, &Submodule::from_gens(k, syz)?)
    }

    /// Kernel of the map `R^cols -> R^rows` given by a matrix.
    pub fn kernel_of_map(&self, ring: &RingSpec, m: &PolyMatrix) -> Result<Submodule> {
        if m.cols == 0 {
            return Ok(Submodule::zero(0));
        }
        if m.rows == 0 {
            return Ok(Submodule::full(ring, m.cols));
        }
        self.syzygies(ring, m.rows, &m.columns())
    }

    /// Preimage `{v in R^cols : M v in W}` of a submodule under a matrix map.
    pub fn preimage(&self, ring: &RingSpec, m: &PolyMatrix, w: &Submodule) -> Result<Submodule> {
        if w.ambient != m.rows {
            return Err(Error::Validation(format!(
                "preimage: matrix has {} rows but submodule lives in rank {}",
                m.rows, w.ambient
            )));
        }
        if m.cols == 0 {
            return Ok(Submodule::zero(0));
        }
        if m.rows == 0 {
            return Ok(Submodule::full(ring, m.cols));
        }
        let mut cols = m.columns();
        cols.extend(w.gens.iter().cloned());
        let ker = self.syzygies(ring, m.rows, &cols)?;
        let projected: Vec<Vec<Polynomial>> =
            ker.gens.iter().map(|u| u[..m.cols].to_vec()).collect();
        self.canonicalize(ring, &Submodule::from_gens(m.cols, projected)?)
    }

    /// Intersection of two submodules of the same ambient rank.
    pub fn intersect(&self, ring: &RingSpec, w1: &Submodule, w2: &Submodule) -> Result<Submodule> {
        if w1.ambient != w2.ambient {
            return Err(Error::Validation(format!(
                "cannot intersect submodules of ranks {} and {}",
                w1.ambient, w2.ambient
            )));
        }
        let (k1, k2) = (w1.gens.len(), w2.gens.len());
        if k1 == 0 || k2 == 0 {
            return Ok(Submodule::zero(w1.ambient));
        }
        let mut cols = w1.gens.clone();
        cols.extend(w2.gens.iter().cloned());
        let ker = self.syzygies(ring, w1.ambient, &cols)?;
        let mut elems = Vec::new();
        for u in ker.gens() {
            let mut e = vec_zero(w1.ambient);
            for (j, g) in w1.gens.iter().enumerate() {
                e = vec_add(ring, &e, &vec_mul_poly(ring, g, &u[j])?);
            }
            elems.push(e);
        }
        self.canonicalize(ring, &Submodule::from_gens(w1.ambient, elems)?)
    }

    /// Intersection of two ideals.
    pub fn intersect_ideals(&self, ring: &RingSpec, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        let s = self.intersect(ring, &a.to_submodule(), &b.to_submodule())?;
        Ideal::from_submodule(&s)
    }

    /// Colon submodule `(W : f) = {v : f v in W}`.
    pub fn colon_by_element(
        &self,
        ring: &RingSpec,
        w: &Submodule,
        f: &Polynomial,
    ) -> Result<Submodule> {
        if f.is_zero() {
            return Ok(Submodule::full(ring, w.ambient));
        }
        let mut m = PolyMatrix::zero(w.ambient, w.ambient);
        for i in 0..w.ambient {
            *m.at_mut(i, i) = f.clone();
        }
        self.preimage(ring, &m, w)
    }

    /// Colon ideal `(W : V) = {r in R : r V ⊆ W}` for submodules of the same
    /// ambient rank.
    pub fn colon_into(&self, ring: &RingSpec, w: &Submodule, v: &Submodule) -> Result<Ideal> {
        if w.ambient != v.ambient {
            return Err(Error::Validation(format!(
                "colon: submodules have ranks {} and {}",
                w.ambient, v.ambient
            )));
        }
        let mut acc = Ideal::unit(ring);
        for g in v.gens() {
            let col = PolyMatrix::from_cols(vec![g.clone()])?;
            let pre = self.preimage(ring, &col, w)?;
            let pre_ideal = Ideal::from_submodule(&pre)?;
            acc = self.intersect_ideals(ring, &acc, &pre_ideal)?;
        }
        self.canonicalize_ideal(ring, &acc)
    }

    /// Annihilator of the subquotient `N/L` (requires `L ⊆ N`, verified).
    pub fn ann_subquotient(&self, ring: &RingSpec, n: &Submodule, l: &Submodule) -> Result<Ideal> {
        let nc = self.canonicalize(ring, n)?;
        for g in l.gens() {
            if !self.contains(ring, &nc, g)? {
                return Err(Error::Validation(
                    "denominator is not contained in numerator".into(),
                ));
            }
        }
        self.colon_into(ring, l, &nc)
    }

    /// Subquotient constructor with the containment check.
    pub fn subquotient(
        &self,
        ring: &RingSpec,
        num: &Submodule,
        den: &Submodule,
    ) -> Result<Subquotient> {
        let num_c = self.canonicalize(ring, num)?;
        for g in den.gens() {
            if !self.contains(ring, &num_c, g)? {
                return Err(Error::Validation(
                    "denominator is not contained in numerator".into(),
                ));
            }
        }
        let den_c = self.canonicalize(ring, den)?;
        Ok(Subquotient {
            num: num_c,
            den: den_c,
        })
    }

    /// Annihilator of a verified subquotient.
    pub fn subquotient_ann(&self, ring: &RingSpec, sq: &Subquotient) -> Result<Ideal> {
        self.colon_into(ring, &sq.den, &sq.num)
    }

    /// True when two ideals have the same radical, i.e. define the same
    /// vanishing locus; decided by mutual radical membership of generators.
    pub fn same_support(&self, ring: &RingSpec, a: &Ideal, b: &Ideal) -> Result<bool> {
        for g in a.gens() {
            if !self.radical_membership(ring, g, b)? {
                return Ok(false);
            }
        }
        for g in b.gens() {
            if !self.radical_membership(ring, g, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Radical membership: true iff `f` vanishes on the zero set of `J`,
    /// decided by adjoining a fresh variable `T` and testing whether
    /// `1 ∈ J + (1 - T f)`.
    pub fn radical_membership(&self, ring: &RingSpec, f: &Polynomial, j: &Ideal) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let (ext, t_idx) = ring.with_fresh_var()?;
        let mut gens: Vec<Vec<Polynomial>> = j
            .gens()
            .iter()
            .map(|g| vec![ring.lift_to(&ext, g)])
            .collect();
        let tf = ext.mul(&ext.var(t_idx), &ring.lift_to(&ext, f))?;
        gens.push(vec![ext.sub(&ext.one(), &tf)]);
        let gb = self.reduced_basis(&ext, 1, &gens)?;
        Ok(gb.iter().any(|g| g[0].is_constant()))
    }
}
