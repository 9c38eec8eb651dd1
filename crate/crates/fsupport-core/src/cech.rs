//! Frobenius-truncated complexes of localization denominators ("truncated
//! complexes"), their level transitions, torsion-cohomology root extraction,
//! and the three corner supports of the mixed double complex.
//!
//! For generators `g = (g_1..g_t)` and a level `e`, the truncated complex
//! `Č•_e` has degree-`i` term free of rank `C(t, i)` with basis indexed by
//! `i`-subsets `J` (each basis vector standing for the fraction
//! `1 / (∏_{j∈J} g_j)^{p^e}`), and differential entries `±g_ℓ^{p^e}` with an
//! insertion sign. Cohomology of the colimit over `e` computes the torsion
//! cohomology `H^j` supported on `(g)`; each level is a finite matrix
//! problem and the colimit is reached through stabilized preimage chains
//! under the level-transition maps.
//!
//! Mixing in a two-element Koszul direction `(f1, f2)` produces a double
//! complex; the three supports that assemble the torsion cohomology of
//! `R/(f1, f2)` are computed by [`supp_corner_kernel`] (kernel of the degree-2
//! connecting map), [`supp_middle_row`] (middle Koszul cohomology of the
//! torsion module, through its root datum), and [`supp_corner_cokernel`]
//! (cokernel of the connecting map). [`oracle_total_vs_row`] is an
//! independent consistency check equating the total-complex cohomology at a
//! fixed level with a row-complex cohomology shifted by two.

use itertools::Itertools;

use crate::chains::{run_increasing_chain, ChainConfig, ChainStat, StopRule};
use crate::error::{Error, Result};
use crate::fmodule::{
    supp_koszul_h1_pair, validate_root, FRoot, Provenance, RootValidation, SupportIdeal,
};
use crate::groebner::{Engine, Ideal, Submodule, Subquotient};
use crate::matrix::{bracket_power, PolyMatrix};
use crate::ring::{frobenius_power, Polynomial, RingSpec};

/// A truncated complex of localization denominators at a fixed level.
#[derive(Debug, Clone)]
pub struct TruncCechComplex {
    g: Vec<Polynomial>,
    level: u32,
    /// `bases[i]` lists the `i`-subsets of `0..t` in lexicographic order.
    bases: Vec<Vec<Vec<usize>>>,
    /// `diffs[i]` maps degree `i` to degree `i+1`, for `i` in `0..=t`
    /// (the last one has zero rows).
    diffs: Vec<PolyMatrix>,
}

impl TruncCechComplex {
    /// Builds the level-`e` truncated complex on `g`, verifying that
    /// consecutive differentials compose to zero.
    pub fn build(ring: &RingSpec, g: &[Polynomial], level: u32) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::Validation(
                "need at least one torsion generator".into(),
            ));
        }
        if g.iter().any(|p| p.is_zero()) {
            return Err(Error::Validation(
                "torsion generators must be nonzero".into(),
            ));
        }
        let t = g.len();
        let powered: Vec<Polynomial> = g
            .iter()
            .map(|p| frobenius_power(ring, p, level))
            .collect::<Result<_>>()?;
        let bases: Vec<Vec<Vec<usize>>> =
            (0..=t).map(|i| (0..t).combinations(i).collect()).collect();
        let mut diffs = Vec::with_capacity(t + 1);
        for i in 0..t {
            let rows = &bases[i + 1];
            let cols = &bases[i];
            let mut m = PolyMatrix::zero(rows.len(), cols.len());
            for (r, lam) in rows.iter().enumerate() {
                for (c, j_set) in cols.iter().enumerate() {
                    if let Some((s, ell)) = insertion(lam, j_set) {
                        let mut entry = powered[ell].clone();
                        if s % 2 == 0 {
                            entry = ring.neg(&entry);
                        }
                        *m.at_mut(r, c) = entry;
                    }
                }
            }
            diffs.push(m);
        }
        diffs.push(PolyMatrix::zero(0, bases[t].len()));
        for i in 0..t {
            if !diffs[i + 1].mul(ring, &diffs[i])?.is_zero() {
                return Err(Error::Internal(format!(
                    "differential square is nonzero in degree {i}"
                )));
            }
        }
        Ok(TruncCechComplex {
            g: g.to_vec(),
            level,
            bases,
            diffs,
        })
    }

    /// Number of generators `t`.
    pub fn t(&self) -> usize {
        self.g.len()
    }

    /// Truncation level `e`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Rank of the degree-`i` term (0 outside `0..=t`).
    pub fn rank(&self, i: usize) -> usize {
        self.bases.get(i).map_or(0, |b| b.len())
    }

    /// Basis subsets of the degree-`i` term.
    pub fn basis(&self, i: usize) -> &[Vec<usize>] {
        &self.bases[i]
    }

    /// Differential out of degree `i` (a `rank(i+1) x rank(i)` matrix; zero
    /// rows or columns outside the complex's range).
    pub fn diff(&self, i: usize) -> PolyMatrix {
        if i <= self.t() {
            self.diffs[i].clone()
        } else {
            PolyMatrix::zero(0, 0)
        }
    }

    /// Differential into degree `i`, i.e. out of degree `i-1` (for `i = 0`
    /// this is the `rank(0) x 0` zero map).
    pub fn diff_into(&self, i: usize) -> PolyMatrix {
        if i == 0 {
            PolyMatrix::zero(self.rank(0), 0)
        } else {
            self.diff(i - 1)
        }
    }

    /// Diagonal transition map in degree `i` from this level to `to_level`:
    /// the component at basis subset `J` is `(∏_{j∈J} g_j)^(p^to - p^from)`.
    pub fn transition_in_degree(
        &self,
        ring: &RingSpec,
        i: usize,
        to_level: u32,
    ) -> Result<PolyMatrix> {
        if to_level < self.level {
            return Err(Error::Validation(
                "transition target level below current level".into(),
            ));
        }
        if i > self.t() {
            return Ok(PolyMatrix::zero(0, 0));
        }
        let d = to_level - self.level;
        let exp = ring.p_power(d)? - 1;
        let mut entries = Vec::with_capacity(self.bases[i].len());
        for j_set in &self.bases[i] {
            let mut prod = ring.one();
            for &j in j_set {
                prod = ring.mul(&prod, &self.g[j])?;
            }
            let h = ring.pow(&prod, exp)?;
            entries.push(frobenius_power(ring, &h, self.level)?);
        }
        Ok(PolyMatrix::diagonal(entries))
    }

    /// Builds the next-level complex together with the per-degree transition
    /// maps, verifying the chain-map property `T ∘ δ_e = δ_{e+1} ∘ T`.
    pub fn transition_step(&self, ring: &RingSpec) -> Result<(TruncCechComplex, Vec<PolyMatrix>)> {
        let next = TruncCechComplex::build(ring, &self.g, self.level + 1)?;
        let mut maps = Vec::with_capacity(self.t() + 1);
        for i in 0..=self.t() {
            maps.push(self.transition_in_degree(ring, i, self.level + 1)?);
        }
        for i in 0..self.t() {
            let lhs = maps[i + 1].mul(ring, &self.diffs[i])?;
            let rhs = next.diffs[i].mul(ring, &maps[i])?;
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "transition fails to commute with the differential in degree {i}"
                )));
            }
        }
        Ok((next, maps))
    }

    /// True when the other complex is the entrywise `p`-th power of this one
    /// (same generators, level one higher).
    pub fn frobenius_compatible_with(
        &self,
        ring: &RingSpec,
        next: &TruncCechComplex,
    ) -> Result<bool> {
        if next.level != self.level + 1 || next.g != self.g {
            return Ok(false);
        }
        for i in 0..=self.t() {
            if bracket_power(ring, &self.diffs[i], 1)? != next.diffs[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Locates `j_set` inside `lam` (which must have exactly one extra element):
/// returns the 1-based position `s` of the extra element in `lam` and the
/// extra element itself.
fn insertion(lam: &[usize], j_set: &[usize]) -> Option<(usize, usize)> {
    let mut extra = None;
    let mut jj = j_set.iter().peekable();
    for (pos, &x) in lam.iter().enumerate() {
        if jj.peek() == Some(&&x) {
            jj.next();
        } else if extra.is_none() {
            extra = Some((pos + 1, x));
        } else {
            return None;
        }
    }
    if jj.peek().is_some() {
        return None;
    }
    extra
}

fn submodule_leq(
    engine: &Engine,
    ring: &RingSpec,
    small: &Submodule,
    big: &Submodule,
) -> Result<bool> {
    for g in small.gens() {
        if !engine.contains(ring, big, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn image_of(engine: &Engine, ring: &RingSpec, m: &PolyMatrix) -> Result<Submodule> {
    engine.canonicalize(ring, &Submodule::from_gens(m.rows, m.columns())?)
}

fn degenerate_stat(name: &str) -> ChainStat {
    ChainStat {
        name: name.to_string(),
        stop_index: 0,
        certified: true,
        probe_ok: None,
    }
}

/// Degree-`j` torsion cohomology at level `e` as a subquotient of the free
/// degree-`j` term: numerator the cocycles, denominator the stabilized chain
/// (over `e' >= e`) of transition preimages of the degree-`j-1` images,
/// intersected with the cocycles.
pub fn lc_truncated_cohomology(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    j: usize,
    e: u32,
    cfg: &ChainConfig,
) -> Result<(Subquotient, ChainStat)> {
    let t = g.len();
    let name = format!("cohomology_denominator_j{j}_e{e}");
    if j > t {
        let zero = Subquotient {
            num: Submodule::zero(0),
            den: Submodule::zero(0),
        };
        return Ok((zero, degenerate_stat(&name)));
    }
    let cx = TruncCechComplex::build(ring, g, e)?;
    let num = engine.canonicalize(ring, &engine.kernel_of_map(ring, &cx.diff(j))?)?;
    let term = |d: usize| -> Result<Submodule> {
        let target_level = e + d as u32;
        let cxp = TruncCechComplex::build(ring, g, target_level)?;
        let trans = cx.transition_in_degree(ring, j, target_level)?;
        let im = image_of(engine, ring, &cxp.diff_into(j))?;
        let pre = engine.preimage(ring, &trans, &im)?;
        engine.intersect(ring, &pre, &num)
    };
    let outcome = run_increasing_chain(
        &name,
        cfg,
        StopRule::Window,
        term,
        |a, b| submodule_leq(engine, ring, a, b),
        |a, b| Ok(a.gens() == b.gens()),
    )?;
    let stat = outcome.stat(&name);
    Ok((engine.subquotient(ring, &num, &outcome.value)?, stat))
}

/// Root-datum extraction for degree-`j` torsion cohomology.
#[derive(Debug, Clone)]
pub struct LcRootOutcome {
    /// Root presenting the level-0 cohomology layer.
    pub root: FRoot,
    /// Validation report of the extracted root.
    pub validation: RootValidation,
    /// Chains used along the way.
    pub chains: Vec<ChainStat>,
}

/// Extracts a root datum for the degree-`j` torsion cohomology supported on
/// `(g)`: the presentation comes from the level-0 cohomology subquotient and
/// the structure map from transporting each cocycle generator to level 1 and
/// reading its coordinates over the `p`-th powers of the generators (which
/// span the level-1 cocycles, by flatness of the power map).
pub fn lc_root(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    j: usize,
    cfg: &ChainConfig,
) -> Result<LcRootOutcome> {
    let t = g.len();
    if j > t {
        return Ok(LcRootOutcome {
            root: FRoot::zero(),
            validation: RootValidation {
                compatible: true,
                injective: true,
            },
            chains: Vec::new(),
        });
    }
    let (sq, stat) = lc_truncated_cohomology(engine, ring, g, j, 0, cfg)?;
    let kgens = sq.num.gens().to_vec();
    let mut all_in_den = true;
    for k in &kgens {
        if !engine.contains(ring, &sq.den, k)? {
            all_in_den = false;
            break;
        }
    }
    if kgens.is_empty() || all_in_den {
        return Ok(LcRootOutcome {
            root: FRoot::zero(),
            validation: RootValidation {
                compatible: true,
                injective: true,
            },
            chains: vec![stat],
        });
    }
    let m = kgens.len();
    let cx = TruncCechComplex::build(ring, g, 0)?;
    let kmat = PolyMatrix::from_cols_in(cx.rank(j), kgens.clone())?;
    let pres = engine.preimage(ring, &kmat, &sq.den)?;
    let a_mat = PolyMatrix::from_cols_in(m, pres.gens().to_vec())?;
    // Structure map: transport each generator to level 1 and take coordinates
    // over the p-th powers of the generators.
    let trans = cx.transition_in_degree(ring, j, 1)?;
    let twisted: Vec<Vec<Polynomial>> = kgens
        .iter()
        .map(|k| {
            k.iter()
                .map(|p| frobenius_power(ring, p, 1))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let span = Submodule::from_gens(cx.rank(j), twisted)?;
    let mut u_cols = Vec::with_capacity(m);
    for k in &kgens {
        let w = trans.mul_vec(ring, k)?;
        let coords = engine.membership(ring, &span, &w)?.ok_or_else(|| {
            Error::Internal(
                "transported cocycle is not spanned by twisted cocycle generators".into(),
            )
        })?;
        u_cols.push(coords);
    }
    let u_mat = PolyMatrix::from_cols_in(m, u_cols)?;
    let root = FRoot::new(a_mat, u_mat)?;
    let validation = validate_root(engine, ring, &root)?;
    Ok(LcRootOutcome {
        root,
        validation,
        chains: vec![stat],
    })
}

/// The level-0 kernel of the degree-2 connecting map out of the `(j, 0)`
/// corner, as a submodule of the degree-`j` term.
#[derive(Debug, Clone)]
pub struct EdgeKernel {
    /// Cocycles whose connecting value vanishes, with the degree-`j-1` image
    /// adjoined (canonical generators).
    pub k0: Submodule,
}

/// Computes the level-0 kernel of the degree-2 connecting map.
///
/// A degree-`j` cocycle `η` is in the kernel when the Koszul lifts
/// `δ^{j-1} α_i = f_i η` can be chosen so that `-f_2 α_1 + f_1 α_2` is a
/// combination `f_1 β_1 + f_2 β_2 + δ^{j-2} γ` with `β_i` cocycles of degree
/// `j-1`. The whole condition is one syzygy system; the answer is the
/// η-block projection of its kernel with `im δ^{j-1}` adjoined.
pub fn edge_kernel_k0(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    f1: &Polynomial,
    f2: &Polynomial,
    j: usize,
) -> Result<EdgeKernel> {
    let t = g.len();
    if j < 1 || j > t {
        return Err(Error::Validation(format!(
            "connecting-map kernel needs 1 <= j <= {t}, got {j}"
        )));
    }
    let cx = TruncCechComplex::build(ring, g, 0)?;
    let rj = cx.rank(j);
    let rjm1 = cx.rank(j - 1);
    let d_j = cx.diff(j);
    let d_jm1 = cx.diff_into(j);
    let d_jm2 = if j >= 2 {
        cx.diff_into(j - 1)
    } else {
        PolyMatrix::zero(rjm1, 0)
    };
    let kb = PolyMatrix::from_cols_in(rjm1, engine.kernel_of_map(ring, &d_jm1)?.gens().to_vec())?;
    let nb = kb.cols;
    let id_rj = PolyMatrix::identity(ring, rj);
    let id_rjm1 = PolyMatrix::identity(ring, rjm1);
    let z = PolyMatrix::zero;
    // Column groups: [η | α1 | α2 | cβ1 | cβ2 | γ]; row groups: cocycle
    // condition on η, the two Koszul lifts, and the combination condition.
    let rjp1 = cx.rank(j + 1);
    let ng = d_jm2.cols;
    let grid_owned: Vec<Vec<PolyMatrix>> = vec![
        vec![
            d_j.clone(),
            z(rjp1, rjm1),
            z(rjp1, rjm1),
            z(rjp1, nb),
            z(rjp1, nb),
            z(rjp1, ng),
        ],
        vec![
            id_rj.scale(ring, f1)?.neg(ring),
            d_jm1.clone(),
            z(rj, rjm1),
            z(rj, nb),
            z(rj, nb),
            z(rj, ng),
        ],
        vec![
            id_rj.scale(ring, f2)?.neg(ring),
            z(rj, rjm1),
            d_jm1.clone(),
            z(rj, nb),
            z(rj, nb),
            z(rj, ng),
        ],
        vec![
            z(rjm1, rj),
            id_rjm1.scale(ring, f2)?.neg(ring),
            id_rjm1.scale(ring, f1)?,
            kb.scale(ring, f1)?.neg(ring),
            kb.scale(ring, f2)?.neg(ring),
            d_jm2.neg(ring),
        ],
    ];
    let grid: Vec<Vec<&PolyMatrix>> = grid_owned.iter().map(|r| r.iter().collect()).collect();
    let system = PolyMatrix::block(&grid)?;
    let ker = engine.kernel_of_map(ring, &system)?;
    let mut gens: Vec<Vec<Polynomial>> = ker.gens().iter().map(|u| u[..rj].to_vec()).collect();
    gens.extend(d_jm1.columns());
    let k0 = engine.canonicalize(ring, &Submodule::from_gens(rj, gens)?)?;
    // Structural sandwich: the image sits inside, and everything is a cocycle.
    let cocycles = engine.canonicalize(ring, &engine.kernel_of_map(ring, &d_j)?)?;
    if !submodule_leq(engine, ring, &k0, &cocycles)? {
        return Err(Error::Internal(
            "connecting-map kernel contains a non-cocycle".into(),
        ));
    }
    if !submodule_leq(engine, ring, &image_of(engine, ring, &d_jm1)?, &k0)? {
        return Err(Error::Internal(
            "connecting-map kernel misses the coboundaries".into(),
        ));
    }
    Ok(EdgeKernel { k0 })
}

/// Support of the `(j, 0)`-corner surviving kernel: the subquotient of the
/// connecting-map kernel by the stabilized full image of degree `j-1`.
pub fn supp_corner_kernel(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    f1: &Polynomial,
    f2: &Polynomial,
    j: usize,
    cfg: &ChainConfig,
) -> Result<SupportIdeal> {
    let t = g.len();
    if j > t {
        return Ok(SupportIdeal {
            ideal: Ideal::unit(ring),
            provenance: Provenance::new("corner_kernel", Vec::new()),
        });
    }
    let edge = edge_kernel_k0(engine, ring, g, f1, f2, j)?;
    let (sq, stat) = lc_truncated_cohomology(engine, ring, g, j, 0, cfg)?;
    let den = engine.intersect(ring, &edge.k0, &sq.den)?;
    let ideal = engine.ann_subquotient(ring, &edge.k0, &den)?;
    Ok(SupportIdeal {
        ideal,
        provenance: Provenance::new("corner_kernel", vec![stat]),
    })
}

/// Support of the middle-row contribution in total degree `j + 1`: the middle
/// Koszul cohomology of the degree-`j` torsion module, computed on its root.
pub fn supp_middle_row(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    f1: &Polynomial,
    f2: &Polynomial,
    j: usize,
    cfg: &ChainConfig,
) -> Result<SupportIdeal> {
    let lcr = lc_root(engine, ring, g, j, cfg)?;
    if lcr.root.is_zero() {
        return Ok(SupportIdeal {
            ideal: Ideal::unit(ring),
            provenance: Provenance::new("middle_row", lcr.chains),
        });
    }
    let s = supp_koszul_h1_pair(engine, ring, &lcr.root, f1, f2, cfg)?;
    let mut chains = lcr.chains;
    chains.extend(s.provenance.chains);
    Ok(SupportIdeal {
        ideal: s.ideal,
        provenance: Provenance::new("middle_row", chains),
    })
}

/// Support of the `(j-1, 2)`-corner surviving cokernel.
///
/// The numerator is the level-0 cocycle module in degree `j-1`. The
/// denominator is the stabilized union over levels `e` of the η-projections
/// of the level-`e` system expressing that the class of `η` is a connecting
/// value plus a Koszul multiple:
/// `T_{0→e} η = -f_2 α_1 + f_1 α_2 + f_1 β_1 + f_2 β_2 + δ^{j-2} γ` with
/// `δ^{j-1} α_i = f_i τ` for a common degree-`j` cocycle `τ` and cocycles
/// `β_i` of degree `j-1`. The system subsumes the plain coboundary
/// denominator (take everything but `γ` zero).
pub fn supp_corner_cokernel(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    f1: &Polynomial,
    f2: &Polynomial,
    j: usize,
    cfg: &ChainConfig,
) -> Result<SupportIdeal> {
    let t = g.len();
    if j < 1 {
        return Err(Error::Validation("cokernel corner needs j >= 1".into()));
    }
    if j - 1 > t {
        return Ok(SupportIdeal {
            ideal: Ideal::unit(ring),
            provenance: Provenance::new("corner_cokernel", Vec::new()),
        });
    }
    let cx0 = TruncCechComplex::build(ring, g, 0)?;
    let rjm1 = cx0.rank(j - 1);
    let h_num = engine.canonicalize(ring, &engine.kernel_of_map(ring, &cx0.diff(j - 1))?)?;
    if h_num.is_zero_canonical() {
        return Ok(SupportIdeal {
            ideal: Ideal::unit(ring),
            provenance: Provenance::new("corner_cokernel", Vec::new()),
        });
    }
    let d0_jm1 = cx0.diff(j - 1);
    let name = format!("cokernel_denominator_j{j}");
    let term = |e: usize| -> Result<Submodule> {
        let level = e as u32;
        let cxe = TruncCechComplex::build(ring, g, level)?;
        let rj = cxe.rank(j);
        let de_jm1 = cxe.diff(j - 1);
        let de_jm2 = if j >= 2 {
            cxe.diff_into(j - 1)
        } else {
            PolyMatrix::zero(rjm1, 0)
        };
        let kt = PolyMatrix::from_cols_in(
            rj,
            engine.kernel_of_map(ring, &cxe.diff(j))?.gens().to_vec(),
        )?;
        let kb =
            PolyMatrix::from_cols_in(rjm1, engine.kernel_of_map(ring, &de_jm1)?.gens().to_vec())?;
        let trans = cx0.transition_in_degree(ring, j - 1, level)?;
        let id = PolyMatrix::identity(ring, rjm1);
        let z = PolyMatrix::zero;
        let nt = kt.cols;
        let nb = kb.cols;
        let ng = de_jm2.cols;
        let r0 = cx0.rank(j);
        // Column groups: [η | cτ | α1 | α2 | cβ1 | cβ2 | γ].
        let grid_owned: Vec<Vec<PolyMatrix>> = vec![
            vec![
                d0_jm1.clone(),
                z(r0, nt),
                z(r0, rjm1),
                z(r0, rjm1),
                z(r0, nb),
                z(r0, nb),
                z(r0, ng),
            ],
            vec![
                z(rj, rjm1),
                kt.scale(ring, f1)?.neg(ring),
                de_jm1.clone(),
                z(rj, rjm1),
                z(rj, nb),
                z(rj, nb),
                z(rj, ng),
            ],
            vec![
                z(rj, rjm1),
                kt.scale(ring, f2)?.neg(ring),
                z(rj, rjm1),
                de_jm1.clone(),
                z(rj, nb),
                z(rj, nb),
                z(rj, ng),
            ],
            vec![
                trans,
                z(rjm1, nt),
                id.scale(ring, f2)?,
                id.scale(ring, f1)?.neg(ring),
                kb.scale(ring, f1)?.neg(ring),
                kb.scale(ring, f2)?.neg(ring),
                de_jm2.neg(ring),
            ],
        ];
        let grid: Vec<Vec<&PolyMatrix>> = grid_owned.iter().map(|r| r.iter().collect()).collect();
        let system = PolyMatrix::block(&grid)?;
        let ker = engine.kernel_of_map(ring, &system)?;
        let gens: Vec<Vec<Polynomial>> = ker.gens().iter().map(|u| u[..rjm1].to_vec()).collect();
        engine.canonicalize(ring, &Submodule::from_gens(rjm1, gens)?)
    };
    let outcome = run_increasing_chain(
        &name,
        cfg,
        StopRule::Window,
        term,
        |a, b| submodule_leq(engine, ring, a, b),
        |a, b| Ok(a.gens() == b.gens()),
    )?;
    let stat = outcome.stat(&name);
    let ideal = engine.ann_subquotient(ring, &h_num, &outcome.value)?;
    Ok(SupportIdeal {
        ideal,
        provenance: Provenance::new("corner_cokernel", vec![stat]),
    })
}

/// Outcome of the independent total-versus-row cohomology comparison.
#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Total-complex degree compared.
    pub k: usize,
    /// Truncation level.
    pub level: u32,
    /// Annihilator of the total-complex cohomology in degree `k`.
    pub total_ann: Ideal,
    /// Annihilator of the row cohomology in degree `k - 2`.
    pub row_ann: Ideal,
    /// Whether the two define the same support.
    pub matches: bool,
}

/// Compares `H^k` of the level-`e` total complex (truncated complex crossed
/// with the two-element Koszul complex on `f1^{p^e}, f2^{p^e}`) with
/// `H^{k-2}` of the truncated complex reduced mod `(f1^{p^e}, f2^{p^e})`.
///
/// Since every term of the truncated complex is free, the column-first
/// filtration degenerates to one row and the two sides must agree; a mismatch
/// indicates a computation bug. Requires the powered pair to be a regular
/// sequence (checked; refused otherwise).
pub fn oracle_total_vs_row(
    engine: &Engine,
    ring: &RingSpec,
    g: &[Polynomial],
    f1: &Polynomial,
    f2: &Polynomial,
    e: u32,
    k: usize,
) -> Result<OracleReport> {
    let t = g.len();
    let q1 = frobenius_power(ring, f1, e)?;
    let q2 = frobenius_power(ring, f2, e)?;
    if q1.is_zero() {
        return Err(Error::Validation("first Koszul element is zero".into()));
    }
    let principal = engine.canonicalize(ring, &Submodule::from_gens(1, vec![vec![q1.clone()]])?)?;
    let colon = engine.colon_by_element(ring, &principal, &q2)?;
    if !engine.same_submodule(ring, &colon, &principal)? {
        return Err(Error::Validation(
            "powered pair is not a regular sequence; comparison precondition fails".into(),
        ));
    }
    let cx = TruncCechComplex::build(ring, g, e)?;
    let total = TotalComplex::build(ring, &cx, &q1, &q2)?;
    let total_ann = if k > t + 2 {
        Ideal::unit(ring)
    } else {
        let n = engine.canonicalize(ring, &engine.kernel_of_map(ring, &total.diffs[k])?)?;
        let l = if k == 0 {
            Submodule::zero(total.ranks[0])
        } else {
            image_of(engine, ring, &total.diffs[k - 1])?
        };
        engine.ann_subquotient(ring, &n, &l)?
    };
    let row_ann = if k < 2 || k - 2 > t {
        Ideal::unit(ring)
    } else {
        let j = k - 2;
        let jc_next = koszul_span(&q1, &q2, cx.rank(j + 1))?;
        let n = engine.preimage(ring, &cx.diff(j), &jc_next)?;
        let mut den_gens = cx.diff_into(j).columns();
        den_gens.extend(koszul_span(&q1, &q2, cx.rank(j))?.gens().iter().cloned());
        let l = engine.canonicalize(ring, &Submodule::from_gens(cx.rank(j), den_gens)?)?;
        engine.ann_subquotient(ring, &n, &l)?
    };
    let matches = engine.same_support(ring, &total_ann, &row_ann)?;
    Ok(OracleReport {
        k,
        level: e,
        total_ann,
        row_ann,
        matches,
    })
}

/// `(q1, q2) · R^rank` as a submodule.
fn koszul_span(q1: &Polynomial, q2: &Polynomial, rank: usize) -> Result<Submodule> {
    let mut gens = Vec::new();
    for f in [q1, q2] {
        for s in 0..rank {
            let mut v = vec![Polynomial::zero(); rank];
            v[s] = f.clone();
            gens.push(v);
        }
    }
    Submodule::from_gens(rank, gens)
}

/// The total complex of the truncated complex crossed with a two-element
/// Koszul complex, with verified square-zero differentials.
struct TotalComplex {
    /// `ranks[n]` for `n` in `0..=t+2`.
    ranks: Vec<usize>,
    /// `diffs[n]: T^n -> T^{n+1}` for `n` in `0..=t+2` (the last has 0 rows).
    diffs: Vec<PolyMatrix>,
}

/// Koszul layer multiplicities: one copy in layers 0 and 2, two in layer 1.
const KOSZUL_RANKS: [usize; 3] = [1, 2, 1];

impl TotalComplex {
    /// Sub-blocks `(koszul_layer i, cech_degree j, copy c)` of total degree
    /// `n`, ordered by `j` ascending then copy index.
    fn blocks(t: usize, n: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for j in 0..=t.min(n) {
            let i = n - j;
            if i > 2 {
                continue;
            }
            for c in 0..KOSZUL_RANKS[i] {
                out.push((i, j, c));
            }
        }
        out
    }

    fn build(
        ring: &RingSpec,
        cx: &TruncCechComplex,
        q1: &Polynomial,
        q2: &Polynomial,
    ) -> Result<TotalComplex> {
        let t = cx.t();
        let mut ranks = Vec::with_capacity(t + 3);
        for n in 0..=t + 2 {
            ranks.push(
                Self::blocks(t, n)
                    .iter()
                    .map(|&(_, j, _)| cx.rank(j))
                    .sum::<usize>(),
            );
        }
        let mut diffs = Vec::with_capacity(t + 3);
        for n in 0..=t + 2 {
            let rows_blocks = if n == t + 2 {
                Vec::new()
            } else {
                Self::blocks(t, n + 1)
            };
            let cols_blocks = Self::blocks(t, n);
            if rows_blocks.is_empty() {
                diffs.push(PolyMatrix::zero(0, ranks[n]));
                continue;
            }
            let mut grid_owned: Vec<Vec<PolyMatrix>> = Vec::with_capacity(rows_blocks.len());
            for &(ip, jp, cp) in &rows_blocks {
                let mut row: Vec<PolyMatrix> = Vec::with_capacity(cols_blocks.len());
                for &(i, j, c) in &cols_blocks {
                    let cell = if jp == j + 1 && ip == i && cp == c {
                        // Complex direction, with the Koszul-layer sign.
                        let d = cx.diff(j);
                        if i % 2 == 1 {
                            d.neg(ring)
                        } else {
                            d
                        }
                    } else if jp == j && ip == i + 1 {
                        // Koszul direction on the layer copies.
                        let idm = PolyMatrix::identity(ring, cx.rank(j));
                        match (i, c, cp) {
                            (0, 0, 0) => idm.scale(ring, q1)?,
                            (0, 0, 1) => idm.scale(ring, q2)?,
                            (1, 0, 0) => idm.scale(ring, q2)?.neg(ring),
                            (1, 1, 0) => idm.scale(ring, q1)?,
                            _ => PolyMatrix::zero(cx.rank(jp), cx.rank(j)),
                        }
                    } else {
                        PolyMatrix::zero(cx.rank(jp), cx.rank(j))
                    };
                    row.push(cell);
                }
                grid_owned.push(row);
            }
            let grid: Vec<Vec<&PolyMatrix>> =
                grid_owned.iter().map(|r| r.iter().collect()).collect();
            diffs.push(PolyMatrix::block(&grid)?);
        }
        for n in 0..=t + 1 {
            if !diffs[n + 1].mul(ring, &diffs[n])?.is_zero() {
                return Err(Error::Internal(format!(
                    "total-complex differential square is nonzero in degree {n}"
                )));
            }
        }
        Ok(TotalComplex { ranks, diffs })
    }
}
