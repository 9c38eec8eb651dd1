//! Cokernel presentations with Frobenius structure maps ("root data") and
//! Koszul-cohomology support formulas over the modules they generate.
//!
//! A root datum is a pair of matrices `(A, U)`: `A` (size `a x b`) presents a
//! finitely generated module `L = R^a / im A`, and `U` (size `a x a`) induces
//! a map `coker(A) -> coker(A^{[p]})` into the Frobenius twist. Iterating the
//! twist produces a direct system `L -> L_1 -> L_2 -> ...` whose colimit `M`
//! carries a Frobenius action; all supports computed here are supports of
//! Koszul cohomology of `M`, extracted from finite data at the root level.
//!
//! The support of `H^0` uses the stable kernel of the iterated structure
//! maps; the support of the top Koszul cohomology uses a stabilized chain of
//! preimages of `f·R^a`. The middle cohomology `H^1(K(f1,f2; M))` is computed
//! through the exact sequence
//!
//! ```text
//! 0 -> (0 : f1)-part / f2·(0 : f1)-part -> H^1 -> (f1 M : f2) / f1 M -> 0
//! ```
//!
//! whose two end supports are unions over Frobenius levels `e` of supports of
//! finitely generated subquotients of the level-`e` layers; each level is
//! evaluated with stabilized chains and the union is accumulated as an ideal
//! intersection with its own stop rule.

use crate::chains::{run_increasing_chain, ChainConfig, ChainStat, StopRule};
use crate::error::{Error, Result};
use crate::groebner::{vec_mul_poly, Engine, Ideal, Submodule};
use crate::matrix::{bracket_power, PolyMatrix};
use crate::ring::{Polynomial, RingSpec};

/// A cokernel presentation with a Frobenius structure map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FRoot {
    /// Ambient free rank `a`.
    pub ambient: usize,
    /// Presentation matrix `A` (`a x b`); the presented layer is `coker A`.
    pub presentation: PolyMatrix,
    /// Structure map `U` (`a x a`) into the Frobenius twist.
    pub structure: PolyMatrix,
}

impl FRoot {
    /// Builds a root datum, validating shapes.
    pub fn new(presentation: PolyMatrix, structure: PolyMatrix) -> Result<Self> {
        if structure.rows != structure.cols {
            return Err(Error::Validation(format!(
                "structure map must be square, got {}x{}",
                structure.rows, structure.cols
            )));
        }
        if presentation.rows != structure.rows {
            return Err(Error::Validation(format!(
                "presentation has {} rows but structure map is {}x{}",
                presentation.rows, structure.rows, structure.cols
            )));
        }
        Ok(FRoot {
            ambient: presentation.rows,
            presentation,
            structure,
        })
    }

    /// The zero module's root (ambient rank 0).
    pub fn zero() -> Self {
        FRoot {
            ambient: 0,
            presentation: PolyMatrix::zero(0, 0),
            structure: PolyMatrix::zero(0, 0),
        }
    }

    /// True for the rank-0 (zero module) root.
    pub fn is_zero(&self) -> bool {
        self.ambient == 0
    }

    /// Image of the presentation matrix as a canonical submodule of `R^a`.
    pub fn presented_image(&self, engine: &Engine, ring: &RingSpec) -> Result<Submodule> {
        let sub = Submodule::from_gens(self.ambient, self.presentation.columns())?;
        engine.canonicalize(ring, &sub)
    }

    /// Image of `A^{[p^e]}` as a canonical submodule.
    pub fn presented_image_at(
        &self,
        engine: &Engine,
        ring: &RingSpec,
        e: u32,
    ) -> Result<Submodule> {
        let m = bracket_power(ring, &self.presentation, e)?;
        let sub = Submodule::from_gens(self.ambient, m.columns())?;
        engine.canonicalize(ring, &sub)
    }

    /// Composite structure map from level 0 to level `j`:
    /// `U^{[p^(j-1)]} ... U^{[p]} U` (`j` factors; identity for `j = 0`).
    pub fn composite_structure(&self, ring: &RingSpec, j: u32) -> Result<PolyMatrix> {
        let mut acc = PolyMatrix::identity(ring, self.ambient);
        for i in 0..j {
            acc = bracket_power(ring, &self.structure, i)?.mul(ring, &acc)?;
        }
        Ok(acc)
    }

    /// Composite structure map from level `e` to level `e + d`
    /// (the level-0 composite with every entry raised to the `p^e`-th power).
    pub fn composite_structure_from(&self, ring: &RingSpec, e: u32, d: u32) -> Result<PolyMatrix> {
        bracket_power(ring, &self.composite_structure(ring, d)?, e)
    }
}

/// Outcome of checking the root axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootValidation {
    /// Columns of `U·A` land in `im(A^{[p]})`, so `U` descends to cokernels.
    pub compatible: bool,
    /// `preimage(U, im A^{[p]}) = im A`, i.e. the induced map is injective.
    pub injective: bool,
}

/// Where a support ideal came from and how its chains stopped.
#[derive(Debug, Clone)]
pub struct Provenance {
    /// Stable name of the formula that produced the ideal.
    pub source: String,
    /// Every chain stabilization involved, in evaluation order.
    pub chains: Vec<ChainStat>,
    /// True when every chain stop was certified sound.
    pub certified: bool,
}

impl Provenance {
    /// Builds provenance, deriving `certified` from the chain stats.
    pub fn new(source: &str, chains: Vec<ChainStat>) -> Self {
        let certified = chains.iter().all(|c| c.certified);
        Provenance {
            source: source.to_string(),
            chains,
            certified,
        }
    }
}

/// A support result: a defining ideal plus provenance.
#[derive(Debug, Clone)]
pub struct SupportIdeal {
    /// Defining ideal of the closed support (canonical generators).
    pub ideal: Ideal,
    /// How it was computed.
    pub provenance: Provenance,
}

impl SupportIdeal {
    /// True when the support is empty, i.e. the ideal is the unit ideal.
    pub fn is_empty_support(&self) -> bool {
        self.ideal.is_unit_canonical()
    }
}

/// Checks compatibility and injectivity of a root datum.
pub fn validate_root(engine: &Engine, ring: &RingSpec, root: &FRoot) -> Result<RootValidation> {
    let im_ap = root.presented_image_at(engine, ring, 1)?;
    let ua = root.structure.mul(ring, &root.presentation)?;
    let mut compatible = true;
    for col in ua.columns() {
        if !engine.contains(ring, &im_ap, &col)? {
            compatible = false;
            break;
        }
    }
    let im_a = root.presented_image(engine, ring)?;
    let pre = engine.preimage(ring, &root.structure, &im_ap)?;
    let injective = engine.same_submodule(ring, &pre, &im_a)?;
    Ok(RootValidation {
        compatible,
        injective,
    })
}

fn require_compatible(engine: &Engine, ring: &RingSpec, root: &FRoot) -> Result<()> {
    if !validate_root(engine, ring, root)?.compatible {
        return Err(Error::Validation(
            "structure map is not compatible with the presentation (U·A does not land in im A^{[p]})"
                .into(),
        ));
    }
    Ok(())
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

fn sum_submodules(
    engine: &Engine,
    ring: &RingSpec,
    a: &Submodule,
    b: &Submodule,
) -> Result<Submodule> {
    let mut gens = a.gens().to_vec();
    gens.extend(b.gens().iter().cloned());
    engine.canonicalize(ring, &Submodule::from_gens(a.ambient, gens)?)
}

fn scale_submodule(ring: &RingSpec, w: &Submodule, f: &Polynomial) -> Result<Submodule> {
    let gens = w
        .gens()
        .iter()
        .map(|g| vec_mul_poly(ring, g, f))
        .collect::<Result<Vec<_>>>()?;
    Submodule::from_gens(w.ambient, gens)
}

/// The submodule `(f_1, ..., f_c)·R^a` of `R^a`.
fn scaled_full(fs: &[Polynomial], ambient: usize) -> Result<Submodule> {
    let mut gens = Vec::new();
    for f in fs {
        for s in 0..ambient {
            let mut v = vec![Polynomial::zero(); ambient];
            v[s] = f.clone();
            gens.push(v);
        }
    }
    Submodule::from_gens(ambient, gens)
}

/// Stabilized kernel of the iterated structure maps: the chain
/// `W_j = preimage(U^{[p^j]}...U, im A^{[p^(j+1)]})` stopped at its first
/// repeat (a repeat is provably final for root data, so the stop is
/// certified). Returns the kernel and the chain record.
pub fn stable_kernel(
    engine: &Engine,
    ring: &RingSpec,
    root: &FRoot,
    cfg: &ChainConfig,
) -> Result<(Submodule, ChainStat)> {
    require_compatible(engine, ring, root)?;
    let term = |j: usize| -> Result<Submodule> {
        let comp = root.composite_structure(ring, j as u32 + 1)?;
        let target = root.presented_image_at(engine, ring, j as u32 + 1)?;
        engine.preimage(ring, &comp, &target)
    };
    let outcome = run_increasing_chain(
        "stable_kernel",
        cfg,
        StopRule::FirstRepeat,
        term,
        |a, b| submodule_leq(engine, ring, a, b),
        |a, b| Ok(a.gens() == b.gens()),
    )?;
    let stat = outcome.stat("stable_kernel");
    Ok((outcome.value, stat))
}

/// Support of `H^0(K(f_1..f_c; M))`: with `W` the stable kernel, the support
/// is that of the subquotient `(∩_i (W : f_i)) / W`.
pub fn supp_koszul_h0(
    engine: &Engine,
    ring: &RingSpec,
    root: &FRoot,
    f: &[Polynomial],
    cfg: &ChainConfig,
) -> Result<SupportIdeal> {
    if f.is_empty() {
        return Err(Error::Validation("need at least one Koszul element".into()));
    }
    let (w, stat) = stable_kernel(engine, ring, root, cfg)?;
    let mut n = Submodule::full(ring, root.ambient);
    for fi in f {
        let c = engine.colon_by_element(ring, &w, fi)?;
        n = engine.intersect(ring, &n, &c)?;
    }
    let ideal = engine.ann_subquotient(ring, &n, &w)?;
    Ok(SupportIdeal {
        ideal,
        provenance: Provenance::new("koszul_h0_stable_kernel", vec![stat]),
    })
}

/// Support of the top Koszul cohomology `H^c(K(f_1..f_c; M)) = M/(f)M`:
/// stabilize `V_j = preimage(U^{[p^j]}...U, (f)·R^a + im A^{[p^(j+1)]})`
/// (windowed heuristic stop) and return the support of `R^a / V`.
pub fn supp_koszul_top(
    engine: &Engine,
    ring: &RingSpec,
    root: &FRoot,
    f: &[Polynomial],
    cfg: &ChainConfig,
) -> Result<SupportIdeal> {
    if f.is_empty() {
        return Err(Error::Validation("need at least one Koszul element".into()));
    }
    require_compatible(engine, ring, root)?;
    let f_full = scaled_full(f, root.ambient)?;
    let term = |j: usize| -> Result<Submodule> {
        let comp = root.composite_structure(ring, j as u32 + 1)?;
        let imaj = root.presented_image_at(engine, ring, j as u32 + 1)?;
        let target = sum_submodules(engine, ring, &f_full, &imaj)?;
        engine.preimage(ring, &comp, &target)
    };
    let outcome = run_increasing_chain(
        "top_quotient",
        cfg,
        StopRule::Window,
        term,
        |a, b| submodule_leq(engine, ring, a, b),
        |a, b| Ok(a.gens() == b.gens()),
    )?;
    let stat = outcome.stat("top_quotient");
    let ideal = engine.colon_into(ring, &outcome.value, &Submodule::full(ring, root.ambient))?;
    Ok(SupportIdeal {
        ideal,
        provenance: Provenance::new("koszul_top_quotient", vec![stat]),
    })
}

/// Result of extracting the `(f1, f2)`-power-torsion part of a root datum.
#[derive(Debug, Clone)]
pub struct TorsionRootOutcome {
    /// Root datum presenting the torsion part.
    pub root: FRoot,
    /// Validation report of the new root (injectivity can fail; callers that
    /// need a true root must check).
    pub validation: RootValidation,
    /// Saturation chain record (certified stop).
    pub chain: ChainStat,
}

/// Extracts the `(f1, f2)`-power-torsion part of the presented module as a
/// new root datum.
///
/// The saturation chain `(im A : (f1,f2)^j)` stops at its first repeat (a
/// repeat is final for colon chains). The stabilized submodule is
/// re-presented on its own generators: the new presentation is the syzygy
/// projection, and the new structure map is read off from membership
/// coordinates against the Frobenius-twisted generators.
pub fn torsion_part_root(
    engine: &Engine,
    ring: &RingSpec,
    root: &FRoot,
    f1: &Polynomial,
    f2: &Polynomial,
    cfg: &ChainConfig,
) -> Result<TorsionRootOutcome> {
    require_compatible(engine, ring, root)?;
    let im_a = root.presented_image(engine, ring)?;
    // The chain is incremental: each colon step applies to the previous term,
    // so keep the evaluated terms in a cache captured by the closure.
    let mut cache: Vec<Submodule> = Vec::new();
    let term = |j: usize| -> Result<Submodule> {
        let v = if j == 0 {
            im_a.clone()
        } else {
            let prev = cache.last().expect("chain evaluated in order");
            let c1 = engine.colon_by_element(ring, prev, f1)?;
            let c2 = engine.colon_by_element(ring, prev, f2)?;
            engine.intersect(ring, &c1, &c2)?
        };
        cache.push(v.clone());
        Ok(v)
    };
    let outcome = run_increasing_chain(
        "torsion_saturation",
        cfg,
        StopRule::FirstRepeat,
        term,
        |a, b| submodule_leq(engine, ring, a, b),
        |a, b| Ok(a.gens() == b.gens()),
    )?;
    let stat = outcome.stat("torsion_saturation");
    let sat = outcome.value;
    if sat.gens() == im_a.gens() {
        return Ok(TorsionRootOutcome {
            root: FRoot::zero(),
            validation: RootValidation {
                compatible: true,
                injective: true,
            },
            chain: stat,
        });
    }
    // Generators of the torsion part modulo im A.
    let mut s_gens: Vec<Vec<Polynomial>> = Vec::new();
    for g in sat.gens() {
        if !engine.contains(ring, &im_a, g)? {
            s_gens.push(g.clone());
        }
    }
    let k = s_gens.len();
    // New presentation: syzygies of [s_1..s_k | gens(im A)], first k coords.
    let mut cols = s_gens.clone();
    cols.extend(im_a.gens().iter().cloned());
    let syz = engine.syzygies(ring, root.ambient, &cols)?;
    let projected: Vec<Vec<Polynomial>> = syz.gens().iter().map(|u| u[..k].to_vec()).collect();
    let pres_sub = engine.canonicalize(ring, &Submodule::from_gens(k, projected)?)?;
    let a_new = PolyMatrix::from_cols_in(k, pres_sub.gens().to_vec())?;
    // New structure map: coordinates of U·s_i over {s_j^{[p]}} mod im A^{[p]}.
    let im_ap = root.presented_image_at(engine, ring, 1)?;
    let s_bracket: Vec<Vec<Polynomial>> = s_gens
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| crate::ring::frobenius_power(ring, p, 1))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut span = s_bracket.clone();
    span.extend(im_ap.gens().iter().cloned());
    let span_sub = Submodule::from_gens(root.ambient, span)?;
    let mut u_cols: Vec<Vec<Polynomial>> = Vec::new();
    for s in &s_gens {
        let w = root.structure.mul_vec(ring, s)?;
        let coords = engine.membership(ring, &span_sub, &w)?.ok_or_else(|| {
            Error::Internal(
                "structure map does not stabilize the torsion part (compatibility bug)".into(),
            )
        })?;
        u_cols.push(coords[..k].to_vec());
    }
    let u_new = if k == 0 {
        PolyMatrix::zero(0, 0)
    } else {
        PolyMatrix::from_cols(u_cols)?
    };
    let new_root = FRoot::new(a_new, u_new)?;
    let validation = validate_root(engine, ring, &new_root)?;
    Ok(TorsionRootOutcome {
        root: new_root,
        validation,
        chain: stat,
    })
}

/// Support of the middle Koszul cohomology `H^1(K(f1, f2; M))`.
///
/// Uses the exact sequence relating `H^1` to the kernel-side piece
/// `(0 :_M f1)/f2(0 :_M f1)` and the cokernel-side piece `(f1 M :_M f2)/f1 M`:
/// the support of `H^1` is the union of the two end supports. Each end is a
/// union over Frobenius levels `e` of supports of finitely generated
/// subquotients of the level-`e` layer, evaluated with stabilized chains:
///
/// - cokernel side at level `e`: the lift of `f1 M ∩ L_e` is the stabilized
///   chain over `e' >= e` of `preimage(U_{e->e'}, f1·R^a + im A^{[p^e']})`;
///   the piece is `(lift : f2) / lift`.
/// - kernel side at level `e`: with `Z_e = (im A^{[p^e]} : f1)`, the
///   denominator is the stabilized chain over `e' >= e` of
///   `Z_e ∩ preimage(U_{e->e'}, f2·Z_{e'} + im A^{[p^e']})`; the piece is
///   `Z_e / denominator`.
///
/// The union over `e` is accumulated as an intersection of ideals with a
/// windowed stop. All stops here are heuristic (never certified).
pub fn supp_koszul_h1_pair(
    engine: &Engine,
    ring: &RingSpec,
    root: &FRoot,
    f1: &Polynomial,
    f2: &Polynomial,
    cfg: &ChainConfig,
) -> Result<SupportIdeal> {
    require_compatible(engine, ring, root)?;
    if root.is_zero() {
        return Ok(SupportIdeal {
            ideal: Ideal::unit(ring),
            provenance: Provenance::new("koszul_h1_pair", Vec::new()),
        });
    }
    let a = root.ambient;
    let mut stats: Vec<ChainStat> = Vec::new();

    let cokernel_side_piece = |e: u32, stats: &mut Vec<ChainStat>| -> Result<Ideal> {
        let f1_full = scaled_full(std::slice::from_ref(f1), a)?;
        let term = |d: usize| -> Result<Submodule> {
            let comp = root.composite_structure_from(ring, e, d as u32)?;
            let ima = root.presented_image_at(engine, ring, e + d as u32)?;
            let target = sum_submodules(engine, ring, &f1_full, &ima)?;
            engine.preimage(ring, &comp, &target)
        };
        let outcome = run_increasing_chain(
            &format!("h1_cokernel_lift_e{e}"),
            cfg,
            StopRule::Window,
            term,
            |x, y| submodule_leq(engine, ring, x, y),
            |x, y| Ok(x.gens() == y.gens()),
        )?;
        stats.push(outcome.stat(&format!("h1_cokernel_lift_e{e}")));
        let lift = outcome.value;
        let num = engine.colon_by_element(ring, &lift, f2)?;
        engine.ann_subquotient(ring, &num, &lift)
    };

    let kernel_side_piece = |e: u32, stats: &mut Vec<ChainStat>| -> Result<Ideal> {
        let im_ae = root.presented_image_at(engine, ring, e)?;
        let z_e = engine.colon_by_element(ring, &im_ae, f1)?;
        let term = |d: usize| -> Result<Submodule> {
            let ep = e + d as u32;
            let im_aep = root.presented_image_at(engine, ring, ep)?;
            let z_ep = engine.colon_by_element(ring, &im_aep, f1)?;
            let f2z = scale_submodule(ring, &z_ep, f2)?;
            let target = sum_submodules(engine, ring, &f2z, &im_aep)?;
            let comp = root.composite_structure_from(ring, e, d as u32)?;
            let pre = engine.preimage(ring, &comp, &target)?;
            engine.intersect(ring, &z_e, &pre)
        };
        let outcome = run_increasing_chain(
            &format!("h1_kernel_denominator_e{e}"),
            cfg,
            StopRule::Window,
            term,
            |x, y| submodule_leq(engine, ring, x, y),
            |x, y| Ok(x.gens() == y.gens()),
        )?;
        stats.push(outcome.stat(&format!("h1_kernel_denominator_e{e}")));
        engine.ann_subquotient(ring, &z_e, &outcome.value)
    };

    let mut acc: Option<Ideal> = None;
    let outer = run_increasing_chain(
        "h1_level_union",
        cfg,
        StopRule::Window,
        |e: usize| -> Result<Ideal> {
            let ja = cokernel_side_piece(e as u32, &mut stats)?;
            let jb = kernel_side_piece(e as u32, &mut stats)?;
            let level = engine.intersect_ideals(ring, &ja, &jb)?;
            let next = match &acc {
                None => level,
                Some(prev) => engine.intersect_ideals(ring, prev, &level)?,
            };
            acc = Some(next.clone());
            Ok(next)
        },
        // Support accumulates, so the defining ideal shrinks: check the next
        // ideal is contained in the previous one.
        |prev, next| {
            for g in next.gens() {
                if !engine.ideal_contains(ring, prev, g)? {
                    return Ok(false);
                }
            }
            Ok(true)
        },
        |prev, next| Ok(prev.gens() == next.gens()),
    )?;
    stats.push(outer.stat("h1_level_union"));
    Ok(SupportIdeal {
        ideal: outer.value,
        provenance: Provenance::new("koszul_h1_pair", stats),
    })
}
