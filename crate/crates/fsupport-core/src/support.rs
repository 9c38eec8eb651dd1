//! Top-level pipeline: closed supports of the torsion cohomology of a
//! two-element complete-intersection quotient.
//!
//! For an ideal `I = (g_1..g_t)` and a regular pair `(f1, f2)` in
//! `R = F_p[x_1..x_n]`, the degree-`k` torsion cohomology of `R/(f1, f2)`
//! supported on `I` sits in total degree `k + 2` of the mixed double complex,
//! and its support is the union of three corner supports: the kernel corner
//! in vertical degree `k+2`, the middle row in degree `k+1`, and the cokernel
//! corner targeting horizontal degree `k`. The union of vanishing loci is
//! computed as an intersection of defining ideals.

use crate::cech::{supp_corner_cokernel, supp_corner_kernel, supp_middle_row};
use crate::chains::ChainConfig;
use crate::error::{Error, Result};
use crate::fmodule::{Provenance, SupportIdeal};
use crate::groebner::{Engine, Ideal, Submodule};
use crate::ring::{Polynomial, RingSpec};

/// A fully specified support problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// Ambient polynomial ring.
    pub ring: RingSpec,
    /// Generators of the support ideal `I`.
    pub torsion_gens: Vec<Polynomial>,
    /// The complete-intersection pair `(f1, f2)`.
    pub pair: (Polynomial, Polynomial),
    /// Chain stabilization policy.
    pub cfg: ChainConfig,
}

impl ProblemSpec {
    /// Builds a problem after shape checks (nonzero generators, nonzero f1).
    pub fn new(
        ring: RingSpec,
        torsion_gens: Vec<Polynomial>,
        f1: Polynomial,
        f2: Polynomial,
        cfg: ChainConfig,
    ) -> Result<Self> {
        if torsion_gens.is_empty() {
            return Err(Error::Validation("I needs at least one generator".into()));
        }
        if torsion_gens.iter().any(|g| g.is_zero()) {
            return Err(Error::Validation("generators of I must be nonzero".into()));
        }
        if f1.is_zero() {
            return Err(Error::Validation(
                "f is not a regular sequence: f1 = 0".into(),
            ));
        }
        cfg.validate()?;
        Ok(ProblemSpec {
            ring,
            torsion_gens,
            pair: (f1, f2),
            cfg,
        })
    }

    /// Number of generators of `I` (the truncated-complex length).
    pub fn t(&self) -> usize {
        self.torsion_gens.len()
    }

    /// Checks that `(f1, f2)` is a regular sequence: `f1` is nonzero (a
    /// nonzerodivisor in a domain) and `((f1) : f2) = (f1)`.
    pub fn validate_regular_pair(&self, engine: &Engine) -> Result<()> {
        let (f1, f2) = &self.pair;
        let principal = engine.canonicalize(
            &self.ring,
            &Submodule::from_gens(1, vec![vec![f1.clone()]])?,
        )?;
        let colon = engine.colon_by_element(&self.ring, &principal, f2)?;
        if !engine.same_submodule(&self.ring, &colon, &principal)? {
            return Err(Error::Validation(
                "f is not a regular sequence: f2 is a zerodivisor mod f1".into(),
            ));
        }
        Ok(())
    }
}

/// The three corner supports contributing to one degree.
#[derive(Debug, Clone)]
pub struct DegreePieces {
    /// Kernel corner in vertical degree `k + 2`.
    pub corner_kernel: SupportIdeal,
    /// Middle row in degree `k + 1`.
    pub middle_row: SupportIdeal,
    /// Cokernel corner targeting horizontal degree `k`.
    pub corner_cokernel: SupportIdeal,
}

/// Support of one cohomological degree.
#[derive(Debug, Clone)]
pub struct DegreeSupport {
    /// Cohomological degree `k`.
    pub k: i64,
    /// Defining ideal of the support (exact intersection of the pieces).
    pub ideal: Ideal,
    /// Piece breakdown (absent for out-of-range degrees).
    pub pieces: Option<DegreePieces>,
    /// True when every chain stop involved was certified sound.
    pub certified: bool,
    /// Explanatory note (set for out-of-range degrees).
    pub note: Option<String>,
}

impl DegreeSupport {
    /// True when the support is empty.
    pub fn is_empty_support(&self) -> bool {
        self.ideal.is_unit_canonical()
    }
}

/// Union of supports: intersects the defining ideals so the vanishing locus
/// is the union of the inputs' loci; provenance concatenates all chains.
pub fn union_supports(
    engine: &Engine,
    ring: &RingSpec,
    pieces: &[&SupportIdeal],
) -> Result<SupportIdeal> {
    let mut ideal = Ideal::unit(ring);
    let mut chains = Vec::new();
    for p in pieces {
        ideal = engine.intersect_ideals(ring, &ideal, &p.ideal)?;
        chains.extend(p.provenance.chains.iter().cloned());
    }
    Ok(SupportIdeal {
        ideal,
        provenance: Provenance::new("union_of_pieces", chains),
    })
}

/// Computes the support of the degree-`k` torsion cohomology of
/// `R/(f1, f2)` supported on `I`.
///
/// Degrees outside `0..=t` vanish for length reasons and return the unit
/// ideal with a note.
pub fn supp_lc_ci(engine: &Engine, spec: &ProblemSpec, k: i64) -> Result<DegreeSupport> {
    spec.validate_regular_pair(engine)?;
    let t = spec.t() as i64;
    if k < 0 || k > t {
        return Ok(DegreeSupport {
            k,
            ideal: Ideal::unit(&spec.ring),
            pieces: None,
            certified: true,
            note: Some(format!("degree {k} outside 0..={t}; cohomology vanishes")),
        });
    }
    let (f1, f2) = &spec.pair;
    let g = &spec.torsion_gens;
    let ring = &spec.ring;
    let j0 = (k + 2) as usize;
    let j1 = (k + 1) as usize;
    let corner_kernel = supp_corner_kernel(engine, ring, g, f1, f2, j0, &spec.cfg)?;
    let middle_row = supp_middle_row(engine, ring, g, f1, f2, j1, &spec.cfg)?;
    let corner_cokernel = supp_corner_cokernel(engine, ring, g, f1, f2, j1, &spec.cfg)?;
    let union = union_supports(
        engine,
        ring,
        &[&corner_kernel, &middle_row, &corner_cokernel],
    )?;
    let certified = corner_kernel.provenance.certified
        && middle_row.provenance.certified
        && corner_cokernel.provenance.certified;
    Ok(DegreeSupport {
        k,
        ideal: union.ideal,
        pieces: Some(DegreePieces {
            corner_kernel,
            middle_row,
            corner_cokernel,
        }),
        certified,
        note: None,
    })
}

/// Computes several degrees in sequence.
pub fn compute_degrees(
    engine: &Engine,
    spec: &ProblemSpec,
    degrees: &[i64],
) -> Result<Vec<DegreeSupport>> {
    degrees
        .iter()
        .map(|&k| supp_lc_ci(engine, spec, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, MonomialOrder};

    fn engine() -> Engine {
        Engine::default()
    }

    fn pp(r: &RingSpec, s: &str) -> Polynomial {
        parse_poly(s, r).unwrap()
    }

    fn fmt(r: &RingSpec, i: &Ideal) -> Vec<String> {
        i.gens().iter().map(|g| r.format(g)).collect()
    }

    fn spec_a() -> (Engine, ProblemSpec) {
        let r = RingSpec::new(2, &["x", "y", "z", "w"], MonomialOrder::GrevLex).unwrap();
        let g = vec![pp(&r, "x"), pp(&r, "y")];
        let f1 = pp(&r, "z");
        let f2 = pp(&r, "w");
        let spec = ProblemSpec::new(r, g, f1, f2, ChainConfig::default()).unwrap();
        (engine(), spec)
    }

    fn spec_b() -> (Engine, ProblemSpec) {
        let r = RingSpec::new(2, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let g = vec![pp(&r, "x")];
        let f1 = pp(&r, "x");
        let f2 = pp(&r, "y");
        let spec = ProblemSpec::new(r, g, f1, f2, ChainConfig::default()).unwrap();
        (engine(), spec)
    }

    #[test]
    fn quotient_by_transverse_pair_concentrates_at_origin() {
        let (e, spec) = spec_a();
        let d0 = supp_lc_ci(&e, &spec, 0).unwrap();
        assert!(d0.is_empty_support());
        let d1 = supp_lc_ci(&e, &spec, 1).unwrap();
        assert!(d1.is_empty_support());
        let d2 = supp_lc_ci(&e, &spec, 2).unwrap();
        assert_eq!(fmt(&spec.ring, &d2.ideal), vec!["x", "y", "z", "w"]);
        assert!(!d2.certified);
    }

    #[test]
    fn quotient_killed_by_support_ideal_has_h0_everything_h1_nothing() {
        let (e, spec) = spec_b();
        let d0 = supp_lc_ci(&e, &spec, 0).unwrap();
        let expected = Ideal::from_gens(vec![pp(&spec.ring, "x"), pp(&spec.ring, "y")]);
        assert!(e.same_support(&spec.ring, &d0.ideal, &expected).unwrap());
        let d1 = supp_lc_ci(&e, &spec, 1).unwrap();
        assert!(d1.is_empty_support());
    }

    #[test]
    fn out_of_range_degrees_vanish_with_note() {
        let (e, spec) = spec_b();
        for k in [-1, 2, 7] {
            let d = supp_lc_ci(&e, &spec, k).unwrap();
            assert!(d.is_empty_support());
            assert!(d.pieces.is_none());
            assert!(d.note.is_some());
            assert!(d.certified);
        }
    }

    #[test]
    fn result_ideal_is_exact_intersection_of_pieces() {
        let (e, spec) = spec_b();
        let d = supp_lc_ci(&e, &spec, 0).unwrap();
        let p = d.pieces.as_ref().unwrap();
        let mut acc = Ideal::unit(&spec.ring);
        for piece in [&p.corner_kernel, &p.middle_row, &p.corner_cokernel] {
            acc = e.intersect_ideals(&spec.ring, &acc, &piece.ideal).unwrap();
        }
        assert_eq!(acc.gens(), d.ideal.gens());
    }

    #[test]
    fn swap_of_the_pair_preserves_supports() {
        let (e, spec) = spec_b();
        let r = spec.ring.clone();
        let swapped = ProblemSpec::new(
            r.clone(),
            spec.torsion_gens.clone(),
            spec.pair.1.clone(),
            spec.pair.0.clone(),
            spec.cfg,
        )
        .unwrap();
        for k in [0, 1] {
            let a = supp_lc_ci(&e, &spec, k).unwrap();
            let b = supp_lc_ci(&e, &swapped, k).unwrap();
            assert!(
                e.same_support(&r, &a.ideal, &b.ideal).unwrap(),
                "degree {k}"
            );
        }
    }

    #[test]
    fn union_supports_examples() {
        let e = engine();
        let r = RingSpec::new(2, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let sx = SupportIdeal {
            ideal: Ideal::from_gens(vec![pp(&r, "x")]),
            provenance: Provenance::new("test", Vec::new()),
        };
        let sy = SupportIdeal {
            ideal: Ideal::from_gens(vec![pp(&r, "y")]),
            provenance: Provenance::new("test", Vec::new()),
        };
        let u = union_supports(&e, &r, &[&sx, &sy]).unwrap();
        assert_eq!(fmt(&r, &u.ideal), vec!["x*y"]);

        let unit = SupportIdeal {
            ideal: Ideal::unit(&r),
            provenance: Provenance::new("test", Vec::new()),
        };
        let u2 = union_supports(&e, &r, &[&unit, &sx]).unwrap();
        assert_eq!(fmt(&r, &u2.ideal), vec!["x"]);

        let u3 = union_supports(&e, &r, &[&sx, &sx]).unwrap();
        assert_eq!(fmt(&r, &u3.ideal), vec!["x"]);
    }

    #[test]
    fn same_support_examples() {
        let e = engine();
        let r = RingSpec::new(2, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let a = Ideal::from_gens(vec![pp(&r, "x^2")]);
        let b = Ideal::from_gens(vec![pp(&r, "x")]);
        assert!(e.same_support(&r, &a, &b).unwrap());
        let c = Ideal::from_gens(vec![pp(&r, "y")]);
        assert!(!e.same_support(&r, &b, &c).unwrap());
        let d1 = Ideal::from_gens(vec![pp(&r, "x + y"), pp(&r, "x")]);
        let d2 = Ideal::from_gens(vec![pp(&r, "x"), pp(&r, "y")]);
        assert!(e.same_support(&r, &d1, &d2).unwrap());
    }

    #[test]
    fn validation_rejects_degenerate_problems() {
        let r = RingSpec::new(2, &["x", "y"], MonomialOrder::GrevLex).unwrap();
        let err = ProblemSpec::new(
            r.clone(),
            vec![],
            pp(&r, "x"),
            pp(&r, "y"),
            ChainConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err.kind(), "validation");
        let err2 = ProblemSpec::new(
            r.clone(),
            vec![pp(&r, "x")],
            Polynomial::zero(),
            pp(&r, "y"),
            ChainConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err2.kind(), "validation");
        // x, x is not a regular sequence: the colon test catches it.
        let e = engine();
        let spec = ProblemSpec::new(
            r.clone(),
            vec![pp(&r, "x")],
            pp(&r, "x"),
            pp(&r, "x"),
            ChainConfig::default(),
        )
        .unwrap();
        assert_eq!(
            spec.validate_regular_pair(&e).unwrap_err().kind(),
            "validation"
        );
    }
}
