//! Independent cross-check of the two-element Koszul support computations.
//!
//! Two monomial modules over `R = F_p[x, y]` are small enough to analyze one
//! lattice bidegree at a time: the localized quotient `R_x / R` (basis
//! `x^c y^d` with `c <= -1, d >= 0`) and the corner module
//! `R_xy / (R_x + R_y)` (basis with `c <= -1, d <= -1`). In each bidegree
//! every graded component has dimension 0 or 1 and multiplication by `x` or
//! `y` between two nonzero components is an isomorphism, so the cohomology of
//! `0 -> M -> M^2 -> M -> 0` (maps `(x, y)` then `(-y, x)`) reduces to
//! indicator arithmetic. These exact dimension tables then pin down what the
//! level-chain support computations must return: a single one-dimensional
//! class supported at the origin gives defining ideal `(x, y)`, a vanishing
//! group gives the unit ideal.

use fsupport_core::chains::ChainConfig;
use fsupport_core::fmodule::{
    supp_koszul_h0, supp_koszul_h1_pair, supp_koszul_top, validate_root, FRoot,
};
use fsupport_core::groebner::{Engine, Ideal};
use fsupport_core::matrix::PolyMatrix;
use fsupport_core::ring::{parse_poly, MonomialOrder, Polynomial, RingSpec};

/// Nonzero-component indicator of a bigraded module.
type Indicator = fn(i64, i64) -> bool;

fn localized_quotient(c: i64, d: i64) -> bool {
    c <= -1 && d >= 0
}

fn corner_module(c: i64, d: i64) -> bool {
    c <= -1 && d <= -1
}

/// Koszul cohomology dimensions of one bidegree, by rank counting.
///
/// The degree-0 piece sits in bidegree `(c, d)`, the two degree-1 pieces in
/// `(c+1, d)` and `(c, d+1)`, and the degree-2 piece in `(c+1, d+1)`. A map
/// between components is nonzero exactly when both are nonzero.
fn koszul_dims(m: Indicator, c: i64, d: i64) -> (i64, i64, i64) {
    let m00 = m(c, d) as i64;
    let m10 = m(c + 1, d) as i64;
    let m01 = m(c, d + 1) as i64;
    let m11 = m(c + 1, d + 1) as i64;
    let rank0 = if m00 == 1 && (m10 == 1 || m01 == 1) {
        1
    } else {
        0
    };
    let rank1 = if m11 == 1 && (m10 == 1 || m01 == 1) {
        1
    } else {
        0
    };
    let h0 = m00 - rank0;
    let h1 = (m10 + m01 - rank1) - rank0;
    let h2 = m11 - rank1;
    assert!(
        h0 >= 0 && h1 >= 0 && h2 >= 0,
        "bidegree ({c}, {d}) is inconsistent"
    );
    (h0, h1, h2)
}

const WINDOW: std::ops::RangeInclusive<i64> = -6..=3;

#[test]
fn localized_quotient_has_one_middle_class_at_the_origin() {
    for c in WINDOW {
        for d in WINDOW {
            let (h0, h1, h2) = koszul_dims(localized_quotient, c, d);
            assert_eq!(h0, 0, "h0 at ({c}, {d})");
            let expected_h1 = i64::from(c == -1 && d == -1);
            assert_eq!(h1, expected_h1, "h1 at ({c}, {d})");
            assert_eq!(h2, 0, "h2 at ({c}, {d})");
        }
    }
}

#[test]
fn corner_module_has_one_socle_class_and_nothing_else() {
    for c in WINDOW {
        for d in WINDOW {
            let (h0, h1, h2) = koszul_dims(corner_module, c, d);
            let expected_h0 = i64::from(c == -1 && d == -1);
            assert_eq!(h0, expected_h0, "h0 at ({c}, {d})");
            assert_eq!(h1, 0, "h1 at ({c}, {d})");
            assert_eq!(h2, 0, "h2 at ({c}, {d})");
        }
    }
}

fn pp(r: &RingSpec, s: &str) -> Polynomial {
    parse_poly(s, r).unwrap()
}

/// Generating level of `R_x / R`: quotient `R/(x)` with structure map
/// `x^(p-1)`.
fn localized_quotient_root(r: &RingSpec) -> FRoot {
    let p = r.modulus() as u64;
    let a = PolyMatrix::from_rows(vec![vec![pp(r, "x")]]).unwrap();
    let u = PolyMatrix::from_rows(vec![vec![pp(r, &format!("x^{}", p - 1))]]).unwrap();
    FRoot::new(a, u).unwrap()
}

/// Generating level of `R_xy / (R_x + R_y)`: quotient `R/(x, y)` with
/// structure map `(x y)^(p-1)`.
fn corner_module_root(r: &RingSpec) -> FRoot {
    let p = r.modulus() as u64;
    let a = PolyMatrix::from_rows(vec![vec![pp(r, "x"), pp(r, "y")]]).unwrap();
    let u = PolyMatrix::from_rows(vec![vec![pp(r, &format!("x^{q}*y^{q}", q = p - 1))]]).unwrap();
    FRoot::new(a, u).unwrap()
}

fn check_engine_agrees(p: u32) {
    let engine = Engine::default();
    let r = RingSpec::new(p, &["x", "y"], MonomialOrder::GrevLex).unwrap();
    let cfg = ChainConfig::default();
    let fx = pp(&r, "x");
    let fy = pp(&r, "y");
    let f = [fx.clone(), fy.clone()];
    let origin = Ideal::from_gens(vec![fx.clone(), fy.clone()]);

    let lq = localized_quotient_root(&r);
    let v = validate_root(&engine, &r, &lq).unwrap();
    assert!(v.compatible && v.injective);
    let h0 = supp_koszul_h0(&engine, &r, &lq, &f, &cfg).unwrap();
    assert!(
        h0.is_empty_support(),
        "p = {p}: middle module has no invariants"
    );
    let h1 = supp_koszul_h1_pair(&engine, &r, &lq, &fx, &fy, &cfg).unwrap();
    assert!(
        engine.same_support(&r, &h1.ideal, &origin).unwrap(),
        "p = {p}: one middle class over the origin"
    );
    let top = supp_koszul_top(&engine, &r, &lq, &f, &cfg).unwrap();
    assert!(
        top.is_empty_support(),
        "p = {p}: divisible module has no top quotient"
    );

    let cm = corner_module_root(&r);
    let v = validate_root(&engine, &r, &cm).unwrap();
    assert!(v.compatible && v.injective);
    let h0 = supp_koszul_h0(&engine, &r, &cm, &f, &cfg).unwrap();
    assert!(
        engine.same_support(&r, &h0.ideal, &origin).unwrap(),
        "p = {p}: socle class over the origin"
    );
    let h1 = supp_koszul_h1_pair(&engine, &r, &cm, &fx, &fy, &cfg).unwrap();
    assert!(
        h1.is_empty_support(),
        "p = {p}: corner module has no middle class"
    );
    let top = supp_koszul_top(&engine, &r, &cm, &f, &cfg).unwrap();
    assert!(
        top.is_empty_support(),
        "p = {p}: divisible module has no top quotient"
    );
}

#[test]
fn level_chain_supports_agree_with_the_lattice_tables_p2() {
    check_engine_agrees(2);
}

#[test]
fn level_chain_supports_agree_with_the_lattice_tables_p3() {
    check_engine_agrees(3);
}
