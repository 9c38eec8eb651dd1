//! Stabilizing increasing chains with explicit stop rules.
//!
//! Most quantities in this engine arise as limits of increasing chains of
//! submodules (or decreasing chains of ideals when accumulating supports).
//! Two stop rules are supported:
//!
//! - [`StopRule::FirstRepeat`]: stop at the first pair of equal consecutive
//!   values. Used only where a repeat provably implies the chain is constant
//!   from there on; such stops are reported `certified`.
//! - [`StopRule::Window`]: heuristic stop after `stab_window` consecutive
//!   equalities, followed by a probe of `stab_window` further steps that must
//!   also agree. Such stops are never reported `certified`; the probe outcome
//!   is recorded so callers can surface it.
//!
//! Every step checks monotonicity (each value must contain the previous one);
//! a violation is an internal error, not a soft failure. Exhausting the hard
//! cap before the stop rule fires is an [`Error::Unstabilized`] failure,
//! except that a windowed chain whose window was reached but whose probe was
//! cut off by the cap returns its value with `probe_ok = Some(false)`.

use crate::error::{Error, Result};
use serde::Serialize;

/// Stop-rule parameters shared by all chain computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    /// Consecutive equalities required for a heuristic (windowed) stop.
    pub stab_window: usize,
    /// Largest chain index ever computed.
    pub hard_cap: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            stab_window: 2,
            hard_cap: 12,
        }
    }
}

impl ChainConfig {
    /// Validates the invariants `stab_window >= 1` and
    /// `hard_cap >= stab_window`.
    pub fn validate(&self) -> Result<()> {
        if self.stab_window < 1 {
            return Err(Error::Validation("stab_window must be at least 1".into()));
        }
        if self.hard_cap < self.stab_window {
            return Err(Error::Validation(format!(
                "hard_cap ({}) must be at least stab_window ({})",
                self.hard_cap, self.stab_window
            )));
        }
        Ok(())
    }
}

/// How a chain decides it has stabilized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// First consecutive equality; sound when a repeat implies constancy.
    FirstRepeat,
    /// `stab_window` consecutive equalities, then a probe of the same length.
    Window,
}

/// Outcome of one stabilized chain.
#[derive(Debug, Clone)]
pub struct ChainOutcome<T> {
    /// The stabilized value.
    pub value: T,
    /// First index of the stable run.
    pub stop_index: usize,
    /// True only for [`StopRule::FirstRepeat`] stops.
    pub certified: bool,
    /// Probe result for windowed stops (`None` for certified stops).
    pub probe_ok: Option<bool>,
    /// Total number of chain values computed.
    pub steps: usize,
}

/// Summary of a chain run, carried in result provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStat {
    /// Which chain this was (stable name, not free text).
    pub name: String,
    /// First index of the stable run.
    pub stop_index: usize,
    /// True only for sound (first-repeat) stops.
    pub certified: bool,
    /// Probe result for windowed stops.
    pub probe_ok: Option<bool>,
}

impl<T> ChainOutcome<T> {
    /// Provenance record for this run.
    pub fn stat(&self, name: &str) -> ChainStat {
        ChainStat {
            name: name.to_string(),
            stop_index: self.stop_index,
            certified: self.certified,
            probe_ok: self.probe_ok,
        }
    }
}

/// Runs an increasing chain until its stop rule fires.
///
/// `term(i)` produces the `i`-th value; `leq(a, b)` decides containment of
/// consecutive values (monotonicity check); `eq(a, b)` decides equality.
/// For cumulative chains the caller folds accumulation into `term`.
pub fn run_increasing_chain<T: Clone>(
    name: &str,
    cfg: &ChainConfig,
    rule: StopRule,
    mut term: impl FnMut(usize) -> Result<T>,
    mut leq: impl FnMut(&T, &T) -> Result<bool>,
    mut eq: impl FnMut(&T, &T) -> Result<bool>,
) -> Result<ChainOutcome<T>> {
    cfg.validate()?;
    let w = cfg.stab_window;
    let mut values: Vec<T> = vec![term(0)?];
    let mut run_len = 0usize;
    for i in 1..=cfg.hard_cap {
        let v = term(i)?;
        let prev = &values[i - 1];
        if !leq(prev, &v)? {
            return Err(Error::Internal(format!(
                "chain '{name}' violated monotonicity at step {i}"
            )));
        }
        if eq(prev, &v)? {
            run_len += 1;
        } else {
            run_len = 0;
        }
        values.push(v);
        match rule {
            StopRule::FirstRepeat => {
                if run_len >= 1 {
                    return Ok(ChainOutcome {
                        value: values[i - 1].clone(),
                        stop_index: i - 1,
                        certified: true,
                        probe_ok: None,
                        steps: i + 1,
                    });
                }
            }
            StopRule::Window => {
                if run_len == 2 * w {
                    let s = i - run_len;
                    return Ok(ChainOutcome {
                        value: values[s].clone(),
                        stop_index: s,
                        certified: false,
                        probe_ok: Some(true),
                        steps: i + 1,
                    });
                }
            }
        }
    }
    if rule == StopRule::Window && run_len >= w {
        // Window satisfied but the probe was cut short by the hard cap.
        let s = cfg.hard_cap - run_len;
        return Ok(ChainOutcome {
            value: values[s].clone(),
            stop_index: s,
            certified: false,
            probe_ok: Some(false),
            steps: cfg.hard_cap + 1,
        });
    }
    Err(Error::Unstabilized {
        chain: name.to_string(),
        hard_cap: cfg.hard_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(w: usize, cap: usize) -> ChainConfig {
        ChainConfig {
            stab_window: w,
            hard_cap: cap,
        }
    }

    fn from_seq(seq: &[u32]) -> impl FnMut(usize) -> Result<u32> + '_ {
        move |i| Ok(seq[i.min(seq.len() - 1)])
    }

    fn leq(a: &u32, b: &u32) -> Result<bool> {
        Ok(a <= b)
    }

    fn eq(a: &u32, b: &u32) -> Result<bool> {
        Ok(a == b)
    }

    #[test]
    fn first_repeat_stops_at_first_equality() {
        let out = run_increasing_chain(
            "t",
            &cfg(2, 12),
            StopRule::FirstRepeat,
            from_seq(&[1, 2, 3, 3, 3]),
            leq,
            eq,
        )
        .unwrap();
        assert_eq!(out.value, 3);
        assert_eq!(out.stop_index, 2);
        assert!(out.certified);
        assert_eq!(out.probe_ok, None);
    }

    #[test]
    fn window_stop_includes_probe() {
        let out = run_increasing_chain(
            "t",
            &cfg(2, 12),
            StopRule::Window,
            from_seq(&[1, 2, 3, 3, 3, 3, 3]),
            leq,
            eq,
        )
        .unwrap();
        assert_eq!(out.value, 3);
        assert_eq!(out.stop_index, 2);
        assert!(!out.certified);
        assert_eq!(out.probe_ok, Some(true));
        // window 2 + probe 2 = indices up to 6
        assert_eq!(out.steps, 7);
    }

    #[test]
    fn window_reached_but_probe_cut_off() {
        let out = run_increasing_chain(
            "t",
            &cfg(2, 4),
            StopRule::Window,
            from_seq(&[1, 2, 3, 3, 3]),
            leq,
            eq,
        )
        .unwrap();
        assert_eq!(out.value, 3);
        assert_eq!(out.stop_index, 2);
        assert!(!out.certified);
        assert_eq!(out.probe_ok, Some(false));
    }

    #[test]
    fn unstabilized_is_loud() {
        let err = run_increasing_chain(
            "mychain",
            &cfg(2, 5),
            StopRule::Window,
            |i| Ok(i as u32),
            leq,
            eq,
        )
        .unwrap_err();
        match err {
            Error::Unstabilized { chain, hard_cap } => {
                assert_eq!(chain, "mychain");
                assert_eq!(hard_cap, 5);
            }
            other => panic!("expected unstabilized, got {other:?}"),
        }
    }

    #[test]
    fn monotonicity_violation_is_internal_error() {
        let err = run_increasing_chain(
            "t",
            &cfg(2, 5),
            StopRule::Window,
            from_seq(&[2, 1, 1, 1, 1, 1]),
            leq,
            eq,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn config_invariants() {
        assert!(cfg(0, 5).validate().is_err());
        assert!(cfg(3, 2).validate().is_err());
        assert!(cfg(2, 2).validate().is_ok());
    }

    #[test]
    fn a_later_run_can_stabilize_after_a_false_start() {
        let out = run_increasing_chain(
            "t",
            &cfg(1, 12),
            StopRule::Window,
            from_seq(&[1, 1, 2, 5, 5, 5]),
            leq,
            eq,
        )
        .unwrap();
        // the run at value 1 breaks; the chain settles at 5
        assert_eq!(out.value, 5);
        assert_eq!(out.stop_index, 3);
    }
}
