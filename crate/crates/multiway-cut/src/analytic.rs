//! Closed-form cut densities for every rounding scheme, as pure functions
//! of the edge location `(u1, u2)` and the scheme parameters.
//!
//! Formulas that assume `u1 <= u2` reject unsorted input; the mixture
//! evaluators sort on entry. The exponential-clocks and base
//! single-threshold formulas are exact densities; the refined
//! single/descending formulas and the independent-thresholds expressions
//! are upper bounds, and everything built from them certifies from above.

use crate::density::{self, PiecewiseDensity};
use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

/// Where the remaining coordinates sit relative to `u1 <= u2`, for the
/// refined single-threshold and descending-thresholds bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OtherCoords {
    /// Every other coordinate is at most `u1`.
    AllOthersBelow,
    /// Some other coordinate lies in `(u1, u2]`.
    SomeOtherBetween,
    /// Some other coordinate exceeds `u2`.
    SomeOtherAbove,
}

/// Position of `(u1 <= u2, others)` relative to the threshold support
/// bound `b`. These are the five cases of the combined-density analysis;
/// cases II and IV additionally require enough slack for a coordinate
/// above `b`, and IV and V are reachable only when `b < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixtureCase {
    /// u1 <= u2 <= b, all other coordinates <= b.
    I,
    /// u1 <= u2 <= b, some other coordinate > b.
    II,
    /// u1 <= b < u2, all other coordinates <= b.
    III,
    /// u1 <= b < u2, some other coordinate > b.
    IV,
    /// b < u1 <= u2.
    V,
}

impl fmt::Display for MixtureCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MixtureCase::I => "I",
            MixtureCase::II => "II",
            MixtureCase::III => "III",
            MixtureCase::IV => "IV",
            MixtureCase::V => "V",
        };
        f.write_str(s)
    }
}

impl MixtureCase {
    pub const ALL: [MixtureCase; 5] = [
        MixtureCase::I,
        MixtureCase::II,
        MixtureCase::III,
        MixtureCase::IV,
        MixtureCase::V,
    ];

    /// Whether some configuration of the unobserved coordinates makes this
    /// case possible at a sorted location `(u1, u2)`.
    pub fn applicable(self, u1: f64, u2: f64, b: f64) -> bool {
        debug_assert!(u1 <= u2);
        let slack = 1.0 - u1 - u2;
        match self {
            MixtureCase::I => u2 <= b,
            MixtureCase::II => u2 <= b && slack > b,
            MixtureCase::III => u1 <= b && u2 > b,
            MixtureCase::IV => u1 <= b && u2 > b && slack > b,
            MixtureCase::V => u1 > b,
        }
    }
}

/// All cases applicable at a sorted location.
pub fn applicable_cases(u1: f64, u2: f64, b: f64) -> Vec<MixtureCase> {
    MixtureCase::ALL
        .into_iter()
        .filter(|c| c.applicable(u1, u2, b))
        .collect()
}

/// The rescaled simplex slack a = (1 - u1 - u2) / b of the
/// independent-thresholds analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KargerSlack(pub f64);

impl KargerSlack {
    pub fn new(u1: f64, u2: f64, b: f64) -> Self {
        KargerSlack((1.0 - u1 - u2) / b)
    }
}

/// Below this slack the exp-based expressions switch to their series
/// expansions (catastrophic cancellation sets in well before 1e-6).
pub const SERIES_SWITCH: f64 = 1e-4;

/// (1 - e^-a) / a, with a 4-term series below the switch point.
fn expr_f1(a: f64) -> f64 {
    if a < SERIES_SWITCH {
        1.0 - a / 2.0 + a * a / 6.0 - a * a * a / 24.0
    } else {
        (1.0 - (-a).exp()) / a
    }
}

/// (1 - (1 + a) e^-a) / a^2, with a 4-term series below the switch point.
fn expr_f2(a: f64) -> f64 {
    if a < SERIES_SWITCH {
        0.5 - a / 3.0 + a * a / 8.0 - a * a * a / 30.0
    } else {
        (1.0 - (1.0 + a) * (-a).exp()) / (a * a)
    }
}

/// (a + e^-a - 1) / a^2, with a 4-term series below the switch point.
fn expr_f3(a: f64) -> f64 {
    if a < SERIES_SWITCH {
        0.5 - a / 6.0 + a * a / 24.0 - a * a * a / 120.0
    } else {
        (a + (-a).exp() - 1.0) / (a * a)
    }
}

/// Case-I independent-thresholds bound with a caller-supplied e^-a
/// (used by the grid scan, which maintains the exponential incrementally).
pub(crate) fn karger_low_low_with_exp(u_sum: f64, a: f64, exp_neg_a: f64, b: f64) -> f64 {
    let (f1, f2) = if a < SERIES_SWITCH {
        (expr_f1(a), expr_f2(a))
    } else {
        (
            (1.0 - exp_neg_a) / a,
            (1.0 - (1.0 + a) * exp_neg_a) / (a * a),
        )
    };
    2.0 / b * f1 - u_sum / (b * b) * f2
}

/// Case-III independent-thresholds bound with a caller-supplied e^-a.
pub(crate) fn karger_split_with_exp(a: f64, exp_neg_a: f64, b: f64) -> f64 {
    let f3 = if a < SERIES_SWITCH {
        expr_f3(a)
    } else {
        (a + exp_neg_a - 1.0) / (a * a)
    };
    f3 / b
}

/// Exponential-clocks cut density: 2 - u1 - u2, exact for every k.
pub fn density_expclocks(u1: f64, u2: f64) -> Result<f64> {
    check_domain(u1, u2)?;
    Ok(2.0 - u1 - u2)
}

fn check_domain(u1: f64, u2: f64) -> Result<()> {
    if u1 < 0.0 || u2 < 0.0 || u1 + u2 > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "({u1}, {u2}) is outside the simplex triangle"
        )));
    }
    Ok(())
}

fn check_sorted(u1: f64, u2: f64) -> Result<()> {
    check_domain(u1, u2)?;
    if u1 > u2 {
        return Err(Error::Domain(format!("expected u1 <= u2, got ({u1}, {u2})")));
    }
    Ok(())
}

/// Single-threshold cut density phi(u1)/2 + phi(u2), assuming u1 <= u2.
/// Exact when every other coordinate is at most u1 (and k is large).
pub fn density_single(u1: f64, u2: f64, phi: &PiecewiseDensity) -> Result<f64> {
    check_sorted(u1, u2)?;
    Ok(0.5 * phi.evaluate(u1) + phi.evaluate(u2))
}

/// Refined single-threshold bound depending on the other coordinates.
pub fn density_single_refined(
    u1: f64,
    u2: f64,
    phi: &PiecewiseDensity,
    regime: OtherCoords,
) -> Result<f64> {
    check_sorted(u1, u2)?;
    let (c1, c2) = match regime {
        OtherCoords::AllOthersBelow => (0.5, 1.0),
        OtherCoords::SomeOtherBetween => (1.0 / 3.0, 1.0),
        OtherCoords::SomeOtherAbove => (1.0 / 3.0, 0.5),
    };
    Ok(c1 * phi.evaluate(u1) + c2 * phi.evaluate(u2))
}

/// Descending-thresholds bound (1 - int_{u1}^{u2} psi) psi(u1) + psi(u2),
/// assuming u1 <= u2.
pub fn density_descending(u1: f64, u2: f64, psi: &PiecewiseDensity) -> Result<f64> {
    check_sorted(u1, u2)?;
    Ok((1.0 - psi.integrate(u1, u2)) * psi.evaluate(u1) + psi.evaluate(u2))
}

/// Refined descending-thresholds bound with one explicit other coordinate.
pub fn density_descending_refined(
    u1: f64,
    u2: f64,
    u_other: f64,
    psi: &PiecewiseDensity,
    regime: OtherCoords,
) -> Result<f64> {
    check_sorted(u1, u2)?;
    let not_captured_by_2 = 1.0 - psi.integrate(u1, u2);
    match regime {
        OtherCoords::AllOthersBelow => {
            if u_other > u1 {
                return Err(Error::Domain(format!(
                    "regime expects u_other <= u1, got {u_other} > {u1}"
                )));
            }
            Ok(not_captured_by_2 * psi.evaluate(u1) + psi.evaluate(u2))
        }
        OtherCoords::SomeOtherBetween => {
            if !(u_other > u1 && u_other <= u2) {
                return Err(Error::Domain(format!(
                    "regime expects u1 < u_other <= u2, got {u_other}"
                )));
            }
            let not_captured_by_other = 1.0 - psi.integrate(u1, u_other);
            Ok(not_captured_by_2 * not_captured_by_other * psi.evaluate(u1) + psi.evaluate(u2))
        }
        OtherCoords::SomeOtherAbove => {
            if !(u_other > u2) {
                return Err(Error::Domain(format!(
                    "regime expects u_other > u2, got {u_other}"
                )));
            }
            let not_captured_by_other = 1.0 - psi.integrate(u1, u_other.min(1.0));
            let second = (1.0 - psi.integrate(u2, u_other.min(1.0))) * psi.evaluate(u2);
            Ok(not_captured_by_2 * not_captured_by_other * psi.evaluate(u1) + second)
        }
    }
}

/// Independent-thresholds (uniform on [0, b]) cut-density bound for the
/// given coordinate case, assuming u1 <= u2. Case I/II/III/IV map to the
/// all-low / others-high / split / split-and-high regimes; case V is 0.
pub fn density_independent(u1: f64, u2: f64, b: f64, case: MixtureCase) -> Result<f64> {
    check_sorted(u1, u2)?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::Domain(format!("b must be in (0, 1], got {b}")));
    }
    if !case.applicable(u1, u2, b) {
        return Err(Error::InapplicableCase {
            case: case.to_string(),
            u1,
            u2,
        });
    }
    let a = KargerSlack::new(u1, u2, b).0;
    Ok(match case {
        MixtureCase::I => 2.0 / b * expr_f1(a) - (u1 + u2) / (b * b) * expr_f2(a),
        MixtureCase::II => 1.0 / b - (u1 + u2) / (6.0 * b * b),
        MixtureCase::III => expr_f3(a) / b,
        MixtureCase::IV => 1.0 / (3.0 * b),
        MixtureCase::V => 0.0,
    })
}

/// Per-case coefficients of the four-scheme mixture density: the density
/// is p1*clocks + phi_u1*phit(u1) + phi_u2*phit(u2) + p3*descending +
/// p4*independent, where phit is the folded variable p2*phi. Shared by
/// the certifier (evaluation) and the optimizer (LP row generation).
#[derive(Debug, Clone, Copy)]
pub struct CaseTerms {
    pub clocks: f64,
    pub phi_u1: f64,
    pub phi_u2: f64,
    pub descending: f64,
    pub independent: f64,
}

/// Coefficients of every scheme's contribution for `case` at sorted
/// (u1, u2) with threshold bound `b`.
pub fn case_terms(u1: f64, u2: f64, b: f64, case: MixtureCase) -> Result<CaseTerms> {
    check_sorted(u1, u2)?;
    if !case.applicable(u1, u2, b) {
        return Err(Error::InapplicableCase {
            case: case.to_string(),
            u1,
            u2,
        });
    }
    let clocks = 2.0 - u1 - u2;
    let independent = density_independent(u1, u2, b, case)?;
    Ok(match case {
        MixtureCase::I => CaseTerms {
            clocks,
            phi_u1: 0.5,
            phi_u2: 1.0,
            descending: (2.0 - (u2 - u1) / b) / b,
            independent,
        },
        MixtureCase::II => CaseTerms {
            clocks,
            phi_u1: 1.0 / 3.0,
            phi_u2: 0.5,
            descending: ((1.0 - (u2 - u1) / b) * u1 + u2) / (b * b),
            independent,
        },
        MixtureCase::III => CaseTerms {
            clocks,
            phi_u1: 0.5,
            phi_u2: 1.0,
            descending: u1 / (b * b),
            independent,
        },
        MixtureCase::IV => CaseTerms {
            clocks,
            phi_u1: 1.0 / 3.0,
            phi_u2: 1.0,
            descending: u1 * u1 / (b * b * b),
            independent,
        },
        MixtureCase::V => CaseTerms {
            clocks,
            phi_u1: 0.5,
            phi_u2: 1.0,
            descending: 0.0,
            independent: 0.0,
        },
    })
}

/// Parameters of the four-scheme mixture with the single-threshold weight
/// folded into the sub-density phi_tilde = p2 * phi.
#[derive(Debug, Clone)]
pub struct ThresholdMixtureParams {
    pub p1: f64,
    pub phi_tilde: PiecewiseDensity,
    pub p3: f64,
    pub p4: f64,
    pub b: f64,
}

impl ThresholdMixtureParams {
    /// The published 1.2965 parameter set.
    pub fn published_1296() -> Self {
        let p = density::params_1296();
        ThresholdMixtureParams {
            p1: p.p1,
            phi_tilde: density::phi_tilde_1296(),
            p3: p.p3,
            p4: p.p4,
            b: p.b,
        }
    }

    /// Implied single-threshold weight p2 = integral of phi_tilde.
    pub fn p2(&self) -> f64 {
        self.phi_tilde.mass()
    }

    /// Mixture density for one case at an unsorted location.
    pub fn density(&self, u1: f64, u2: f64, case: MixtureCase) -> Result<f64> {
        let (u1, u2) = sort_pair(u1, u2);
        let t = case_terms(u1, u2, self.b, case)?;
        Ok(self.p1 * t.clocks
            + t.phi_u1 * self.phi_tilde.evaluate(u1)
            + t.phi_u2 * self.phi_tilde.evaluate(u2)
            + self.p3 * t.descending
            + self.p4 * t.independent)
    }

    /// Max of the density over all applicable cases, with the attaining case.
    pub fn max_density(&self, u1: f64, u2: f64) -> Result<(f64, MixtureCase)> {
        let (u1, u2) = sort_pair(u1, u2);
        check_sorted(u1, u2)?;
        let mut best: Option<(f64, MixtureCase)> = None;
        for case in applicable_cases(u1, u2, self.b) {
            let d = self.density(u1, u2, case)?;
            if best.map_or(true, |(bd, _)| d > bd) {
                best = Some((d, case));
            }
        }
        best.ok_or_else(|| Error::Domain(format!("no applicable case at ({u1}, {u2})")))
    }
}

fn sort_pair(u1: f64, u2: f64) -> (f64, f64) {
    if u1 <= u2 {
        (u1, u2)
    } else {
        (u2, u1)
    }
}

fn phi_1309_cached() -> &'static PiecewiseDensity {
    static PHI: OnceLock<PiecewiseDensity> = OnceLock::new();
    PHI.get_or_init(density::phi_1309)
}

/// Density of the clocks + single-threshold mixture, p*(2 - u1 - u2) +
/// (1 - p)*(phi(u1)/2 + phi(u2)) with the golden-ratio parameters. Equals
/// (3 + sqrt(5))/4 exactly whenever u1 <= b <= u2 and is smaller elsewhere.
pub fn density_mixture_1309(u1: f64, u2: f64) -> Result<f64> {
    let (u1, u2) = sort_pair(u1, u2);
    let (_, _, p) = density::params_1309();
    let single = density_single(u1, u2, phi_1309_cached())?;
    Ok(p * (2.0 - u1 - u2) + (1.0 - p) * single)
}

/// The band of the three-case analysis that contains a sorted (u1, u2):
/// I for u2 <= b, III for u1 <= b < u2, V for b < u1.
pub fn band_1302(u1: f64, u2: f64, b: f64) -> MixtureCase {
    debug_assert!(u1 <= u2);
    if u2 <= b {
        MixtureCase::I
    } else if u1 <= b {
        MixtureCase::III
    } else {
        MixtureCase::V
    }
}

/// Density of the clocks + single + descending mixture in one of its three
/// bands, in the tilde parameterization. Bands I and III evaluate to the
/// constant (10 + 4*sqrt(3))/13 by the parameter identities; band V is
/// strictly below it.
pub fn density_mixture_1302_case(u1: f64, u2: f64, case: MixtureCase) -> Result<f64> {
    let (u1, u2) = sort_pair(u1, u2);
    check_sorted(u1, u2)?;
    let p = density::params_1302();
    let (b, p1, p3) = (p.b, p.p1, p.p3);
    let (at, ct, dt) = (p.a_tilde, p.c_tilde, p.d_tilde);
    if band_1302(u1, u2, b) != case {
        return Err(Error::InapplicableCase {
            case: case.to_string(),
            u1,
            u2,
        });
    }
    Ok(match case {
        MixtureCase::I => {
            2.0 * p1
                + 2.0 / b * p3
                + (-p1 + 0.5 * at + p3 / (b * b)) * u1
                + (-p1 + at - p3 / (b * b)) * u2
        }
        MixtureCase::III => {
            2.0 * p1 + dt + (-p1 + 0.5 * at + p3 / (b * b)) * u1 + (-p1 + ct) * u2
        }
        MixtureCase::V => 2.0 * p1 + 1.5 * dt + (-p1 + 0.5 * ct) * u1 + (-p1 + ct) * u2,
        _ => unreachable!("band_1302 only yields I, III, V"),
    })
}

/// Density of the 1.30217 mixture at an unsorted location (band inferred).
pub fn density_mixture_1302(u1: f64, u2: f64) -> Result<f64> {
    let (u1, u2) = sort_pair(u1, u2);
    check_sorted(u1, u2)?;
    density_mixture_1302_case(u1, u2, band_1302(u1, u2, density::params_1302().b))
}

/// Published-parameter evaluation of the 1.2965 mixture for one case.
pub fn density_mixture_1296(u1: f64, u2: f64, case: MixtureCase) -> Result<f64> {
    static PARAMS: OnceLock<ThresholdMixtureParams> = OnceLock::new();
    PARAMS
        .get_or_init(ThresholdMixtureParams::published_1296)
        .density(u1, u2, case)
}
