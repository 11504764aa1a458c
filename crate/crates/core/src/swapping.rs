//! Hyperentanglement swapping.
//!
//! Photon pairs `AB` and `CD` both start in `|φ⁺⟩_P|φ⁺⟩_S`. Analyzing `B` and
//! `C` projects `AD` onto the same hyper-Bell state that was found for `BC`,
//! and a local correction on `D` brings `AD` to `|φ⁺⟩_P|φ⁺⟩_S`.

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::hbsa::{
    analyze, decode_polarization, polarization_stage, Bell, Dof, HyperBellId, Photon, PhotonPair,
};
use crate::hilbert::{LinearMap, PureState, ONE, ZERO};
use crate::run_rng;

pub fn photon(name: &str) -> Photon {
    let lower = name.to_ascii_lowercase();
    let outputs = match name {
        "B" => ["e1".to_string(), "e2".to_string()],
        "C" => ["f1".to_string(), "f2".to_string()],
        _ => [format!("{lower}1"), format!("{lower}2")],
    };
    Photon::new(
        name,
        [&format!("{lower}1"), &format!("{lower}2")],
        [&outputs[0], &outputs[1]],
    )
    .expect("distinct ports")
}

fn pair(first: &str, second: &str) -> PhotonPair {
    PhotonPair {
        first: photon(first),
        second: photon(second),
    }
}

/// The pair the analyzer measures: `B` (outputs `e₁,e₂`) and `C` (outputs `f₁,f₂`).
pub fn middle_pair() -> PhotonPair {
    pair("B", "C")
}

pub fn outer_pair() -> PhotonPair {
    pair("A", "D")
}

pub fn target() -> HyperBellId {
    HyperBellId::new(Bell::PhiPlus, Bell::PhiPlus)
}

/// `|Φ⁺⟩_AB ⊗ |Φ⁺⟩_CD`, ordered `A..D` polarizations then `A..D` spatial modes.
pub fn prepare_pairs() -> PureState {
    let ab = pair("A", "B").hyper_bell_state(target());
    let cd = pair("C", "D").hyper_bell_state(target());
    ab.tensor(&cd)
        .and_then(|s| {
            s.permuted(&[
                "A.pol", "B.pol", "C.pol", "D.pol", "A.spat", "B.spat", "C.spat", "D.spat",
            ])
        })
        .expect("distinct labels")
}

/// Coefficient of `|j⟩_AD ⊗ |k⟩_BC` in `state`.
pub fn bell_coefficient(state: &PureState, ad: HyperBellId, bc: HyperBellId) -> Result<C64> {
    let basis = outer_pair()
        .hyper_bell_state(ad)
        .tensor(&middle_pair().hyper_bell_state(bc))?;
    basis.inner(state)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolCorrection {
    Identity,
    Z,
    X,
    /// `−σ_y = |R⟩⟨L| − |L⟩⟨R|`
    MinusSigmaY,
}

impl PolCorrection {
    pub const ALL: [PolCorrection; 4] = [
        PolCorrection::Identity,
        PolCorrection::Z,
        PolCorrection::X,
        PolCorrection::MinusSigmaY,
    ];

    pub fn map(self, pol: &str) -> LinearMap {
        let rows = match self {
            PolCorrection::Identity => [ONE, ZERO, ZERO, ONE],
            PolCorrection::Z => [ONE, ZERO, ZERO, -ONE],
            PolCorrection::X => [ZERO, ONE, ONE, ZERO],
            PolCorrection::MinusSigmaY => [ZERO, ONE, -ONE, ZERO],
        };
        LinearMap::from_rows(&[pol], 2, &rows).expect("2x2")
    }
}

/// Local operation on photon `D`: a polarization correction on both arms, an
/// optional phase π on mode `d₁`, then an optional exchange of `d₁` and `d₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CorrectionOp {
    pub pol: PolCorrection,
    pub phase_d1: bool,
    pub swap: bool,
}

impl CorrectionOp {
    pub fn candidates() -> impl Iterator<Item = CorrectionOp> {
        PolCorrection::ALL.into_iter().flat_map(|pol| {
            [(false, false), (true, false), (false, true), (true, true)]
                .into_iter()
                .map(move |(phase_d1, swap)| CorrectionOp {
                    pol,
                    phase_d1,
                    swap,
                })
        })
    }

    pub fn maps(&self, d: &Photon) -> Vec<LinearMap> {
        let mut maps = vec![self.pol.map(&d.pol)];
        if self.phase_d1 {
            maps.push(LinearMap::diagonal(&[&d.spatial], &[-ONE, ONE]).expect("2x2"));
        }
        if self.swap {
            maps.push(LinearMap::pauli_x(&d.spatial));
        }
        maps
    }

    pub fn apply(&self, state: &PureState, d: &Photon) -> Result<PureState> {
        self.maps(d)
            .iter()
            .try_fold(state.clone(), |s, m| s.apply(m))
    }
}

/// Correction for a `BC` outcome. The polarization and spatial parts follow
/// the same pattern: `φ⁻` needs a phase, `ψ⁺` a flip, `ψ⁻` both.
pub fn correction_for(outcome: HyperBellId) -> CorrectionOp {
    let pol = match outcome.pol {
        Bell::PhiPlus => PolCorrection::Identity,
        Bell::PhiMinus => PolCorrection::Z,
        Bell::PsiPlus => PolCorrection::X,
        Bell::PsiMinus => PolCorrection::MinusSigmaY,
    };
    let (phase_d1, swap) = match outcome.spat {
        Bell::PhiPlus => (false, false),
        Bell::PhiMinus => (true, false),
        Bell::PsiPlus => (false, true),
        Bell::PsiMinus => (true, true),
    };
    CorrectionOp {
        pol,
        phase_d1,
        swap,
    }
}

/// `|⟨φ⁺φ⁺|ψ⟩|²` for a normalized `AD` state.
pub fn target_fidelity(ad: &PureState) -> Result<f64> {
    Ok(outer_pair()
        .hyper_bell_state(target())
        .inner(ad)?
        .norm_sqr())
}

fn drop_middle(state: &PureState) -> Result<PureState> {
    ["B.pol", "C.pol", "B.spat", "C.spat"]
        .iter()
        .try_fold(state.clone(), |s, l| s.remove(l))
}

/// Analyzes `B` and `C`; returns the outcome and the remaining `AD` state.
pub fn swap_once<R: Rng + ?Sized>(rng: &mut R) -> Result<(HyperBellId, PureState)> {
    let (result, s) = analyze(&prepare_pairs(), &middle_pair(), rng)?;
    Ok((result.identified, drop_middle(&s)?))
}

#[derive(Clone, Debug)]
pub struct SwapRun {
    pub outcome: HyperBellId,
    pub correction: CorrectionOp,
    pub state: PureState,
    pub fidelity: f64,
}

pub fn run_swap<R: Rng + ?Sized>(rng: &mut R) -> Result<SwapRun> {
    let (outcome, ad) = swap_once(rng)?;
    let correction = correction_for(outcome);
    let state = correction.apply(&ad, &photon("D"))?;
    let fidelity = target_fidelity(&state)?;
    Ok(SwapRun {
        outcome,
        correction,
        state,
        fidelity,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwapSummary {
    pub runs: usize,
    pub successes: usize,
    /// Counts per outcome, indexed by [`HyperBellId::index`].
    pub histogram: [usize; 16],
    pub min_fidelity: f64,
}

/// Tolerance on the corrected `AD` fidelity for a run to count as a success.
pub const SWAP_TOL: f64 = 1e-10;

/// `runs` independent swaps; run `k` draws from `run_rng(seed, k)`.
pub fn run_swaps(seed: u64, runs: usize) -> Result<SwapSummary> {
    let results: Vec<(HyperBellId, f64)> = (0..runs)
        .into_par_iter()
        .map(|k| run_swap(&mut run_rng(seed, k as u64)).map(|r| (r.outcome, r.fidelity)))
        .collect::<Result<_>>()?;
    let mut histogram = [0; 16];
    for (outcome, _) in &results {
        histogram[outcome.index()] += 1;
    }
    Ok(SwapSummary {
        runs,
        successes: results
            .iter()
            .filter(|(_, f)| (f - 1.0).abs() <= SWAP_TOL)
            .count(),
        histogram,
        min_fidelity: results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
    })
}

/// Swapping with a polarization-only analysis of `BC`: returns the outcome
/// and the purity of the reduced `AD` spatial state.
pub fn polarization_only_swap<R: Rng + ?Sized>(rng: &mut R) -> Result<(Bell, f64)> {
    let middle = middle_pair();
    let (qd4, clicks, s) = polarization_stage(&prepare_pairs(), &middle, rng)?;
    let outcome = decode_polarization(qd4, clicks);
    let spatial = s.reduced_density(&outer_pair().labels(Dof::Spatial))?;
    Ok((outcome, spatial.purity()))
}
