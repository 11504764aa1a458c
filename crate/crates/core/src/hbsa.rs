//! Complete analysis of the 16 hyperentangled Bell states of a photon pair
//! entangled in polarization and spatial mode.
//!
//! The analysis runs in three stages, each built around a QD-cavity QND
//! detector whose spin starts in `|+⟩`:
//!
//! 1. **Spatial parity** (QD₁). The first photon's mode-1 arm and the second
//!    photon's mode-2 arm double-pass QD₁. Every double pass flips the spin
//!    between `|+⟩` and `|−⟩`, so the spin ends flipped exactly for the
//!    even-parity states `φ±`.
//! 2. **Spatial phase** (QD₂, QD₃). Both photons cross a beam splitter, which
//!    turns `φ⁻ ↔ ψ⁺` and leaves `φ⁺`, `ψ⁻` in place. QD₂ watches the first
//!    photon's output 1 and QD₃ the second photon's output 2. The "+" states
//!    end with exactly one of them flipped.
//! 3. **Polarization** (QD₄). Both photons reflect once off QD₄, which flips
//!    for `φ±` and leaves `ψ±` alone, while also turning `φ± → φ∓`. An H/V
//!    measurement of both photons then splits the signs.
//!
//! Every double-pass arm is followed by a `Z` wave plate that undoes the
//! polarization phase flip of the double pass, so the spatial stages leave
//! the polarization state untouched.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::cavity::{scatter_ideal, spin_readout, spin_subsystem, SpinFlag};
use crate::error::{Error, Result};
use crate::hilbert::{LinearMap, PureState, Role, Subsystem, ONE, ZERO};
use crate::optics::{beam_splitter, detect_port, measure_hv, Click, Port, PortMap};

pub const QD1: &str = "QD1";
pub const QD2: &str = "QD2";
pub const QD3: &str = "QD3";
pub const QD4: &str = "QD4";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dof {
    Polarization,
    Spatial,
}

/// One of the four Bell states of a single degree of freedom. Amplitudes over
/// `|00⟩, |01⟩, |10⟩, |11⟩` with `0 = R / mode 1` and `1 = L / mode 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn is_even(self) -> bool {
        matches!(self, Bell::PhiPlus | Bell::PhiMinus)
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Bell::PhiPlus | Bell::PsiPlus)
    }

    pub fn from_parity_and_sign(even: bool, plus: bool) -> Bell {
        match (even, plus) {
            (true, true) => Bell::PhiPlus,
            (true, false) => Bell::PhiMinus,
            (false, true) => Bell::PsiPlus,
            (false, false) => Bell::PsiMinus,
        }
    }

    pub fn amplitudes(self) -> [C64; 4] {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            Bell::PhiPlus => [h, ZERO, ZERO, h],
            Bell::PhiMinus => [h, ZERO, ZERO, -h],
            Bell::PsiPlus => [ZERO, h, h, ZERO],
            Bell::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bell::PhiPlus => "phi+",
            Bell::PhiMinus => "phi-",
            Bell::PsiPlus => "psi+",
            Bell::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for Bell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Bell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Bell::ALL
            .into_iter()
            .find(|b| b.name() == lower)
            .ok_or_else(|| Error::UnknownBellState(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperBellId {
    pub pol: Bell,
    pub spat: Bell,
}

impl HyperBellId {
    pub fn new(pol: Bell, spat: Bell) -> Self {
        Self { pol, spat }
    }

    /// All 16 ids, polarization-major.
    pub fn all() -> impl Iterator<Item = HyperBellId> {
        Bell::ALL
            .into_iter()
            .flat_map(|p| Bell::ALL.into_iter().map(move |s| HyperBellId::new(p, s)))
    }

    pub fn index(self) -> usize {
        4 * self.pol as usize + self.spat as usize
    }
}

impl fmt::Display for HyperBellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.pol, self.spat)
    }
}

/// Parses `"<pol>,<spatial>"`, e.g. `psi-,phi+` (case-insensitive).
impl FromStr for HyperBellId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (pol, spat) = s
            .split_once(',')
            .ok_or_else(|| Error::UnknownBellState(s.to_string()))?;
        Ok(HyperBellId::new(pol.parse()?, spat.parse()?))
    }
}

/// Subsystem labels and port names of one photon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Photon {
    pub name: String,
    pub pol: String,
    pub spatial: String,
    pub ports: PortMap,
}

impl Photon {
    pub fn new(name: &str, inputs: [&str; 2], outputs: [&str; 2]) -> Result<Self> {
        Ok(Self {
            name: name.to_string(),
            pol: format!("{name}.pol"),
            spatial: format!("{name}.spat"),
            ports: PortMap::new(inputs, outputs)?,
        })
    }

    pub fn label(&self, dof: Dof) -> &str {
        match dof {
            Dof::Polarization => &self.pol,
            Dof::Spatial => &self.spatial,
        }
    }

    fn subsystem(&self, dof: Dof) -> Subsystem {
        let role = match dof {
            Dof::Polarization => Role::Polarization,
            Dof::Spatial => Role::SpatialMode,
        };
        Subsystem::qubit(self.label(dof), role)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhotonPair {
    pub first: Photon,
    pub second: Photon,
}

impl PhotonPair {
    /// Photons `A` (modes `a₁,a₂ → c₁,c₂`) and `B` (modes `b₁,b₂ → d₁,d₂`).
    pub fn standard() -> Self {
        Self {
            first: Photon::new("A", ["a1", "a2"], ["c1", "c2"]).expect("distinct ports"),
            second: Photon::new("B", ["b1", "b2"], ["d1", "d2"]).expect("distinct ports"),
        }
    }

    pub fn labels(&self, dof: Dof) -> [&str; 2] {
        [self.first.label(dof), self.second.label(dof)]
    }

    pub fn bell_state(&self, dof: Dof, bell: Bell) -> PureState {
        PureState::new(
            vec![self.first.subsystem(dof), self.second.subsystem(dof)],
            bell.amplitudes().to_vec(),
        )
        .expect("two qubits, four amplitudes")
    }

    /// Polarization Bell state ⊗ spatial Bell state, in the order
    /// `first.pol, second.pol, first.spat, second.spat`.
    pub fn hyper_bell_state(&self, id: HyperBellId) -> PureState {
        self.bell_state(Dof::Polarization, id.pol)
            .tensor(&self.bell_state(Dof::Spatial, id.spat))
            .expect("distinct labels")
    }
}

pub fn prepare_hyper_bell(id: HyperBellId) -> PureState {
    PhotonPair::standard().hyper_bell_state(id)
}

/// Double pass of `photon` through `spin`'s cavity followed by a `Z` plate,
/// active only when the photon occupies spatial index `mode`.
pub fn qnd_arm(photon: &Photon, mode: usize, spin: &str) -> Result<LinearMap> {
    arm_from_reflection(photon, mode, &scatter_ideal(&photon.pol, spin))
}

/// The same arm built from an arbitrary single-reflection map on
/// `(photon.pol, spin)`, e.g. a lossy one.
pub fn arm_from_reflection(
    photon: &Photon,
    mode: usize,
    reflection: &LinearMap,
) -> Result<LinearMap> {
    let targets = reflection.targets();
    let z_plate = LinearMap::diagonal(&targets, &[ONE, ONE, -ONE, -ONE])?;
    reflection
        .power(2)
        .then(&z_plate)?
        .conditioned_on(&photon.spatial, 2, mode)
}

fn with_fresh_spin(state: &PureState, spin: &str) -> Result<PureState> {
    state.tensor(&PureState::plus(spin_subsystem(spin))?)
}

/// Couples QD₁ (already present in `state`) to the spatial parity.
pub fn parity_interaction(state: &PureState, pair: &PhotonPair, spin: &str) -> Result<PureState> {
    state
        .apply(&qnd_arm(&pair.first, 0, spin)?)?
        .apply(&qnd_arm(&pair.second, 1, spin)?)
}

pub fn spatial_parity_stage<R: Rng + ?Sized>(
    state: &PureState,
    pair: &PhotonPair,
    rng: &mut R,
) -> Result<(SpinFlag, PureState)> {
    let s = parity_interaction(&with_fresh_spin(state, QD1)?, pair, QD1)?;
    let (flag, s) = spin_readout(&s, QD1, rng)?;
    Ok((flag, s.remove(QD1)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseOutcome {
    pub qd2: SpinFlag,
    pub qd3: SpinFlag,
    pub ports: (Port, Port),
}

/// Beam splitters on both photons, then QD₂ on the first photon's output 1
/// and QD₃ on the second photon's output 2 (both already in `state`).
pub fn phase_interaction(
    state: &PureState,
    pair: &PhotonPair,
    spins: [&str; 2],
) -> Result<PureState> {
    state
        .apply(&beam_splitter(&pair.first.spatial))?
        .apply(&beam_splitter(&pair.second.spatial))?
        .apply(&qnd_arm(&pair.first, 0, spins[0])?)?
        .apply(&qnd_arm(&pair.second, 1, spins[1])?)
}

pub fn spatial_phase_stage<R: Rng + ?Sized>(
    state: &PureState,
    pair: &PhotonPair,
    rng: &mut R,
) -> Result<(PhaseOutcome, PureState)> {
    let s = with_fresh_spin(&with_fresh_spin(state, QD2)?, QD3)?;
    let s = phase_interaction(&s, pair, [QD2, QD3])?;
    let (qd2, s) = spin_readout(&s, QD2, rng)?;
    let (qd3, s) = spin_readout(&s, QD3, rng)?;
    let s = s.remove(QD2)?.remove(QD3)?;
    let (p1, s) = detect_port(&s, &pair.first.spatial, &pair.first.ports, rng)?;
    let (p2, s) = detect_port(&s, &pair.second.spatial, &pair.second.ports, rng)?;
    Ok((
        PhaseOutcome {
            qd2,
            qd3,
            ports: (p1, p2),
        },
        s,
    ))
}

pub fn decode_spatial(qd1: SpinFlag, qd2: SpinFlag, qd3: SpinFlag) -> Bell {
    Bell::from_parity_and_sign(qd1 == SpinFlag::Changed, qd2 != qd3)
}

/// Single reflection of both photons off QD₄ (already in `state`).
pub fn polarization_interaction(
    state: &PureState,
    pair: &PhotonPair,
    spin: &str,
) -> Result<PureState> {
    state
        .apply(&scatter_ideal(&pair.first.pol, spin))?
        .apply(&scatter_ideal(&pair.second.pol, spin))
}

pub fn polarization_stage<R: Rng + ?Sized>(
    state: &PureState,
    pair: &PhotonPair,
    rng: &mut R,
) -> Result<(SpinFlag, (Click, Click), PureState)> {
    let s = polarization_interaction(&with_fresh_spin(state, QD4)?, pair, QD4)?;
    let (qd4, s) = spin_readout(&s, QD4, rng)?;
    let s = s.remove(QD4)?;
    let (c1, s) = measure_hv(&s, &pair.first.pol, rng)?;
    let (c2, s) = measure_hv(&s, &pair.second.pol, rng)?;
    Ok((qd4, (c1, c2), s))
}

pub fn decode_polarization(qd4: SpinFlag, clicks: (Click, Click)) -> Bell {
    let same = clicks.0 == clicks.1;
    // QD₄ maps φ± to φ∓ before detection, so the sign reads inverted for φ
    let even = qd4 == SpinFlag::Changed;
    Bell::from_parity_and_sign(even, same != even)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub qd1: SpinFlag,
    pub qd2: SpinFlag,
    pub qd3: SpinFlag,
    pub qd4: SpinFlag,
    pub ports: (Port, Port),
    pub clicks: (Click, Click),
}

impl MeasurementRecord {
    /// The first photon leaves through output 1 exactly when QD₂ flipped, and
    /// the second through output 2 exactly when QD₃ flipped.
    pub fn ports_consistent(&self) -> bool {
        (self.ports.0.index == 0) == (self.qd2 == SpinFlag::Changed)
            && (self.ports.1.index == 1) == (self.qd3 == SpinFlag::Changed)
    }

    pub fn decode(&self) -> HyperBellId {
        HyperBellId::new(
            decode_polarization(self.qd4, self.clicks),
            decode_spatial(self.qd1, self.qd2, self.qd3),
        )
    }
}

impl fmt::Display for MeasurementRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "qd1={} qd2={} qd3={} qd4={} ports={},{} clicks={},{}",
            self.qd1,
            self.qd2,
            self.qd3,
            self.qd4,
            self.ports.0,
            self.ports.1,
            self.clicks.0,
            self.clicks.1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbsaResult {
    pub identified: HyperBellId,
    pub record: MeasurementRecord,
}

/// Runs all three stages on `pair` inside `state` and returns the result
/// together with the post-measurement state.
pub fn analyze<R: Rng + ?Sized>(
    state: &PureState,
    pair: &PhotonPair,
    rng: &mut R,
) -> Result<(HbsaResult, PureState)> {
    let (qd1, s) = spatial_parity_stage(state, pair, rng)?;
    let (phase, s) = spatial_phase_stage(&s, pair, rng)?;
    let (qd4, clicks, s) = polarization_stage(&s, pair, rng)?;
    let record = MeasurementRecord {
        qd1,
        qd2: phase.qd2,
        qd3: phase.qd3,
        qd4,
        ports: phase.ports,
        clicks,
    };
    Ok((
        HbsaResult {
            identified: record.decode(),
            record,
        },
        s,
    ))
}

pub fn run_hbsa<R: Rng + ?Sized>(id: HyperBellId, rng: &mut R) -> Result<HbsaResult> {
    let pair = PhotonPair::standard();
    Ok(analyze(&pair.hyper_bell_state(id), &pair, rng)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{ALGEBRA_TOL, STATE_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use SpinFlag::{Changed as C, Unchanged as U};

    fn id(p: Bell, s: Bell) -> HyperBellId {
        HyperBellId::new(p, s)
    }

    #[test]
    fn hyper_bell_preparation() {
        let s = prepare_hyper_bell(id(Bell::PhiPlus, Bell::PhiPlus));
        assert_eq!(s.labels(), vec!["A.pol", "B.pol", "A.spat", "B.spat"]);
        let half = C64::new(0.5, 0.0);
        for digits in [[0, 0, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0], [1, 1, 1, 1]] {
            assert!((s.amplitude(&digits) - half).norm() < ALGEBRA_TOL);
        }
        assert!((s.norm_sqr() - 1.0).abs() < ALGEBRA_TOL);

        // (|RL⟩ − |LR⟩)(|a₁b₂⟩ − |a₂b₁⟩)/2
        let s = prepare_hyper_bell(id(Bell::PsiMinus, Bell::PsiMinus));
        assert!((s.amplitude(&[0, 1, 0, 1]) - half).norm() < ALGEBRA_TOL);
        assert!((s.amplitude(&[0, 1, 1, 0]) + half).norm() < ALGEBRA_TOL);
        assert!((s.amplitude(&[1, 0, 0, 1]) + half).norm() < ALGEBRA_TOL);
        assert!((s.amplitude(&[1, 0, 1, 0]) - half).norm() < ALGEBRA_TOL);
    }

    #[test]
    fn preparations_are_orthonormal() {
        let states: Vec<PureState> = HyperBellId::all().map(prepare_hyper_bell).collect();
        assert_eq!(states.len(), 16);
        for (j, a) in states.iter().enumerate() {
            for (k, b) in states.iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap() - C64::new(want, 0.0)).norm() < ALGEBRA_TOL);
            }
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!(
            "PSI-,phi+".parse::<HyperBellId>().unwrap(),
            id(Bell::PsiMinus, Bell::PhiPlus)
        );
        assert!("chi+,phi+".parse::<HyperBellId>().is_err());
        assert!("phi+".parse::<HyperBellId>().is_err());
        for h in HyperBellId::all() {
            assert_eq!(h.to_string().parse::<HyperBellId>().unwrap(), h);
        }
    }

    #[test]
    fn parity_stage_flags() {
        let pair = PhotonPair::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spat in Bell::ALL {
            let s = pair.hyper_bell_state(id(Bell::PsiPlus, spat));
            for _ in 0..10 {
                let (flag, _) = spatial_parity_stage(&s, &pair, &mut rng).unwrap();
                assert_eq!(flag, if spat.is_even() { C } else { U });
            }
        }
    }

    #[test]
    fn parity_stage_preserves_polarization() {
        let pair = PhotonPair::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for h in HyperBellId::all() {
            let s = pair.hyper_bell_state(h);
            let before = s.reduced_density(&["A.pol", "B.pol"]).unwrap();
            let (_, after) = spatial_parity_stage(&s, &pair, &mut rng).unwrap();
            let after = after.reduced_density(&["A.pol", "B.pol"]).unwrap();
            assert!(before.trace_distance(&after).unwrap() < STATE_TOL);
        }
    }

    #[test]
    fn phase_stage_branches() {
        let pair = PhotonPair::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = pair.hyper_bell_state(id(Bell::PhiPlus, Bell::PhiPlus));
        let mut seen = std::collections::HashSet::new();
        for _ in 0..50 {
            let (out, _) = spatial_phase_stage(&s, &pair, &mut rng).unwrap();
            let names = (out.ports.0.name.as_str(), out.ports.1.name.as_str());
            match (out.qd2, out.qd3) {
                (C, U) => assert_eq!(names, ("c1", "d1")),
                (U, C) => assert_eq!(names, ("c2", "d2")),
                other => panic!("unexpected flags {other:?}"),
            }
            seen.insert((out.qd2, out.qd3));
        }
        assert_eq!(seen.len(), 2);

        let s = pair.hyper_bell_state(id(Bell::PhiPlus, Bell::PsiMinus));
        for _ in 0..50 {
            let (out, _) = spatial_phase_stage(&s, &pair, &mut rng).unwrap();
            let names = (out.ports.0.name.as_str(), out.ports.1.name.as_str());
            match (out.qd2, out.qd3) {
                (C, C) => assert_eq!(names, ("c1", "d2")),
                (U, U) => assert_eq!(names, ("c2", "d1")),
                other => panic!("unexpected flags {other:?}"),
            }
        }
    }

    #[test]
    fn phase_stage_preserves_polarization() {
        let pair = PhotonPair::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for h in HyperBellId::all() {
            let s = pair.hyper_bell_state(h);
            let before = s.reduced_density(&["A.pol", "B.pol"]).unwrap();
            let (_, after) = spatial_phase_stage(&s, &pair, &mut rng).unwrap();
            let after = after.reduced_density(&["A.pol", "B.pol"]).unwrap();
            assert!(before.trace_distance(&after).unwrap() < STATE_TOL);
        }
    }

    #[test]
    fn spatial_decode_table() {
        assert_eq!(decode_spatial(U, C, U), Bell::PsiPlus);
        assert_eq!(decode_spatial(U, U, C), Bell::PsiPlus);
        assert_eq!(decode_spatial(U, C, C), Bell::PsiMinus);
        assert_eq!(decode_spatial(U, U, U), Bell::PsiMinus);
        assert_eq!(decode_spatial(C, U, C), Bell::PhiPlus);
        assert_eq!(decode_spatial(C, C, U), Bell::PhiPlus);
        assert_eq!(decode_spatial(C, C, C), Bell::PhiMinus);
        assert_eq!(decode_spatial(C, U, U), Bell::PhiMinus);
    }

    #[test]
    fn polarization_decode_table() {
        use Click::{H, V};
        assert_eq!(decode_polarization(U, (H, H)), Bell::PsiPlus);
        assert_eq!(decode_polarization(U, (V, V)), Bell::PsiPlus);
        assert_eq!(decode_polarization(U, (H, V)), Bell::PsiMinus);
        assert_eq!(decode_polarization(U, (V, H)), Bell::PsiMinus);
        assert_eq!(decode_polarization(C, (H, V)), Bell::PhiPlus);
        assert_eq!(decode_polarization(C, (V, H)), Bell::PhiPlus);
        assert_eq!(decode_polarization(C, (H, H)), Bell::PhiMinus);
        assert_eq!(decode_polarization(C, (V, V)), Bell::PhiMinus);
    }

    #[test]
    fn polarization_stage_flags_and_clicks() {
        let pair = PhotonPair::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // photons in definite ports, as after the spatial stages
        let ports = PureState::basis(Subsystem::qubit("A.spat", Role::SpatialMode), 0)
            .unwrap()
            .tensor(&PureState::basis(Subsystem::qubit("B.spat", Role::SpatialMode), 1).unwrap())
            .unwrap();
        for pol in Bell::ALL {
            let s = pair
                .bell_state(Dof::Polarization, pol)
                .tensor(&ports)
                .unwrap();
            for _ in 0..20 {
                let (flag, clicks, _) = polarization_stage(&s, &pair, &mut rng).unwrap();
                assert_eq!(flag, if pol.is_even() { C } else { U });
                let same = clicks.0 == clicks.1;
                let want_same = matches!(pol, Bell::PsiPlus | Bell::PhiMinus);
                assert_eq!(same, want_same, "{pol}: {clicks:?}");
            }
        }
    }

    #[test]
    fn polarization_interaction_matches_parity_rule() {
        // |φ±⟩|+⟩ → |φ∓⟩|−⟩ and |ψ±⟩|+⟩ → |ψ±⟩|+⟩ up to global phase
        let pair = PhotonPair::standard();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let plus = PureState::single(spin_subsystem(QD4), vec![h, h]).unwrap();
        let minus = PureState::single(spin_subsystem(QD4), vec![h, -h]).unwrap();
        for (input, output, spin) in [
            (Bell::PhiPlus, Bell::PhiMinus, &minus),
            (Bell::PhiMinus, Bell::PhiPlus, &minus),
            (Bell::PsiPlus, Bell::PsiPlus, &plus),
            (Bell::PsiMinus, Bell::PsiMinus, &plus),
        ] {
            let s = pair
                .bell_state(Dof::Polarization, input)
                .tensor(&plus)
                .unwrap();
            let got = polarization_interaction(&s, &pair, QD4).unwrap();
            let want = pair
                .bell_state(Dof::Polarization, output)
                .tensor(spin)
                .unwrap();
            assert!(got.equal_up_to_global_phase(&want, STATE_TOL).unwrap());
        }
    }

    #[test]
    fn full_identification() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for h in HyperBellId::all() {
            for _ in 0..5 {
                let r = run_hbsa(h, &mut rng).unwrap();
                assert_eq!(r.identified, h);
                assert!(r.record.ports_consistent());
            }
        }
    }

    #[test]
    fn arms_are_unitary_and_polarization_neutral() {
        let pair = PhotonPair::standard();
        let arm = qnd_arm(&pair.first, 0, QD1).unwrap();
        assert!(arm.is_unitary());
        // active branch acts as Z on the spin only
        let m = arm.matrix();
        for r in 0..8 {
            for c in 0..8 {
                let want = if r != c {
                    ZERO
                } else if r < 4 {
                    if r % 2 == 0 {
                        ONE
                    } else {
                        -ONE
                    }
                } else {
                    ONE
                };
                assert!((m[(r, c)] - want).norm() < ALGEBRA_TOL, "({r},{c})");
            }
        }
    }
}
