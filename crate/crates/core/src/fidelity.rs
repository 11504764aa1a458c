//! Performance of the analyzer with lossy cavities.
//!
//! A reflection keeps the ideal phases but scales cold-cavity amplitudes by
//! `ζ = |r₀|` and hot-cavity amplitudes by `ξ = |r_h|`. The closed forms below
//! are for the input `|φ⁺⟩_P|φ⁺⟩_S`.
//!
//! [`circuit_oracle`] recomputes both numbers by propagating states through
//! the analyzer circuit with lossy reflections:
//!
//! * Fidelity: the whole circuit (photons, the four spins and the four probe
//!   photons, every reflection lossy) is run coherently without collapsing
//!   any readout, and the final state is compared with the lossless run of
//!   the same circuit. Both photons see three double-pass arms and one single
//!   reflection between them, and each probe one single reflection.
//! * Efficiency: every visit of a signal photon to a cavity is an independent
//!   loss event against a spin in `|+⟩`, and probe photons are lossless. The
//!   survival of each stage is the norm left after its lossy visits, weighted
//!   over the branches of the ideally propagated photon state.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity::{
    auxiliary_label, operating_point, probe_polarization, scatter_lossy, spin_subsystem,
    CavityParams,
};
use crate::error::{Error, Result};
use crate::hbsa::{arm_from_reflection, Bell, HyperBellId, PhotonPair};
use crate::hilbert::{LinearMap, PureState, Role, Subsystem};
use crate::optics::beam_splitter;

pub const DEFAULT_G_RANGE: (f64, f64) = (0.0, 2.4);
pub const DEFAULT_KS_RANGE: (f64, f64) = (0.0, 0.7);
pub const DEFAULT_RESOLUTION: (usize, usize) = (81, 71);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossPoint {
    pub zeta: f64,
    pub xi: f64,
}

impl LossPoint {
    pub fn new(zeta: f64, xi: f64) -> Result<Self> {
        for (name, value) in [("zeta", zeta), ("xi", xi)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::AmplitudeOutOfRange { name, value });
            }
        }
        Ok(Self { zeta, xi })
    }

    pub fn lossless() -> Self {
        Self { zeta: 1.0, xi: 1.0 }
    }

    pub fn from_cavity(p: &CavityParams) -> Result<Self> {
        let op = operating_point(p)?;
        Self::new(op.zeta, op.xi)
    }

    pub fn epsilon(&self) -> f64 {
        self.zeta * self.xi
    }
}

pub fn closed_form_fidelity(p: LossPoint) -> Result<f64> {
    let (z, x, e) = (p.zeta, p.xi, p.epsilon());
    let num = (z.powi(5) + x.powi(5)).powi(2)
        + 22.0 * e.powi(4) * (z + x).powi(2)
        + 4.0 * e * (z.powi(4) - x.powi(4)).powi(2)
        + 16.0 * e.powi(3) * (z * z - x * x).powi(2)
        + 9.0 * e.powi(2) * (z.powi(3) + x.powi(3)).powi(2);
    let den = (z.powi(10) + x.powi(10)).powi(2)
        + 22.0 * e.powi(8) * (z * z + x * x).powi(2)
        + 4.0 * e * e * (z.powi(8) - x.powi(8)).powi(2)
        + 16.0 * e.powi(6) * (z.powi(4) - x.powi(4)).powi(2)
        + 9.0 * e.powi(4) * (z.powi(6) + x.powi(6)).powi(2);
    if den == 0.0 {
        return Err(Error::UndefinedFidelity);
    }
    // mathematically at most 1; clip round-off at ζ ≈ ξ
    Ok((num * num / den / 128.0).min(1.0))
}

pub fn closed_form_efficiency(p: LossPoint) -> f64 {
    let (z, x) = (p.zeta, p.xi);
    (0.5 * z.powi(4) + 0.5 * x.powi(4)).powi(2) * (0.5 * z * z + 0.5 * x * x).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub fidelity: f64,
    pub efficiency: f64,
}

fn fresh_spin(state: &PureState, label: &str) -> Result<PureState> {
    state.tensor(&PureState::plus(spin_subsystem(label))?)
}

/// Coherent readout interaction: Hadamard on the spin, then one reflection
/// of a probe photon. The probe stays in the state unmeasured.
fn coherent_readout(state: &PureState, spin: &str, p: LossPoint) -> Result<PureState> {
    let aux = auxiliary_label(spin);
    let probe = PureState::single(
        Subsystem::qubit(aux.as_str(), Role::Auxiliary),
        probe_polarization(),
    )?;
    state
        .apply(&LinearMap::hadamard(spin))?
        .tensor(&probe)?
        .apply(&scatter_lossy(&aux, spin, p.zeta, p.xi)?)
}

fn propagate(p: LossPoint) -> Result<PureState> {
    let pair = PhotonPair::standard();
    let (a, b) = (&pair.first, &pair.second);
    let refl = |pol: &str, spin: &str| scatter_lossy(pol, spin, p.zeta, p.xi);
    let mut s = pair.hyper_bell_state(HyperBellId::new(Bell::PhiPlus, Bell::PhiPlus));

    s = fresh_spin(&s, "QD1")?;
    s = s.apply(&arm_from_reflection(a, 0, &refl(&a.pol, "QD1")?)?)?;
    s = s.apply(&arm_from_reflection(b, 1, &refl(&b.pol, "QD1")?)?)?;
    s = coherent_readout(&s, "QD1", p)?;

    s = s
        .apply(&beam_splitter(&a.spatial))?
        .apply(&beam_splitter(&b.spatial))?;
    s = fresh_spin(&fresh_spin(&s, "QD2")?, "QD3")?;
    s = s.apply(&arm_from_reflection(a, 0, &refl(&a.pol, "QD2")?)?)?;
    s = s.apply(&arm_from_reflection(b, 1, &refl(&b.pol, "QD3")?)?)?;
    s = coherent_readout(&s, "QD2", p)?;
    s = coherent_readout(&s, "QD3", p)?;

    s = fresh_spin(&s, "QD4")?;
    s = s
        .apply(&refl(&a.pol, "QD4")?)?
        .apply(&refl(&b.pol, "QD4")?)?;
    coherent_readout(&s, "QD4", p)
}

fn survival(p: LossPoint) -> Result<f64> {
    let pair = PhotonPair::standard();
    let (a, b) = (&pair.first, &pair.second);
    let refl = |pol: &str, spin: &str| scatter_lossy(pol, spin, p.zeta, p.xi);
    let photons = pair.hyper_bell_state(HyperBellId::new(Bell::PhiPlus, Bell::PhiPlus));

    // each visit gets its own spin so visits lose independently
    let parity = fresh_spin(&fresh_spin(&photons, "A.QD1")?, "B.QD1")?
        .apply(&arm_from_reflection(a, 0, &refl(&a.pol, "A.QD1")?)?)?
        .apply(&arm_from_reflection(b, 1, &refl(&b.pol, "B.QD1")?)?)?
        .norm_sqr();

    let split = photons
        .apply(&beam_splitter(&a.spatial))?
        .apply(&beam_splitter(&b.spatial))?;
    let phase = fresh_spin(&fresh_spin(&split, "QD2")?, "QD3")?
        .apply(&arm_from_reflection(a, 0, &refl(&a.pol, "QD2")?)?)?
        .apply(&arm_from_reflection(b, 1, &refl(&b.pol, "QD3")?)?)?
        .norm_sqr();

    let pol = fresh_spin(&fresh_spin(&split, "A.QD4")?, "B.QD4")?
        .apply(&refl(&a.pol, "A.QD4")?)?
        .apply(&refl(&b.pol, "B.QD4")?)?
        .norm_sqr();

    Ok(parity * phase * pol)
}

/// Independent circuit-level computation of fidelity and efficiency.
pub fn circuit_oracle(p: LossPoint) -> Result<OracleResult> {
    let p = LossPoint::new(p.zeta, p.xi)?;
    let ideal = propagate(LossPoint::lossless())?;
    let lossy = propagate(p)?;
    let norm = lossy.norm_sqr() * ideal.norm_sqr();
    if norm == 0.0 {
        return Err(Error::UndefinedFidelity);
    }
    let fidelity = ideal.inner(&lossy)?.norm_sqr() / norm;
    Ok(OracleResult {
        fidelity,
        efficiency: survival(p)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub g_over_ktot: f64,
    pub ks_over_k: f64,
    pub zeta: f64,
    pub xi: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub eta: f64,
}

impl SweepRow {
    pub fn at(g_over_ktot: f64, ks_over_k: f64, gamma: f64) -> Result<Self> {
        let p = LossPoint::from_cavity(&CavityParams::from_total_coupling(
            g_over_ktot,
            ks_over_k,
            gamma,
        )?)?;
        Ok(Self {
            g_over_ktot,
            ks_over_k,
            zeta: p.zeta,
            xi: p.xi,
            fidelity: closed_form_fidelity(p)?,
            eta: closed_form_efficiency(p),
        })
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn check_range(name: &str, (lo, hi): (f64, f64), n: usize) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo {
        return Err(Error::InvalidRange(format!("{name} range [{lo}, {hi}]")));
    }
    if n == 0 || (n == 1 && lo != hi) {
        return Err(Error::InvalidRange(format!(
            "{name} resolution {n} for [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Rows over a `resolution.0 × resolution.1` grid, `g` outer and `κ_s` inner.
/// Grid points are evaluated in parallel; the output order is fixed.
pub fn sweep(
    g_range: (f64, f64),
    ks_range: (f64, f64),
    gamma: f64,
    resolution: (usize, usize),
) -> Result<Vec<SweepRow>> {
    check_range("g", g_range, resolution.0)?;
    check_range("kappa_s", ks_range, resolution.1)?;
    let gs = linspace(g_range.0, g_range.1, resolution.0);
    let ks = linspace(ks_range.0, ks_range.1, resolution.1);
    let grid: Vec<(f64, f64)> = gs
        .iter()
        .flat_map(|&g| ks.iter().map(move |&k| (g, k)))
        .collect();
    grid.par_iter()
        .map(|&(g, k)| SweepRow::at(g, k, gamma))
        .collect()
}

/// `value` with `digits` significant digits in plain decimal notation.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

const CSV_DIGITS: usize = 12;

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["g_over_ktot", "ks_over_k", "zeta", "xi", "F", "eta"])
        .map_err(csv_err)?;
    for r in rows {
        let fields = [r.g_over_ktot, r.ks_over_k, r.zeta, r.xi, r.fidelity, r.eta];
        w.write_record(fields.map(|v| format_significant(v, CSV_DIGITS)))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Csv(e.to_string()))
}
