//! Linear-optical elements and detectors.
//!
//! `|H⟩ = (|R⟩ + |L⟩)/√2` and `|V⟩ = (|R⟩ − |L⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{LinearMap, PureState, Role};

/// Names of the two input and two output ports of a 50:50 beam splitter.
/// Index `k` of the spatial subsystem is `inputs[k]` before the splitter and
/// `outputs[k]` after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortMap {
    inputs: [String; 2],
    outputs: [String; 2],
}

impl PortMap {
    pub fn new(inputs: [&str; 2], outputs: [&str; 2]) -> Result<Self> {
        if inputs[0] == inputs[1] {
            return Err(Error::DuplicateLabel(inputs[0].to_string()));
        }
        if outputs[0] == outputs[1] {
            return Err(Error::DuplicateLabel(outputs[0].to_string()));
        }
        Ok(Self {
            inputs: inputs.map(String::from),
            outputs: outputs.map(String::from),
        })
    }

    pub fn input(&self, k: usize) -> &str {
        &self.inputs[k]
    }

    pub fn output(&self, k: usize) -> &str {
        &self.outputs[k]
    }
}

/// A detected output port.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Port {
    pub index: usize,
    pub name: String,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Click {
    H,
    V,
}

impl fmt::Display for Click {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Click::H => "H",
            Click::V => "V",
        })
    }
}

/// 50:50 splitter: `|in₁⟩ → (|out₁⟩ + |out₂⟩)/√2`, `|in₂⟩ → (|out₁⟩ − |out₂⟩)/√2`.
pub fn beam_splitter(spatial: &str) -> LinearMap {
    LinearMap::hadamard(spatial)
}

/// Half-wave plate acting as the phase flip `Z = |R⟩⟨R| − |L⟩⟨L|`.
pub fn hwp_z(pol: &str) -> LinearMap {
    LinearMap::pauli_z(pol)
}

/// Half-wave plate acting as the bit flip `X = |R⟩⟨L| + |L⟩⟨R|`.
pub fn hwp_x(pol: &str) -> LinearMap {
    LinearMap::pauli_x(pol)
}

pub fn hv_basis() -> Vec<Vec<C64>> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    vec![vec![h, h], vec![h, -h]]
}

fn port_basis() -> Vec<Vec<C64>> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    vec![vec![one, zero], vec![zero, one]]
}

fn expect_role(state: &PureState, label: &str, role: Role) -> Result<()> {
    let found = state.subsystem(label)?.role();
    if found != role {
        return Err(Error::WrongRole {
            label: label.to_string(),
            expected: role,
            found,
        });
    }
    Ok(())
}

pub fn measure_hv<R: Rng + ?Sized>(
    state: &PureState,
    pol: &str,
    rng: &mut R,
) -> Result<(Click, PureState)> {
    expect_role(state, pol, Role::Polarization)?;
    let m = state.measure(pol, &hv_basis(), rng)?;
    let click = if m.outcome == 0 { Click::H } else { Click::V };
    Ok((click, m.state))
}

pub fn detect_port<R: Rng + ?Sized>(
    state: &PureState,
    spatial: &str,
    ports: &PortMap,
    rng: &mut R,
) -> Result<(Port, PureState)> {
    expect_role(state, spatial, Role::SpatialMode)?;
    let m = state.measure(spatial, &port_basis(), rng)?;
    Ok((
        Port {
            index: m.outcome,
            name: ports.output(m.outcome).to_string(),
        },
        m.state,
    ))
}
