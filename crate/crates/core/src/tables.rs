//! Re-derivation of the two decode tables by repeated simulation.
//!
//! Table 1 lists, for each spatial Bell state, the QD₁ flag and the possible
//! (QD₂, QD₃, port, port) combinations. Table 2 lists, for each polarization
//! Bell state, the QD₄ flag and the possible detector click pairs. Every row
//! has two equally likely branches and both must show up.

use std::collections::BTreeMap;
use std::fmt;

use crate::cavity::SpinFlag::{self, Changed, Unchanged};
use crate::error::Result;
use crate::hbsa::{run_hbsa, Bell, HyperBellId};
use crate::optics::Click;
use crate::run_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Spatial,
    Polarization,
}

impl Table {
    pub fn number(self) -> u8 {
        match self {
            Table::Spatial => 1,
            Table::Polarization => 2,
        }
    }
}

/// Expected flag of the parity detector and the two allowed branches, each
/// rendered as text.
pub fn expected_row(table: Table, bell: Bell) -> (SpinFlag, [String; 2]) {
    let flag = if bell.is_even() { Changed } else { Unchanged };
    let branches = match (table, bell.is_plus()) {
        (Table::Spatial, true) => [
            (Changed, Unchanged, "c1", "d1"),
            (Unchanged, Changed, "c2", "d2"),
        ],
        (Table::Spatial, false) => [
            (Changed, Changed, "c1", "d2"),
            (Unchanged, Unchanged, "c2", "d1"),
        ],
        (Table::Polarization, _) => {
            let same = matches!(bell, Bell::PsiPlus | Bell::PhiMinus);
            let pairs = if same {
                [(Click::H, Click::H), (Click::V, Click::V)]
            } else {
                [(Click::H, Click::V), (Click::V, Click::H)]
            };
            return (flag, pairs.map(|(a, b)| click_branch(a, b)));
        }
    };
    (
        flag,
        branches.map(|(q2, q3, p1, p2)| spatial_branch(q2, q3, p1, p2)),
    )
}

fn spatial_branch(qd2: SpinFlag, qd3: SpinFlag, p1: &str, p2: &str) -> String {
    format!("QD2 {qd2}, QD3 {qd3}, {p1}{p2}")
}

fn click_branch(a: Click, b: Click) -> String {
    format!("{a}{b}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowReport {
    pub table: Table,
    pub state: Bell,
    pub runs: usize,
    pub mismatches: usize,
    /// Observed branches with their counts.
    pub branches: BTreeMap<String, usize>,
    pub pass: bool,
}

impl fmt::Display for RowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seen: Vec<String> = self
            .branches
            .iter()
            .map(|(b, n)| format!("{b} x{n}"))
            .collect();
        write!(
            f,
            "table {} {:<4} {}/{} consistent [{}] {}",
            self.table.number(),
            self.state,
            self.runs - self.mismatches,
            self.runs,
            seen.join("; "),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs the full analyzer `repetitions` times for one table row. The other
/// degree of freedom cycles through all four Bell states.
pub fn verify_row(table: Table, bell: Bell, seed: u64, repetitions: usize) -> Result<RowReport> {
    let (flag, allowed) = expected_row(table, bell);
    let row = table.number() as u64 * 4 + bell as u64;
    let mut branches = BTreeMap::new();
    let mut mismatches = 0;
    for k in 0..repetitions {
        let other = Bell::ALL[k % 4];
        let id = match table {
            Table::Spatial => HyperBellId::new(other, bell),
            Table::Polarization => HyperBellId::new(bell, other),
        };
        let mut rng = run_rng(seed, row * repetitions as u64 + k as u64);
        let r = run_hbsa(id, &mut rng)?;
        let rec = &r.record;
        let (got_flag, branch) = match table {
            Table::Spatial => (
                rec.qd1,
                spatial_branch(rec.qd2, rec.qd3, &rec.ports.0.name, &rec.ports.1.name),
            ),
            Table::Polarization => (rec.qd4, click_branch(rec.clicks.0, rec.clicks.1)),
        };
        if got_flag != flag
            || !allowed.contains(&branch)
            || r.identified != id
            || !rec.ports_consistent()
        {
            mismatches += 1;
        }
        *branches.entry(branch).or_insert(0) += 1;
    }
    let all_seen = allowed.iter().all(|b| branches.contains_key(b));
    Ok(RowReport {
        table,
        state: bell,
        runs: repetitions,
        mismatches,
        branches,
        pass: mismatches == 0 && all_seen,
    })
}

/// All eight rows, Table 1 first, each row in the order ψ⁺, ψ⁻, φ⁺, φ⁻.
pub fn verify_tables(seed: u64, repetitions: usize) -> Result<Vec<RowReport>> {
    let order = [Bell::PsiPlus, Bell::PsiMinus, Bell::PhiPlus, Bell::PhiMinus];
    [Table::Spatial, Table::Polarization]
        .into_iter()
        .flat_map(|t| order.into_iter().map(move |b| (t, b)))
        .map(|(t, b)| verify_row(t, b, seed, repetitions))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_pass() {
        let rows = verify_tables(3, 40).unwrap();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert!(r.pass, "{r}");
            assert_eq!(r.branches.len(), 2, "{r}");
        }
    }

    #[test]
    fn single_repetition_cannot_show_both_branches() {
        let r = verify_row(Table::Spatial, Bell::PhiPlus, 1, 1).unwrap();
        assert_eq!(r.mismatches, 0);
        assert!(!r.pass);
    }

    #[test]
    fn expected_rows() {
        let (flag, b) = expected_row(Table::Spatial, Bell::PsiPlus);
        assert_eq!(flag, Unchanged);
        assert_eq!(b[0], "QD2 changed, QD3 unchanged, c1d1");
        let (flag, b) = expected_row(Table::Polarization, Bell::PhiPlus);
        assert_eq!(flag, Changed);
        assert_eq!(b, ["HV".to_string(), "VH".to_string()]);
    }
}
