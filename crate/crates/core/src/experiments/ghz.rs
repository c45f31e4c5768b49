use crate::error::{Error, Result};
use crate::model::{localize_c3, OperatorProgram, SuperGate};

/// Deterministic circuit producing `k = N/3` operator GHZ triples.
///
/// Operator-space order: `T` on sites `1..=k`, then `C3(j, k+j, 2k+j)` for
/// `j = 1..=k`. With `localized`, each C3 is expanded into nearest-neighbour
/// SWAPs around an adjacent C3.
pub fn build_ghz_program(n_qubits: usize, localized: bool) -> Result<OperatorProgram> {
    if n_qubits == 0 || n_qubits % 3 != 0 {
        return Err(Error::InvalidConfig(format!(
            "GHZ circuit needs a positive multiple of 3 qubits, got {n_qubits}"
        )));
    }
    let k = n_qubits / 3;
    let mut program = OperatorProgram::empty(n_qubits)?;
    program.extend((0..k).map(SuperGate::T))?;
    for j in 0..k {
        let gate = SuperGate::c3(j, k + j, 2 * k + j);
        if localized {
            program.extend(localize_c3(gate, n_qubits)?)?;
        } else {
            program.push(gate)?;
        }
    }
    Ok(program)
}

/// The three blocks `{1..k}`, `{k+1..2k}`, `{2k+1..3k}` (0-based sites).
pub fn ghz_blocks(n_qubits: usize) -> [Vec<usize>; 3] {
    let k = n_qubits / 3;
    [(0..k).collect(), (k..2 * k).collect(), (2 * k..3 * k).collect()]
}
