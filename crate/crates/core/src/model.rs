//! Operator-subspace encodings and the super-gate instruction set.
//!
//! Sites are 0-based everywhere in the Rust API. The text formats
//! (program files, CLI arguments, stabilizer dumps) are 1-based, and the
//! conversion happens only in the parsers and `Display` impls.

use std::fmt;

use crate::bits::BitRow;
use crate::error::{Error, Result};

/// Basis label of the 2^N-dimensional operator space spanned by strings of
/// X and Y. Bit `i` of `y_mask` set means Y at site `i`, clear means X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct XYStringIndex {
    n_qubits: usize,
    y_mask: u64,
}

impl XYStringIndex {
    pub const MAX_QUBITS: usize = 64;

    pub fn new(n_qubits: usize, y_mask: u64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::TooFewQubits { min: 1, got: 0 });
        }
        if n_qubits > Self::MAX_QUBITS {
            return Err(Error::InvalidConfig(format!(
                "XY string index supports at most {} qubits",
                Self::MAX_QUBITS
            )));
        }
        if n_qubits < 64 && y_mask >> n_qubits != 0 {
            return Err(Error::InvalidConfig(format!(
                "y mask {y_mask:#b} has bits beyond {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, y_mask })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn y_mask(&self) -> u64 {
        self.y_mask
    }

    /// Parses strings such as `"XYX"`; the first character is site 0.
    pub fn from_label(label: &str) -> Result<Self> {
        let mut mask = 0u64;
        let mut n = 0;
        for (i, ch) in label.chars().enumerate() {
            match ch {
                'X' => {}
                'Y' => mask |= 1 << i,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "XY string may only contain X and Y, found {other:?}"
                    )))
                }
            }
            n = i + 1;
        }
        Self::new(n, mask)
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .map(|i| if self.y_mask >> i & 1 == 1 { 'Y' } else { 'X' })
            .collect()
    }
}

impl fmt::Display for XYStringIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A super-Pauli string `X_1^{x_1} Z_1^{z_1} ... X_N^{x_N} Z_N^{z_N}` acting
/// on operator space, stored as two site masks. Signs are not tracked.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SuperPauli {
    x: BitRow,
    z: BitRow,
}

impl SuperPauli {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            x: BitRow::zeros(n_qubits),
            z: BitRow::zeros(n_qubits),
        }
    }

    pub fn from_masks(x: BitRow, z: BitRow) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn single_x(n_qubits: usize, site: usize) -> Self {
        let mut p = Self::identity(n_qubits);
        p.x.set(site, true);
        p
    }

    pub fn single_z(n_qubits: usize, site: usize) -> Self {
        let mut p = Self::identity(n_qubits);
        p.z.set(site, true);
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_mask(&self) -> &BitRow {
        &self.x
    }

    pub fn z_mask(&self) -> &BitRow {
        &self.z
    }

    pub fn x_bit(&self, site: usize) -> bool {
        self.x.get(site)
    }

    pub fn z_bit(&self, site: usize) -> bool {
        self.z.get(site)
    }

    pub fn set_bits(&mut self, site: usize, x: bool, z: bool) {
        self.x.set(site, x);
        self.z.set(site, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Symplectic product vanishes.
    pub fn commutes_with(&self, other: &SuperPauli) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// `(v_1x, v_1z, ..., v_Nx, v_Nz)`.
    pub fn interleaved(&self) -> Vec<bool> {
        (0..self.n_qubits())
            .flat_map(|i| [self.x.get(i), self.z.get(i)])
            .collect()
    }

    pub fn from_interleaved(bits: &[bool]) -> Result<Self> {
        if bits.len() % 2 != 0 {
            return Err(Error::InvalidConfig(
                "interleaved super-Pauli vector must have even length".into(),
            ));
        }
        let n = bits.len() / 2;
        let mut p = Self::identity(n);
        for i in 0..n {
            p.set_bits(i, bits[2 * i], bits[2 * i + 1]);
        }
        Ok(p)
    }

    /// One character per site: `I`, `X`, `Z`, `Y` for (x, z) = (0,0), (1,0),
    /// (0,1), (1,1).
    pub fn label(&self) -> String {
        (0..self.n_qubits())
            .map(|i| match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let chars: Vec<char> = label.chars().collect();
        let mut p = Self::identity(chars.len());
        for (i, ch) in chars.into_iter().enumerate() {
            let (x, z) = match ch {
                'I' => (false, false),
                'X' => (true, false),
                'Z' => (false, true),
                'Y' => (true, true),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "invalid super-Pauli character {other:?} at site {}",
                        i + 1
                    )))
                }
            };
            p.set_bits(i, x, z);
        }
        Ok(p)
    }
}

impl fmt::Debug for SuperPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPauli({})", self.label())
    }
}

impl fmt::Display for SuperPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// One instruction of an operator-space program.
///
/// The C3 targets are stored sorted; the super-operator `CY_{c,t1} CY_{c,t2}`
/// is symmetric in them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuperGate {
    T(usize),
    Swap(usize, usize),
    C3 { control: usize, targets: [usize; 2] },
}

impl SuperGate {
    pub fn c3(control: usize, target_1: usize, target_2: usize) -> Self {
        SuperGate::C3 {
            control,
            targets: [target_1.min(target_2), target_1.max(target_2)],
        }
    }

    pub fn sites(&self) -> Vec<usize> {
        match *self {
            SuperGate::T(a) => vec![a],
            SuperGate::Swap(a, b) => vec![a, b],
            SuperGate::C3 { control, targets } => vec![control, targets[0], targets[1]],
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let sites = self.sites();
        for &s in &sites {
            if s >= n_qubits {
                return Err(Error::SiteOutOfRange {
                    site: s + 1,
                    n_qubits,
                });
            }
        }
        for (i, &a) in sites.iter().enumerate() {
            if sites[i + 1..].contains(&a) {
                return Err(Error::RepeatedIndex {
                    site: a + 1,
                    gate: self.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for SuperGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SuperGate::T(a) => write!(f, "T {}", a + 1),
            SuperGate::Swap(a, b) => write!(f, "SWAP {} {}", a + 1, b + 1),
            SuperGate::C3 { control, targets } => {
                write!(f, "C3 {} {} {}", control + 1, targets[0] + 1, targets[1] + 1)
            }
        }
    }
}

/// Gates in operator-space application order: `gates[0]` acts first on the
/// operator wavefunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorProgram {
    n_qubits: usize,
    gates: Vec<SuperGate>,
}

impl OperatorProgram {
    pub fn new(n_qubits: usize, gates: Vec<SuperGate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::TooFewQubits { min: 1, got: 0 });
        }
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new())
    }

    /// Builds a program from gates listed in state-space (circuit) order.
    /// Heisenberg evolution applies the last circuit gate first in operator
    /// space, so the list is reversed.
    pub fn reverse_from_state_space(gates: &[SuperGate], n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, gates.iter().rev().copied().collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[SuperGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: SuperGate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = SuperGate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Same gates, opposite order.
    pub fn reversed(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// Renders the program text format (operator-space order, no directive).
    pub fn to_text(&self) -> String {
        let mut out = format!("N {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the program text format.
    ///
    /// ```text
    /// @state-space-order      # optional, must precede everything else
    /// N 3
    /// T 1
    /// C3 1 2 3
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut state_space_order = false;
        let mut seen_content = false;
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "@state-space-order" {
                if seen_content {
                    return Err(err(
                        "@state-space-order must appear before the header and gates".into(),
                    ));
                }
                state_space_order = true;
                seen_content = true;
                continue;
            }
            seen_content = true;
            let mut fields = line.split_whitespace();
            let op = fields.next().unwrap_or_default();
            let args = fields
                .map(|f| {
                    f.parse::<usize>()
                        .map_err(|_| err(format!("expected a positive integer, found {f:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if op == "N" {
                if n_qubits.is_some() {
                    return Err(err("duplicate N header".into()));
                }
                if args.len() != 1 || args[0] == 0 {
                    return Err(err("header must be `N <n_qubits>` with n_qubits >= 1".into()));
                }
                n_qubits = Some(args[0]);
                continue;
            }
            let n = n_qubits.ok_or_else(|| err("gate before `N <n_qubits>` header".into()))?;
            let expect = |k: usize| -> Result<()> {
                if args.len() != k {
                    return Err(err(format!("{op} takes {k} site indices, got {}", args.len())));
                }
                if let Some(&bad) = args.iter().find(|&&a| a == 0 || a > n) {
                    return Err(err(format!("site {bad} out of range 1..={n}")));
                }
                Ok(())
            };
            let gate = match op {
                "T" => {
                    expect(1)?;
                    SuperGate::T(args[0] - 1)
                }
                "SWAP" => {
                    expect(2)?;
                    SuperGate::Swap(args[0] - 1, args[1] - 1)
                }
                "C3" => {
                    expect(3)?;
                    SuperGate::c3(args[0] - 1, args[1] - 1, args[2] - 1)
                }
                other => return Err(err(format!("unknown gate {other:?}"))),
            };
            gate.validate(n).map_err(|e| match e {
                Error::RepeatedIndex { site, .. } => err(format!("repeated index {site}")),
                other => err(other.to_string()),
            })?;
            gates.push(gate);
        }
        let n = n_qubits.ok_or(Error::Parse {
            line: 0,
            message: "missing `N <n_qubits>` header".into(),
        })?;
        if state_space_order {
            gates.reverse();
        }
        Self::new(n, gates)
    }
}

/// Expands a long-range C3 into nearest-neighbour SWAPs, a C3 on three
/// contiguous sites, and the mirrored SWAPs.
///
/// Target 1 is walked next to the control, then target 2 is walked next to
/// that pair. Each walk only crosses sites strictly between the moving
/// qubit and its destination, so the forward SWAP count is at most
/// `|c - t1| + |c - t2|`.
pub fn localize_c3(gate: SuperGate, n_qubits: usize) -> Result<Vec<SuperGate>> {
    let SuperGate::C3 { control, targets } = gate else {
        return Err(Error::InvalidConfig(format!("localize_c3 expects a C3 gate, got {gate}")));
    };
    gate.validate(n_qubits)?;

    // pos[k] is the current site of logical qubit k in [control, t1, t2].
    let mut pos = [control, targets[0], targets[1]];
    let mut swaps = Vec::new();
    let mut step = |pos: &mut [usize; 3], who: usize, to: usize| {
        let from = pos[who];
        let (lo, hi) = (from.min(to), from.max(to));
        swaps.push(SuperGate::Swap(lo, hi));
        for p in pos.iter_mut() {
            if *p == from {
                *p = to;
            } else if *p == to {
                *p = from;
            }
        }
    };

    while pos[1].abs_diff(pos[0]) > 1 {
        let to = if pos[1] > pos[0] { pos[1] - 1 } else { pos[1] + 1 };
        step(&mut pos, 1, to);
    }
    let (block_lo, block_hi) = (pos[0].min(pos[1]), pos[0].max(pos[1]));
    while !(pos[2] + 1 == block_lo || pos[2] == block_hi + 1) {
        let to = if pos[2] > block_hi { pos[2] - 1 } else { pos[2] + 1 };
        step(&mut pos, 2, to);
    }

    let mut out = swaps.clone();
    out.push(SuperGate::c3(pos[0], pos[1], pos[2]));
    out.extend(swaps.iter().rev());
    Ok(out)
}
