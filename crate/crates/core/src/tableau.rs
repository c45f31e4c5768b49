//! Super-stabilizer tableau.
//!
//! The state is the 2N x N binary matrix V whose columns are the N
//! super-stabilizers. It is stored transposed per site: `x_plane` row `i`
//! holds bit `v_{alpha,ix}` for every stabilizer `alpha`, and `z_plane` row
//! `i` holds `v_{alpha,iz}`. A gate on site `i` therefore touches whole
//! word-packed rows, and the entropy submatrix for a region is just a
//! gather of those rows.

use std::fmt;

use crate::bits::{words_for, BitMatrix};
use crate::error::{Error, Result};
use crate::model::{OperatorProgram, SuperGate, SuperPauli};
use crate::region::Region;

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                w * 64 + b
            })
        })
    })
}

#[derive(Clone, PartialEq, Eq)]
pub struct SuperStabilizerTableau {
    n_qubits: usize,
    x_plane: BitMatrix,
    z_plane: BitMatrix,
    check_each_gate: bool,
}

impl SuperStabilizerTableau {
    /// The all-X operator `X_1 ... X_N`, i.e. operator state `|00...0>`,
    /// stabilized by `Z_alpha` for every site.
    pub fn new_all_x(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::TooFewQubits { min: 1, got: 0 });
        }
        Ok(Self {
            n_qubits,
            x_plane: BitMatrix::zeros(n_qubits, n_qubits),
            z_plane: BitMatrix::identity(n_qubits),
            check_each_gate: false,
        })
    }

    /// Builds a tableau from explicit stabilizers, rejecting sets that are
    /// not N mutually commuting, independent super-Paulis.
    pub fn from_stabilizers(stabilizers: &[SuperPauli]) -> Result<Self> {
        let n = stabilizers.len();
        if n == 0 {
            return Err(Error::TooFewQubits { min: 1, got: 0 });
        }
        let mut x_plane = BitMatrix::zeros(n, n);
        let mut z_plane = BitMatrix::zeros(n, n);
        for (alpha, s) in stabilizers.iter().enumerate() {
            if s.n_qubits() != n {
                return Err(Error::InvalidStabilizers(format!(
                    "stabilizer {} acts on {} sites, expected {n}",
                    alpha + 1,
                    s.n_qubits()
                )));
            }
            for i in s.x_mask().iter_ones() {
                x_plane.set(i, alpha, true);
            }
            for i in s.z_mask().iter_ones() {
                z_plane.set(i, alpha, true);
            }
        }
        let t = Self {
            n_qubits: n,
            x_plane,
            z_plane,
            check_each_gate: false,
        };
        t.check_invariants()?;
        Ok(t)
    }

    /// Turns on a full invariant check after every gate. This costs
    /// O(N^3 / 64) per gate and is meant for tests.
    pub fn with_gate_checks(mut self, enabled: bool) -> Self {
        self.check_each_gate = enabled;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn stabilizer(&self, alpha: usize) -> SuperPauli {
        assert!(alpha < self.n_qubits);
        let n = self.n_qubits;
        let mut p = SuperPauli::identity(n);
        for i in 0..n {
            p.set_bits(i, self.x_plane.get(i, alpha), self.z_plane.get(i, alpha));
        }
        p
    }

    pub fn stabilizers(&self) -> Vec<SuperPauli> {
        (0..self.n_qubits).map(|a| self.stabilizer(a)).collect()
    }

    /// Row `2i` is `v_{ix}`, row `2i+1` is `v_{iz}`, columns are stabilizers.
    pub fn matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::with_capacity_rows(2 * self.n_qubits, self.n_qubits);
        for i in 0..self.n_qubits {
            m.push_words(self.x_plane.row(i));
            m.push_words(self.z_plane.row(i));
        }
        m
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_qubits {
            return Err(Error::SiteOutOfRange {
                site: site + 1,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn after_gate(&self) {
        if self.check_each_gate {
            if let Err(e) = self.check_invariants() {
                panic!("tableau invariant broken: {e}");
            }
        }
    }

    /// `X -> Z, Z -> X` on `site` (signs dropped): exchanges `v_x` and `v_z`.
    pub fn apply_t(&mut self, site: usize) -> Result<()> {
        self.check_site(site)?;
        self.x_plane
            .row_mut(site)
            .swap_with_slice(self.z_plane.row_mut(site));
        self.after_gate();
        Ok(())
    }

    pub fn apply_swap(&mut self, site_a: usize, site_b: usize) -> Result<()> {
        SuperGate::Swap(site_a, site_b).validate(self.n_qubits)?;
        self.x_plane.swap_rows(site_a, site_b);
        self.z_plane.swap_rows(site_a, site_b);
        self.after_gate();
        Ok(())
    }

    /// Conjugation by `CY_{c,t1} CY_{c,t2}`:
    ///
    /// ```text
    /// v_cz  += v_t1x + v_t1z + v_t2x + v_t2z
    /// v_tx  += v_cx,  v_tz += v_cx      (t in {t1, t2})
    /// ```
    pub fn apply_c3(&mut self, control: usize, target_1: usize, target_2: usize) -> Result<()> {
        SuperGate::c3(control, target_1, target_2).validate(self.n_qubits)?;
        let c = control;
        for t in [target_1, target_2] {
            xor_into(self.z_plane.row_mut(c), self.x_plane.row(t));
            self.z_plane.xor_row(t, c);
        }
        for t in [target_1, target_2] {
            self.x_plane.xor_row(c, t);
            xor_into(self.z_plane.row_mut(t), self.x_plane.row(c));
        }
        self.after_gate();
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: SuperGate) -> Result<()> {
        match gate {
            SuperGate::T(a) => self.apply_t(a),
            SuperGate::Swap(a, b) => self.apply_swap(a, b),
            SuperGate::C3 { control, targets } => self.apply_c3(control, targets[0], targets[1]),
        }
    }

    /// Applies gates in program order (`gates[0]` first).
    pub fn apply_program(&mut self, program: &OperatorProgram) -> Result<()> {
        if program.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: program.n_qubits(),
            });
        }
        for &g in program.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Operator entanglement entropy in bits across `region`:
    /// `rank_2(rows of V for the sites in region) - |region|`.
    pub fn entropy(&self, region: &Region) -> Result<usize> {
        if region.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: region.n_qubits(),
            });
        }
        let mut sub = BitMatrix::with_capacity_rows(2 * region.len(), self.n_qubits);
        for &s in region.sites() {
            sub.push_words(self.x_plane.row(s));
            sub.push_words(self.z_plane.row(s));
        }
        let rank = sub.rank_in_place();
        debug_assert!(rank >= region.len());
        Ok(rank - region.len())
    }

    /// Entropy of every prefix `{1..p}` for `p = 0..=N`, sharing one
    /// elimination pass.
    pub fn prefix_entropies(&self) -> Vec<usize> {
        // Incremental rank: reduce each new row against the pivots so far.
        let n = self.n_qubits;
        let stride = words_for(n);
        let mut pivots: Vec<(usize, Vec<u64>)> = Vec::with_capacity(n);
        let mut out = Vec::with_capacity(n + 1);
        out.push(0);
        for site in 0..n {
            for row in [self.x_plane.row(site), self.z_plane.row(site)] {
                let mut v = row.to_vec();
                for (col, p) in &pivots {
                    if v[col / 64] >> (col % 64) & 1 == 1 {
                        xor_into(&mut v, p);
                    }
                }
                if let Some(w) = (0..stride).find(|&w| v[w] != 0) {
                    let col = w * 64 + v[w].trailing_zeros() as usize;
                    // Keep pivots fully reduced on their own column.
                    for (_, p) in pivots.iter_mut() {
                        if p[col / 64] >> (col % 64) & 1 == 1 {
                            xor_into(p, &v);
                        }
                    }
                    pivots.push((col, v));
                }
            }
            out.push(pivots.len() - (site + 1));
        }
        out
    }

    /// Mutual commutation (all symplectic products zero) and independence
    /// (rank of V equals N).
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n_qubits;
        // comm[alpha] accumulates the symplectic product of alpha with every beta.
        let mut comm = BitMatrix::zeros(n, n);
        for i in 0..n {
            let x = self.x_plane.row(i);
            let z = self.z_plane.row(i);
            for alpha in ones(x) {
                xor_into(comm.row_mut(alpha), z);
            }
            for alpha in ones(z) {
                xor_into(comm.row_mut(alpha), x);
            }
        }
        for alpha in 0..n {
            if let Some(beta) = comm.row_bits(alpha).iter_ones().next() {
                return Err(Error::InvalidStabilizers(format!(
                    "stabilizers {} and {} anticommute",
                    alpha + 1,
                    beta + 1
                )));
            }
        }
        let rank = self.matrix().rank_in_place();
        if rank != n {
            return Err(Error::InvalidStabilizers(format!(
                "stabilizers are dependent (rank {rank} < {n})"
            )));
        }
        Ok(())
    }

    /// One line per stabilizer, one `I`/`X`/`Z`/`Y` per site, trailing newline.
    pub fn dump_stabilizers(&self) -> String {
        let mut out = String::with_capacity(self.n_qubits * (self.n_qubits + 1));
        for s in self.stabilizers() {
            out.push_str(&s.label());
            out.push('\n');
        }
        out
    }

    pub fn parse_stabilizers(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        if text.is_empty() {
            return Err(parse_err(1, "empty stabilizer dump".into()));
        }
        let Some(body) = text.strip_suffix('\n') else {
            return Err(parse_err(text.lines().count(), "missing final newline".into()));
        };
        let lines: Vec<&str> = body.split('\n').collect();
        let n = lines[0].chars().count();
        if n == 0 {
            return Err(parse_err(1, "empty stabilizer line".into()));
        }
        let mut stabilizers = Vec::with_capacity(n);
        for (idx, line) in lines.iter().enumerate() {
            let len = line.chars().count();
            if len != n {
                return Err(parse_err(
                    idx + 1,
                    format!("expected {n} characters, found {len}"),
                ));
            }
            let p = SuperPauli::from_label(line).map_err(|e| parse_err(idx + 1, e.to_string()))?;
            stabilizers.push(p);
        }
        if stabilizers.len() != n {
            return Err(parse_err(
                lines.len(),
                format!("expected {n} stabilizer lines, found {}", lines.len()),
            ));
        }
        Self::from_stabilizers(&stabilizers)
    }
}

impl fmt::Debug for SuperStabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperStabilizerTableau(n={})", self.n_qubits)?;
        for s in self.stabilizers() {
            writeln!(f, "  {}", s.label())?;
        }
        Ok(())
    }
}

impl SuperStabilizerTableau {
    /// Compares stabilizer bits only, ignoring the gate-check flag.
    pub fn same_bits(&self, other: &Self) -> bool {
        self.x_plane == other.x_plane && self.z_plane == other.z_plane
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn labels(t: &SuperStabilizerTableau) -> Vec<String> {
        t.stabilizers().iter().map(|s| s.label()).collect()
    }

    fn single(label: &str) -> SuperStabilizerTableau {
        // Stabilizer 0 = label, the rest zero. Not a valid state, but the
        // gate updates act column-wise so this isolates one super-Pauli.
        let p = SuperPauli::from_label(label).unwrap();
        let n = p.n_qubits();
        let mut t = SuperStabilizerTableau::new_all_x(n).unwrap();
        t.x_plane = BitMatrix::zeros(n, n);
        t.z_plane = BitMatrix::zeros(n, n);
        for i in 0..n {
            t.x_plane.set(i, 0, p.x_bit(i));
            t.z_plane.set(i, 0, p.z_bit(i));
        }
        t
    }

    fn first(t: &SuperStabilizerTableau) -> String {
        t.stabilizer(0).label()
    }

    fn random_gate(rng: &mut impl Rng, n: usize) -> SuperGate {
        loop {
            let g = match rng.gen_range(0..3) {
                0 => SuperGate::T(rng.gen_range(0..n)),
                1 => SuperGate::Swap(rng.gen_range(0..n), rng.gen_range(0..n)),
                _ => SuperGate::c3(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)),
            };
            if g.validate(n).is_ok() {
                return g;
            }
        }
    }

    #[test]
    fn new_all_x_is_z_basis() {
        let t = SuperStabilizerTableau::new_all_x(3).unwrap();
        assert_eq!(labels(&t), ["ZII", "IZI", "IIZ"]);
        assert_eq!(labels(&SuperStabilizerTableau::new_all_x(1).unwrap()), ["Z"]);
        assert!(SuperStabilizerTableau::new_all_x(0).is_err());
        let big = SuperStabilizerTableau::new_all_x(120).unwrap();
        assert_eq!(big.entropy(&Region::prefix(120, 60).unwrap()).unwrap(), 0);
        big.check_invariants().unwrap();
    }

    #[test]
    fn t_exchanges_x_and_z() {
        let mut t = single("Z");
        t.apply_t(0).unwrap();
        assert_eq!(first(&t), "X");
        t.apply_t(0).unwrap();
        assert_eq!(first(&t), "Z");
        let mut t = single("XZY");
        t.apply_t(1).unwrap();
        assert_eq!(first(&t), "XXY");
        t.apply_t(2).unwrap();
        assert_eq!(first(&t), "XXY");
        assert!(t.apply_t(3).is_err());
    }

    #[test]
    fn swap_exchanges_sites() {
        let mut t = single("XZI");
        t.apply_swap(0, 1).unwrap();
        assert_eq!(first(&t), "ZXI");
        t.apply_swap(0, 1).unwrap();
        assert_eq!(first(&t), "XZI");
        let mut t = single("IIZ");
        t.apply_swap(0, 1).unwrap();
        assert_eq!(first(&t), "IIZ");
        assert!(t.apply_swap(1, 1).is_err());
        assert!(t.apply_swap(0, 3).is_err());
    }

    #[test]
    fn c3_rows_of_the_update_table() {
        // Z_2 -> Z_1 Z_2
        let mut t = single("IZI");
        t.apply_c3(0, 1, 2).unwrap();
        assert_eq!(first(&t), "ZZI");
        // X_1 -> X_1 (X_2 Z_2)(X_3 Z_3)
        let mut t = single("XII");
        t.apply_c3(0, 1, 2).unwrap();
        assert_eq!(first(&t), "XYY");
        let s = t.stabilizer(0);
        assert_eq!(s.x_mask().iter_ones().collect::<Vec<_>>(), [0, 1, 2]);
        assert_eq!(s.z_mask().iter_ones().collect::<Vec<_>>(), [1, 2]);
        for (input, output) in [("ZII", "ZII"), ("IIZ", "ZIZ"), ("IXI", "ZXI"), ("IIX", "ZIX")] {
            let mut t = single(input);
            t.apply_c3(0, 1, 2).unwrap();
            assert_eq!(first(&t), output, "{input}");
        }
        assert!(t.apply_c3(0, 0, 1).is_err());
        assert!(t.apply_c3(0, 1, 3).is_err());
    }

    /// Direct transcription of the update rule on the interleaved vector,
    /// used to check the plane implementation on every 6-bit pattern.
    fn c3_reference(v: [bool; 6]) -> [bool; 6] {
        let [x1, z1, x2, z2, x3, z3] = v;
        [x1, z1 ^ x2 ^ z2 ^ x3 ^ z3, x1 ^ x2, x1 ^ z2, x1 ^ x3, x1 ^ z3]
    }

    #[test]
    fn c3_exhaustive_and_involutive() {
        for pattern in 0u32..64 {
            let v: [bool; 6] = std::array::from_fn(|k| pattern >> k & 1 == 1);
            let p = SuperPauli::from_interleaved(&v).unwrap();
            let mut t = single(&p.label());
            t.apply_c3(0, 1, 2).unwrap();
            let got = t.stabilizer(0).interleaved();
            assert_eq!(got, c3_reference(v), "pattern {pattern:06b}");
            t.apply_c3(0, 1, 2).unwrap();
            assert_eq!(t.stabilizer(0).interleaved(), v, "involution {pattern:06b}");
        }
    }

    #[test]
    fn c3_target_order_irrelevant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut t = SuperStabilizerTableau::new_all_x(6).unwrap();
        for _ in 0..50 {
            t.apply_gate(random_gate(&mut rng, 6)).unwrap();
        }
        let mut a = t.clone();
        let mut b = t;
        a.apply_c3(2, 0, 5).unwrap();
        b.apply_c3(2, 5, 0).unwrap();
        assert!(a.same_bits(&b));
    }

    #[test]
    fn ghz_three() {
        let mut t = SuperStabilizerTableau::new_all_x(3).unwrap();
        let prog = OperatorProgram::new(3, vec![SuperGate::T(0), SuperGate::c3(0, 1, 2)]).unwrap();
        t.apply_program(&prog).unwrap();
        assert_eq!(labels(&t), ["XYY", "ZZI", "ZIZ"]);
        assert_eq!(t.entropy(&Region::new(3, [0]).unwrap()).unwrap(), 1);
        assert_eq!(t.prefix_entropies(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn program_dimension_mismatch() {
        let mut t = SuperStabilizerTableau::new_all_x(3).unwrap();
        let prog = OperatorProgram::empty(4).unwrap();
        assert!(matches!(t.apply_program(&prog), Err(Error::DimensionMismatch { .. })));
        let before = t.clone();
        t.apply_program(&OperatorProgram::empty(3).unwrap()).unwrap();
        assert_eq!(t, before);
        assert!(t.entropy(&Region::prefix(4, 1).unwrap()).is_err());
    }

    #[test]
    fn program_then_reversal_restores() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 7, 65, 130] {
            let gates: Vec<_> = (0..300).map(|_| random_gate(&mut rng, n)).collect();
            let prog = OperatorProgram::new(n, gates).unwrap();
            let start = SuperStabilizerTableau::new_all_x(n).unwrap();
            let mut t = start.clone();
            t.apply_program(&prog).unwrap();
            t.check_invariants().unwrap();
            t.apply_program(&prog.reversed()).unwrap();
            assert!(t.same_bits(&start), "n={n}");
        }
    }

    #[test]
    fn prefix_entropies_match_rank_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [4, 9, 70] {
            let mut t = SuperStabilizerTableau::new_all_x(n).unwrap();
            for _ in 0..20 * n {
                t.apply_gate(random_gate(&mut rng, n)).unwrap();
            }
            let direct: Vec<usize> = (0..=n)
                .map(|p| t.entropy(&Region::prefix(n, p).unwrap()).unwrap())
                .collect();
            assert_eq!(t.prefix_entropies(), direct);
        }
    }

    #[test]
    fn dump_and_parse() {
        let t = SuperStabilizerTableau::new_all_x(3).unwrap();
        assert_eq!(t.dump_stabilizers(), "ZII\nIZI\nIIZ\n");

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut t = SuperStabilizerTableau::new_all_x(17).unwrap();
        for _ in 0..400 {
            t.apply_gate(random_gate(&mut rng, 17)).unwrap();
        }
        let back = SuperStabilizerTableau::parse_stabilizers(&t.dump_stabilizers()).unwrap();
        assert!(back.same_bits(&t));
    }

    #[test]
    fn parse_rejects_bad_dumps() {
        let cases = [
            ("ZII\nZII\nIIZ\n", "dependent"),
            ("XII\nZII\nIIZ\n", "anticommute"),
            ("ZII\nIZI\nIIZ", "final newline"),
            ("ZII\nIZ\nIIZ\n", "characters"),
            ("ZII\nIZI\n", "lines"),
            ("ZII\nIQI\nIIZ\n", "invalid"),
            ("", "empty"),
        ];
        for (text, needle) in cases {
            let err = SuperStabilizerTableau::parse_stabilizers(text).unwrap_err();
            assert!(err.to_string().contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn gate_checks_pass_on_valid_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut t = SuperStabilizerTableau::new_all_x(12).unwrap().with_gate_checks(true);
        for _ in 0..500 {
            t.apply_gate(random_gate(&mut rng, 12)).unwrap();
        }
    }
}
