//! Dense operator-space simulation for small systems.
//!
//! The operator wavefunction lives on the 2^N strings of X and Y, indexed
//! by [`XYStringIndex::y_mask`](crate::model::XYStringIndex): bit `i` set
//! means Y at site `i`. Cost is exponential; this exists to check the
//! tableau.

mod verify;

pub use verify::{
    c3_from_factors, verify_gate_tables, verify_with_c3, C3Reading, CMatrix, GateTableReport,
    IdentityCheck,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{SuperGate, SuperPauli, XYStringIndex};
use crate::region::Region;

pub const MAX_ORACLE_QUBITS: usize = 16;

/// Tolerance for amplitude comparisons in stabilizer checks.
pub const STABILIZER_TOLERANCE: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stabilization {
    Plus,
    Minus,
    NotStabilized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorWavefunction {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl OperatorWavefunction {
    /// `X_1 ... X_N`, the basis state `|00...0>`.
    pub fn new_all_x(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_ORACLE_QUBITS {
            return Err(Error::OracleSize {
                max: MAX_ORACLE_QUBITS,
                got: n_qubits,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut psi = Self::new_all_x(n_qubits)?;
        if amplitudes.len() != psi.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: psi.amplitudes.len(),
                got: amplitudes.len(),
            });
        }
        psi.amplitudes = amplitudes;
        Ok(psi)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: XYStringIndex) -> Complex64 {
        assert_eq!(index.n_qubits(), self.n_qubits);
        self.amplitudes[index.y_mask() as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
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

    /// Super-operator `Z.H` at `site`:
    /// `|0> -> (|0> - |1>)/sqrt2`, `|1> -> (|0> + |1>)/sqrt2`.
    pub fn apply_t(&mut self, site: usize) -> Result<()> {
        self.check_site(site)?;
        let bit = 1usize << site;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..self.amplitudes.len() {
            if j & bit == 0 {
                let a0 = self.amplitudes[j];
                let a1 = self.amplitudes[j | bit];
                self.amplitudes[j] = (a0 + a1) * h;
                self.amplitudes[j | bit] = (a1 - a0) * h;
            }
        }
        Ok(())
    }

    pub fn apply_swap(&mut self, site_a: usize, site_b: usize) -> Result<()> {
        SuperGate::Swap(site_a, site_b).validate(self.n_qubits)?;
        let (ma, mb) = (1usize << site_a, 1usize << site_b);
        for j in 0..self.amplitudes.len() {
            // Visit each (..1..0..) / (..0..1..) pair once.
            if j & ma != 0 && j & mb == 0 {
                self.amplitudes.swap(j, j ^ ma ^ mb);
            }
        }
        Ok(())
    }

    /// Controlled super-Y: when the control bit is 1, `Y|0> = i|1>`,
    /// `Y|1> = -i|0>` on the target.
    pub fn apply_cy(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_site(control)?;
        self.check_site(target)?;
        if control == target {
            return Err(Error::RepeatedIndex {
                site: control + 1,
                gate: "CY".into(),
            });
        }
        let (mc, mt) = (1usize << control, 1usize << target);
        for j in 0..self.amplitudes.len() {
            if j & mc != 0 && j & mt == 0 {
                let a0 = self.amplitudes[j];
                let a1 = self.amplitudes[j | mt];
                self.amplitudes[j | mt] = I * a0;
                self.amplitudes[j] = -I * a1;
            }
        }
        Ok(())
    }

    /// `C3 = CY_{c,t1} CY_{c,t2}`, applied as one permutation with phases.
    pub fn apply_c3(&mut self, control: usize, target_1: usize, target_2: usize) -> Result<()> {
        SuperGate::c3(control, target_1, target_2).validate(self.n_qubits)?;
        let mc = 1usize << control;
        let (m1, m2) = (1usize << target_1, 1usize << target_2);
        let phase = |bit_set: bool| if bit_set { -I } else { I };
        let old = self.amplitudes.clone();
        for (j, &a) in old.iter().enumerate() {
            if j & mc != 0 {
                self.amplitudes[j ^ m1 ^ m2] = phase(j & m1 != 0) * phase(j & m2 != 0) * a;
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: SuperGate) -> Result<()> {
        match gate {
            SuperGate::T(a) => self.apply_t(a),
            SuperGate::Swap(a, b) => self.apply_swap(a, b),
            SuperGate::C3 { control, targets } => self.apply_c3(control, targets[0], targets[1]),
        }
    }

    pub fn apply_program(&mut self, program: &crate::model::OperatorProgram) -> Result<()> {
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

    /// Von Neumann entropy (bits) of the reduced operator state on `region`.
    pub fn entropy(&self, region: &Region) -> Result<f64> {
        if region.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: region.n_qubits(),
            });
        }
        if region.is_empty() || region.len() == self.n_qubits {
            return Err(Error::InvalidRegion(
                "oracle entropy needs a nonempty proper subset".into(),
            ));
        }
        let inside = region.sites().to_vec();
        let outside = region.complement().sites().to_vec();
        // Keep the smaller side as rows so the reduced matrix is small.
        let (rows_sites, cols_sites) = if inside.len() <= outside.len() {
            (inside, outside)
        } else {
            (outside, inside)
        };
        let scatter = |sites: &[usize], k: usize| -> usize {
            sites
                .iter()
                .enumerate()
                .filter(|(b, _)| k >> b & 1 == 1)
                .map(|(_, &s)| 1usize << s)
                .sum()
        };
        let dr = 1usize << rows_sites.len();
        let dc = 1usize << cols_sites.len();
        let col_offsets: Vec<usize> = (0..dc).map(|k| scatter(&cols_sites, k)).collect();
        let m = DMatrix::from_fn(dr, dc, |r, c| {
            self.amplitudes[scatter(&rows_sites, r) + col_offsets[c]]
        });
        let rho = &m * m.adjoint();
        let eig = rho.symmetric_eigenvalues();
        Ok(eig
            .iter()
            .filter(|&&p| p > 1e-14)
            .map(|&p| -p * p.log2())
            .sum())
    }

    /// Applies the Hermitian super-Pauli given by the masks (Y where both
    /// bits are set) and reports whether the state is an eigenvector with
    /// eigenvalue +1 or -1.
    pub fn check_stabilized(&self, stabilizer: &SuperPauli) -> Result<Stabilization> {
        if stabilizer.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: stabilizer.n_qubits(),
            });
        }
        let mut x_mask = 0usize;
        let mut z_only = 0usize;
        let mut y_sites = 0usize;
        for i in 0..self.n_qubits {
            match (stabilizer.x_bit(i), stabilizer.z_bit(i)) {
                (true, false) => x_mask |= 1 << i,
                (false, true) => z_only |= 1 << i,
                (true, true) => {
                    x_mask |= 1 << i;
                    y_sites |= 1 << i;
                }
                (false, false) => {}
            }
        }
        let mut image = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (j, &a) in self.amplitudes.iter().enumerate() {
            let mut phase = Complex64::new(1.0, 0.0);
            if (j & z_only).count_ones() % 2 == 1 {
                phase = -phase;
            }
            // Y|0> = i|1>, Y|1> = -i|0>
            let y_ones = (j & y_sites).count_ones();
            let y_zeros = y_sites.count_ones() - y_ones;
            phase *= I.powu(y_zeros) * (-I).powu(y_ones);
            image[j ^ x_mask] = phase * a;
        }
        let dev = |sign: f64| {
            image
                .iter()
                .zip(&self.amplitudes)
                .map(|(x, a)| (x - a * sign).norm())
                .fold(0.0, f64::max)
        };
        Ok(if dev(1.0) < STABILIZER_TOLERANCE {
            Stabilization::Plus
        } else if dev(-1.0) < STABILIZER_TOLERANCE {
            Stabilization::Minus
        } else {
            Stabilization::NotStabilized
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OperatorProgram;
    use crate::tableau::SuperStabilizerTableau;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(psi: &OperatorWavefunction, expected: &[Complex64]) {
        for (k, (a, e)) in psi.amplitudes().iter().zip(expected).enumerate() {
            assert!((a - e).norm() < 1e-12, "amp {k}: {a} vs {e}");
        }
    }

    fn basis(n: usize, mask: usize) -> OperatorWavefunction {
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[mask] = c(1.0, 0.0);
        OperatorWavefunction::from_amplitudes(n, amps).unwrap()
    }

    fn random_state(rng: &mut impl Rng, n: usize) -> OperatorWavefunction {
        let amps: Vec<Complex64> = (0..1 << n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        OperatorWavefunction::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect())
            .unwrap()
    }

    #[test]
    fn new_all_x_examples() {
        assert_amps(&OperatorWavefunction::new_all_x(2).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_amps(&OperatorWavefunction::new_all_x(1).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(OperatorWavefunction::new_all_x(0).is_err());
        assert!(OperatorWavefunction::new_all_x(17).is_err());
        let psi = OperatorWavefunction::new_all_x(5).unwrap();
        for p in 1..5 {
            assert!(psi.entropy(&Region::prefix(5, p).unwrap()).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn t_on_basis_states() {
        let mut psi = basis(1, 0);
        psi.apply_t(0).unwrap();
        assert_amps(&psi, &[c(H, 0.0), c(-H, 0.0)]);
        let mut psi = basis(1, 1);
        psi.apply_t(0).unwrap();
        assert_amps(&psi, &[c(H, 0.0), c(H, 0.0)]);
        let mut psi = basis(1, 0);
        psi.apply_t(0).unwrap();
        psi.apply_t(0).unwrap();
        assert_amps(&psi, &[c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(psi.apply_t(1).is_err());
    }

    #[test]
    fn t_powers() {
        // (Z.H)^2 = [[0,1],[-1,0]], so (Z.H)^4 = -1 and (Z.H)^8 = 1.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = random_state(&mut rng, 3);
        let mut four = psi.clone();
        for _ in 0..4 {
            four.apply_t(1).unwrap();
        }
        let neg: Vec<Complex64> = psi.amplitudes().iter().map(|a| -a).collect();
        assert_amps(&four, &neg);
        for _ in 0..4 {
            four.apply_t(1).unwrap();
        }
        assert_amps(&four, psi.amplitudes());
    }

    #[test]
    fn swap_moves_amplitudes() {
        // sites 1,2 = bits 0,1; |01> means X at site 1, Y at site 2 -> mask 0b10
        let mut psi = basis(2, 0b10);
        psi.apply_swap(0, 1).unwrap();
        assert_amps(&psi, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        psi.apply_swap(0, 1).unwrap();
        assert_amps(&psi, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let sym = OperatorWavefunction::from_amplitudes(2, vec![c(0.5, 0.0); 4]).unwrap();
        let mut s2 = sym.clone();
        s2.apply_swap(1, 0).unwrap();
        assert_eq!(s2, sym);
        assert!(s2.apply_swap(1, 1).is_err());
    }

    #[test]
    fn c3_signed_basis_images() {
        // (input mask over sites 1,2,3 as string, output string, sign)
        let table = [
            ("XXX", "XXX", c(1.0, 0.0)),
            ("XXY", "XXY", c(1.0, 0.0)),
            ("XYX", "XYX", c(1.0, 0.0)),
            ("XYY", "XYY", c(1.0, 0.0)),
            ("YXX", "YYY", c(-1.0, 0.0)),
            ("YXY", "YYX", c(1.0, 0.0)),
            ("YYX", "YXY", c(1.0, 0.0)),
            ("YYY", "YXX", c(-1.0, 0.0)),
        ];
        for (input, output, sign) in table {
            let src = XYStringIndex::from_label(input).unwrap();
            let dst = XYStringIndex::from_label(output).unwrap();
            let mut psi = basis(3, src.y_mask() as usize);
            psi.apply_c3(0, 1, 2).unwrap();
            let mut expected = vec![c(0.0, 0.0); 8];
            expected[dst.y_mask() as usize] = sign;
            assert_amps(&psi, &expected);
        }
    }

    #[test]
    fn c3_is_product_of_controlled_ys() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (ctl, a, b) in [(0, 1, 2), (2, 0, 4), (3, 4, 1)] {
            let psi = random_state(&mut rng, 5);
            let mut direct = psi.clone();
            direct.apply_c3(ctl, a, b).unwrap();
            let mut composed = psi;
            composed.apply_cy(ctl, b).unwrap();
            composed.apply_cy(ctl, a).unwrap();
            assert_amps(&direct, composed.amplitudes());
        }
    }

    #[test]
    fn gates_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut psi = random_state(&mut rng, 6);
        for _ in 0..500 {
            let g = match rng.gen_range(0..3) {
                0 => SuperGate::T(rng.gen_range(0..6)),
                1 => SuperGate::Swap(0, rng.gen_range(1..6)),
                _ => SuperGate::c3(rng.gen_range(0..2), rng.gen_range(2..4), rng.gen_range(4..6)),
            };
            psi.apply_gate(g).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ghz_entropies() {
        let ghz = OperatorWavefunction::from_amplitudes(
            3,
            vec![c(H, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(H, 0.0)],
        )
        .unwrap();
        for region in [[0usize].as_slice(), &[1], &[0, 2]] {
            let s = ghz.entropy(&Region::new(3, region.iter().copied()).unwrap()).unwrap();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(ghz.entropy(&Region::prefix(3, 0).unwrap()).is_err());
        assert!(ghz.entropy(&Region::prefix(3, 3).unwrap()).is_err());

        // k copies: blocks (j, k+j, 2k+j)
        for k in 1..=4 {
            let n = 3 * k;
            let mut amps = vec![c(0.0, 0.0); 1 << n];
            for sel in 0..1usize << k {
                let mut mask = 0;
                for j in 0..k {
                    if sel >> j & 1 == 1 {
                        mask |= (1 << j) | (1 << (k + j)) | (1 << (2 * k + j));
                    }
                }
                amps[mask] = c((0.5f64).powf(k as f64 / 2.0), 0.0);
            }
            let psi = OperatorWavefunction::from_amplitudes(n, amps).unwrap();
            let s = psi.entropy(&Region::prefix(n, k).unwrap()).unwrap();
            assert!((s - k as f64).abs() < 1e-9, "k={k}: {s}");
        }
    }

    #[test]
    fn entropy_is_complement_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let psi = random_state(&mut rng, 7);
        let r = Region::new(7, [0, 3, 4]).unwrap();
        let a = psi.entropy(&r).unwrap();
        let b = psi.entropy(&r.complement()).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(a > 0.0);
    }

    #[test]
    fn stabilizer_checks() {
        let psi = OperatorWavefunction::new_all_x(3).unwrap();
        assert_eq!(psi.check_stabilized(&SuperPauli::single_z(3, 0)).unwrap(), Stabilization::Plus);
        assert_eq!(
            psi.check_stabilized(&SuperPauli::single_x(3, 0)).unwrap(),
            Stabilization::NotStabilized
        );
        assert!(psi.check_stabilized(&SuperPauli::single_z(4, 0)).is_err());

        let mut psi = OperatorWavefunction::new_all_x(1).unwrap();
        psi.apply_t(0).unwrap();
        // Z -> -X under Z.H
        assert_eq!(psi.check_stabilized(&SuperPauli::single_x(1, 0)).unwrap(), Stabilization::Minus);
    }

    #[test]
    fn co_evolution_with_tableau_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for n in 3..=8 {
            let mut t = SuperStabilizerTableau::new_all_x(n).unwrap();
            let mut psi = OperatorWavefunction::new_all_x(n).unwrap();
            for step in 0..60 {
                let g = loop {
                    let g = match rng.gen_range(0..3) {
                        0 => SuperGate::T(rng.gen_range(0..n)),
                        1 => SuperGate::Swap(rng.gen_range(0..n), rng.gen_range(0..n)),
                        _ => SuperGate::c3(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)),
                    };
                    if g.validate(n).is_ok() {
                        break g;
                    }
                };
                t.apply_gate(g).unwrap();
                psi.apply_gate(g).unwrap();
                for s in t.stabilizers() {
                    assert_ne!(psi.check_stabilized(&s).unwrap(), Stabilization::NotStabilized, "n={n} step={step}");
                }
                let tab = t.prefix_entropies();
                for p in 1..n {
                    let o = psi.entropy(&Region::prefix(n, p).unwrap()).unwrap();
                    assert!((o - tab[p] as f64).abs() < 1e-6, "n={n} step={step} p={p}");
                }
            }
        }
    }

    #[test]
    fn ghz_program_on_oracle() {
        let prog = OperatorProgram::new(3, vec![SuperGate::T(0), SuperGate::c3(0, 1, 2)]).unwrap();
        let mut psi = OperatorWavefunction::new_all_x(3).unwrap();
        psi.apply_program(&prog).unwrap();
        // (|000> - (-|111>)) / sqrt2
        let mut expected = vec![c(0.0, 0.0); 8];
        expected[0] = c(H, 0.0);
        expected[7] = c(H, 0.0);
        assert_amps(&psi, &expected);
        assert!(psi.apply_program(&OperatorProgram::empty(4).unwrap()).is_err());
    }
}
