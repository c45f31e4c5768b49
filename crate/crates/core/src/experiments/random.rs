use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::SuperGate;

/// Generator for realization `index` of a run seeded with `seed`.
///
/// Every realization shares the ChaCha8 key derived from `seed` and gets
/// its own stream (`set_stream(index)`), so the streams never overlap and
/// realization `i` draws the same gates no matter how many others run or
/// in which order.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One time step: `T` on a uniform site, then `C3` on a uniform window
/// `{w, w+1, w+2}` with the control chosen uniformly inside the window.
pub fn random_step<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Result<[SuperGate; 2]> {
    if n_qubits < 3 {
        return Err(Error::TooFewQubits {
            min: 3,
            got: n_qubits,
        });
    }
    let t_site = rng.gen_range(0..n_qubits);
    let base = rng.gen_range(0..n_qubits - 2);
    let offset = rng.gen_range(0..3);
    let window = [base, base + 1, base + 2];
    let control = window[offset];
    let mut targets = window.iter().copied().filter(|&s| s != control);
    let (a, b) = (targets.next().unwrap(), targets.next().unwrap());
    Ok([SuperGate::T(t_site), SuperGate::c3(control, a, b)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sequences_repeat() {
        let draw = |seed, idx| {
            let mut rng = realization_rng(seed, idx);
            (0..100)
                .map(|_| random_step(&mut rng, 10).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(7, 0), draw(7, 0));
        assert_ne!(draw(7, 0), draw(7, 1));
        assert_ne!(draw(7, 0), draw(8, 0));
    }

    #[test]
    fn c3_windows_are_contiguous() {
        let mut rng = realization_rng(1, 0);
        for n in [3, 4, 17] {
            for _ in 0..2000 {
                let [t, c3] = random_step(&mut rng, n).unwrap();
                t.validate(n).unwrap();
                c3.validate(n).unwrap();
                let mut s = c3.sites();
                s.sort();
                assert_eq!(s[2] - s[0], 2);
            }
        }
        assert!(random_step(&mut rng, 2).is_err());
    }

    /// Pearson chi-squared statistic plus a per-bin 5-sigma check.
    fn assert_uniform(counts: &[u64], label: &str) {
        let total: u64 = counts.iter().sum();
        let k = counts.len() as f64;
        let expected = total as f64 / k;
        let sigma = (expected * (1.0 - 1.0 / k)).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expected).abs() < 5.0 * sigma,
                "{label} bin {i}: {c} vs {expected}"
            );
        }
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // dof = k - 1; mean dof, sd sqrt(2 dof); 5 sd is far in the tail.
        let dof = k - 1.0;
        assert!(chi2 < dof + 5.0 * (2.0 * dof).sqrt(), "{label} chi2 {chi2}");
    }

    #[test]
    fn draws_are_uniform() {
        let n = 12;
        let mut rng = realization_rng(2024, 3);
        let mut t_sites = vec![0u64; n];
        let mut windows = vec![0u64; n - 2];
        let mut control_pos = [0u64; 3];
        for _ in 0..1_000_000 {
            let [t, c3] = random_step(&mut rng, n).unwrap();
            let SuperGate::T(site) = t else { unreachable!() };
            t_sites[site] += 1;
            let SuperGate::C3 { control, targets } = c3 else { unreachable!() };
            let base = control.min(targets[0]);
            windows[base] += 1;
            control_pos[control - base] += 1;
        }
        assert_uniform(&t_sites, "T site");
        assert_uniform(&windows, "window");
        assert_uniform(&control_pos, "control position");
    }
}
