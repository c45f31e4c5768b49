use std::fmt;

use crate::error::{Error, Result};

/// A set of sites (0-based, sorted, distinct) defining one side of a
/// bipartition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    n_qubits: usize,
    sites: Vec<usize>,
}

impl Region {
    pub fn new(n_qubits: usize, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut sites: Vec<usize> = sites.into_iter().collect();
        sites.sort_unstable();
        if let Some(w) = sites.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidRegion(format!("site {} listed twice", w[0] + 1)));
        }
        if let Some(&s) = sites.iter().find(|&&s| s >= n_qubits) {
            return Err(Error::InvalidRegion(format!(
                "site {} outside 1..={n_qubits}",
                s + 1
            )));
        }
        Ok(Self { n_qubits, sites })
    }

    /// The first `p` sites.
    pub fn prefix(n_qubits: usize, p: usize) -> Result<Self> {
        if p > n_qubits {
            return Err(Error::InvalidRegion(format!(
                "prefix length {p} exceeds {n_qubits} qubits"
            )));
        }
        Self::new(n_qubits, 0..p)
    }

    pub fn half_chain(n_qubits: usize) -> Self {
        Self::prefix(n_qubits, n_qubits / 2).expect("half chain always fits")
    }

    /// Parses a 1-based site list such as `1-4,7,9-10`, or `prefix:<p>`.
    pub fn parse(n_qubits: usize, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(p) = spec.strip_prefix("prefix:") {
            let p = p
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidRegion(format!("bad prefix length in {spec:?}")))?;
            return Self::prefix(n_qubits, p);
        }
        let bad = || Error::InvalidRegion(format!("cannot parse region {spec:?}"));
        let one_based = |s: &str| -> Result<usize> {
            match s.trim().parse::<usize>() {
                Ok(0) | Err(_) => Err(bad()),
                Ok(v) => Ok(v - 1),
            }
        };
        let mut sites = Vec::new();
        for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (one_based(a)?, one_based(b)?);
                    if a > b {
                        return Err(bad());
                    }
                    sites.extend(a..=b);
                }
                None => sites.push(one_based(part)?),
            }
        }
        Self::new(n_qubits, sites)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            sites: (0..self.n_qubits).filter(|&s| !self.contains(s)).collect(),
        }
    }

    /// Largest entropy any pure state can carry across this cut.
    pub fn max_entropy(&self) -> usize {
        self.len().min(self.n_qubits - self.len())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Compress runs into `a-b` ranges, 1-based.
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.sites.len() {
            let start = self.sites[i];
            let mut end = start;
            while i + 1 < self.sites.len() && self.sites[i + 1] == end + 1 {
                i += 1;
                end += 1;
            }
            parts.push(if start == end {
                format!("{}", start + 1)
            } else {
                format!("{}-{}", start + 1, end + 1)
            });
            i += 1;
        }
        f.write_str(&parts.join(","))
    }
}
