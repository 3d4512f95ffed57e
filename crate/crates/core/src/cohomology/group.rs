use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::CohomologyError;

/// A finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_m` in
/// invariant-factor form: every `d_i >= 2` and `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupFG {
    rank: usize,
    torsion: Vec<BigUint>,
}

impl AbelianGroupFG {
    /// Normalizes any list of cyclic orders; order 0 means `Z`, order 1 is dropped.
    pub fn new(rank: usize, cyclic: impl IntoIterator<Item = BigUint>) -> Self {
        let mut rank = rank;
        let mut t: Vec<BigUint> = Vec::new();
        for d in cyclic {
            if d.is_zero() {
                rank += 1;
            } else if !d.is_one() {
                t.push(d);
            }
        }
        // Z/a ⊕ Z/b ≅ Z/gcd ⊕ Z/lcm; sweeping every pair leaves a divisibility chain.
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let g = t[i].gcd(&t[j]);
                let l = t[i].lcm(&t[j]);
                t[i] = g;
                t[j] = l;
            }
        }
        t.retain(|d| !d.is_one());
        AbelianGroupFG { rank, torsion: t }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupFG { rank, torsion: Vec::new() }
    }

    /// `Z`.
    pub fn integers() -> Self {
        Self::free(1)
    }

    /// `Z/n` (`Z` for `n = 0`).
    pub fn cyclic(n: u64) -> Self {
        Self::new(0, [BigUint::from(n)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigUint] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.rank + other.rank, self.torsion.iter().chain(&other.torsion).cloned())
    }

    /// `G^e`.
    pub fn power(&self, e: usize) -> Self {
        Self::new(self.rank * e, (0..e).flat_map(|_| self.torsion.iter().cloned()))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut cyclic: Vec<BigUint> = Vec::new();
        for _ in 0..other.rank {
            cyclic.extend(self.torsion.iter().cloned());
        }
        for _ in 0..self.rank {
            cyclic.extend(other.torsion.iter().cloned());
        }
        for a in &self.torsion {
            for b in &other.torsion {
                cyclic.push(a.gcd(b));
            }
        }
        Self::new(self.rank * other.rank, cyclic)
    }

    pub fn tor(&self, other: &Self) -> Self {
        let cyclic = self.torsion.iter().flat_map(|a| other.torsion.iter().map(move |b| a.gcd(b)));
        Self::new(0, cyclic)
    }
}

impl fmt::Display for AbelianGroupFG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for AbelianGroupFG {
    type Err = CohomologyError;

    /// Parses sums like `Z^2 + Z/2 + Z/6` or `0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CohomologyError::InvalidGroup(s.to_string());
        let mut rank = 0;
        let mut cyclic = Vec::new();
        for term in s.split('+').map(str::trim) {
            if term == "0" {
                continue;
            }
            if let Some(n) = term.strip_prefix("Z/") {
                cyclic.push(n.trim().parse::<BigUint>().map_err(|_| bad())?);
            } else if let Some(e) = term.strip_prefix("Z^") {
                rank += e.trim().parse::<usize>().map_err(|_| bad())?;
            } else if term == "Z" {
                rank += 1;
            } else {
                return Err(bad());
            }
        }
        Ok(Self::new(rank, cyclic))
    }
}
