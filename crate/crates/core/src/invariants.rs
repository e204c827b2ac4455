//! Canonical forms of finitely generated abelian groups.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// `Z^free_rank ⊕ Z/m1 ⊕ … ⊕ Z/mk` with `m1 | m2 | … | mk` and every `mi ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl AbelianGroupInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::from_cyclic_orders(0, [order])
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/orders[i]`. Orders `0` count as free
    /// factors and orders `1` are dropped.
    pub fn from_cyclic_orders(free: usize, orders: impl IntoIterator<Item = u64>) -> Self {
        let mut free_rank = free;
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for o in orders {
            match o {
                0 => free_rank += 1,
                1 => {}
                _ => {
                    for (p, e) in prime_powers(o) {
                        by_prime.entry(p).or_default().push(p.pow(e));
                    }
                }
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            // Largest powers go to the last invariant factor.
            for (i, q) in powers.iter().enumerate() {
                torsion[len - 1 - i] *= q;
            }
        }
        AbelianGroupInvariants { free_rank, torsion }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }

    /// Group order, or `None` if infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }

    /// The canonical string `Z^r + Z/m1 + … + Z/mk`, or `0`.
    pub fn canonical_string(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z/{m}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// A computed cohomology group: either finitely generated, or (for circle
/// coefficients) a compact group `(S1)^r ⊕ torsion`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CohomologyGroup {
    FinitelyGenerated(AbelianGroupInvariants),
    Compact {
        circle_rank: usize,
        torsion: AbelianGroupInvariants,
    },
}

impl CohomologyGroup {
    /// Order if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            CohomologyGroup::FinitelyGenerated(g) => g.order(),
            CohomologyGroup::Compact { circle_rank, torsion } => (*circle_rank == 0).then(|| torsion.order()).flatten(),
        }
    }

    /// The finite / finitely generated part, if there are no circle factors.
    pub fn as_discrete(&self) -> Option<&AbelianGroupInvariants> {
        match self {
            CohomologyGroup::FinitelyGenerated(g) => Some(g),
            CohomologyGroup::Compact {
                circle_rank: 0,
                torsion,
            } => Some(torsion),
            CohomologyGroup::Compact { .. } => None,
        }
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyGroup::FinitelyGenerated(g) => write!(f, "{g}"),
            CohomologyGroup::Compact { circle_rank, torsion } => {
                let mut parts = Vec::new();
                match circle_rank {
                    0 => {}
                    1 => parts.push("S1".to_string()),
                    r => parts.push(format!("S1^{r}")),
                }
                if !torsion.is_trivial() {
                    parts.push(torsion.canonical_string());
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
        }
    }
}
