//! Finite groups given by multiplication tables, with order-≤2 automorphisms.

use crate::error::{Error, Result};

/// A finite group on elements `0..order` with a full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroupoid("group table is empty".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroupoid(format!(
                    "group table row {a} has length {}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| **v >= n) {
                return Err(Error::InvalidGroupoid(format!("group table entry {v} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroupoid("group table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroupoid(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroupoid(format!(
                            "group table is not associative on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroupoid("cyclic group of order 0".into()));
        }
        Self::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// Dihedral group of order `2n`: element `r^a s^b` has index `a + n*b`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroupoid("dihedral group with n = 0".into()));
        }
        let idx = |a: usize, b: usize| a % n + n * b;
        let table = (0..2 * n)
            .map(|x| {
                let (a, b) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (c, d) = (y % n, y / n);
                        // r^a s^b r^c s^d = r^(a + (-1)^b c) s^(b+d)
                        let rot = if b == 0 { a + c } else { a + n - c };
                        idx(rot, (b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table)
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Checks that `map` is an automorphism with `map ∘ map = id`.
    pub fn check_involution(&self, map: &[usize]) -> Result<()> {
        let n = self.order();
        if map.len() != n || map.iter().any(|v| *v >= n) {
            return Err(Error::InvalidGroupoid(
                "group involution has wrong length or range".into(),
            ));
        }
        for a in 0..n {
            if map[map[a]] != a {
                return Err(Error::InvalidGroupoid(format!(
                    "group involution is not involutive at {a}"
                )));
            }
            for b in 0..n {
                if map[self.mul(a, b)] != self.mul(map[a], map[b]) {
                    return Err(Error::InvalidGroupoid(format!(
                        "group involution is not a homomorphism on ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A finite group with an involutive automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealGroup {
    pub group: FiniteGroup,
    pub involution: Vec<usize>,
}

impl RealGroup {
    pub fn new(group: FiniteGroup, involution: Vec<usize>) -> Result<Self> {
        group.check_involution(&involution)?;
        Ok(RealGroup { group, involution })
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let involution = (0..group.order()).collect();
        RealGroup { group, involution }
    }

    /// `g ↦ g⁻¹`, an automorphism only for abelian groups.
    pub fn inversion(group: FiniteGroup) -> Result<Self> {
        let involution = (0..group.order()).map(|g| group.inv(g)).collect();
        Self::new(group, involution)
    }

    /// Conjugation `g ↦ k g k⁻¹` by an element `k` with `k²` central.
    pub fn conjugation(group: FiniteGroup, k: usize) -> Result<Self> {
        if k >= group.order() {
            return Err(Error::InvalidGroupoid(format!("conjugating element {k} out of range")));
        }
        let ki = group.inv(k);
        let involution = (0..group.order()).map(|g| group.mul(group.mul(k, g), ki)).collect();
        Self::new(group, involution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_has_right_shape() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        let s = 4; // r^0 s
        assert_eq!(d4.mul(s, s), d4.identity());
    }

    #[test]
    fn negation_on_z4() {
        let g = RealGroup::inversion(FiniteGroup::cyclic(4).unwrap()).unwrap();
        assert_eq!(g.involution, vec![0, 3, 2, 1]);
    }

    #[test]
    fn inversion_rejected_on_nonabelian() {
        assert!(RealGroup::inversion(FiniteGroup::dihedral(3).unwrap()).is_err());
    }

    #[test]
    fn product_order() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let k = z2.product(&z2).unwrap();
        assert_eq!(k.order(), 4);
        assert!((0..4).all(|a| k.mul(a, a) == k.identity()));
    }
}
