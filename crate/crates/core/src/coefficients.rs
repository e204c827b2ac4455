//! Real coefficient groups: finitely generated abelian groups with an
//! involution, plus the circle handled symbolically.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::AbelianGroupInvariants;
use crate::linalg::{preimage, subquotient, with_exact, IntMatrix, Matrix, Subquotient};

/// `Z/orders[0] ⊕ … ⊕ Z/orders[g-1]` (order `0` meaning `Z`) with an
/// involution given by an integer matrix whose column `j` is the image of
/// generator `j`.
///
/// Elements are coordinate vectors, reduced into `[0, m)` on finite factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealCoefficient {
    orders: Vec<u64>,
    involution: Vec<Vec<i64>>,
    circle: bool,
}

/// `A^σ` as a list of generating elements of `A` with its invariants.
#[derive(Debug, Clone)]
pub struct FixedSubgroup {
    /// Generators, in the order of `orders`.
    pub generators: Vec<Vec<i64>>,
    /// Order of each generator in `A`, `0` for infinite.
    pub orders: Vec<u64>,
    pub invariants: AbelianGroupInvariants,
    quotient: Option<Subquotient>,
}

impl FixedSubgroup {
    /// Coordinates of a fixed element (any integer lift) in terms of
    /// `generators`, or `None` if the element is not fixed.
    pub fn coordinates(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        match &self.quotient {
            None => Ok(Some(vec![])),
            Some(q) => q
                .class_of(v)
                .map_err(|_| Error::Unsupported("fixed subgroup coordinates overflow".into())),
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidCoefficient(msg.into()))
}

impl RealCoefficient {
    /// A coefficient group from generator orders and an involution matrix
    /// (rows indexed by target coordinate).
    pub fn new(orders: Vec<u64>, involution: Vec<Vec<i64>>) -> Result<Self> {
        let g = orders.len();
        if orders.contains(&1) {
            return bad("generator of order 1; drop it from the presentation");
        }
        if involution.len() != g || involution.iter().any(|r| r.len() != g) {
            return bad(format!("involution must be a {g}x{g} matrix"));
        }
        let c = RealCoefficient {
            orders,
            involution,
            circle: false,
        };
        // Well defined on relations: m_j * S e_j = 0.
        for j in 0..g {
            let col: Vec<i64> = (0..g).map(|i| c.involution[i][j]).collect();
            if c.orders[j] != 0 && !c.is_zero(&c.scale_raw(&col, c.orders[j] as i64)) {
                return bad(format!("involution does not respect the relation on generator {j}"));
            }
            let sj = c.normalize(&col);
            if c.involve(&sj) != c.basis_vector(j) {
                return bad(format!("involution does not square to the identity on generator {j}"));
            }
        }
        Ok(c)
    }

    /// `Z^rank ⊕ Z/m1 ⊕ … ⊕ Z/mk`, free generators first.
    pub fn from_presentation(rank: usize, torsion: &[u64], involution: Vec<Vec<i64>>) -> Result<Self> {
        let mut orders = vec![0u64; rank];
        orders.extend_from_slice(torsion);
        Self::new(orders, involution)
    }

    pub fn trivial_involution(orders: Vec<u64>) -> Result<Self> {
        let g = orders.len();
        let id = (0..g).map(|i| (0..g).map(|j| i64::from(i == j)).collect()).collect();
        Self::new(orders, id)
    }

    /// `Z/m` with `n ↦ sign·n`; `m = 0` gives `Z`.
    pub fn zm(m: u64, sign: i64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return bad("the involution sign must be +1 or -1");
        }
        if m == 1 {
            return Self::new(vec![], vec![]);
        }
        Self::new(vec![m], vec![vec![sign]])
    }

    pub fn z2() -> Self {
        Self::zm(2, 1).expect("valid")
    }

    /// `Z/8` with the trivial involution.
    pub fn z8() -> Self {
        Self::zm(8, 1).expect("valid")
    }

    pub fn z() -> Self {
        Self::zm(0, 1).expect("valid")
    }

    /// The integers with `n ↦ -n`.
    pub fn z_sign() -> Self {
        Self::zm(0, -1).expect("valid")
    }

    /// The circle with complex conjugation. Only operations documenting
    /// circle support accept it.
    pub fn circle() -> Self {
        RealCoefficient {
            orders: vec![],
            involution: vec![],
            circle: true,
        }
    }

    /// Parses a coefficient literal: `Z2`, `Z8`, `Z`, `Z(0,1)`, `Zm(m,+1)`,
    /// `Zm(m,-1)`, `S1`. `Zn` is short for `Zm(n,+1)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "Z2" => return Ok(Self::z2()),
            "Z8" => return Ok(Self::z8()),
            "Z" => return Ok(Self::z()),
            "Z(0,1)" => return Ok(Self::z_sign()),
            "S1" => return Ok(Self::circle()),
            _ => {}
        }
        if let Some(m) = t.strip_prefix('Z').and_then(|r| r.parse::<u64>().ok()) {
            if m < 2 {
                return bad(format!("modulus must be at least 2 in `{s}`"));
            }
            return Self::zm(m, 1);
        }
        let inner = t
            .strip_prefix("Zm(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidCoefficient(format!("unknown coefficient literal `{s}`")))?;
        let (m, sign) = inner
            .split_once(',')
            .ok_or_else(|| Error::InvalidCoefficient(format!("expected Zm(m,±1), got `{s}`")))?;
        let m: u64 = m
            .parse()
            .map_err(|_| Error::InvalidCoefficient(format!("bad modulus in `{s}`")))?;
        let sign: i64 = match sign {
            "+1" | "1" => 1,
            "-1" => -1,
            _ => return bad(format!("involution sign must be +1 or -1 in `{s}`")),
        };
        if m < 2 {
            return bad(format!("modulus must be at least 2 in `{s}`"));
        }
        Self::zm(m, sign)
    }

    pub fn is_circle(&self) -> bool {
        self.circle
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn involution_matrix(&self) -> &[Vec<i64>] {
        &self.involution
    }

    pub fn is_finite(&self) -> bool {
        !self.circle && self.orders.iter().all(|m| *m != 0)
    }

    pub fn has_trivial_involution(&self) -> bool {
        (0..self.rank()).all(|j| self.involve(&self.basis_vector(j)) == self.basis_vector(j))
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.orders.iter().product())
    }

    pub fn invariants(&self) -> AbelianGroupInvariants {
        AbelianGroupInvariants::from_cyclic_orders(0, self.orders.iter().copied())
    }

    /// Relation columns `m_j e_j` for the finite factors.
    pub fn relations(&self) -> IntMatrix {
        let g = self.rank();
        let cols: Vec<Vec<i64>> = (0..g)
            .filter(|&j| self.orders[j] != 0)
            .map(|j| {
                let mut c = vec![0; g];
                c[j] = self.orders[j] as i64;
                c
            })
            .collect();
        Matrix::from_columns(g, &cols)
    }

    pub fn involution_int_matrix(&self) -> IntMatrix {
        Matrix::from_rows(&self.involution)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn basis_vector(&self, j: usize) -> Vec<i64> {
        let mut v = self.zero();
        v[j] = 1;
        self.normalize(&v)
    }

    pub fn normalize(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .zip(&self.orders)
            .map(|(x, m)| if *m == 0 { *x } else { x.rem_euclid(*m as i64) })
            .collect()
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.normalize(v).iter().all(|x| *x == 0)
    }

    fn scale_raw(&self, v: &[i64], k: i64) -> Vec<i64> {
        v.iter().map(|x| x * k).collect()
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if self.circle {
            return Err(Error::Unsupported(
                "circle elements have no numeric representation".into(),
            ));
        }
        if v.len() != self.rank() {
            return Err(Error::Mismatch(format!(
                "element has {} coordinates, coefficient group has {}",
                v.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&s)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.normalize(&self.scale_raw(a, -1))
    }

    pub fn scale(&self, a: &[i64], k: i64) -> Vec<i64> {
        self.normalize(&self.scale_raw(a, k))
    }

    /// `σ(a)`.
    pub fn involve(&self, a: &[i64]) -> Vec<i64> {
        let v: Vec<i64> = self
            .involution
            .iter()
            .map(|row| row.iter().zip(a).map(|(s, x)| s * x).sum())
            .collect();
        self.normalize(&v)
    }

    /// Checked element arithmetic: validates that inputs belong to `self`.
    pub fn apply(&self, op: ElementOp, a: &[i64], b: Option<&[i64]>) -> Result<Vec<i64>> {
        self.check_len(a)?;
        match op {
            ElementOp::Add => {
                let b = b.ok_or_else(|| Error::Mismatch("addition needs two elements".into()))?;
                self.check_len(b)?;
                Ok(self.add(a, b))
            }
            ElementOp::Neg => Ok(self.neg(a)),
            ElementOp::Involve => Ok(self.involve(a)),
        }
    }

    /// All elements in lexicographic order of coordinates, if finite.
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_finite() {
            return Err(Error::Unsupported(
                "cannot enumerate an infinite coefficient group".into(),
            ));
        }
        let mut out = vec![vec![]];
        for m in &self.orders {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..*m as i64).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Mixed-radix index of a normalized element of a finite group.
    pub fn element_index(&self, a: &[i64]) -> usize {
        let mut idx = 0usize;
        for (x, m) in a.iter().zip(&self.orders) {
            idx = idx * (*m as usize) + *x as usize;
        }
        idx
    }

    pub fn element_from_index(&self, mut idx: usize) -> Vec<i64> {
        let mut out = vec![0; self.rank()];
        for j in (0..self.rank()).rev() {
            let m = self.orders[j] as usize;
            out[j] = (idx % m) as i64;
            idx /= m;
        }
        out
    }

    /// The fixed subgroup `A^σ`.
    pub fn fixed_subgroup(&self) -> Result<FixedSubgroup> {
        if self.circle {
            return Err(Error::Unsupported(
                "fixed subgroup of the circle is handled symbolically in cohomology".into(),
            ));
        }
        let g = self.rank();
        if g == 0 {
            return Ok(FixedSubgroup {
                generators: vec![],
                orders: vec![],
                invariants: AbelianGroupInvariants::trivial(),
                quotient: None,
            });
        }
        let mut s_minus_i = self.involution_int_matrix();
        for i in 0..g {
            let v = s_minus_i.get(i, i) - 1;
            s_minus_i.set(i, i, v);
        }
        let rel = self.relations();
        let sq = with_exact(
            || {
                let p = preimage(&s_minus_i, &rel)?;
                subquotient(&p, &rel)
            },
            || {
                let big_rel: Matrix<num_bigint::BigInt> = rel.convert()?;
                let p = preimage(&s_minus_i.convert()?, &big_rel)?;
                subquotient(&p, &big_rel)
            },
        )?;
        let orders = sq.factor_orders();
        let generators = (0..orders.len())
            .map(|i| sq.generator(i).map(|v| self.normalize(&v)))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Unsupported("fixed subgroup generators overflow".into()))?;
        let orders: Vec<u64> = orders.iter().map(|o| *o as u64).collect();
        Ok(FixedSubgroup {
            generators,
            invariants: AbelianGroupInvariants::from_cyclic_orders(0, orders.iter().copied()),
            orders,
            quotient: Some(sq),
        })
    }

    /// A short human-readable name; the literal when one applies.
    pub fn name(&self) -> String {
        if self.circle {
            return "S1".into();
        }
        if self.rank() == 1 {
            let (m, s) = (self.orders[0], self.involution[0][0]);
            let s = if m == 0 { s } else { s.rem_euclid(m as i64) };
            let plus = s == 1;
            let minus = if m == 0 { s == -1 } else { s == m as i64 - 1 };
            return match (m, plus, minus) {
                (0, true, _) => "Z".into(),
                (0, _, true) => "Z(0,1)".into(),
                (2, _, _) => "Z2".into(),
                (8, true, _) => "Z8".into(),
                (m, true, _) => format!("Zm({m},+1)"),
                (m, _, _) => format!("Zm({m},-1)"),
            };
        }
        format!("A(orders={:?}, involution={:?})", self.orders, self.involution)
    }
}

impl fmt::Display for RealCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOp {
    Add,
    Neg,
    Involve,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        for lit in ["Z2", "Z8", "Z", "Z(0,1)", "Zm(4,+1)", "Zm(4,-1)", "S1", "Zm(3,-1)"] {
            assert_eq!(RealCoefficient::parse(lit).unwrap().name(), lit);
        }
        assert!(RealCoefficient::parse("Q").is_err());
        assert!(RealCoefficient::parse("Zm(1,+1)").is_err());
        assert!(RealCoefficient::parse("Zm(4,2)").is_err());
    }

    #[test]
    fn element_arithmetic() {
        let z8 = RealCoefficient::z8();
        assert_eq!(z8.add(&[5], &[5]), vec![2]);
        assert_eq!(RealCoefficient::z_sign().involve(&[3]), vec![-3]);
        let a = RealCoefficient::new(vec![4, 0], vec![vec![-1, 0], vec![0, 1]]).unwrap();
        assert_eq!(a.involve(&[1, 7]), vec![3, 7]);
        assert!(a.apply(ElementOp::Add, &[1], Some(&[1, 2])).is_err());
    }

    #[test]
    fn fixed_subgroups() {
        let inv = |c: RealCoefficient| c.fixed_subgroup().unwrap().invariants.to_string();
        assert_eq!(inv(RealCoefficient::z_sign()), "0");
        assert_eq!(inv(RealCoefficient::z2()), "Z/2");
        assert_eq!(inv(RealCoefficient::zm(4, -1).unwrap()), "Z/2");
        assert_eq!(inv(RealCoefficient::z()), "Z");
        assert_eq!(inv(RealCoefficient::zm(8, -1).unwrap()), "Z/2");
        let f = RealCoefficient::zm(4, -1).unwrap().fixed_subgroup().unwrap();
        assert_eq!(f.generators, vec![vec![2]]);
        assert!(RealCoefficient::circle().fixed_subgroup().is_err());
    }

    #[test]
    fn rejects_bad_involutions() {
        assert!(RealCoefficient::new(vec![4], vec![vec![2]]).is_err());
        // Z/2 -> Z/4 component is not well defined on the relation 2e0.
        assert!(RealCoefficient::new(vec![2, 4], vec![vec![1, 0], vec![1, 1]]).is_err());
        assert!(RealCoefficient::new(vec![0, 0], vec![vec![1, 1], vec![0, 1]]).is_err());
        assert!(RealCoefficient::new(vec![0, 0], vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn involve_is_an_involutive_automorphism() {
        let samples = [
            RealCoefficient::zm(6, -1).unwrap(),
            RealCoefficient::new(vec![2, 4], vec![vec![1, 0], vec![2, 1]]).unwrap(),
            RealCoefficient::new(vec![4, 4], vec![vec![0, 1], vec![1, 0]]).unwrap(),
        ];
        for a in samples {
            let els = a.elements().unwrap();
            for x in &els {
                assert_eq!(&a.involve(&a.involve(x)), x);
                for y in &els {
                    assert_eq!(a.involve(&a.add(x, y)), a.add(&a.involve(x), &a.involve(y)));
                }
            }
            let fixed = els.iter().filter(|x| a.involve(x) == **x).count() as u64;
            let f = a.fixed_subgroup().unwrap();
            assert_eq!(f.invariants.order().unwrap(), fixed);
            assert_eq!(a.order().unwrap() % fixed, 0);
            for g in &f.generators {
                assert_eq!(&a.involve(g), g);
            }
        }
    }

    #[test]
    fn element_index_round_trip() {
        let a = RealCoefficient::trivial_involution(vec![2, 3, 4]).unwrap();
        for (i, e) in a.elements().unwrap().iter().enumerate() {
            assert_eq!(a.element_index(e), i);
            assert_eq!(&a.element_from_index(i), e);
        }
    }
}
