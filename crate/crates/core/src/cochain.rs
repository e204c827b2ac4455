//! Real cochain groups, the differential and the cup product.

use serde::{Deserialize, Serialize};

use crate::coefficients::{FixedSubgroup, RealCoefficient};
use crate::error::{Error, Result};
use crate::groupoid::{Nerve, NerveLevel, RealGroupoid};
use crate::linalg::{IntMatrix, Matrix};

/// Position of a simplex relative to its orbit under the nerve involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexRole {
    /// The chosen representative of a free orbit.
    Representative,
    /// The conjugate of the representative of a free orbit.
    Conjugate,
    /// A simplex fixed by the involution.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CochainOrbit {
    /// Lowest simplex index in the orbit.
    pub rep: usize,
    /// The other simplex of a free orbit.
    pub partner: Option<usize>,
}

/// `CR^n(G, A)` presented as a direct sum: one copy of `A` per free orbit
/// and one copy of `A^σ` per fixed simplex, in increasing order of
/// representatives.
#[derive(Debug, Clone)]
pub struct RealCochainGroup {
    degree: usize,
    coefficient: RealCoefficient,
    fixed: FixedSubgroup,
    simplex_count: usize,
    orbits: Vec<CochainOrbit>,
    simplex_orbit: Vec<(usize, SimplexRole)>,
    offsets: Vec<usize>,
    orders: Vec<u64>,
}

/// A full cochain: one normalized coefficient element per simplex.
pub type CochainValues = Vec<Vec<i64>>;

impl RealCochainGroup {
    pub fn new(level: &NerveLevel, coefficient: &RealCoefficient) -> Result<Self> {
        if coefficient.is_circle() {
            return Err(Error::Unsupported(
                "circle coefficients have no cochain presentation; use the circle cohomology route".into(),
            ));
        }
        let fixed = coefficient.fixed_subgroup()?;
        let (orbits, simplex_orbit) = orbit_decomposition(level);
        let mut offsets = Vec::with_capacity(orbits.len() + 1);
        let mut orders = Vec::new();
        for orbit in &orbits {
            offsets.push(orders.len());
            match orbit.partner {
                None => orders.extend_from_slice(&fixed.orders),
                Some(_) => orders.extend_from_slice(coefficient.orders()),
            }
        }
        offsets.push(orders.len());
        Ok(RealCochainGroup {
            degree: level.degree,
            coefficient: coefficient.clone(),
            fixed,
            simplex_count: level.len(),
            orbits,
            simplex_orbit,
            offsets,
            orders,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self) -> &RealCoefficient {
        &self.coefficient
    }

    pub fn fixed_subgroup(&self) -> &FixedSubgroup {
        &self.fixed
    }

    pub fn simplex_count(&self) -> usize {
        self.simplex_count
    }

    pub fn orbits(&self) -> &[CochainOrbit] {
        &self.orbits
    }

    pub fn orbit_of(&self, simplex: usize) -> (usize, SimplexRole) {
        self.simplex_orbit[simplex]
    }

    /// Number of presentation generators.
    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    /// Order of each generator, `0` for infinite.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Coordinate range belonging to an orbit.
    pub fn orbit_range(&self, orbit: usize) -> std::ops::Range<usize> {
        self.offsets[orbit]..self.offsets[orbit + 1]
    }

    pub fn relations(&self) -> IntMatrix {
        relations_for(&self.orders)
    }

    pub fn normalize(&self, coords: &[i64]) -> Vec<i64> {
        coords
            .iter()
            .zip(&self.orders)
            .map(|(x, m)| if *m == 0 { *x } else { x.rem_euclid(*m as i64) })
            .collect()
    }

    /// Integer lift of the value at `simplex` of the cochain with the given
    /// coordinates (not reduced modulo the coefficient relations).
    fn lift_at(&self, coords: &[i64], simplex: usize) -> Vec<i64> {
        let (orbit, role) = self.simplex_orbit[simplex];
        let c = &coords[self.orbit_range(orbit)];
        let g = self.coefficient.rank();
        match role {
            SimplexRole::Representative => c.to_vec(),
            SimplexRole::Conjugate => {
                let s = self.coefficient.involution_matrix();
                (0..g).map(|i| (0..g).map(|j| s[i][j] * c[j]).sum()).collect()
            }
            SimplexRole::Fixed => {
                let mut v = vec![0i64; g];
                for (k, gen) in c.iter().zip(&self.fixed.generators) {
                    for (vi, gi) in v.iter_mut().zip(gen) {
                        *vi += k * gi;
                    }
                }
                v
            }
        }
    }

    /// The full cochain with the given coordinates.
    pub fn values(&self, coords: &[i64]) -> CochainValues {
        (0..self.simplex_count)
            .map(|x| self.coefficient.normalize(&self.lift_at(coords, x)))
            .collect()
    }

    /// Coordinates of a full cochain, checking the Real condition
    /// `c(x̄) = σ(c(x))` at every simplex.
    pub fn coordinates(&self, values: &[Vec<i64>]) -> Result<Vec<i64>> {
        if values.len() != self.simplex_count {
            return Err(Error::InvalidCochain(format!(
                "expected {} values in degree {}, got {}",
                self.simplex_count,
                self.degree,
                values.len()
            )));
        }
        for v in values {
            if v.len() != self.coefficient.rank() {
                return Err(Error::InvalidCochain(format!(
                    "value {v:?} has the wrong number of coordinates for {}",
                    self.coefficient
                )));
            }
        }
        let mut out = vec![0i64; self.dim()];
        for (id, orbit) in self.orbits.iter().enumerate() {
            let range = self.orbit_range(id);
            let a = &values[orbit.rep];
            match orbit.partner {
                Some(p) => {
                    if self.coefficient.normalize(&values[p]) != self.coefficient.involve(a) {
                        return Err(Error::InvalidCochain(format!(
                            "not Real: value at simplex {p} must be the involution of the value at simplex {}",
                            orbit.rep
                        )));
                    }
                    out[range].copy_from_slice(&self.coefficient.normalize(a));
                }
                None => {
                    let c = self.fixed.coordinates(a)?.ok_or_else(|| {
                        Error::InvalidCochain(format!(
                            "not Real: value at fixed simplex {} is not fixed by the involution",
                            orbit.rep
                        ))
                    })?;
                    out[range].copy_from_slice(&c);
                }
            }
        }
        Ok(self.normalize(&out))
    }

    /// Reads a lift known to satisfy the Real condition at `simplex`.
    fn read_value(&self, simplex: usize, lift: &[i64]) -> Result<Vec<i64>> {
        match self.simplex_orbit[simplex].1 {
            SimplexRole::Fixed => self.fixed.coordinates(lift)?.ok_or_else(|| {
                Error::Mismatch(format!(
                    "value at fixed simplex {simplex} is not fixed by the involution"
                ))
            }),
            _ => Ok(lift.to_vec()),
        }
    }
}

/// Orbits of the nerve involution on one level, each represented by its
/// lowest simplex index, in increasing order of representatives.
pub fn orbit_decomposition(level: &NerveLevel) -> (Vec<CochainOrbit>, Vec<(usize, SimplexRole)>) {
    let mut orbits = Vec::new();
    let mut simplex_orbit = vec![(usize::MAX, SimplexRole::Fixed); level.len()];
    for x in 0..level.len() {
        let bar = level.involution[x];
        if bar < x {
            continue;
        }
        let id = orbits.len();
        if bar == x {
            orbits.push(CochainOrbit { rep: x, partner: None });
            simplex_orbit[x] = (id, SimplexRole::Fixed);
        } else {
            orbits.push(CochainOrbit {
                rep: x,
                partner: Some(bar),
            });
            simplex_orbit[x] = (id, SimplexRole::Representative);
            simplex_orbit[bar] = (id, SimplexRole::Conjugate);
        }
    }
    (orbits, simplex_orbit)
}

pub(crate) fn relations_for(orders: &[u64]) -> IntMatrix {
    let n = orders.len();
    let cols: Vec<Vec<i64>> = (0..n)
        .filter(|&j| orders[j] != 0)
        .map(|j| {
            let mut c = vec![0; n];
            c[j] = orders[j] as i64;
            c
        })
        .collect();
    Matrix::from_columns(n, &cols)
}

/// A homomorphism between presented groups, as a matrix from source
/// generators to target coordinates.
#[derive(Debug, Clone)]
pub struct CochainMap {
    pub source_orders: Vec<u64>,
    pub target_orders: Vec<u64>,
    pub matrix: IntMatrix,
}

impl CochainMap {
    pub fn apply(&self, coords: &[i64]) -> Vec<i64> {
        let v = self.matrix.mul_vec(coords).expect("cochain map entries are small");
        normalize_with(&self.target_orders, &v)
    }

    /// Whether every source relation maps into the target relations.
    pub fn is_well_defined(&self) -> bool {
        self.source_orders.iter().enumerate().all(|(j, m)| {
            *m == 0 || {
                let col: Vec<i64> = self.matrix.column(j).iter().map(|x| x * *m as i64).collect();
                normalize_with(&self.target_orders, &col).iter().all(|x| *x == 0)
            }
        })
    }

    /// `self ∘ other` reduced modulo the target relations.
    pub fn compose(&self, other: &CochainMap) -> Result<CochainMap> {
        let m = self
            .matrix
            .mul(&other.matrix)
            .map_err(|_| Error::Unsupported("composite map overflows".into()))?;
        let cols: Vec<Vec<i64>> = m
            .columns()
            .iter()
            .map(|c| normalize_with(&self.target_orders, c))
            .collect();
        Ok(CochainMap {
            source_orders: other.source_orders.clone(),
            target_orders: self.target_orders.clone(),
            matrix: Matrix::from_columns(self.target_orders.len(), &cols),
        })
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| {
            normalize_with(&self.target_orders, &self.matrix.column(j))
                .iter()
                .all(|x| *x == 0)
        })
    }
}

pub(crate) fn normalize_with(orders: &[u64], v: &[i64]) -> Vec<i64> {
    v.iter()
        .zip(orders)
        .map(|(x, m)| if *m == 0 { *x } else { x.rem_euclid(*m as i64) })
        .collect()
}

/// `d^n c(y) = Σ_k (-1)^k c(face_k y)` on a full cochain of degree `n`.
pub fn apply_differential(
    nerve: &Nerve,
    n: usize,
    coefficient: &RealCoefficient,
    values: &[Vec<i64>],
) -> CochainValues {
    let upper = nerve.level(n + 1).len();
    (0..upper)
        .map(|y| {
            let mut acc = coefficient.zero();
            for k in 0..=n + 1 {
                let x = nerve.face(n, k, y);
                let term = if k % 2 == 0 {
                    values[x].clone()
                } else {
                    coefficient.neg(&values[x])
                };
                acc = coefficient.add(&acc, &term);
            }
            acc
        })
        .collect()
}

/// Real cochain groups of degrees `0..=top` with the differentials between
/// them.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    nerve: Nerve,
    coefficient: RealCoefficient,
    groups: Vec<RealCochainGroup>,
    differentials: Vec<CochainMap>,
}

impl CochainComplex {
    pub fn new(groupoid: &RealGroupoid, coefficient: &RealCoefficient, top: usize) -> Result<Self> {
        let nerve = Nerve::new(groupoid, top);
        Self::from_nerve(nerve, coefficient)
    }

    pub fn from_nerve(nerve: Nerve, coefficient: &RealCoefficient) -> Result<Self> {
        let top = nerve.top();
        let groups = (0..=top)
            .map(|n| RealCochainGroup::new(nerve.level(n), coefficient))
            .collect::<Result<Vec<_>>>()?;
        let differentials = (0..top)
            .map(|n| differential_matrix(&nerve, &groups[n], &groups[n + 1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(CochainComplex {
            nerve,
            coefficient: coefficient.clone(),
            groups,
            differentials,
        })
    }

    pub fn top(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    pub fn coefficient(&self) -> &RealCoefficient {
        &self.coefficient
    }

    pub fn group(&self, n: usize) -> &RealCochainGroup {
        &self.groups[n]
    }

    /// `d^n: CR^n → CR^{n+1}`.
    pub fn differential(&self, n: usize) -> &CochainMap {
        &self.differentials[n]
    }
}

/// Matrix of `d^n` in the orbit bases. Column `j` is `d` of the `j`-th
/// generator, read at each orbit representative of degree `n + 1`.
fn differential_matrix(nerve: &Nerve, source: &RealCochainGroup, target: &RealCochainGroup) -> Result<CochainMap> {
    let n = source.degree;
    let a = &source.coefficient;
    let g = a.rank();
    let mut matrix = Matrix::zeros(target.dim(), source.dim());
    for (t_id, orbit) in target.orbits.iter().enumerate() {
        let y = orbit.rep;
        // Lift of d(e_j)(y) for every source generator j touched by y.
        let mut touched: std::collections::BTreeMap<usize, Vec<i64>> = Default::default();
        for k in 0..=n + 1 {
            let x = nerve.face(n, k, y);
            let (s_id, _) = source.simplex_orbit[x];
            for j in source.orbit_range(s_id) {
                let mut e = vec![0i64; source.dim()];
                e[j] = 1;
                let v = source.lift_at(&e, x);
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let acc = touched.entry(j).or_insert_with(|| vec![0; g]);
                for (ai, vi) in acc.iter_mut().zip(&v) {
                    *ai += sign * vi;
                }
            }
        }
        let rows = target.orbit_range(t_id);
        for (j, lift) in touched {
            let coords = target.read_value(y, &lift)?;
            for (r, c) in rows.clone().zip(coords) {
                matrix.set(r, j, c);
            }
        }
    }
    let mut map = CochainMap {
        source_orders: source.orders.clone(),
        target_orders: target.orders.clone(),
        matrix,
    };
    let cols: Vec<Vec<i64>> = map
        .matrix
        .columns()
        .iter()
        .map(|c| normalize_with(&map.target_orders, c))
        .collect();
    map.matrix = Matrix::from_columns(target.dim(), &cols);
    Ok(map)
}

/// `(δ₁ ∪ δ₂)(g₁, g₂) = δ₁(g₁)·δ₂(g₂)` for Real 1-cochains with `Z/2`
/// coefficients (trivial involution), given as values on the 1-simplices.
pub fn cup_product(level2: &NerveLevel, d1: &[Vec<i64>], d2: &[Vec<i64>]) -> Result<CochainValues> {
    for d in [d1, d2] {
        if d.iter().any(|v| v.len() != 1 || !(0..2).contains(&v[0])) {
            return Err(Error::InvalidCochain("cup product needs Z2-valued 1-cochains".into()));
        }
    }
    if level2.degree != 2 {
        return Err(Error::Mismatch("cup product lands in degree 2".into()));
    }
    Ok(level2
        .simplices
        .iter()
        .map(|s| {
            let (a, b) = (s[0], s[1]);
            vec![(d1.get(a).map_or(0, |v| v[0]) * d2.get(b).map_or(0, |v| v[0])) % 2]
        })
        .collect())
}

/// Serialized cochain: `(simplex index, element coordinates)` pairs; unlisted
/// simplices are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SparseCochain(pub Vec<(usize, Vec<i64>)>);

impl SparseCochain {
    pub fn to_values(&self, group: &RealCochainGroup) -> Result<CochainValues> {
        let a = group.coefficient();
        let mut out = vec![a.zero(); group.simplex_count()];
        for (idx, v) in &self.0 {
            let slot = out
                .get_mut(*idx)
                .ok_or_else(|| Error::InvalidCochain(format!("simplex index {idx} out of range")))?;
            if v.len() != a.rank() {
                return Err(Error::InvalidCochain(format!("value {v:?} does not belong to {a}")));
            }
            *slot = a.normalize(v);
        }
        group.coordinates(&out)?;
        Ok(out)
    }

    pub fn from_values(values: &[Vec<i64>]) -> Self {
        SparseCochain(
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.iter().any(|x| *x != 0))
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, RealGroup};

    fn group(n: usize, inverse: bool) -> RealGroupoid {
        let g = FiniteGroup::cyclic(n).unwrap();
        let rg = if inverse {
            RealGroup::inversion(g).unwrap()
        } else {
            RealGroup::trivial(g)
        };
        RealGroupoid::from_group(&rg).unwrap()
    }

    #[test]
    fn orbit_presentations() {
        let p = RealGroupoid::point();
        for n in 0..3 {
            let c = RealCochainGroup::new(&p.nerve(n), &RealCoefficient::z2()).unwrap();
            assert_eq!(c.orders(), &[2]);
        }
        let d = RealGroupoid::swap_double(&p).unwrap();
        let c = RealCochainGroup::new(&d.nerve(0), &RealCoefficient::z8()).unwrap();
        assert_eq!(c.orders(), &[8]);
        let z4 = group(4, true);
        let c = RealCochainGroup::new(&z4.nerve(1), &RealCoefficient::z2()).unwrap();
        assert_eq!(c.orders(), &[2, 2, 2]);
        assert_eq!(c.orbits().len(), 3);
        assert!(RealCochainGroup::new(&z4.nerve(1), &RealCoefficient::circle()).is_err());
    }

    #[test]
    fn values_round_trip_and_reality_check() {
        let g = group(4, true);
        let a = RealCoefficient::zm(4, -1).unwrap();
        let c = RealCochainGroup::new(&g.nerve(1), &a).unwrap();
        assert_eq!(c.orders(), &[2, 4, 2]);
        let coords = vec![1, 3, 1];
        let vals = c.values(&coords);
        assert_eq!(vals, vec![vec![2], vec![3], vec![2], vec![1]]);
        assert_eq!(c.coordinates(&vals).unwrap(), coords);
        let mut bad = vals.clone();
        bad[3] = vec![3];
        assert!(c.coordinates(&bad).is_err());
        bad = vals;
        bad[0] = vec![1];
        assert!(c.coordinates(&bad).is_err());
    }

    #[test]
    fn d0_is_source_minus_range() {
        let g = RealGroupoid::pair(vec![0, 1]).unwrap();
        let cx = CochainComplex::new(&g, &RealCoefficient::z(), 1).unwrap();
        let f = cx.group(0).values(&[5, 2]);
        let df = apply_differential(cx.nerve(), 0, &RealCoefficient::z(), &f);
        for (i, s) in cx.nerve().level(1).simplices.iter().enumerate() {
            let a = g.arrow(s[0]);
            assert_eq!(df[i][0], f[a.src][0] - f[a.tgt][0]);
        }
    }

    #[test]
    fn homomorphism_is_a_cocycle() {
        let g = group(2, false);
        let cx = CochainComplex::new(&g, &RealCoefficient::z2(), 2).unwrap();
        let f = vec![vec![0], vec![1]];
        let coords = cx.group(1).coordinates(&f).unwrap();
        assert!(cx.differential(1).apply(&coords).iter().all(|x| *x == 0));
    }

    #[test]
    fn d_squared_vanishes_and_matches_full_differential() {
        let samples = [
            (group(4, true), RealCoefficient::zm(4, -1).unwrap()),
            (group(3, true), RealCoefficient::z_sign()),
            (
                RealGroupoid::pair(vec![1, 0, 2]).unwrap(),
                RealCoefficient::zm(6, -1).unwrap(),
            ),
            (
                RealGroupoid::swap_double(&group(2, false)).unwrap(),
                RealCoefficient::z2(),
            ),
        ];
        for (g, a) in samples {
            let cx = CochainComplex::new(&g, &a, 3).unwrap();
            for n in 0..2 {
                assert!(cx.differential(n + 1).compose(cx.differential(n)).unwrap().is_zero());
                assert!(cx.differential(n).is_well_defined());
            }
            for n in 0..3 {
                let src = cx.group(n);
                for j in 0..src.dim() {
                    let mut e = vec![0; src.dim()];
                    e[j] = 1;
                    let full = apply_differential(cx.nerve(), n, &a, &src.values(&e));
                    let coords = cx.group(n + 1).coordinates(&full).unwrap();
                    assert_eq!(coords, cx.differential(n).apply(&e));
                }
            }
        }
    }

    #[test]
    fn cup_of_identity_character() {
        let g = group(2, false);
        let l2 = g.nerve(2);
        let d = vec![vec![0], vec![1]];
        let c = cup_product(&l2, &d, &d).unwrap();
        for (s, v) in l2.simplices.iter().zip(&c) {
            assert_eq!(v[0], i64::from(s == &vec![1, 1]));
        }
        let z = vec![vec![0], vec![0]];
        assert!(cup_product(&l2, &d, &z).unwrap().iter().all(|v| v[0] == 0));
    }

    #[test]
    fn sparse_cochains_validate() {
        let g = group(4, true);
        let grp = RealCochainGroup::new(&g.nerve(1), &RealCoefficient::zm(4, -1).unwrap()).unwrap();
        let ok = SparseCochain(vec![(1, vec![1]), (3, vec![3])]);
        assert!(ok.to_values(&grp).is_ok());
        let bad = SparseCochain(vec![(1, vec![1])]);
        assert!(bad.to_values(&grp).is_err());
        let oob = SparseCochain(vec![(9, vec![1])]);
        assert!(oob.to_values(&grp).is_err());
    }
}
