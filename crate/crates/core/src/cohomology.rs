//! `HR^n(G, A)` by exact integer linear algebra.

use num_bigint::BigInt;

use crate::cochain::{
    orbit_decomposition, relations_for, CochainComplex, CochainOrbit, CochainValues, RealCochainGroup, SimplexRole,
};
use crate::coefficients::RealCoefficient;
use crate::error::{Error, Result};
use crate::groupoid::{Nerve, RealGroupoid};
use crate::invariants::{AbelianGroupInvariants, CohomologyGroup};
use crate::linalg::{preimage, subquotient, with_exact, IntMatrix, Lattice, Matrix, Overflow, Subquotient};

/// Degrees above this bound are refused unless a larger bound is passed
/// explicitly; nerve levels grow exponentially.
pub const DEFAULT_MAX_DEGREE: usize = 4;

fn check_degree(n: usize, max_degree: usize) -> Result<()> {
    if n > max_degree {
        return Err(Error::Unsupported(format!(
            "degree {n} exceeds the configured bound {max_degree}"
        )));
    }
    Ok(())
}

/// `ker(out) / (im(incoming) + relations)` inside `Z^d / relations`, where
/// `out` lands in a group with relations `out_relations`.
pub fn presented_homology(
    out: &IntMatrix,
    out_relations: &IntMatrix,
    incoming: &IntMatrix,
    relations: &IntMatrix,
) -> Result<Subquotient> {
    let boundaries = incoming.hcat(relations);
    with_exact(
        || {
            let k = preimage(out, out_relations)?;
            subquotient(&k, &boundaries)
        },
        || {
            let big = |m: &IntMatrix| -> std::result::Result<Matrix<BigInt>, Overflow> { m.convert() };
            let k = preimage(&big(out)?, &big(out_relations)?)?;
            subquotient(&k, &big(&boundaries)?)
        },
    )
}

fn invariants_of(q: &Subquotient) -> AbelianGroupInvariants {
    let orders = q.factor_orders();
    AbelianGroupInvariants::from_cyclic_orders(0, orders.iter().map(|o| *o as u64))
}

/// `HR^n(G, A)` for finitely generated `A`, with the data to translate
/// between cocycles and class coordinates.
#[derive(Debug, Clone)]
pub struct HrPresentation {
    degree: usize,
    complex: CochainComplex,
    quotient: Subquotient,
    invariants: AbelianGroupInvariants,
}

impl HrPresentation {
    pub fn new(groupoid: &RealGroupoid, n: usize, coefficient: &RealCoefficient, max_degree: usize) -> Result<Self> {
        check_degree(n, max_degree)?;
        let complex = CochainComplex::new(groupoid, coefficient, n + 1)?;
        Self::from_complex(complex, n)
    }

    /// Uses an existing complex, which must reach degree `n + 1`.
    pub fn from_complex(complex: CochainComplex, n: usize) -> Result<Self> {
        if complex.top() < n + 1 {
            return Err(Error::Mismatch(format!("complex stops below degree {}", n + 1)));
        }
        let here = complex.group(n);
        let out = &complex.differential(n).matrix;
        let out_rel = complex.group(n + 1).relations();
        let incoming = if n == 0 {
            Matrix::zeros(here.dim(), 0)
        } else {
            complex.differential(n - 1).matrix.clone()
        };
        let quotient = presented_homology(out, &out_rel, &incoming, &here.relations())?;
        let invariants = invariants_of(&quotient);
        Ok(HrPresentation {
            degree: n,
            complex,
            quotient,
            invariants,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn invariants(&self) -> &AbelianGroupInvariants {
        &self.invariants
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn cochain_group(&self) -> &RealCochainGroup {
        self.complex.group(self.degree)
    }

    /// Orders of the cyclic factors in class coordinates (`0` = infinite).
    pub fn factor_orders(&self) -> Vec<i64> {
        self.quotient.factor_orders()
    }

    pub fn is_cocycle_coords(&self, coords: &[i64]) -> bool {
        self.complex
            .differential(self.degree)
            .apply(coords)
            .iter()
            .all(|x| *x == 0)
    }

    /// Class coordinates of a cocycle in orbit coordinates.
    pub fn class_of_coords(&self, coords: &[i64]) -> Result<Vec<i64>> {
        if !self.is_cocycle_coords(coords) {
            return Err(Error::InvalidCochain(format!(
                "not a cocycle in degree {}",
                self.degree
            )));
        }
        self.quotient
            .class_of(coords)
            .map_err(|_| Error::Unsupported("class coordinates overflow".into()))?
            .ok_or_else(|| Error::Mismatch("cocycle outside the computed cycle lattice".into()))
    }

    /// Class coordinates of a full Real cocycle.
    pub fn class_of(&self, values: &[Vec<i64>]) -> Result<Vec<i64>> {
        let coords = self.cochain_group().coordinates(values)?;
        self.class_of_coords(&coords)
    }

    /// Orbit coordinates of a representative cocycle.
    pub fn representative_coords(&self, class: &[i64]) -> Result<Vec<i64>> {
        if class.len() != self.factor_orders().len() {
            return Err(Error::Mismatch(format!(
                "class has {} coordinates, group has {} factors",
                class.len(),
                self.factor_orders().len()
            )));
        }
        let v = self
            .quotient
            .representative(class)
            .map_err(|_| Error::Unsupported("representative overflows".into()))?;
        Ok(self.cochain_group().normalize(&v))
    }

    pub fn representative(&self, class: &[i64]) -> Result<CochainValues> {
        Ok(self.cochain_group().values(&self.representative_coords(class)?))
    }

    /// Normalizes class coordinates into `[0, order)` on finite factors.
    pub fn normalize_class(&self, class: &[i64]) -> Vec<i64> {
        class
            .iter()
            .zip(self.factor_orders())
            .map(|(x, o)| if o == 0 { *x } else { x.rem_euclid(o) })
            .collect()
    }
}

/// `HR^n(G, A)`; circle coefficients go through the dual chain complex.
pub fn cohomology(groupoid: &RealGroupoid, n: usize, coefficient: &RealCoefficient) -> Result<CohomologyGroup> {
    cohomology_bounded(groupoid, n, coefficient, DEFAULT_MAX_DEGREE)
}

pub fn cohomology_bounded(
    groupoid: &RealGroupoid,
    n: usize,
    coefficient: &RealCoefficient,
    max_degree: usize,
) -> Result<CohomologyGroup> {
    if coefficient.is_circle() {
        check_degree(n, max_degree)?;
        return circle_cohomology(groupoid, n);
    }
    let p = HrPresentation::new(groupoid, n, coefficient, max_degree)?;
    Ok(CohomologyGroup::FinitelyGenerated(p.invariants))
}

/// The chain complex `Q_n = Z[G_n] / (x + x̄)` whose `R/Z`-dual is the complex
/// of Real circle-valued cochains, together with `H_n(Q)`.
///
/// `Q_n` has one generator per orbit: of infinite order for a free orbit
/// (with `[x̄] = -[x]`) and of order 2 for a fixed simplex.
#[derive(Debug, Clone)]
pub struct CircleHomology {
    degree: usize,
    nerve: Nerve,
    orbits: Vec<Vec<CochainOrbit>>,
    roles: Vec<Vec<(usize, SimplexRole)>>,
    quotient: Subquotient,
    invariants: AbelianGroupInvariants,
}

fn q_orders(orbits: &[CochainOrbit]) -> Vec<u64> {
    orbits.iter().map(|o| if o.partner.is_some() { 0 } else { 2 }).collect()
}

/// `∂_n: Q_n → Q_{n-1}` in orbit coordinates.
fn q_boundary(nerve: &Nerve, n: usize, orbits: &[Vec<CochainOrbit>], roles: &[Vec<(usize, SimplexRole)>]) -> IntMatrix {
    let target = &orbits[n - 1];
    let mut m = Matrix::zeros(target.len(), orbits[n].len());
    for (j, orbit) in orbits[n].iter().enumerate() {
        for k in 0..=n {
            let x = nerve.face(n - 1, k, orbit.rep);
            let (i, role) = roles[n - 1][x];
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let sign = if role == SimplexRole::Conjugate { -sign } else { sign };
            m.set(i, j, m.get(i, j) + sign);
        }
    }
    let orders = q_orders(target);
    let cols: Vec<Vec<i64>> = m
        .columns()
        .iter()
        .map(|c| crate::cochain::normalize_with(&orders, c))
        .collect();
    Matrix::from_columns(target.len(), &cols)
}

impl CircleHomology {
    pub fn new(groupoid: &RealGroupoid, n: usize) -> Result<Self> {
        let nerve = Nerve::new(groupoid, n + 1);
        let (orbits, roles): (Vec<_>, Vec<_>) = (0..=n + 1).map(|d| orbit_decomposition(nerve.level(d))).unzip();
        let here = q_orders(&orbits[n]);
        let (out, out_rel) = if n == 0 {
            (Matrix::zeros(0, here.len()), Matrix::zeros(0, 0))
        } else {
            (
                q_boundary(&nerve, n, &orbits, &roles),
                relations_for(&q_orders(&orbits[n - 1])),
            )
        };
        let incoming = q_boundary(&nerve, n + 1, &orbits, &roles);
        let quotient = presented_homology(&out, &out_rel, &incoming, &relations_for(&here))?;
        let invariants = invariants_of(&quotient);
        Ok(CircleHomology {
            degree: n,
            nerve,
            orbits,
            roles,
            quotient,
            invariants,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nerve(&self) -> &Nerve {
        &self.nerve
    }

    /// `H_n(Q)`.
    pub fn homology(&self) -> &AbelianGroupInvariants {
        &self.invariants
    }

    /// `HR^n(G, S1) = Hom(H_n(Q), R/Z)`.
    pub fn cohomology(&self) -> CohomologyGroup {
        CohomologyGroup::Compact {
            circle_rank: self.invariants.free_rank,
            torsion: AbelianGroupInvariants::from_cyclic_orders(0, self.invariants.torsion.iter().copied()),
        }
    }

    /// Orders of the cyclic factors of `H_n(Q)` (`0` = infinite), in the
    /// order used by [`CircleHomology::cycle_generator`].
    pub fn factor_orders(&self) -> Vec<i64> {
        self.quotient.factor_orders()
    }

    /// Orbits of degree `n` (one `Q_n` coordinate each).
    pub fn orbits(&self) -> &[CochainOrbit] {
        &self.orbits[self.degree]
    }

    pub fn role(&self, degree: usize, simplex: usize) -> (usize, SimplexRole) {
        self.roles[degree][simplex]
    }

    /// A cycle in `Q_n` orbit coordinates representing generator `i`.
    pub fn cycle_generator(&self, i: usize) -> Result<Vec<i64>> {
        self.quotient
            .generator(i)
            .map_err(|_| Error::Unsupported("cycle generator overflows".into()))
    }

    /// `H_n(Q)` class of a cycle in orbit coordinates.
    pub fn class_of(&self, cycle: &[i64]) -> Result<Option<Vec<i64>>> {
        self.quotient
            .class_of(cycle)
            .map_err(|_| Error::Unsupported("class coordinates overflow".into()))
    }

    /// The cycle lattice and the change of basis to cyclic coordinates.
    pub fn cycles(&self) -> &Lattice<i64> {
        &self.quotient.cycles
    }

    pub fn change_of_basis(&self) -> &IntMatrix {
        &self.quotient.change
    }

    /// Raw orders of all cyclic coordinates, including trivial ones.
    pub fn all_orders(&self) -> &[i64] {
        &self.quotient.orders
    }
}

/// `HR^n(G, S1)` as `(S1)^r ⊕ torsion`.
pub fn circle_cohomology(groupoid: &RealGroupoid, n: usize) -> Result<CohomologyGroup> {
    Ok(CircleHomology::new(groupoid, n)?.cohomology())
}

/// `HR^{n+1}(G, Z^{0,1})`, the exponential-sequence shift. It agrees with
/// [`circle_cohomology`] when the nerve involution is free, but not in
/// general: fixed simplices kill the sign-twisted integers.
pub fn shifted_circle_cohomology(groupoid: &RealGroupoid, n: usize) -> Result<AbelianGroupInvariants> {
    if n == 0 {
        return Err(Error::Unsupported("the shift applies in degrees n >= 1".into()));
    }
    let p = HrPresentation::new(groupoid, n + 1, &RealCoefficient::z_sign(), DEFAULT_MAX_DEGREE + 1)?;
    Ok(p.invariants)
}

/// Ordinary cohomology `H^n(H, A)` of the underlying groupoid and group,
/// ignoring both involutions.
pub fn fold_double(h: &RealGroupoid, n: usize, coefficient: &RealCoefficient) -> Result<AbelianGroupInvariants> {
    if coefficient.is_circle() {
        return Err(Error::Unsupported("ordinary circle cohomology is not supported".into()));
    }
    let plain = RealCoefficient::trivial_involution(coefficient.orders().to_vec())?;
    let p = HrPresentation::new(&h.with_trivial_involution(), n, &plain, DEFAULT_MAX_DEGREE)?;
    Ok(p.invariants)
}

/// `HR^0` by direct orbit analysis of connected components: a pair of
/// exchanged components contributes `A`, an invariant component `A^σ`
/// (for the circle, `S1` and `Z2` respectively).
pub fn hr0_by_orbits(groupoid: &RealGroupoid, coefficient: &RealCoefficient) -> Result<CohomologyGroup> {
    let comp = groupoid.components();
    let mut labels: Vec<usize> = comp.clone();
    labels.sort_unstable();
    labels.dedup();
    let (mut free_pairs, mut fixed) = (0usize, 0usize);
    for &c in &labels {
        let bar = comp[groupoid.bar_object(c)];
        if bar == c {
            fixed += 1;
        } else if c < bar {
            free_pairs += 1;
        }
    }
    if coefficient.is_circle() {
        return Ok(CohomologyGroup::Compact {
            circle_rank: free_pairs,
            torsion: AbelianGroupInvariants::from_cyclic_orders(0, std::iter::repeat_n(2, fixed)),
        });
    }
    let a = coefficient.invariants();
    let a_fixed = coefficient.fixed_subgroup()?.invariants;
    let mut total = AbelianGroupInvariants::trivial();
    for _ in 0..free_pairs {
        total = total.direct_sum(&a);
    }
    for _ in 0..fixed {
        total = total.direct_sum(&a_fixed);
    }
    Ok(CohomologyGroup::FinitelyGenerated(total))
}

/// Image of `HR^n(G, Z/2^k, -1) → HR^n(G, Z/2^K, -1)` induced by
/// multiplication by `2^(K-k)`.
pub fn tower_image(groupoid: &RealGroupoid, n: usize, k: u32, big_k: u32) -> Result<AbelianGroupInvariants> {
    if k == 0 || big_k < k || big_k > 30 {
        return Err(Error::Unsupported(
            "tower exponents must satisfy 1 <= k <= K <= 30".into(),
        ));
    }
    let small = HrPresentation::new(groupoid, n, &RealCoefficient::zm(1 << k, -1)?, DEFAULT_MAX_DEGREE)?;
    let big = HrPresentation::new(groupoid, n, &RealCoefficient::zm(1 << big_k, -1)?, DEFAULT_MAX_DEGREE)?;
    let factor = 1i64 << (big_k - k);
    let mut gens = Vec::new();
    for i in 0..small.factor_orders().len() {
        let mut class = vec![0; small.factor_orders().len()];
        class[i] = 1;
        let vals = small.representative(&class)?;
        let pushed: CochainValues = vals.iter().map(|v| vec![v[0] * factor]).collect();
        gens.push(big.class_of(&pushed)?);
    }
    let orders = big.factor_orders();
    let r = orders.len();
    let rel = relations_for(&orders.iter().map(|o| *o as u64).collect::<Vec<_>>());
    let span = Matrix::from_columns(r, &gens).hcat(&rel);
    let sq = with_exact(
        || subquotient(&Lattice::span(&span)?, &rel),
        || {
            let span: Matrix<BigInt> = span.convert()?;
            subquotient(&Lattice::span(&span)?, &rel.convert()?)
        },
    )?;
    Ok(invariants_of(&sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, RealGroup};

    fn group(g: FiniteGroup, inverse: bool) -> RealGroupoid {
        let rg = if inverse {
            RealGroup::inversion(g).unwrap()
        } else {
            RealGroup::trivial(g)
        };
        RealGroupoid::from_group(&rg).unwrap()
    }

    fn cyc(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn hr(g: &RealGroupoid, n: usize, a: &RealCoefficient) -> String {
        cohomology(g, n, a).unwrap().to_string()
    }

    #[test]
    fn point_values() {
        let p = RealGroupoid::point();
        assert_eq!(hr(&p, 0, &RealCoefficient::z8()), "Z/8");
        assert_eq!(hr(&p, 0, &RealCoefficient::zm(4, -1).unwrap()), "Z/2");
        assert_eq!(hr(&p, 0, &RealCoefficient::z_sign()), "0");
        for n in 1..4 {
            assert_eq!(hr(&p, n, &RealCoefficient::z()), "0");
            assert_eq!(hr(&p, n, &RealCoefficient::zm(6, -1).unwrap()), "0");
        }
        assert_eq!(hr(&p, 0, &RealCoefficient::circle()), "Z/2");
        assert_eq!(hr(&p, 2, &RealCoefficient::circle()), "0");
    }

    #[test]
    fn z2_group_mod_2() {
        let g = group(cyc(2), false);
        for n in 0..4 {
            assert_eq!(hr(&g, n, &RealCoefficient::z2()), "Z/2");
        }
    }

    #[test]
    fn classical_integral_cohomology_of_cyclic_groups() {
        // Trivial involution and trivial coefficients: ordinary H^n(Z/m; Z).
        let g = group(cyc(3), false);
        assert_eq!(hr(&g, 0, &RealCoefficient::z()), "Z");
        assert_eq!(hr(&g, 1, &RealCoefficient::z()), "0");
        assert_eq!(hr(&g, 2, &RealCoefficient::z()), "Z/3");
        assert_eq!(hr(&g, 3, &RealCoefficient::z()), "0");
    }

    #[test]
    fn circle_degree_one_is_hom_to_z2() {
        let cases = [
            (cyc(2), "Z/2"),
            (cyc(4), "Z/2"),
            (cyc(2).product(&cyc(2)).unwrap(), "Z/2 + Z/2"),
            (cyc(3), "0"),
        ];
        for (g, want) in cases {
            assert_eq!(hr(&group(g, false), 1, &RealCoefficient::circle()), want);
        }
    }

    #[test]
    fn hr0_matches_orbit_analysis() {
        let gs = [
            RealGroupoid::point(),
            RealGroupoid::pair(vec![1, 0]).unwrap(),
            RealGroupoid::real_space(vec![1, 0, 2]).unwrap(),
            RealGroupoid::swap_double(&group(cyc(2), false)).unwrap(),
            group(cyc(4), true),
        ];
        let coeffs = [
            RealCoefficient::z2(),
            RealCoefficient::z8(),
            RealCoefficient::z_sign(),
            RealCoefficient::zm(4, -1).unwrap(),
            RealCoefficient::z(),
            RealCoefficient::circle(),
        ];
        for g in &gs {
            for a in &coeffs {
                assert_eq!(cohomology(g, 0, a).unwrap(), hr0_by_orbits(g, a).unwrap(), "{a}");
            }
        }
    }

    #[test]
    fn shift_agrees_on_free_involutions() {
        let gs = [
            RealGroupoid::swap_double(&group(cyc(2), false)).unwrap(),
            RealGroupoid::swap_double(&group(cyc(3), false)).unwrap(),
            RealGroupoid::pair(vec![1, 0]).unwrap(),
        ];
        for g in &gs {
            for n in 1..3 {
                let dual = circle_cohomology(g, n).unwrap();
                let shifted = shifted_circle_cohomology(g, n).unwrap();
                assert_eq!(dual.as_discrete().cloned(), Some(shifted), "degree {n}");
            }
        }
        // Fixed simplices break the shift: trivial involution on Z/2.
        let z2 = group(cyc(2), false);
        assert_eq!(shifted_circle_cohomology(&z2, 1).unwrap().to_string(), "0");
        assert_eq!(circle_cohomology(&z2, 1).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn folding_small_cases() {
        let p = RealGroupoid::point();
        assert_eq!(fold_double(&p, 0, &RealCoefficient::z8()).unwrap().to_string(), "Z/8");
        let pair = RealGroupoid::pair(vec![0, 1]).unwrap();
        for n in 1..3 {
            assert!(fold_double(&pair, n, &RealCoefficient::z()).unwrap().is_trivial());
        }
        let z2 = group(cyc(2), false);
        let d = RealGroupoid::swap_double(&z2).unwrap();
        for n in 0..3 {
            assert_eq!(
                cohomology(&d, n, &RealCoefficient::z2()).unwrap().to_string(),
                fold_double(&z2, n, &RealCoefficient::z2()).unwrap().to_string()
            );
        }
    }

    #[test]
    fn classes_and_representatives() {
        let g = group(cyc(4), true);
        let p = HrPresentation::new(&g, 1, &RealCoefficient::zm(4, -1).unwrap(), DEFAULT_MAX_DEGREE).unwrap();
        let orders = p.factor_orders();
        for i in 0..orders.len() {
            let mut class = vec![0; orders.len()];
            class[i] = 1;
            let rep = p.representative(&class).unwrap();
            assert_eq!(p.class_of(&rep).unwrap(), class);
        }
    }

    #[test]
    fn tower_stabilizes_on_two_groups() {
        for g in [
            group(cyc(2), false),
            group(cyc(4), true),
            RealGroupoid::swap_double(&group(cyc(2), false)).unwrap(),
        ] {
            for n in 1..3 {
                let circle = circle_cohomology(&g, n).unwrap();
                let CohomologyGroup::Compact { torsion, .. } = circle else {
                    unreachable!()
                };
                assert_eq!(tower_image(&g, n, 6, 12).unwrap(), torsion, "degree {n}");
            }
        }
    }

    #[test]
    fn degree_bound_is_enforced() {
        let p = RealGroupoid::point();
        assert!(cohomology(&p, 5, &RealCoefficient::z2()).is_err());
        assert!(cohomology_bounded(&p, 5, &RealCoefficient::z2(), 6).is_ok());
    }
}
