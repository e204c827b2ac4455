//! Real graded circle-central extensions at cocycle level, with the twisted
//! group law `(δ, ω)(δ', ω') = (δ + δ', ω + ω' + ι(δ ∪ δ'))`, `ι(1) = 1/2`.

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cochain::{cup_product, CochainValues, SimplexRole, SparseCochain};
use crate::coefficients::RealCoefficient;
use crate::cohomology::{CircleHomology, HrPresentation, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::groupoid::{Nerve, RealGroupoid};
use crate::invariants::{AbelianGroupInvariants, CohomologyGroup};

pub type Q = Ratio<i64>;

/// `x mod 1` in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

/// A pair `(δ, ω)`: a Real `Z/2`-valued 1-cocycle and a Real circle-valued
/// 2-cocycle with rational values mod 1, both as full value lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedExtension {
    pub delta: Vec<i64>,
    pub omega: Vec<Q>,
}

/// Class coordinates: `[δ]` in `HR^1(Z2)` and the values `ω(z_i) mod 1` on
/// the generators `z_i` of `H_2(Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub delta: Vec<i64>,
    pub omega: Vec<Q>,
}

impl NormalForm {
    pub fn label(&self) -> String {
        let d: Vec<String> = self.delta.iter().map(|x| x.to_string()).collect();
        let w: Vec<String> = self.omega.iter().map(|x| x.to_string()).collect();
        format!("[{}|{}]", d.join(","), w.join(","))
    }
}

/// Everything needed to compute with extensions over one groupoid.
#[derive(Debug, Clone)]
pub struct ExtensionContext {
    groupoid: RealGroupoid,
    h1: HrPresentation,
    h2: CircleHomology,
}

impl ExtensionContext {
    pub fn new(groupoid: &RealGroupoid) -> Result<Self> {
        Ok(ExtensionContext {
            groupoid: groupoid.clone(),
            h1: HrPresentation::new(groupoid, 1, &RealCoefficient::z2(), DEFAULT_MAX_DEGREE)?,
            h2: CircleHomology::new(groupoid, 2)?,
        })
    }

    pub fn groupoid(&self) -> &RealGroupoid {
        &self.groupoid
    }

    pub fn nerve(&self) -> &Nerve {
        self.h2.nerve()
    }

    pub fn h1(&self) -> &HrPresentation {
        &self.h1
    }

    pub fn h1_invariants(&self) -> &AbelianGroupInvariants {
        self.h1.invariants()
    }

    pub fn h2_group(&self) -> CohomologyGroup {
        self.h2.cohomology()
    }

    /// Orders of the `HR^1(Z2)` class coordinates.
    pub fn delta_orders(&self) -> Vec<i64> {
        self.h1.factor_orders()
    }

    /// Orders of the `H_2(Q)` generators; `ω(z_i)` lies in `(1/d_i)Z/Z`, or
    /// anywhere in `Q/Z` when `d_i = 0`.
    pub fn omega_orders(&self) -> Vec<i64> {
        self.h2.factor_orders()
    }

    /// Number of classes, if finite.
    pub fn order(&self) -> Option<u64> {
        let all: Vec<i64> = self.delta_orders().into_iter().chain(self.omega_orders()).collect();
        if all.contains(&0) {
            return None;
        }
        Some(all.iter().map(|o| *o as u64).product())
    }

    pub fn identity(&self) -> GradedExtension {
        GradedExtension {
            delta: vec![0; self.nerve().level(1).len()],
            omega: vec![Q::zero(); self.nerve().level(2).len()],
        }
    }

    /// `ι(δ₁ ∪ δ₂)` as circle values.
    pub fn twist(&self, d1: &[i64], d2: &[i64]) -> Result<Vec<Q>> {
        let wrap = |d: &[i64]| -> CochainValues { d.iter().map(|x| vec![*x]).collect() };
        let cup = cup_product(self.nerve().level(2), &wrap(d1), &wrap(d2))?;
        Ok(cup.iter().map(|v| Q::new(v[0], 2)).collect())
    }

    /// Checks the Real cocycle conditions on both components.
    pub fn validate(&self, e: &GradedExtension) -> Result<()> {
        let nerve = self.nerve();
        let (l1, l2) = (nerve.level(1), nerve.level(2));
        if e.delta.len() != l1.len() || e.omega.len() != l2.len() {
            return Err(Error::InvalidCochain(format!(
                "expected {} grading values and {} circle values",
                l1.len(),
                l2.len()
            )));
        }
        if e.delta.iter().any(|x| !(0..2).contains(x)) {
            return Err(Error::InvalidCochain("grading values must be 0 or 1".into()));
        }
        let values: CochainValues = e.delta.iter().map(|x| vec![*x]).collect();
        self.h1.class_of(&values)?;
        for x in 0..l2.len() {
            if frac(e.omega[l2.involution[x]] + e.omega[x]) != Q::zero() {
                return Err(Error::InvalidCochain(format!(
                    "not Real: circle value at 2-simplex {} must be the conjugate of the value at {x}",
                    l2.involution[x]
                )));
            }
        }
        for y in 0..nerve.level(3).len() {
            let mut acc = Q::zero();
            for k in 0..4 {
                let v = e.omega[nerve.face(2, k, y)];
                acc += if k % 2 == 0 { v } else { -v };
            }
            if frac(acc) != Q::zero() {
                return Err(Error::InvalidCochain(format!(
                    "circle part is not a cocycle at 3-simplex {y}"
                )));
            }
        }
        Ok(())
    }

    fn reduce(&self, e: GradedExtension) -> GradedExtension {
        GradedExtension {
            delta: e.delta.iter().map(|x| x.rem_euclid(2)).collect(),
            omega: e.omega.into_iter().map(frac).collect(),
        }
    }

    pub fn multiply(&self, a: &GradedExtension, b: &GradedExtension) -> Result<GradedExtension> {
        let t = self.twist(&a.delta, &b.delta)?;
        Ok(self.reduce(GradedExtension {
            delta: a.delta.iter().zip(&b.delta).map(|(x, y)| x + y).collect(),
            omega: a
                .omega
                .iter()
                .zip(&b.omega)
                .zip(&t)
                .map(|((x, y), z)| x + y + z)
                .collect(),
        }))
    }

    /// `(δ, -ω - ι(δ ∪ δ))`.
    pub fn inverse(&self, a: &GradedExtension) -> Result<GradedExtension> {
        let t = self.twist(&a.delta, &a.delta)?;
        Ok(self.reduce(GradedExtension {
            delta: a.delta.clone(),
            omega: a.omega.iter().zip(&t).map(|(x, z)| -*x - z).collect(),
        }))
    }

    /// `ω(z)` for a cycle `z` in `Q_2` orbit coordinates.
    fn evaluate(&self, omega: &[Q], cycle: &[i64]) -> Q {
        let mut acc = Q::zero();
        for (orbit, k) in self.h2.orbits().iter().zip(cycle) {
            acc += omega[orbit.rep] * Q::from(*k);
        }
        frac(acc)
    }

    /// The class coordinates of `ω` alone.
    pub fn omega_class(&self, omega: &[Q]) -> Result<Vec<Q>> {
        (0..self.omega_orders().len())
            .map(|i| Ok(self.evaluate(omega, &self.h2.cycle_generator(i)?)))
            .collect()
    }

    pub fn normal_form(&self, e: &GradedExtension) -> Result<NormalForm> {
        self.validate(e)?;
        let values: CochainValues = e.delta.iter().map(|x| vec![*x]).collect();
        Ok(NormalForm {
            delta: self.h1.class_of(&values)?,
            omega: self.omega_class(&e.omega)?,
        })
    }

    /// A Real circle 2-cocycle whose values on the `H_2(Q)` generators are
    /// `chi`. Requires `d_i chi_i = 0 mod 1` on finite factors.
    pub fn omega_from_character(&self, chi: &[Q]) -> Result<Vec<Q>> {
        let orders = self.omega_orders();
        if chi.len() != orders.len() {
            return Err(Error::Mismatch(format!(
                "character has {} values, H_2 has {} generators",
                chi.len(),
                orders.len()
            )));
        }
        for (c, d) in chi.iter().zip(&orders) {
            if *d != 0 && frac(*c * Q::from(*d)) != Q::zero() {
                return Err(Error::InvalidCochain(format!("value {c} is not of order dividing {d}")));
            }
        }
        // Spread chi over all cyclic coordinates (trivial ones get 0).
        let all = self.h2.all_orders();
        let mut full = vec![Q::zero(); all.len()];
        let mut it = chi.iter();
        for (i, o) in all.iter().enumerate() {
            if *o != 1 {
                full[i] = *it.next().expect("lengths agree");
            }
        }
        let change = self.h2.change_of_basis();
        let lattice = self.h2.cycles();
        let rank = lattice.rank();
        // lambda_j = chi(basis_j), then extend to the ambient coordinates.
        let lambda: Vec<Q> = (0..rank)
            .map(|j| (0..rank).fold(Q::zero(), |acc, i| acc + full[i] * Q::from(*change.get(i, j))))
            .collect();
        let w: Vec<Q> = lattice.extend_functional(&lambda).into_iter().map(frac).collect();
        let l2 = self.nerve().level(2);
        Ok((0..l2.len())
            .map(|x| {
                let (orbit, role) = self.h2.role(2, x);
                match role {
                    SimplexRole::Conjugate => frac(-w[orbit]),
                    _ => w[orbit],
                }
            })
            .collect())
    }

    pub fn representative(&self, nf: &NormalForm) -> Result<GradedExtension> {
        let delta = self.h1.representative(&self.h1.normalize_class(&nf.delta))?;
        Ok(GradedExtension {
            delta: delta.iter().map(|v| v[0]).collect(),
            omega: self.omega_from_character(&nf.omega)?,
        })
    }

    /// Product of classes, computed on representatives.
    pub fn multiply_classes(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
        let p = self.multiply(&self.representative(a)?, &self.representative(b)?)?;
        self.normal_form(&p)
    }

    pub fn inverse_class(&self, a: &NormalForm) -> Result<NormalForm> {
        let p = self.inverse(&self.representative(a)?)?;
        self.normal_form(&p)
    }

    pub fn identity_class(&self) -> NormalForm {
        NormalForm {
            delta: vec![0; self.delta_orders().len()],
            omega: vec![Q::zero(); self.omega_orders().len()],
        }
    }

    /// All classes, when the group is finite and has at most `limit`
    /// elements.
    pub fn elements(&self, limit: u64) -> Result<Vec<NormalForm>> {
        let order = self
            .order()
            .ok_or_else(|| Error::BudgetExceeded("the extension group is infinite".into()))?;
        if order > limit {
            return Err(Error::BudgetExceeded(format!(
                "the extension group has {order} elements, above the limit {limit}"
            )));
        }
        let mut out = vec![self.identity_class()];
        for (i, d) in self.delta_orders().iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|nf| {
                    (0..*d).map(move |x| {
                        let mut n = nf.clone();
                        n.delta[i] = x;
                        n
                    })
                })
                .collect();
        }
        for (i, d) in self.omega_orders().iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|nf| {
                    (0..*d).map(move |x| {
                        let mut n = nf.clone();
                        n.omega[i] = Q::new(x, *d);
                        n
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// `d α` for a `Z/2`-valued function on objects (any function is Real
    /// when it is invariant; non-invariant input is rejected).
    pub fn delta_coboundary(&self, alpha: &[i64]) -> Result<Vec<i64>> {
        let nerve = self.nerve();
        let l0 = nerve.level(0);
        if alpha.len() != l0.len() || (0..l0.len()).any(|x| alpha[l0.involution[x]] != alpha[x]) {
            return Err(Error::InvalidCochain(
                "expected a Real Z2-valued function on objects".into(),
            ));
        }
        Ok((0..nerve.level(1).len())
            .map(|y| (alpha[nerve.face(0, 0, y)] + alpha[nerve.face(0, 1, y)]).rem_euclid(2))
            .collect())
    }

    /// `d β` for a Real circle-valued 1-cochain.
    pub fn omega_coboundary(&self, beta: &[Q]) -> Result<Vec<Q>> {
        let nerve = self.nerve();
        let l1 = nerve.level(1);
        if beta.len() != l1.len() || (0..l1.len()).any(|x| frac(beta[l1.involution[x]] + beta[x]) != Q::zero()) {
            return Err(Error::InvalidCochain("expected a Real circle-valued 1-cochain".into()));
        }
        Ok((0..nerve.level(2).len())
            .map(|y| {
                let mut acc = Q::zero();
                for k in 0..3 {
                    let v = beta[nerve.face(1, k, y)];
                    acc += if k % 2 == 0 { v } else { -v };
                }
                frac(acc)
            })
            .collect())
    }

    pub fn from_input(&self, input: &ExtensionInput) -> Result<GradedExtension> {
        let nerve = self.nerve();
        let mut delta = vec![0i64; nerve.level(1).len()];
        for (i, v) in &input.delta.0 {
            let slot = delta
                .get_mut(*i)
                .ok_or_else(|| Error::InvalidCochain(format!("1-simplex index {i} out of range")))?;
            if v.len() != 1 {
                return Err(Error::InvalidCochain("grading values are single Z2 coordinates".into()));
            }
            *slot = v[0].rem_euclid(2);
        }
        let mut omega = vec![Q::zero(); nerve.level(2).len()];
        for (i, [p, q]) in &input.omega {
            let slot = omega
                .get_mut(*i)
                .ok_or_else(|| Error::InvalidCochain(format!("2-simplex index {i} out of range")))?;
            if *q == 0 {
                return Err(Error::InvalidCochain("zero denominator".into()));
            }
            *slot = frac(Q::new(*p, *q));
        }
        let e = GradedExtension { delta, omega };
        self.validate(&e)?;
        Ok(e)
    }

    pub fn to_input(&self, e: &GradedExtension) -> ExtensionInput {
        ExtensionInput {
            delta: SparseCochain::from_values(&e.delta.iter().map(|x| vec![*x]).collect::<Vec<_>>()),
            omega: e
                .omega
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, [*v.numer(), *v.denom()]))
                .collect(),
        }
    }
}

/// Serialized extension: sparse grading values and circle values as
/// fractions `[p, q]` meaning `p/q mod 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionInput {
    #[serde(default)]
    pub delta: SparseCochain,
    #[serde(default)]
    pub omega: Vec<(usize, [i64; 2])>,
}

/// Order of a class under the class-level product, if at most `limit`.
pub fn class_order(ctx: &ExtensionContext, a: &NormalForm, limit: u64) -> Result<u64> {
    let id = ctx.identity_class();
    let mut acc = a.clone();
    for k in 1..=limit {
        if acc == id {
            return Ok(k);
        }
        acc = ctx.multiply_classes(&acc, a)?;
    }
    Err(Error::BudgetExceeded(format!("element order exceeds {limit}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, RealGroup};

    fn z(n: usize) -> RealGroupoid {
        RealGroupoid::from_group(&RealGroup::trivial(FiniteGroup::cyclic(n).unwrap())).unwrap()
    }

    #[test]
    fn point_is_trivial() {
        let ctx = ExtensionContext::new(&RealGroupoid::point()).unwrap();
        assert_eq!(ctx.order(), Some(1));
    }

    #[test]
    fn z2_grading_squares_to_the_twist() {
        let ctx = ExtensionContext::new(&z(2)).unwrap();
        assert_eq!(ctx.delta_orders(), vec![2]);
        assert_eq!(ctx.omega_orders(), vec![2]);
        let g = NormalForm {
            delta: vec![1],
            omega: vec![Q::zero()],
        };
        let sq = ctx.multiply_classes(&g, &g).unwrap();
        assert_eq!(sq.delta, vec![0]);
        assert_eq!(sq.omega, vec![Q::new(1, 2)]);
        assert_eq!(class_order(&ctx, &g, 16).unwrap(), 4);
    }

    #[test]
    fn representatives_round_trip() {
        for g in [z(2), z(4), RealGroupoid::swap_double(&z(2)).unwrap()] {
            let ctx = ExtensionContext::new(&g).unwrap();
            for nf in ctx.elements(64).unwrap() {
                let rep = ctx.representative(&nf).unwrap();
                assert_eq!(ctx.normal_form(&rep).unwrap(), nf);
            }
        }
    }

    #[test]
    fn inverse_formula() {
        let ctx = ExtensionContext::new(&z(4)).unwrap();
        for nf in ctx.elements(64).unwrap() {
            let inv = ctx.inverse_class(&nf).unwrap();
            assert_eq!(ctx.multiply_classes(&nf, &inv).unwrap(), ctx.identity_class());
        }
    }

    #[test]
    fn input_validation() {
        let ctx = ExtensionContext::new(&z(2)).unwrap();
        let ok: ExtensionInput = serde_json::from_str(r#"{"delta":[[1,[1]]],"omega":[[3,[1,2]]]}"#).unwrap();
        let e = ctx.from_input(&ok).unwrap();
        assert_eq!(ctx.to_input(&e), ok);
        let not_cocycle: ExtensionInput = serde_json::from_str(r#"{"omega":[[3,[1,3]]]}"#).unwrap();
        assert!(ctx.from_input(&not_cocycle).is_err());
    }
}
