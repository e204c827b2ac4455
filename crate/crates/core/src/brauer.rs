//! The Real graded Brauer group `HR^0(G, Z8) ⊕ Ext(G)`, with the Z8 summand
//! taken literally as a direct summand.

use serde::Serialize;

use crate::coefficients::RealCoefficient;
use crate::cohomology::{HrPresentation, DEFAULT_MAX_DEGREE};
use crate::error::{Error, Result};
use crate::extension::{ExtensionContext, NormalForm};
use crate::groupoid::RealGroupoid;
use crate::invariants::{AbelianGroupInvariants, CohomologyGroup};

/// Default limit on the number of elements enumerated for the abstract
/// structure and splitting checks.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerElement {
    /// Class coordinates in `HR^0(Z8)`.
    pub type_class: Vec<i64>,
    pub graded: NormalForm,
}

impl BrauerElement {
    pub fn label(&self) -> String {
        let t: Vec<String> = self.type_class.iter().map(|x| x.to_string()).collect();
        format!("({}; {})", t.join(","), self.graded.label())
    }
}

#[derive(Debug, Clone)]
pub struct BrauerGroup {
    types: HrPresentation,
    ext: ExtensionContext,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrauerReport {
    pub type_component: AbelianGroupInvariants,
    pub grading_component: AbelianGroupInvariants,
    pub circle_component: CohomologyGroup,
    pub total_order: Option<u64>,
    /// Invariants of the extension group, from element orders.
    pub extension_invariants: Option<AbelianGroupInvariants>,
    /// Invariants of the whole group, from element orders.
    pub group_invariants: Option<AbelianGroupInvariants>,
    /// Whether `0 → HR^2(S1) → Ext → HR^1(Z2) → 0` splits.
    pub extension_splits: Option<bool>,
    pub warnings: Vec<String>,
}

impl BrauerGroup {
    pub fn new(groupoid: &RealGroupoid) -> Result<Self> {
        Ok(BrauerGroup {
            types: HrPresentation::new(groupoid, 0, &RealCoefficient::z8(), DEFAULT_MAX_DEGREE)?,
            ext: ExtensionContext::new(groupoid)?,
        })
    }

    pub fn extension(&self) -> &ExtensionContext {
        &self.ext
    }

    pub fn types(&self) -> &HrPresentation {
        &self.types
    }

    pub fn order(&self) -> Option<u64> {
        Some(self.types.invariants().order()? * self.ext.order()?)
    }

    pub fn identity(&self) -> BrauerElement {
        BrauerElement {
            type_class: vec![0; self.types.factor_orders().len()],
            graded: self.ext.identity_class(),
        }
    }

    pub fn add(&self, a: &BrauerElement, b: &BrauerElement) -> Result<BrauerElement> {
        self.check(a)?;
        self.check(b)?;
        let t: Vec<i64> = a.type_class.iter().zip(&b.type_class).map(|(x, y)| x + y).collect();
        Ok(BrauerElement {
            type_class: self.types.normalize_class(&t),
            graded: self.ext.multiply_classes(&a.graded, &b.graded)?,
        })
    }

    pub fn inverse(&self, a: &BrauerElement) -> Result<BrauerElement> {
        self.check(a)?;
        let t: Vec<i64> = a.type_class.iter().map(|x| -x).collect();
        Ok(BrauerElement {
            type_class: self.types.normalize_class(&t),
            graded: self.ext.inverse_class(&a.graded)?,
        })
    }

    fn check(&self, a: &BrauerElement) -> Result<()> {
        if a.type_class.len() != self.types.factor_orders().len()
            || a.graded.delta.len() != self.ext.delta_orders().len()
            || a.graded.omega.len() != self.ext.omega_orders().len()
        {
            return Err(Error::Mismatch("element belongs to a different groupoid".into()));
        }
        Ok(())
    }

    /// All elements, if there are at most `limit`.
    pub fn elements(&self, limit: u64) -> Result<Vec<BrauerElement>> {
        let order = self
            .order()
            .ok_or_else(|| Error::BudgetExceeded("the Brauer group is infinite".into()))?;
        if order > limit {
            return Err(Error::BudgetExceeded(format!(
                "the Brauer group has {order} elements, above the limit {limit}"
            )));
        }
        let graded = self.ext.elements(limit)?;
        let mut types = vec![vec![]];
        for d in self.types.factor_orders() {
            types = types
                .into_iter()
                .flat_map(|t: Vec<i64>| {
                    (0..d).map(move |x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
        }
        Ok(types
            .iter()
            .flat_map(|t| {
                graded.iter().map(move |g| BrauerElement {
                    type_class: t.clone(),
                    graded: g.clone(),
                })
            })
            .collect())
    }

    /// Whether every `HR^1(Z2)` generator of order `d` lifts to an element
    /// of order `d`, by exhaustive search over `HR^2(S1)`.
    pub fn extension_splits(&self, limit: u64) -> Result<bool> {
        let omega_orders = self.ext.omega_orders();
        if omega_orders.contains(&0) {
            return Err(Error::BudgetExceeded("HR^2(S1) is infinite".into()));
        }
        let size: u64 = omega_orders.iter().map(|o| *o as u64).product();
        if size > limit {
            return Err(Error::BudgetExceeded(format!(
                "HR^2(S1) has {size} elements, above {limit}"
            )));
        }
        let lifts = self.ext.elements(u64::MAX)?;
        for (i, d) in self.ext.delta_orders().iter().enumerate() {
            let found = lifts
                .iter()
                .filter(|nf| nf.delta.iter().enumerate().all(|(j, x)| *x == i64::from(j == i)))
                .any(|nf| {
                    power(&self.ext, nf, *d as u64)
                        .map(|p| p == self.ext.identity_class())
                        .unwrap_or(false)
                });
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn report(&self, groupoid: &RealGroupoid, limit: u64) -> Result<BrauerReport> {
        let mut warnings = Vec::new();
        if groupoid.is_swap_double_shaped() {
            warnings.push(format!(
                "the involution exchanges connected components; the type component is computed as HR^0(Z8) = {}, \
                 not the Z/2 suggested by folding to the complex theory",
                self.types.invariants()
            ));
        }
        let (extension_invariants, group_invariants, extension_splits) = match self.order() {
            Some(o) if o <= limit => {
                let ext_elems = self.ext.elements(limit)?;
                let ext_orders = ext_elems
                    .iter()
                    .map(|e| class_power_order(&self.ext, e))
                    .collect::<Result<Vec<_>>>()?;
                let ext_inv = invariants_from_orders(&ext_orders)?;
                let all = ext_inv.direct_sum(self.types.invariants());
                (Some(ext_inv), Some(all), Some(self.extension_splits(limit)?))
            }
            _ => {
                warnings.push("group too large for element enumeration; abstract structure not computed".into());
                (None, None, None)
            }
        };
        Ok(BrauerReport {
            type_component: self.types.invariants().clone(),
            grading_component: self.ext.h1_invariants().clone(),
            circle_component: self.ext.h2_group(),
            total_order: self.order(),
            extension_invariants,
            group_invariants,
            extension_splits,
            warnings,
        })
    }

    /// The Cayley table of the group as element labels and index pairs.
    pub fn cayley_table(&self, limit: u64) -> Result<(Vec<BrauerElement>, Vec<Vec<usize>>)> {
        let elems = self.elements(limit)?;
        let index: std::collections::HashMap<&BrauerElement, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let c = self.add(a, b)?;
                        index
                            .get(&c)
                            .copied()
                            .ok_or_else(|| Error::Mismatch(format!("product {} is not in normal form", c.label())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((elems, table))
    }
}

fn power(ctx: &ExtensionContext, a: &NormalForm, k: u64) -> Result<NormalForm> {
    let mut acc = ctx.identity_class();
    for _ in 0..k {
        acc = ctx.multiply_classes(&acc, a)?;
    }
    Ok(acc)
}

fn class_power_order(ctx: &ExtensionContext, a: &NormalForm) -> Result<u64> {
    let bound = ctx.order().unwrap_or(u64::MAX);
    crate::extension::class_order(ctx, a, bound)
}

/// Invariants of a finite abelian group from the multiset of element orders.
pub fn invariants_from_orders(orders: &[u64]) -> Result<AbelianGroupInvariants> {
    let n = orders.len() as u64;
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    let mut primes = Vec::new();
    while m > 1 {
        if m.is_multiple_of(p) {
            primes.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    for p in primes {
        // log_p |G[p^j]| for j = 0, 1, ...
        let mut logs = vec![0u32];
        let mut j = 1u32;
        loop {
            let q = p.pow(j);
            let count = orders.iter().filter(|o| q % **o == 0).count() as u64;
            let mut log = 0;
            let mut c = count;
            while c > 1 {
                if !c.is_multiple_of(p) {
                    return Err(Error::Mismatch(
                        "element orders do not come from an abelian group".into(),
                    ));
                }
                c /= p;
                log += 1;
            }
            if log == *logs.last().expect("nonempty") {
                break;
            }
            logs.push(log);
            j += 1;
        }
        let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        for (j, &k) in at_least.iter().enumerate() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..k - next {
                factors.push(p.pow(j as u32 + 1));
            }
        }
    }
    Ok(AbelianGroupInvariants::from_cyclic_orders(0, factors))
}

/// The type class at each object: `HR^0(Z8)` classes are invariant
/// functions, read off at every object.
pub fn type_values(group: &BrauerGroup, element: &BrauerElement) -> Result<Vec<i64>> {
    let vals = group.types.representative(&element.type_class)?;
    Ok(vals.iter().map(|v| v[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, RealGroup};

    fn z(n: usize) -> RealGroupoid {
        RealGroupoid::from_group(&RealGroup::trivial(FiniteGroup::cyclic(n).unwrap())).unwrap()
    }

    #[test]
    fn point_gives_z8() {
        let p = RealGroupoid::point();
        let b = BrauerGroup::new(&p).unwrap();
        let r = b.report(&p, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(r.total_order, Some(8));
        assert_eq!(r.group_invariants.unwrap().to_string(), "Z/8");
        let g = BrauerElement {
            type_class: vec![1],
            graded: b.extension().identity_class(),
        };
        let mut acc = b.identity();
        for k in 1..=8 {
            acc = b.add(&acc, &g).unwrap();
            assert_eq!(acc == b.identity(), k == 8);
        }
        let three = BrauerElement {
            type_class: vec![3],
            graded: b.extension().identity_class(),
        };
        assert_eq!(b.inverse(&three).unwrap().type_class, vec![5]);
    }

    #[test]
    fn z2_group_has_order_32() {
        let g = z(2);
        let b = BrauerGroup::new(&g).unwrap();
        let r = b.report(&g, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(r.total_order, Some(32));
        assert_eq!(r.extension_invariants.unwrap().to_string(), "Z/4");
        assert_eq!(r.extension_splits, Some(false));
        assert_eq!(r.group_invariants.unwrap().to_string(), "Z/4 + Z/8");
        for e in b.elements(64).unwrap() {
            assert_eq!(b.add(&e, &b.inverse(&e).unwrap()).unwrap(), b.identity());
        }
    }

    #[test]
    fn swap_double_warns() {
        let d = RealGroupoid::swap_double(&RealGroupoid::point()).unwrap();
        let b = BrauerGroup::new(&d).unwrap();
        let r = b.report(&d, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(r.type_component.to_string(), "Z/8");
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn orders_to_invariants() {
        // Z/2 + Z/4: orders 1,2,2,2,4,4,4,4.
        let inv = invariants_from_orders(&[1, 2, 2, 2, 4, 4, 4, 4]).unwrap();
        assert_eq!(inv.to_string(), "Z/2 + Z/4");
        assert_eq!(invariants_from_orders(&[1]).unwrap().to_string(), "0");
    }

    #[test]
    fn cayley_table_is_a_latin_square() {
        let g = z(2);
        let b = BrauerGroup::new(&g).unwrap();
        let (elems, table) = b.cayley_table(64).unwrap();
        for row in &table {
            let mut r = row.clone();
            r.sort_unstable();
            assert_eq!(r, (0..elems.len()).collect::<Vec<_>>());
        }
    }
}
