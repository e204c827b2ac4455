//! Brute-force cohomology of finite coefficient groups by enumerating Real
//! cochains. Shares only the nerve with the linear-algebra path.

use std::collections::{BTreeMap, HashSet};

use crate::coefficients::RealCoefficient;
use crate::error::{Error, Result};
use crate::groupoid::{Nerve, RealGroupoid};
use crate::invariants::{AbelianGroupInvariants, CohomologyGroup};

/// Default limit on enumerated cochains plus search nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Element-index arithmetic tables for a finite coefficient group.
struct Tables {
    size: usize,
    add: Vec<Vec<u16>>,
    neg: Vec<u16>,
    involve: Vec<u16>,
    fixed: Vec<u16>,
}

impl Tables {
    fn new(a: &RealCoefficient) -> Result<Self> {
        let elems = a.elements()?;
        let size = elems.len();
        if size > u16::MAX as usize {
            return Err(Error::BudgetExceeded(format!(
                "coefficient group of order {size} is too large"
            )));
        }
        let idx = |v: &[i64]| a.element_index(v) as u16;
        let add = elems
            .iter()
            .map(|x| elems.iter().map(|y| idx(&a.add(x, y))).collect())
            .collect();
        let neg = elems.iter().map(|x| idx(&a.neg(x))).collect();
        let involve: Vec<u16> = elems.iter().map(|x| idx(&a.involve(x))).collect();
        let fixed = (0..size as u16).filter(|&i| involve[i as usize] == i).collect();
        Ok(Tables {
            size,
            add,
            neg,
            involve,
            fixed,
        })
    }

    fn mul(&self, k: u64, x: u16) -> u16 {
        let mut acc = 0u16;
        for _ in 0..k % self.size as u64 {
            acc = self.add[acc as usize][x as usize];
        }
        acc
    }
}

/// Orbit structure of one nerve level, computed directly.
struct Orbits {
    reps: Vec<usize>,
    partner: Vec<Option<usize>>,
}

fn orbits(nerve: &Nerve, n: usize) -> Orbits {
    let level = nerve.level(n);
    let mut reps = Vec::new();
    let mut partner = Vec::new();
    for x in 0..level.len() {
        let bar = level.involution[x];
        if bar >= x {
            reps.push(x);
            partner.push((bar != x).then_some(bar));
        }
    }
    Orbits { reps, partner }
}

fn choices(t: &Tables, o: &Orbits) -> Vec<usize> {
    o.partner
        .iter()
        .map(|p| if p.is_some() { t.size } else { t.fixed.len() })
        .collect()
}

fn count_product(sizes: &[usize], budget: u64) -> Option<u64> {
    let mut total = 1u64;
    for s in sizes {
        total = total.checked_mul(*s as u64)?;
        if total > budget {
            return None;
        }
    }
    Some(total)
}

/// `d c` evaluated at one simplex `y` of level `n + 1`.
fn d_at(t: &Tables, nerve: &Nerve, n: usize, c: &[u16], y: usize) -> u16 {
    let mut acc = 0u16;
    for k in 0..=n + 1 {
        let v = c[nerve.face(n, k, y)];
        let v = if k % 2 == 0 { v } else { t.neg[v as usize] };
        acc = t.add[acc as usize][v as usize];
    }
    acc
}

/// Real coboundaries in degree `n`, adding the enumerated cochains to `spent`.
fn coboundaries(t: &Tables, nerve: &Nerve, n: usize, budget: u64, spent: &mut u64) -> Result<HashSet<Vec<u16>>> {
    let mut boundaries: HashSet<Vec<u16>> = HashSet::new();
    let level_n = nerve.level(n).len();
    if n == 0 {
        boundaries.insert(vec![0; level_n]);
        return Ok(boundaries);
    }
    let lower = orbits(nerve, n - 1);
    let sizes = choices(t, &lower);
    let total = count_product(&sizes, budget.saturating_sub(*spent))
        .ok_or_else(|| Error::BudgetExceeded(format!("more than {budget} Real cochains in degree {}", n - 1)))?;
    *spent += total;
    let mut digits = vec![0usize; sizes.len()];
    let mut c = vec![0u16; nerve.level(n - 1).len()];
    loop {
        for (i, (&rep, partner)) in lower.reps.iter().zip(&lower.partner).enumerate() {
            let v = match partner {
                Some(p) => {
                    let v = digits[i] as u16;
                    c[*p] = t.involve[v as usize];
                    v
                }
                None => t.fixed[digits[i]],
            };
            c[rep] = v;
        }
        let image: Vec<u16> = (0..level_n).map(|y| d_at(t, nerve, n - 1, &c, y)).collect();
        boundaries.insert(image);
        // Mixed-radix increment.
        let mut i = 0;
        loop {
            if i == digits.len() {
                break;
            }
            digits[i] += 1;
            if digits[i] < sizes[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    Ok(boundaries)
}

/// Search order on the orbits of level `n`: greedily pick the orbit that
/// completes the most `(n+1)`-simplices, so constraints prune early.
fn search_order(faces: &[Vec<usize>], orbit_count: usize) -> Vec<usize> {
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); orbit_count];
    let mut open: Vec<usize> = faces.iter().map(Vec::len).collect();
    for (y, f) in faces.iter().enumerate() {
        for &o in f {
            uses[o].push(y);
        }
    }
    let mut done = vec![false; orbit_count];
    let mut order = Vec::with_capacity(orbit_count);
    for _ in 0..orbit_count {
        let score = |o: usize| uses[o].iter().filter(|&&y| open[y] == 1).count();
        let best = (0..orbit_count)
            .filter(|&o| !done[o])
            .max_by_key(|&o| (score(o), uses[o].len(), std::cmp::Reverse(o)))
            .expect("orbits remain");
        done[best] = true;
        for &y in &uses[best] {
            open[y] -= 1;
        }
        order.push(best);
    }
    order
}

/// Real cocycles in degree `n`, sorted, by depth-first search over orbit
/// representatives. Each (n+1)-simplex is checked once the last orbit among
/// its faces is set.
fn cocycles(t: &Tables, nerve: &Nerve, n: usize, budget: u64, spent: &mut u64) -> Result<Vec<Vec<u16>>> {
    let level_n = nerve.level(n).len();
    let here = orbits(nerve, n);
    let mut orbit_of = vec![0usize; level_n];
    for (i, (&rep, partner)) in here.reps.iter().zip(&here.partner).enumerate() {
        orbit_of[rep] = i;
        if let Some(p) = partner {
            orbit_of[*p] = i;
        }
    }
    let faces: Vec<Vec<usize>> = (0..nerve.level(n + 1).len())
        .map(|y| {
            let mut f: Vec<usize> = (0..=n + 1).map(|k| orbit_of[nerve.face(n, k, y)]).collect();
            f.sort_unstable();
            f.dedup();
            f
        })
        .collect();
    let order = search_order(&faces, here.reps.len());
    let mut position = vec![0usize; order.len()];
    for (i, &o) in order.iter().enumerate() {
        position[o] = i;
    }
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (y, f) in faces.iter().enumerate() {
        let last = f.iter().map(|&o| position[o]).max().expect("faces exist");
        checks[last].push(y);
    }
    let all_choices = choices(t, &here);
    let sizes: Vec<usize> = order.iter().map(|&o| all_choices[o]).collect();
    let mut found: Vec<Vec<u16>> = Vec::new();
    let mut c = vec![0u16; level_n];
    let mut digits = vec![0usize; sizes.len()];
    let mut depth = 0usize;
    // Iterative DFS: `digits[depth]` is the next choice to try at `depth`.
    loop {
        if depth == sizes.len() {
            found.push(c.clone());
            if found.len() as u64 + *spent > budget {
                return Err(Error::BudgetExceeded(format!(
                    "more than {budget} cocycles and search nodes"
                )));
            }
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        }
        if digits[depth] == sizes[depth] {
            digits[depth] = 0;
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        }
        let choice = digits[depth];
        digits[depth] += 1;
        *spent += 1;
        if *spent > budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {budget} search nodes in degree {n}"
            )));
        }
        let o = order[depth];
        let rep = here.reps[o];
        match here.partner[o] {
            Some(p) => {
                c[rep] = choice as u16;
                c[p] = t.involve[choice];
            }
            None => c[rep] = t.fixed[choice],
        }
        if checks[depth].iter().all(|&y| d_at(t, nerve, n, &c, y) == 0) {
            depth += 1;
        }
    }
    *spent += found.len() as u64;
    found.sort_unstable();
    Ok(found)
}

fn finite_tables(coefficient: &RealCoefficient) -> Result<Tables> {
    if coefficient.is_circle() || !coefficient.is_finite() {
        return Err(Error::Unsupported(
            "the brute-force oracle needs a finite coefficient group".into(),
        ));
    }
    Tables::new(coefficient)
}

/// Brute-force `HR^n(G, A)` for finite `A`. Refuses with
/// [`Error::BudgetExceeded`] instead of truncating.
pub fn brute_force_cohomology(
    groupoid: &RealGroupoid,
    n: usize,
    coefficient: &RealCoefficient,
    budget: u64,
) -> Result<AbelianGroupInvariants> {
    let t = finite_tables(coefficient)?;
    let nerve = Nerve::new(groupoid, n + 1);
    let mut spent = 0u64;
    let boundaries = coboundaries(&t, &nerve, n, budget, &mut spent)?;
    let found = cocycles(&t, &nerve, n, budget, &mut spent)?;
    classify(&t, &found, &boundaries)
}

/// `2 · lcm` of the isotropy group orders; a multiple of the exponent of the
/// torsion of `HR^n(G, S1)`.
pub fn circle_torsion_modulus(groupoid: &RealGroupoid) -> u64 {
    let mut m = 1u64;
    for x in 0..groupoid.object_count() {
        let k = groupoid
            .arrows_with_target(x)
            .iter()
            .filter(|&&g| groupoid.src(g) == x)
            .count() as u64;
        m = num_integer::lcm(m, k.max(1));
    }
    2 * m
}

/// Brute-force `m`-torsion `HR^n(G, S1)[m]`: the image of
/// `HR^n(Z/m, -1) -> HR^n(Z/m², -1)` induced by `μ_m ⊂ μ_{m²}`, with `m`
/// from [`circle_torsion_modulus`]. Each circle factor contributes `Z/m`.
pub fn brute_force_circle_torsion(groupoid: &RealGroupoid, n: usize, budget: u64) -> Result<AbelianGroupInvariants> {
    let m = circle_torsion_modulus(groupoid);
    let small = RealCoefficient::zm(m, -1)?;
    let big = RealCoefficient::zm(m * m, -1)?;
    let (ts, tb) = (finite_tables(&small)?, finite_tables(&big)?);
    let nerve = Nerve::new(groupoid, n + 1);
    let mut spent = 0u64;
    let boundaries = coboundaries(&tb, &nerve, n, budget, &mut spent)?;
    let found = cocycles(&ts, &nerve, n, budget, &mut spent)?;
    let include: Vec<u16> = small
        .elements()?
        .iter()
        .map(|v| big.element_index(&big.scale(v, m as i64)) as u16)
        .collect();
    let mut image: Vec<Vec<u16>> = found
        .iter()
        .map(|z| z.iter().map(|&x| include[x as usize]).collect())
        .collect();
    image.sort_unstable();
    image.dedup();
    let inside: HashSet<Vec<u16>> = image.iter().filter(|z| boundaries.contains(*z)).cloned().collect();
    classify(&tb, &image, &inside)
}

/// The `m`-torsion of a compact group `(S1)^r ⊕ F`, for `m` a multiple of the
/// exponent of `F`.
pub fn m_torsion(group: &CohomologyGroup, m: u64) -> AbelianGroupInvariants {
    match group {
        CohomologyGroup::Compact { circle_rank, torsion } => {
            AbelianGroupInvariants::from_cyclic_orders(0, vec![m; *circle_rank]).direct_sum(torsion)
        }
        CohomologyGroup::FinitelyGenerated(g) => g.clone(),
    }
}

/// Invariants of `Z / B` (cocycles sorted) from the sizes of its `p^j`-torsion subgroups.
fn classify(t: &Tables, cocycles: &[Vec<u16>], boundaries: &HashSet<Vec<u16>>) -> Result<AbelianGroupInvariants> {
    let (z, b) = (cocycles.len() as u64, boundaries.len() as u64);
    if z % b != 0 || !boundaries.iter().all(|v| cocycles.binary_search(v).is_ok()) {
        return Err(Error::OracleMismatch(
            "coboundaries are not contained in the cocycles".into(),
        ));
    }
    let order = z / b;
    let mut primes = BTreeMap::new();
    let mut m = order;
    let mut p = 2;
    while m > 1 {
        while m % p == 0 {
            *primes.entry(p).or_insert(0u32) += 1;
            m /= p;
        }
        p += 1;
    }
    let mut factors = Vec::new();
    for (&p, &e) in &primes {
        // counts[j] = log_p |H[p^j]|
        let mut counts = vec![0u32];
        let mut j = 1u32;
        while *counts.last().expect("nonempty") < e {
            let q = p.pow(j);
            let hits = cocycles
                .iter()
                .filter(|z| {
                    let qz: Vec<u16> = z.iter().map(|&x| t.mul(q, x)).collect();
                    boundaries.contains(&qz)
                })
                .count() as u64;
            let size = hits / b;
            let mut log = 0u32;
            let mut s = size;
            while s > 1 {
                if !s.is_multiple_of(p) {
                    return Err(Error::OracleMismatch(
                        "torsion subgroup size is not a prime power".into(),
                    ));
                }
                s /= p;
                log += 1;
            }
            counts.push(log);
            j += 1;
        }
        // Number of cyclic factors of order at least p^j is counts[j] - counts[j-1].
        let at_least: Vec<u32> = counts.windows(2).map(|w| w[1] - w[0]).collect();
        for (j, &k) in at_least.iter().enumerate() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..k - next {
                factors.push(p.pow(j as u32 + 1));
            }
        }
    }
    Ok(AbelianGroupInvariants::from_cyclic_orders(0, factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, RealGroup};

    fn z(n: usize) -> RealGroupoid {
        RealGroupoid::from_group(&RealGroup::trivial(FiniteGroup::cyclic(n).unwrap())).unwrap()
    }

    #[test]
    fn z2_group_mod_2() {
        for n in 0..3 {
            let h = brute_force_cohomology(&z(2), n, &RealCoefficient::z2(), DEFAULT_BUDGET).unwrap();
            assert_eq!(h.to_string(), "Z/2");
        }
    }

    #[test]
    fn point_with_sign_z4() {
        let h = brute_force_cohomology(
            &RealGroupoid::point(),
            0,
            &RealCoefficient::zm(4, -1).unwrap(),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(h.to_string(), "Z/2");
    }

    #[test]
    fn z4_group_mod_4() {
        // H^1(Z/4; Z/4) = Z/4, H^2 = Z/4.
        for n in 1..3 {
            let h = brute_force_cohomology(&z(4), n, &RealCoefficient::zm(4, 1).unwrap(), DEFAULT_BUDGET).unwrap();
            assert_eq!(h.to_string(), "Z/4");
        }
    }

    #[test]
    fn non_cyclic_answer() {
        // H^1(Z/2 x Z/2; Z/2) = (Z/2)^2.
        let g = RealGroupoid::from_group(&RealGroup::trivial(
            FiniteGroup::cyclic(2)
                .unwrap()
                .product(&FiniteGroup::cyclic(2).unwrap())
                .unwrap(),
        ))
        .unwrap();
        let h = brute_force_cohomology(&g, 1, &RealCoefficient::z2(), DEFAULT_BUDGET).unwrap();
        assert_eq!(h.to_string(), "Z/2 + Z/2");
    }

    #[test]
    fn budget_is_refused_not_truncated() {
        let e = brute_force_cohomology(&z(4), 2, &RealCoefficient::zm(4, 1).unwrap(), 100).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded(_)));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn circle_torsion_matches_hom_to_z2() {
        // Trivial involution: HR^1(G, S1) = Hom(G, Z2).
        let v4 = RealGroupoid::from_group(&RealGroup::trivial(
            FiniteGroup::cyclic(2)
                .unwrap()
                .product(&FiniteGroup::cyclic(2).unwrap())
                .unwrap(),
        ))
        .unwrap();
        for (g, order) in [(z(2), 2), (z(4), 2), (z(3), 1), (v4, 4)] {
            let h = brute_force_circle_torsion(&g, 1, DEFAULT_BUDGET).unwrap();
            assert_eq!(h.order(), Some(order));
        }
    }

    #[test]
    fn circle_torsion_agrees_with_dual_route() {
        use crate::cohomology::circle_cohomology;
        let groupoids = [
            RealGroupoid::point(),
            z(2),
            RealGroupoid::from_group(&RealGroup::inversion(FiniteGroup::cyclic(4).unwrap()).unwrap()).unwrap(),
            RealGroupoid::pair(vec![1, 0]).unwrap(),
            RealGroupoid::swap_double(&z(2)).unwrap(),
        ];
        for g in &groupoids {
            for n in 0..3 {
                let expected = m_torsion(&circle_cohomology(g, n).unwrap(), circle_torsion_modulus(g));
                assert_eq!(
                    brute_force_circle_torsion(g, n, DEFAULT_BUDGET).unwrap(),
                    expected,
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn infinite_coefficients_rejected() {
        assert!(brute_force_cohomology(&z(2), 0, &RealCoefficient::z(), DEFAULT_BUDGET).is_err());
    }
}
