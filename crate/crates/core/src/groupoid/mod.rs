//! Finite Real groupoids: construction, validation and the simplicial nerve.

mod description;
mod group;
mod nerve;

use crate::error::{Error, Result};

pub use description::{
    ExplicitArrow, ExplicitDescription, ExplicitInvolution, GroupSpec, GroupoidDescription, InvolutionSpec,
    ObjectsSpec, Recipe, SpaceSpec,
};
pub use group::{FiniteGroup, RealGroup};
pub use nerve::{Nerve, NerveLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
}

/// Unvalidated groupoid data. [`RealGroupoid::validate`] checks every axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGroupoid {
    pub objects: usize,
    pub arrows: Vec<Arrow>,
    /// Triples `(g, h, gh)`; must cover exactly the pairs with `s(g) = r(h)`.
    pub compose: Vec<(usize, usize, usize)>,
    pub inverse: Vec<usize>,
    /// Identity arrow at each object; derived from idempotents when absent.
    pub units: Option<Vec<usize>>,
    pub involution_objects: Vec<usize>,
    pub involution_arrows: Vec<usize>,
}

/// A validated finite groupoid with an involutive strict automorphism.
///
/// Objects and arrows are dense indices. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealGroupoid {
    objects: usize,
    arrows: Vec<Arrow>,
    compose: Vec<Option<usize>>,
    inverse: Vec<usize>,
    units: Vec<usize>,
    inv_obj: Vec<usize>,
    inv_arr: Vec<usize>,
    /// Arrows grouped by target, each list ascending.
    by_target: Vec<Vec<usize>>,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidGroupoid(msg.into()))
}

impl RealGroupoid {
    /// Checks all groupoid and Real-structure axioms, reporting the first
    /// violation with the offending arrows.
    pub fn validate(raw: RawGroupoid) -> Result<Self> {
        let n = raw.objects;
        let m = raw.arrows.len();
        if n == 0 {
            return invalid("groupoid has no objects");
        }
        for (g, a) in raw.arrows.iter().enumerate() {
            if a.src >= n || a.tgt >= n {
                return invalid(format!("arrow {g} has endpoint out of range"));
            }
        }
        let mut compose = vec![None; m * m];
        for &(g, h, gh) in &raw.compose {
            if g >= m || h >= m || gh >= m {
                return invalid(format!("composition ({g}, {h}) -> {gh} references a missing arrow"));
            }
            if raw.arrows[g].src != raw.arrows[h].tgt {
                return invalid(format!("dangling composition: ({g}, {h}) listed but s({g}) != r({h})"));
            }
            if raw.arrows[gh].src != raw.arrows[h].src || raw.arrows[gh].tgt != raw.arrows[g].tgt {
                return invalid(format!("composite {gh} of ({g}, {h}) has the wrong endpoints"));
            }
            match compose[g * m + h] {
                Some(prev) if prev != gh => {
                    return invalid(format!("composition ({g}, {h}) listed twice with different results"))
                }
                _ => compose[g * m + h] = Some(gh),
            }
        }
        for g in 0..m {
            for h in 0..m {
                if raw.arrows[g].src == raw.arrows[h].tgt && compose[g * m + h].is_none() {
                    return invalid(format!("composition ({g}, {h}) is missing"));
                }
            }
        }
        let comp = |g: usize, h: usize| compose[g * m + h];

        let units = match raw.units {
            Some(u) => {
                if u.len() != n || u.iter().any(|g| *g >= m) {
                    return invalid("unit map has wrong length or range");
                }
                u
            }
            None => {
                let mut u = Vec::with_capacity(n);
                for x in 0..n {
                    let cands: Vec<usize> = (0..m)
                        .filter(|&e| raw.arrows[e].src == x && raw.arrows[e].tgt == x && comp(e, e) == Some(e))
                        .collect();
                    match cands.as_slice() {
                        [e] => u.push(*e),
                        [] => return invalid(format!("object {x} has no identity arrow")),
                        _ => return invalid(format!("object {x} has several idempotent loops {cands:?}")),
                    }
                }
                u
            }
        };
        for x in 0..n {
            let e = units[x];
            if raw.arrows[e].src != x || raw.arrows[e].tgt != x {
                return invalid(format!("unit of object {x} is not a loop at {x}"));
            }
        }
        for g in 0..m {
            let Arrow { src, tgt } = raw.arrows[g];
            if comp(units[tgt], g) != Some(g) || comp(g, units[src]) != Some(g) {
                return invalid(format!("unit law fails for arrow {g}"));
            }
        }
        if raw.inverse.len() != m || raw.inverse.iter().any(|g| *g >= m) {
            return invalid("inverse map has wrong length or range");
        }
        for g in 0..m {
            let gi = raw.inverse[g];
            let Arrow { src, tgt } = raw.arrows[g];
            if comp(g, gi) != Some(units[tgt]) || comp(gi, g) != Some(units[src]) {
                return invalid(format!("inverse law fails for arrow {g} with claimed inverse {gi}"));
            }
        }
        for g in 0..m {
            for h in 0..m {
                let Some(gh) = comp(g, h) else { continue };
                for k in 0..m {
                    let Some(hk) = comp(h, k) else { continue };
                    if comp(gh, k) != comp(g, hk) {
                        return invalid(format!("composition is not associative on ({g}, {h}, {k})"));
                    }
                }
            }
        }

        let (io, ia) = (&raw.involution_objects, &raw.involution_arrows);
        if io.len() != n || io.iter().any(|x| *x >= n) {
            return invalid("object involution has wrong length or range");
        }
        if ia.len() != m || ia.iter().any(|g| *g >= m) {
            return invalid("arrow involution has wrong length or range");
        }
        for x in 0..n {
            if io[io[x]] != x {
                return invalid(format!("object involution is not involutive at object {x}"));
            }
        }
        for g in 0..m {
            if ia[ia[g]] != g {
                return invalid(format!("arrow involution is not involutive at arrow {g}"));
            }
            let (a, b) = (raw.arrows[g], raw.arrows[ia[g]]);
            if b.src != io[a.src] || b.tgt != io[a.tgt] {
                return invalid(format!("involution does not commute with source/range at arrow {g}"));
            }
        }
        for x in 0..n {
            if ia[units[x]] != units[io[x]] {
                return invalid(format!("involution does not preserve the unit at object {x}"));
            }
        }
        for g in 0..m {
            for h in 0..m {
                if let Some(gh) = comp(g, h) {
                    if comp(ia[g], ia[h]) != Some(ia[gh]) {
                        return invalid(format!("involution is not a homomorphism on the pair ({g}, {h})"));
                    }
                }
            }
        }

        let mut by_target = vec![Vec::new(); n];
        for (g, a) in raw.arrows.iter().enumerate() {
            by_target[a.tgt].push(g);
        }
        Ok(RealGroupoid {
            objects: n,
            arrows: raw.arrows,
            compose,
            inverse: raw.inverse,
            units,
            inv_obj: raw.involution_objects,
            inv_arr: raw.involution_arrows,
            by_target,
        })
    }

    /// The groupoid with one object and arrow set `G`.
    pub fn from_group(group: &RealGroup) -> Result<Self> {
        let g = &group.group;
        let n = g.order();
        let mut compose = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                compose.push((a, b, g.mul(a, b)));
            }
        }
        Self::validate(RawGroupoid {
            objects: 1,
            arrows: vec![Arrow { src: 0, tgt: 0 }; n],
            compose,
            inverse: (0..n).map(|a| g.inv(a)).collect(),
            units: Some(vec![g.identity()]),
            involution_objects: vec![0],
            involution_arrows: group.involution.clone(),
        })
    }

    /// The point: one object, one arrow.
    pub fn point() -> Self {
        Self::real_space(vec![0]).expect("the point is a valid groupoid")
    }

    /// A finite Real space viewed as a groupoid with only identity arrows.
    pub fn real_space(involution: Vec<usize>) -> Result<Self> {
        let n = involution.len();
        Self::validate(RawGroupoid {
            objects: n,
            arrows: (0..n).map(|x| Arrow { src: x, tgt: x }).collect(),
            compose: (0..n).map(|x| (x, x, x)).collect(),
            inverse: (0..n).collect(),
            units: Some((0..n).collect()),
            involution_objects: involution.clone(),
            involution_arrows: involution,
        })
    }

    /// The pair groupoid on `involution.len()` points: one arrow `(x, y)` from
    /// `y` to `x` for every pair, index `x * n + y`, involution `(x̄, ȳ)`.
    pub fn pair(involution: Vec<usize>) -> Result<Self> {
        let n = involution.len();
        let idx = |x: usize, y: usize| x * n + y;
        let mut arrows = Vec::with_capacity(n * n);
        let mut inverse = Vec::with_capacity(n * n);
        let mut inv_arr = Vec::with_capacity(n * n);
        let mut compose = Vec::new();
        for x in 0..n {
            for y in 0..n {
                arrows.push(Arrow { src: y, tgt: x });
                inverse.push(idx(y, x));
                inv_arr.push(idx(*involution.get(x).unwrap_or(&x), *involution.get(y).unwrap_or(&y)));
                for z in 0..n {
                    compose.push((idx(x, y), idx(y, z), idx(x, z)));
                }
            }
        }
        if involution.iter().any(|v| *v >= n) {
            return invalid("pair groupoid involution out of range");
        }
        Self::validate(RawGroupoid {
            objects: n,
            arrows,
            compose,
            inverse,
            units: Some((0..n).map(|x| idx(x, x)).collect()),
            involution_objects: involution,
            involution_arrows: inv_arr,
        })
    }

    /// The action groupoid `X ⋊ G` of a right action `x·g = action[x][g]`.
    ///
    /// Arrow `(x, g)` has index `x * |G| + g`, source `x·g`, range `x`, and
    /// `(x, g)(x·g, h) = (x, gh)`; the involution is `(x̄, ḡ)`. Non-free
    /// actions are rejected unless `allow_non_free` is set.
    pub fn orientifold(
        space_involution: Vec<usize>,
        group: &RealGroup,
        action: &[Vec<usize>],
        allow_non_free: bool,
    ) -> Result<Self> {
        let nx = space_involution.len();
        let g = &group.group;
        let ng = g.order();
        if action.len() != nx || action.iter().any(|row| row.len() != ng || row.iter().any(|y| *y >= nx)) {
            return invalid("action table must have one row of length |G| per point");
        }
        if space_involution.iter().any(|v| *v >= nx) {
            return invalid("space involution out of range");
        }
        for x in 0..nx {
            if action[x][g.identity()] != x {
                return invalid(format!("action is not unital at point {x}"));
            }
            for a in 0..ng {
                for b in 0..ng {
                    if action[action[x][a]][b] != action[x][g.mul(a, b)] {
                        return invalid(format!(
                            "action is not a right action at point {x}, elements ({a}, {b})"
                        ));
                    }
                }
                let bar = &space_involution;
                if bar[action[x][a]] != action[bar[x]][group.involution[a]] {
                    return invalid(format!("action is not equivariant at point {x}, element {a}"));
                }
                if !allow_non_free && a != g.identity() && action[x][a] == x {
                    return invalid(format!("action not free: point {x} is fixed by element {a}"));
                }
            }
        }
        let idx = |x: usize, a: usize| x * ng + a;
        let mut arrows = Vec::with_capacity(nx * ng);
        let mut inverse = Vec::with_capacity(nx * ng);
        let mut inv_arr = Vec::with_capacity(nx * ng);
        let mut compose = Vec::new();
        for x in 0..nx {
            for a in 0..ng {
                let xa = action[x][a];
                arrows.push(Arrow { src: xa, tgt: x });
                inverse.push(idx(xa, g.inv(a)));
                inv_arr.push(idx(space_involution[x], group.involution[a]));
                for b in 0..ng {
                    compose.push((idx(x, a), idx(xa, b), idx(x, g.mul(a, b))));
                }
            }
        }
        Self::validate(RawGroupoid {
            objects: nx,
            arrows,
            compose,
            inverse,
            units: Some((0..nx).map(|x| idx(x, g.identity())).collect()),
            involution_objects: space_involution,
            involution_arrows: inv_arr,
        })
    }

    /// `H ⊔ H` with the involution exchanging the two copies. The involution
    /// of `h` is ignored. Copy `c` of object `x` has index `c * |H0| + x`.
    pub fn swap_double(h: &RealGroupoid) -> Result<Self> {
        let (n, m) = (h.objects, h.arrows.len());
        let mut arrows = Vec::with_capacity(2 * m);
        let mut compose = Vec::new();
        let mut inverse = Vec::with_capacity(2 * m);
        for c in 0..2 {
            for a in &h.arrows {
                arrows.push(Arrow {
                    src: c * n + a.src,
                    tgt: c * n + a.tgt,
                });
            }
        }
        for c in 0..2 {
            for g in 0..m {
                inverse.push(c * m + h.inverse[g]);
                for k in 0..m {
                    if let Some(gk) = h.compose(g, k) {
                        compose.push((c * m + g, c * m + k, c * m + gk));
                    }
                }
            }
        }
        Self::validate(RawGroupoid {
            objects: 2 * n,
            arrows,
            compose,
            inverse,
            units: Some((0..2).flat_map(|c| h.units.iter().map(move |u| c * m + u)).collect()),
            involution_objects: (0..2 * n).map(|x| (x + n) % (2 * n)).collect(),
            involution_arrows: (0..2 * m).map(|g| (g + m) % (2 * m)).collect(),
        })
    }

    /// The same groupoid with the identity involution.
    pub fn with_trivial_involution(&self) -> Self {
        let mut g = self.clone();
        g.inv_obj = (0..self.objects).collect();
        g.inv_arr = (0..self.arrows.len()).collect();
        g
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, g: usize) -> Arrow {
        self.arrows[g]
    }

    pub fn src(&self, g: usize) -> usize {
        self.arrows[g].src
    }

    pub fn tgt(&self, g: usize) -> usize {
        self.arrows[g].tgt
    }

    /// `gh`, defined when `s(g) = r(h)`.
    #[inline]
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.arrows.len() + h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn bar_object(&self, x: usize) -> usize {
        self.inv_obj[x]
    }

    pub fn bar_arrow(&self, g: usize) -> usize {
        self.inv_arr[g]
    }

    pub fn arrows_with_target(&self, x: usize) -> &[usize] {
        &self.by_target[x]
    }

    pub fn has_trivial_involution(&self) -> bool {
        self.inv_arr.iter().enumerate().all(|(g, b)| g == *b)
    }

    /// Connected component label of each object (labels are the smallest
    /// object in the component).
    pub fn components(&self) -> Vec<usize> {
        let mut label: Vec<usize> = (0..self.objects).collect();
        fn find(l: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while l[r] != r {
                r = l[r];
            }
            let mut y = x;
            while l[y] != r {
                let next = l[y];
                l[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (p, q) = (find(&mut label, a.src), find(&mut label, a.tgt));
            if p != q {
                let (lo, hi) = (p.min(q), p.max(q));
                label[hi] = lo;
            }
        }
        (0..self.objects).map(|x| find(&mut label, x)).collect()
    }

    /// True when the involution maps every connected component to a
    /// different one, i.e. the groupoid is a swap double of one half.
    pub fn is_swap_double_shaped(&self) -> bool {
        let comp = self.components();
        (0..self.objects).all(|x| comp[x] != comp[self.inv_obj[x]])
    }

    /// Canonical explicit description of this groupoid.
    pub fn to_explicit(&self) -> ExplicitDescription {
        let m = self.arrows.len();
        let mut compose = Vec::new();
        for g in 0..m {
            for h in 0..m {
                if let Some(gh) = self.compose(g, h) {
                    compose.push([g, h, gh]);
                }
            }
        }
        ExplicitDescription {
            objects: ObjectsSpec::Count(self.objects),
            arrows: self
                .arrows
                .iter()
                .enumerate()
                .map(|(id, a)| ExplicitArrow {
                    id,
                    src: a.src,
                    tgt: a.tgt,
                })
                .collect(),
            compose,
            inverse: self.inverse.clone(),
            units: Some(self.units.clone()),
            involution: ExplicitInvolution {
                objects: self.inv_obj.clone(),
                arrows: self.inv_arr.clone(),
            },
        }
    }
}
