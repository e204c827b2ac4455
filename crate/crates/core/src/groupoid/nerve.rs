use std::collections::HashMap;

use super::RealGroupoid;
use crate::error::{Error, Result};

/// The composable `n`-strings of a groupoid with the induced involution.
///
/// Level 0 lists the objects as one-element strings `[x]`; level `n ≥ 1`
/// lists strings `[g1, …, gn]` with `s(g_i) = r(g_{i+1})`, in lexicographic
/// order of arrow indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveLevel {
    pub degree: usize,
    pub simplices: Vec<Vec<usize>>,
    pub involution: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl NerveLevel {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.involution[i] == i
    }
}

impl RealGroupoid {
    /// All composable `n`-strings.
    pub fn nerve(&self, n: usize) -> NerveLevel {
        let simplices: Vec<Vec<usize>> = if n == 0 {
            (0..self.object_count()).map(|x| vec![x]).collect()
        } else {
            let mut out = Vec::new();
            let mut stack = Vec::with_capacity(n);
            self.extend_strings(n, &mut stack, &mut out);
            out
        };
        let index: HashMap<Vec<usize>, usize> = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let involution = simplices
            .iter()
            .map(|s| {
                let bar: Vec<usize> = if n == 0 {
                    vec![self.bar_object(s[0])]
                } else {
                    s.iter().map(|&g| self.bar_arrow(g)).collect()
                };
                index[&bar]
            })
            .collect();
        NerveLevel {
            degree: n,
            simplices,
            involution,
            index,
        }
    }

    fn extend_strings(&self, n: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        let candidates: Vec<usize> = match stack.last() {
            None => (0..self.arrow_count()).collect(),
            Some(&g) => self.arrows_with_target(self.src(g)).to_vec(),
        };
        for h in candidates {
            stack.push(h);
            self.extend_strings(n, stack, out);
            stack.pop();
        }
    }

    /// Face `k` of an `(n+1)`-simplex, as an `n`-simplex.
    ///
    /// For `n ≥ 1`: `k = 0` drops `g1`, `0 < k < n+1` composes `g_k g_{k+1}`,
    /// `k = n+1` drops `g_{n+1}`. For `n = 0`: face 0 of an arrow is its
    /// source, face 1 its range.
    pub fn face_of(&self, simplex: &[usize], k: usize) -> Result<Vec<usize>> {
        let len = simplex.len();
        if len == 0 {
            return Err(Error::Mismatch("faces of a 0-simplex are undefined".into()));
        }
        if k > len {
            return Err(Error::Mismatch(format!(
                "face index {k} out of range for a {len}-simplex"
            )));
        }
        if len == 1 {
            let g = simplex[0];
            return Ok(vec![if k == 0 { self.src(g) } else { self.tgt(g) }]);
        }
        let mut out = Vec::with_capacity(len - 1);
        if k == 0 {
            out.extend_from_slice(&simplex[1..]);
        } else if k == len {
            out.extend_from_slice(&simplex[..len - 1]);
        } else {
            out.extend_from_slice(&simplex[..k - 1]);
            let gk = self
                .compose(simplex[k - 1], simplex[k])
                .ok_or_else(|| Error::Mismatch("simplex is not composable".into()))?;
            out.push(gk);
            out.extend_from_slice(&simplex[k + 1..]);
        }
        Ok(out)
    }

    /// The face map `k` from level `n+1` to level `n`, as indices.
    pub fn face(&self, n: usize, k: usize) -> Result<Vec<usize>> {
        if k > n + 1 {
            return Err(Error::Mismatch(format!("face index {k} out of range for degree {n}")));
        }
        let upper = self.nerve(n + 1);
        let lower = self.nerve(n);
        upper
            .simplices
            .iter()
            .map(|s| {
                let f = self.face_of(s, k)?;
                Ok(lower.index_of(&f).expect("faces of composable strings are composable"))
            })
            .collect()
    }
}

/// Nerve levels `0..=top` with all face maps precomputed.
#[derive(Debug, Clone)]
pub struct Nerve {
    levels: Vec<NerveLevel>,
    /// `faces[n][k][i]`: index in level `n` of face `k` of simplex `i` of level `n+1`.
    faces: Vec<Vec<Vec<usize>>>,
}

impl Nerve {
    pub fn new(groupoid: &RealGroupoid, top: usize) -> Self {
        let levels: Vec<NerveLevel> = (0..=top).map(|n| groupoid.nerve(n)).collect();
        let faces = (0..top)
            .map(|n| {
                (0..=n + 1)
                    .map(|k| {
                        levels[n + 1]
                            .simplices
                            .iter()
                            .map(|s| {
                                let f = groupoid.face_of(s, k).expect("valid simplex");
                                levels[n].index_of(&f).expect("face lies in the nerve")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Nerve { levels, faces }
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &NerveLevel {
        &self.levels[n]
    }

    /// Face `k` of simplex `i` of level `n + 1`.
    #[inline]
    pub fn face(&self, n: usize, k: usize, i: usize) -> usize {
        self.faces[n][k][i]
    }

    pub fn face_map(&self, n: usize, k: usize) -> &[usize] {
        &self.faces[n][k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{FiniteGroup, RealGroup};

    fn samples() -> Vec<RealGroupoid> {
        let z = |n| FiniteGroup::cyclic(n).unwrap();
        vec![
            RealGroupoid::point(),
            RealGroupoid::from_group(&RealGroup::trivial(z(2))).unwrap(),
            RealGroupoid::from_group(&RealGroup::inversion(z(4)).unwrap()).unwrap(),
            RealGroupoid::pair(vec![1, 0]).unwrap(),
            RealGroupoid::swap_double(&RealGroupoid::from_group(&RealGroup::trivial(z(2))).unwrap()).unwrap(),
            RealGroupoid::from_group(&RealGroup::conjugation(FiniteGroup::dihedral(3).unwrap(), 3).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn level_sizes() {
        let z3 = RealGroupoid::from_group(&RealGroup::trivial(FiniteGroup::cyclic(3).unwrap())).unwrap();
        for n in 0..4 {
            assert_eq!(z3.nerve(n).len(), 3usize.pow(n as u32));
            assert_eq!(RealGroupoid::point().nerve(n).len(), 1);
        }
        assert_eq!(RealGroupoid::pair(vec![0, 1]).unwrap().nerve(2).len(), 8);
        let dd = RealGroupoid::swap_double(&RealGroupoid::swap_double(&RealGroupoid::point()).unwrap()).unwrap();
        for n in 0..4 {
            // units only: one string per object
            assert_eq!(dd.nerve(n).len(), 4);
        }
    }

    #[test]
    fn low_levels_are_objects_and_arrows() {
        for g in samples() {
            assert_eq!(g.nerve(0).len(), g.object_count());
            assert_eq!(g.nerve(1).len(), g.arrow_count());
            assert!((0..g.arrow_count()).all(|a| g.nerve(1).simplices[a] == vec![a]));
        }
    }

    #[test]
    fn z2_face_composes() {
        let g = RealGroupoid::from_group(&RealGroup::trivial(FiniteGroup::cyclic(2).unwrap())).unwrap();
        assert_eq!(g.face_of(&[1, 1], 1).unwrap(), vec![0]);
        assert_eq!(g.face_of(&[1, 0], 0).unwrap(), vec![0]);
        assert_eq!(g.face_of(&[1, 0], 2).unwrap(), vec![1]);
        assert!(g.face(1, 3).is_err());
    }

    #[test]
    fn arrow_faces_are_source_and_range() {
        let g = RealGroupoid::pair(vec![0, 1]).unwrap();
        for a in 0..g.arrow_count() {
            assert_eq!(g.face_of(&[a], 0).unwrap(), vec![g.src(a)]);
            assert_eq!(g.face_of(&[a], 1).unwrap(), vec![g.tgt(a)]);
        }
    }

    #[test]
    fn simplicial_identities_up_to_degree_four() {
        for g in samples() {
            let nerve = Nerve::new(&g, 4);
            for n in 0..3 {
                // level n+2 -> n+1 -> n
                for i in 0..nerve.level(n + 2).len() {
                    for k in 0..=n + 2 {
                        for j in 0..k {
                            let lhs = nerve.face(n, j, nerve.face(n + 1, k, i));
                            let rhs = nerve.face(n, k - 1, nerve.face(n + 1, j, i));
                            assert_eq!(lhs, rhs, "d_{j} d_{k} != d_{} d_{j}", k - 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn faces_commute_with_involution() {
        for g in samples() {
            let nerve = Nerve::new(&g, 4);
            for n in 0..4 {
                let up = nerve.level(n + 1);
                let down = nerve.level(n);
                for k in 0..=n + 1 {
                    for i in 0..up.len() {
                        assert_eq!(nerve.face(n, k, up.involution[i]), down.involution[nerve.face(n, k, i)]);
                    }
                }
                for i in 0..up.len() {
                    assert_eq!(up.involution[up.involution[i]], i);
                }
            }
        }
    }
}
