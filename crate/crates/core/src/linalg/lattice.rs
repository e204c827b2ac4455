//! Sublattices of `Z^n` and subquotients `K / M` of them.

use super::matrix::Matrix;
use super::ring::{ExactInt, Overflow};
use num_rational::Ratio;

use super::smith::{smith_normal_form, Track};

/// A sublattice of `Z^n` with a basis in column echelon (Hermite) form:
/// basis vector `j` vanishes above row `pivots[j]`, has a positive entry
/// there, and every later vector's entry in that row is reduced into
/// `[0, pivot)`.
#[derive(Debug, Clone)]
pub struct Lattice<T> {
    ambient: usize,
    /// Basis vectors as columns.
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

/// `floor(x / d)` for `d > 0`.
fn floor_div<T: ExactInt>(x: &T, d: &T) -> Result<T, Overflow> {
    x.sub(&x.rem_euclid(d)?)?.quot(d)
}

/// `a -= f * b`, entrywise from row `from`.
fn sub_multiple<T: ExactInt>(a: &mut [T], b: &[T], f: &T, from: usize) -> Result<(), Overflow> {
    if f.is_zero() {
        return Ok(());
    }
    for (x, y) in a[from..].iter_mut().zip(&b[from..]) {
        if !y.is_zero() {
            *x = x.sub(&f.mul(y)?)?;
        }
    }
    Ok(())
}

impl<T: ExactInt> Lattice<T> {
    /// The lattice spanned by the columns of `generators`.
    pub fn span(generators: &Matrix<T>) -> Result<Self, Overflow> {
        let n = generators.rows();
        let mut work: Vec<Vec<T>> = generators
            .columns()
            .into_iter()
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .collect();
        let mut cols: Vec<Vec<T>> = Vec::new();
        let mut pivots = Vec::new();
        for row in 0..n {
            if work.is_empty() {
                break;
            }
            // Euclid on the entries in this row.
            loop {
                let mut best: Option<(usize, T)> = None;
                for (i, c) in work.iter().enumerate() {
                    if c[row].is_zero() {
                        continue;
                    }
                    let a = c[row].abs()?;
                    if best.as_ref().is_none_or(|(_, b)| a < *b) {
                        best = Some((i, a));
                    }
                }
                let Some((p, _)) = best else { break };
                let pivot = work[p].clone();
                let mut others = false;
                for (i, c) in work.iter_mut().enumerate() {
                    if i == p || c[row].is_zero() {
                        continue;
                    }
                    let q = c[row].quot(&pivot[row])?;
                    sub_multiple(c, &pivot, &q, row)?;
                    others |= !c[row].is_zero();
                }
                work.retain(|c| c.iter().any(|x| !x.is_zero()));
                if !others {
                    let i = work.iter().position(|c| *c == pivot).expect("pivot column kept");
                    let mut v = work.swap_remove(i);
                    if v[row].is_negative() {
                        for x in v.iter_mut() {
                            *x = x.neg()?;
                        }
                    }
                    cols.push(v);
                    pivots.push(row);
                    break;
                }
            }
        }
        // Size reduction against later pivots.
        for j in (0..cols.len()).rev() {
            for k in j + 1..cols.len() {
                let (pk, d) = (pivots[k], cols[k][pivots[k]].clone());
                let q = floor_div(&cols[j][pk], &d)?;
                let bk = cols[k].clone();
                sub_multiple(&mut cols[j], &bk, &q, pk)?;
            }
        }
        Ok(Lattice {
            ambient: n,
            basis: Matrix::from_columns(n, &cols),
            pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    /// Row of the leading entry of each basis vector.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the lattice basis, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[T]) -> Result<Option<Vec<T>>, Overflow> {
        let mut w = v.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (j, &p) in self.pivots.iter().enumerate() {
            let d = self.basis.get(p, j);
            if !d.divides(&w[p])? {
                return Ok(None);
            }
            let c = w[p].quot(d)?;
            sub_multiple(&mut w, &self.basis.column(j), &c, p)?;
            y.push(c);
        }
        Ok(w.iter().all(|x| x.is_zero()).then_some(y))
    }

    pub fn contains(&self, v: &[T]) -> Result<bool, Overflow> {
        Ok(self.coords(v)?.is_some())
    }

    pub fn convert<S: ExactInt>(&self) -> Result<Lattice<S>, Overflow> {
        Ok(Lattice {
            ambient: self.ambient,
            basis: self.basis.convert()?,
            pivots: self.pivots.clone(),
        })
    }
}

impl Lattice<i64> {
    /// A rational functional `w` on the ambient space, supported on the
    /// pivot rows, with `w · basis_j = values[j]`.
    pub fn extend_functional(&self, values: &[Ratio<i64>]) -> Vec<Ratio<i64>> {
        let mut w = vec![Ratio::from_integer(0); self.ambient];
        for j in (0..self.rank()).rev() {
            let mut acc = values[j];
            for &pk in &self.pivots[j + 1..] {
                acc -= w[pk] * Ratio::from_integer(*self.basis.get(pk, j));
            }
            let p = self.pivots[j];
            w[p] = acc / Ratio::from_integer(*self.basis.get(p, j));
        }
        w
    }
}

/// Basis of the integer kernel of `m` (as columns).
pub fn kernel<T: ExactInt>(m: &Matrix<T>) -> Result<Matrix<T>, Overflow> {
    let s = smith_normal_form(
        m,
        Track {
            right: true,
            ..Track::NONE
        },
    )?;
    let v = s.right.expect("tracked");
    Ok(v.select_columns(s.rank..m.cols()))
}

/// `{ x in Z^n : map * x in span(relations) }` where `map` is `m x n` and
/// `relations` is `m x r`.
pub fn preimage<T: ExactInt>(map: &Matrix<T>, relations: &Matrix<T>) -> Result<Lattice<T>, Overflow> {
    let n = map.cols();
    let joint = map.hcat(relations);
    let ker = kernel(&joint)?;
    let gens = ker.top_rows(n);
    Lattice::span(&gens)
}

/// The subquotient `K / M` of `Z^n`, with `M ⊆ K`, decomposed into cyclic
/// factors. All data narrowed to `i64`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub cycles: Lattice<i64>,
    /// `t = change * y` maps lattice coordinates to cyclic coordinates.
    pub change: Matrix<i64>,
    /// Inverse of `change`.
    pub change_inv: Matrix<i64>,
    /// Order of each cyclic coordinate; `0` means infinite cyclic.
    pub orders: Vec<i64>,
}

/// Computes `K / M` for a lattice `K` and generators `m_gens` (columns) of
/// a sublattice `M ⊆ K`. Panics if a generator is outside `K`, which would be
/// a broken complex.
pub fn subquotient<T: ExactInt>(k: &Lattice<T>, m_gens: &Matrix<T>) -> Result<Subquotient, Overflow> {
    let rank = k.rank();
    let mut cols = Vec::with_capacity(m_gens.cols());
    for j in 0..m_gens.cols() {
        let c = k
            .coords(&m_gens.column(j))?
            .expect("relation generator lies outside the cycle lattice");
        cols.push(c);
    }
    let coord = Lattice::span(&Matrix::from_columns(rank, &cols))?;
    let s = smith_normal_form(
        coord.basis(),
        Track {
            left: true,
            left_inv: true,
            ..Track::NONE
        },
    )?;
    let mut orders = vec![T::zero(); rank];
    for (i, o) in orders.iter_mut().enumerate().take(s.rank) {
        *o = s.diag.get(i, i).clone();
    }
    Ok(Subquotient {
        cycles: k.convert()?,
        change: s.left.expect("tracked").convert()?,
        change_inv: s.left_inv.expect("tracked").convert()?,
        orders: orders
            .iter()
            .map(|o| o.to_i64().ok_or(Overflow))
            .collect::<Result<_, _>>()?,
    })
}

impl Subquotient {
    /// Orders of the non-trivial cyclic factors, `0` for infinite ones.
    pub fn factor_orders(&self) -> Vec<i64> {
        self.orders.iter().copied().filter(|o| *o != 1).collect()
    }

    fn factor_indices(&self) -> Vec<usize> {
        (0..self.orders.len()).filter(|&i| self.orders[i] != 1).collect()
    }

    /// Class coordinates of `v ∈ K`, one per non-trivial cyclic factor,
    /// reduced into `[0, order)` for finite factors.
    pub fn class_of(&self, v: &[i64]) -> Result<Option<Vec<i64>>, Overflow> {
        let Some(y) = self.cycles.coords(v)? else {
            return Ok(None);
        };
        let t = self.change.mul_vec(&y)?;
        Ok(Some(
            self.factor_indices()
                .into_iter()
                .map(|i| {
                    let o = self.orders[i];
                    if o == 0 {
                        t[i]
                    } else {
                        t[i].rem_euclid(o)
                    }
                })
                .collect(),
        ))
    }

    /// A representative in `K` of the class with the given factor coordinates.
    pub fn representative(&self, class: &[i64]) -> Result<Vec<i64>, Overflow> {
        let idx = self.factor_indices();
        assert_eq!(idx.len(), class.len(), "class coordinate length mismatch");
        let mut t = vec![0i64; self.orders.len()];
        for (i, c) in idx.into_iter().zip(class) {
            t[i] = *c;
        }
        let y = self.change_inv.mul_vec(&t)?;
        self.cycles.basis().mul_vec(&y)
    }

    /// Representative of the `i`-th non-trivial generator.
    pub fn generator(&self, i: usize) -> Result<Vec<i64>, Overflow> {
        let mut class = vec![0; self.factor_orders().len()];
        class[i] = 1;
        self.representative(&class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_row() {
        let m = Matrix::from_rows(&[vec![1i64, 1, 1]]);
        let k = kernel(&m).unwrap();
        assert_eq!(k.cols(), 2);
        for c in k.columns() {
            assert_eq!(m.mul_vec(&c).unwrap(), vec![0]);
        }
    }

    #[test]
    fn preimage_mod_relations() {
        // x in Z with 2x ≡ 0 mod 4  ->  2Z
        let f = Matrix::from_rows(&[vec![2i64]]);
        let r = Matrix::from_rows(&[vec![4i64]]);
        let p = preimage(&f, &r).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.basis().get(0, 0).abs(), Ok(2));
    }

    #[test]
    fn hermite_basis_is_reduced() {
        let l = Lattice::span(&Matrix::from_rows(&[vec![4i64, 6, 10], vec![7, 1, 8], vec![0, 3, 3]])).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.pivots(), &[0, 1]);
        let b = l.basis();
        assert!(*b.get(1, 0) >= 0 && b.get(1, 0) < b.get(1, 1));
        for v in [[4i64, 7, 0], [6, 1, 3], [10, 8, 3]] {
            assert!(l.contains(&v).unwrap());
        }
        let w = l.extend_functional(&[Ratio::new(1, 2), Ratio::new(1, 3)]);
        for (j, expected) in [Ratio::new(1, 2), Ratio::new(1, 3)].into_iter().enumerate() {
            let got: Ratio<i64> = (0..3).map(|i| w[i] * Ratio::from_integer(*b.get(i, j))).sum();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn subquotient_z_mod_6() {
        let k = Lattice::span(&Matrix::<i64>::identity(1)).unwrap();
        let m = Matrix::from_rows(&[vec![6i64, 4]]);
        let q = subquotient(&k, &m).unwrap();
        assert_eq!(q.factor_orders(), vec![2]);
        assert_eq!(q.class_of(&[3]).unwrap(), Some(vec![1]));
        let r = q.representative(&[1]).unwrap();
        assert_eq!(q.class_of(&r).unwrap(), Some(vec![1]));
    }

    #[test]
    fn coords_rejects_outside_points() {
        let l = Lattice::span(&Matrix::from_rows(&[vec![2i64, 0], vec![0, 3]])).unwrap();
        assert!(l.contains(&[4, 9]).unwrap());
        assert!(!l.contains(&[1, 3]).unwrap());
    }
}
