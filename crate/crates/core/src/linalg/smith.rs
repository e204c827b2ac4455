use super::matrix::Matrix;
use super::ring::{ExactInt, Overflow};

/// Which transformation matrices to accumulate during reduction.
#[derive(Debug, Clone, Copy, Default)]
pub struct Track {
    pub left: bool,
    pub left_inv: bool,
    pub right: bool,
    pub right_inv: bool,
}

impl Track {
    pub const NONE: Track = Track {
        left: false,
        left_inv: false,
        right: false,
        right_inv: false,
    };
    pub const ALL: Track = Track {
        left: true,
        left_inv: true,
        right: true,
        right_inv: true,
    };
}

/// `left * input * right = diag`, with `diag` diagonal, non-negative and
/// forming a divisor chain.
#[derive(Debug, Clone)]
pub struct SmithForm<T> {
    pub diag: Matrix<T>,
    pub left: Option<Matrix<T>>,
    pub left_inv: Option<Matrix<T>>,
    pub right: Option<Matrix<T>>,
    pub right_inv: Option<Matrix<T>>,
    pub rank: usize,
}

impl<T: ExactInt> SmithForm<T> {
    /// The `min(rows, cols)` diagonal entries.
    pub fn diagonal(&self) -> Vec<T> {
        let n = self.diag.rows().min(self.diag.cols());
        (0..n).map(|i| self.diag.get(i, i).clone()).collect()
    }
}

struct Reducer<T> {
    a: Matrix<T>,
    u: Option<Matrix<T>>,
    u_inv: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
    v_inv: Option<Matrix<T>>,
}

impl<T: ExactInt> Reducer<T> {
    fn add_row(&mut self, target: usize, source: usize, f: &T) -> Result<(), Overflow> {
        self.a.add_row_multiple(target, source, f)?;
        if let Some(u) = self.u.as_mut() {
            u.add_row_multiple(target, source, f)?;
        }
        if let Some(ui) = self.u_inv.as_mut() {
            ui.add_col_multiple(source, target, &f.neg()?)?;
        }
        Ok(())
    }

    fn add_col(&mut self, target: usize, source: usize, f: &T) -> Result<(), Overflow> {
        self.a.add_col_multiple(target, source, f)?;
        if let Some(v) = self.v.as_mut() {
            v.add_col_multiple(target, source, f)?;
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.add_row_multiple(source, target, &f.neg()?)?;
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(i, j);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(i, j);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap_rows(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        self.a.negate_row(i)?;
        if let Some(u) = self.u.as_mut() {
            u.negate_row(i)?;
        }
        if let Some(ui) = self.u_inv.as_mut() {
            ui.negate_col(i)?;
        }
        Ok(())
    }

    /// Smallest non-zero entry (by absolute value) in the block `[t.., t..]`.
    fn min_in_block(&self, t: usize) -> Result<Option<(usize, usize)>, Overflow> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let av = v.abs()?;
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => av < *b,
                };
                if better {
                    let one = av.is_one();
                    best = Some((i, j, av));
                    if one {
                        return Ok(best.map(|(i, j, _)| (i, j)));
                    }
                }
            }
        }
        Ok(best.map(|(i, j, _)| (i, j)))
    }

    /// Smallest non-zero entry in row `t` / column `t` beyond the pivot.
    fn min_in_cross(&self, t: usize) -> Result<Option<(usize, usize)>, Overflow> {
        let mut best: Option<(usize, usize, T)> = None;
        let mut consider = |i: usize, j: usize, v: &T| -> Result<(), Overflow> {
            if v.is_zero() {
                return Ok(());
            }
            let av = v.abs()?;
            if best.as_ref().is_none_or(|(_, _, b)| av < *b) {
                best = Some((i, j, av));
            }
            Ok(())
        };
        consider(t, t, self.a.get(t, t))?;
        for i in t + 1..self.a.rows() {
            consider(i, t, self.a.get(i, t))?;
        }
        for j in t + 1..self.a.cols() {
            consider(t, j, self.a.get(t, j))?;
        }
        Ok(best.map(|(i, j, _)| (i, j)))
    }

    fn reduce(&mut self) -> Result<usize, Overflow> {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.min_in_block(t)? else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..rows {
                    let e = self.a.get(i, t).clone();
                    if e.is_zero() {
                        continue;
                    }
                    let q = e.quot(&pivot)?;
                    self.add_row(i, t, &q.neg()?)?;
                    if !self.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    let e = self.a.get(t, j).clone();
                    if e.is_zero() {
                        continue;
                    }
                    let q = e.quot(&pivot)?;
                    self.add_col(j, t, &q.neg()?)?;
                    if !self.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    if let Some((i, j)) = self.min_in_cross(t)? {
                        self.swap_rows(t, i);
                        self.swap_cols(t, j);
                    }
                    continue;
                }
                // Enforce the divisor chain on the remaining block.
                let mut offender = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !pivot.divides(self.a.get(i, j))? {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => self.add_row(t, i, &T::one())?,
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t)?;
            }
            t += 1;
        }
        Ok(t)
    }
}

/// Smith normal form of an integer matrix.
///
/// Returns `Overflow` if `T` is a fixed-width type and some intermediate
/// entry does not fit; use [`smith_normal_form_exact`] for a fallback to
/// arbitrary precision.
pub fn smith_normal_form<T: ExactInt>(m: &Matrix<T>, track: Track) -> Result<SmithForm<T>, Overflow> {
    let (r, c) = (m.rows(), m.cols());
    let mut red = Reducer {
        a: m.clone(),
        u: track.left.then(|| Matrix::identity(r)),
        u_inv: track.left_inv.then(|| Matrix::identity(r)),
        v: track.right.then(|| Matrix::identity(c)),
        v_inv: track.right_inv.then(|| Matrix::identity(c)),
    };
    let rank = red.reduce()?;
    Ok(SmithForm {
        diag: red.a,
        left: red.u,
        left_inv: red.u_inv,
        right: red.v,
        right_inv: red.v_inv,
        rank,
    })
}

/// Smith normal form with all transforms, computed in `i64` when possible and
/// in arbitrary precision otherwise.
pub fn smith_normal_form_exact(m: &Matrix<i64>) -> SmithForm<num_bigint::BigInt> {
    let big = |s: SmithForm<i64>| -> SmithForm<num_bigint::BigInt> {
        let conv = |x: Matrix<i64>| x.convert().expect("widening never overflows");
        SmithForm {
            diag: conv(s.diag),
            left: s.left.map(conv),
            left_inv: s.left_inv.map(conv),
            right: s.right.map(conv),
            right_inv: s.right_inv.map(conv),
            rank: s.rank,
        }
    };
    match smith_normal_form(m, Track::ALL) {
        Ok(s) => big(s),
        Err(Overflow) => {
            let wide: Matrix<num_bigint::BigInt> = m.convert().expect("widening never overflows");
            smith_normal_form(&wide, Track::ALL).expect("BigInt arithmetic does not overflow")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check(input: &Matrix<i64>, s: &SmithForm<i64>) {
        let u = s.left.as_ref().unwrap();
        let v = s.right.as_ref().unwrap();
        assert_eq!(u.mul(input).unwrap().mul(v).unwrap(), s.diag);
        let ui = s.left_inv.as_ref().unwrap();
        let vi = s.right_inv.as_ref().unwrap();
        assert_eq!(u.mul(ui).unwrap(), Matrix::identity(u.rows()));
        assert_eq!(v.mul(vi).unwrap(), Matrix::identity(v.rows()));
        let d = s.diagonal();
        for i in 0..d.len() {
            assert!(d[i] >= 0);
            if i + 1 < d.len() && d[i] != 0 {
                assert_eq!(d[i + 1] % d[i], 0, "divisor chain broken: {:?}", d);
            }
            if d[i] == 0 {
                assert!(d[i..].iter().all(|x| *x == 0));
            }
        }
        for i in 0..s.diag.rows() {
            for j in 0..s.diag.cols() {
                if i != j {
                    assert_eq!(*s.diag.get(i, j), 0);
                }
            }
        }
    }

    fn check_big(input: &Matrix<BigInt>, s: &SmithForm<BigInt>) {
        let zero = BigInt::from(0);
        let u = s.left.as_ref().unwrap();
        let v = s.right.as_ref().unwrap();
        assert_eq!(u.mul(input).unwrap().mul(v).unwrap(), s.diag);
        assert_eq!(u.mul(s.left_inv.as_ref().unwrap()).unwrap(), Matrix::identity(u.rows()));
        assert_eq!(
            v.mul(s.right_inv.as_ref().unwrap()).unwrap(),
            Matrix::identity(v.rows())
        );
        let d = s.diagonal();
        for i in 0..d.len() {
            assert!(d[i] >= zero);
            if i + 1 < d.len() && d[i] != zero {
                assert_eq!(&d[i + 1] % &d[i], zero, "divisor chain broken: {:?}", d);
            }
        }
        for i in 0..s.diag.rows() {
            for j in 0..s.diag.cols() {
                if i != j {
                    assert_eq!(*s.diag.get(i, j), zero);
                }
            }
        }
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&a, Track::ALL).unwrap();
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![1, 6]);
    }

    #[test]
    fn zero_and_identity() {
        let z = Matrix::<i64>::zeros(3, 2);
        let s = smith_normal_form(&z, Track::ALL).unwrap();
        assert!(s.diag.is_zero());
        assert_eq!(s.rank, 0);
        let id = Matrix::<i64>::identity(4);
        let s = smith_normal_form(&id, Track::ALL).unwrap();
        assert_eq!(s.diag, id);
    }

    #[test]
    fn classic_example() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, Track::ALL).unwrap();
        check(&a, &s);
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let a = m(&[&[big, big - 1], &[big - 3, big]]);
        let s = smith_normal_form_exact(&a);
        let u = s.left.as_ref().unwrap();
        let v = s.right.as_ref().unwrap();
        let wide: Matrix<BigInt> = a.convert().unwrap();
        assert_eq!(u.mul(&wide).unwrap().mul(v).unwrap(), s.diag);
    }

    proptest! {
        #[test]
        fn random_matrices_reduce(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i64..10, 36)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            let a = Matrix::from_rows(&data);
            let s = smith_normal_form_exact(&a);
            check_big(&a.convert().unwrap(), &s);
        }
    }
}
