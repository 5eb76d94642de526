//! Exact rational linear programming: a two-phase dense tableau simplex with
//! Bland's anti-cycling rule.

use num_traits::{One, Signed, Zero};

use crate::rational::{QVec, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: QVec,
    pub rel: Relation,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints.
/// Variables are nonnegative unless flagged in `free`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: QVec,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: QVec },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Rational, &QVec)> {
        match self {
            LpOutcome::Optimal { value, x } => Some((value, x)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            free: vec![false; num_vars],
        }
    }

    pub fn maximize(mut self, objective: QVec) -> Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn minimize(self, objective: QVec) -> Self {
        let neg = objective.into_iter().map(|c| -c).collect();
        self.maximize(neg)
    }

    pub fn with_free(mut self, var: usize) -> Self {
        self.free[var] = true;
        self
    }

    pub fn all_free(mut self) -> Self {
        self.free = vec![true; self.num_vars];
        self
    }

    pub fn add(&mut self, coeffs: QVec, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: split variables, then slack/surplus, then artificials.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut n = 0;
        for &f in &self.free {
            if f {
                col_of.push((n, Some(n + 1)));
                n += 2;
            } else {
                col_of.push((n, None));
                n += 1;
            }
        }
        let structural = n;
        let m = self.constraints.len();

        let mut rows: Vec<QVec> = Vec::with_capacity(m);
        let mut rels = Vec::with_capacity(m);
        for c in &self.constraints {
            let mut row = vec![Rational::zero(); structural];
            for (v, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (p, q) = col_of[v];
                row[p] = a.clone();
                if let Some(q) = q {
                    row[q] = -a.clone();
                }
            }
            let mut rhs = c.rhs.clone();
            let mut rel = c.rel;
            if rhs.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            row.push(rhs);
            rows.push(row);
            rels.push(rel);
        }

        let slack_count = rels.iter().filter(|r| **r != Relation::Eq).count();
        let art_count = rels.iter().filter(|r| **r != Relation::Le).count();
        let width = structural + slack_count + art_count;
        let art_start = structural + slack_count;
        let mut a: Vec<QVec> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut t) = (structural, art_start);
        for (mut row, rel) in rows.into_iter().zip(rels) {
            let rhs = row.pop().unwrap();
            row.resize(width + 1, Rational::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Rational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rational::one();
                    s += 1;
                    row[t] = Rational::one();
                    basis.push(t);
                    t += 1;
                }
                Relation::Eq => {
                    row[t] = Rational::one();
                    basis.push(t);
                    t += 1;
                }
            }
            a.push(row);
        }

        let mut tab = Tableau { a, basis, width };

        if art_count > 0 {
            let mut c1 = vec![Rational::zero(); width];
            for c in c1.iter_mut().skip(art_start) {
                *c = -Rational::one();
            }
            let allowed = vec![true; width];
            match tab.run(&c1, &allowed) {
                Phase::Optimal(v) if v.is_negative() => return LpOutcome::Infeasible,
                Phase::Optimal(_) => {}
                Phase::Unbounded => unreachable!("phase one is bounded"),
            }
            tab.drive_out(art_start);
        }

        let mut c2 = vec![Rational::zero(); width];
        for (v, obj) in self.objective.iter().enumerate() {
            let (p, q) = col_of[v];
            c2[p] = obj.clone();
            if let Some(q) = q {
                c2[q] = -obj.clone();
            }
        }
        let allowed: Vec<bool> = (0..width).map(|j| j < art_start).collect();
        match tab.run(&c2, &allowed) {
            Phase::Unbounded => LpOutcome::Unbounded,
            Phase::Optimal(value) => {
                let mut raw = vec![Rational::zero(); width];
                for (i, &b) in tab.basis.iter().enumerate() {
                    raw[b] = tab.a[i][width].clone();
                }
                let x = col_of
                    .iter()
                    .map(|&(p, q)| match q {
                        Some(q) => &raw[p] - &raw[q],
                        None => raw[p].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { value, x }
            }
        }
    }
}

enum Phase {
    Optimal(Rational),
    Unbounded,
}

struct Tableau {
    a: Vec<QVec>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    /// Runs primal simplex maximizing `c · x` using only `allowed` columns.
    fn run(&mut self, c: &[Rational], allowed: &[bool]) -> Phase {
        let w = self.width;
        // Reduced-cost row: z_j - c_j, with the current objective value in the last slot.
        let mut obj: QVec = c.iter().map(|x| -x.clone()).collect();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if !c[b].is_zero() {
                let cb = c[b].clone();
                for (o, x) in obj.iter_mut().zip(&self.a[i]) {
                    if !x.is_zero() {
                        *o += &cb * x;
                    }
                }
            }
        }
        loop {
            let Some(enter) = (0..w).find(|&j| allowed[j] && obj[j].is_negative()) else {
                return Phase::Optimal(obj[w].clone());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[w] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Phase::Unbounded;
            };
            self.pivot(r, enter, &mut obj);
        }
    }

    fn pivot(&mut self, r: usize, col: usize, obj: &mut QVec) {
        let inv = Rational::one() / &self.a[r][col];
        for x in self.a[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.a[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut QVec| {
            if row[col].is_zero() {
                return;
            }
            let f = row[col].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        };
        for (i, row) in self.a.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = col;
    }

    /// After phase one, pivots artificial columns out of the basis, deleting redundant rows.
    fn drive_out(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= art_start {
                match (0..art_start).find(|&j| !self.a[i][j].is_zero()) {
                    Some(j) => {
                        let mut dummy = vec![Rational::zero(); self.width + 1];
                        self.pivot(i, j, &mut dummy);
                    }
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> QVec {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y; x <= 4; 2y <= 12; 3x + 2y <= 18  => 36 at (2, 6)
        let mut lp = LinearProgram::new(2).maximize(q(&[3, 5]));
        lp.add(q(&[1, 0]), Relation::Le, int(4));
        lp.add(q(&[0, 2]), Relation::Le, int(12));
        lp.add(q(&[3, 2]), Relation::Le, int(18));
        assert_eq!(
            lp.solve(),
            LpOutcome::Optimal {
                value: int(36),
                x: q(&[2, 6])
            }
        );
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(q(&[1]), Relation::Ge, int(2));
        lp.add(q(&[1]), Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2).maximize(q(&[1, 0]));
        lp.add(q(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x subject to x + y = 1, y <= 3, x free  => x = -2
        let mut lp = LinearProgram::new(2).minimize(q(&[1, 0])).with_free(0);
        lp.add(q(&[1, 1]), Relation::Eq, int(1));
        lp.add(q(&[0, 1]), Relation::Le, int(3));
        let (v, x) = match lp.solve() {
            LpOutcome::Optimal { value, x } => (value, x),
            o => panic!("{o:?}"),
        };
        assert_eq!(v, int(2));
        assert_eq!(x, q(&[-2, 3]));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2).maximize(q(&[1, 1]));
        lp.add(q(&[1, 1]), Relation::Eq, ratio(1, 2));
        lp.add(q(&[2, 2]), Relation::Eq, int(1));
        let out = lp.solve();
        assert_eq!(out.optimal().unwrap().0, &ratio(1, 2));
    }
}
