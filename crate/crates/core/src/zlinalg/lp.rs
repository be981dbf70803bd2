//! Exact linear feasibility and minimization by Fourier–Motzkin elimination.
//!
//! Every derived constraint carries its multipliers over the input
//! constraints, so an infeasible system always comes with a Farkas witness
//! and a feasible one with a point found by back-substitution.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use super::rational::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

/// `coeffs · x  rel  rhs`
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds_at(&self, x: &[Rat]) -> bool {
        let lhs: Rat = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.rel {
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Gt => lhs > self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rat>),
    /// Multipliers over the input constraints (nonnegative on inequalities)
    /// whose combination reads `0 rel c` with a false right-hand side.
    Infeasible(Vec<Rat>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Checks a Farkas witness against the constraints it refutes.
pub fn verify_farkas(n: usize, constraints: &[Constraint], y: &[Rat]) -> bool {
    if y.len() != constraints.len() {
        return false;
    }
    let mut combo = vec![Rat::zero(); n];
    let mut rhs = Rat::zero();
    let mut rel = Relation::Eq;
    for (c, yi) in constraints.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        match c.rel {
            Relation::Eq => {}
            Relation::Ge | Relation::Gt if yi.is_negative() => return false,
            Relation::Ge => {
                if rel == Relation::Eq {
                    rel = Relation::Ge;
                }
            }
            Relation::Gt => rel = Relation::Gt,
        }
        for (acc, a) in combo.iter_mut().zip(&c.coeffs) {
            *acc += yi * a;
        }
        rhs += yi * &c.rhs;
    }
    if combo.iter().any(|v| !v.is_zero()) {
        return false;
    }
    match rel {
        Relation::Eq => !rhs.is_zero(),
        Relation::Ge => rhs.is_positive(),
        Relation::Gt => !rhs.is_negative(),
    }
}

#[derive(Clone, Debug)]
struct Row {
    a: Vec<Rat>,
    rel: Relation,
    b: Rat,
    mult: Vec<Rat>,
}

impl Row {
    fn is_trivial(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    /// A trivial row `0 rel b` that cannot hold.
    fn contradicts(&self) -> bool {
        match self.rel {
            Relation::Eq => !self.b.is_zero(),
            Relation::Ge => self.b.is_positive(),
            Relation::Gt => !self.b.is_negative(),
        }
    }

    fn scaled_add(&self, s: &Rat, other: &Row, t: &Rat) -> Row {
        let rel = match (self.rel, other.rel) {
            (Relation::Gt, _) | (_, Relation::Gt) => Relation::Gt,
            (Relation::Ge, _) | (_, Relation::Ge) => Relation::Ge,
            _ => Relation::Eq,
        };
        Row {
            a: self.a.iter().zip(&other.a).map(|(x, y)| s * x + t * y).collect(),
            rel,
            b: s * &self.b + t * &other.b,
            mult: self.mult.iter().zip(&other.mult).map(|(x, y)| s * x + t * y).collect(),
        }
    }

    /// Positive rescaling so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Row {
        if let Some(lead) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            let inv = lead.recip();
            for x in self.a.iter_mut().chain(self.mult.iter_mut()) {
                *x *= &inv;
            }
            self.b *= &inv;
        }
        self
    }
}

/// Keeps, for each coefficient vector, only the tightest inequality.
fn prune(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<Rat>, Row> = HashMap::new();
    let mut order = Vec::new();
    for r in rows.into_iter().map(Row::normalized) {
        match best.get_mut(&r.a) {
            Some(cur) => {
                let tighter = r.b > cur.b || (r.b == cur.b && r.rel == Relation::Gt && cur.rel != Relation::Gt);
                if tighter {
                    *cur = r;
                }
            }
            None => {
                order.push(r.a.clone());
                best.insert(r.a.clone(), r);
            }
        }
    }
    order.into_iter().map(|k| best.remove(&k).unwrap()).collect()
}

enum Step {
    Substitute { var: usize, row: Row },
    Eliminate { var: usize, rows: Vec<Row> },
}

struct Elimination {
    steps: Vec<Step>,
    remaining: Vec<Row>,
}

/// Eliminates equalities, then every variable except those in `keep`.
fn eliminate(n: usize, constraints: &[Constraint], keep: &[usize]) -> Result<Elimination, Vec<Rat>> {
    let m = constraints.len();
    let mut rows: Vec<Row> = constraints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            assert_eq!(c.coeffs.len(), n, "constraint width mismatch");
            let mut mult = vec![Rat::zero(); m];
            mult[i] = Rat::one();
            Row { a: c.coeffs.clone(), rel: c.rel, b: c.rhs.clone(), mult }
        })
        .collect();
    let mut steps = Vec::new();
    let mut eliminated = vec![false; n];

    loop {
        let pick =
            rows.iter().position(|r| r.rel == Relation::Eq && r.a.iter().enumerate().any(|(j, x)| !x.is_zero() && !keep.contains(&j)));
        let pick = pick.or_else(|| rows.iter().position(|r| r.rel == Relation::Eq && !r.is_trivial()));
        let Some(pi) = pick else { break };
        let row = rows.remove(pi);
        let var = (0..n).find(|&j| !row.a[j].is_zero() && !keep.contains(&j)).or_else(|| (0..n).find(|&j| !row.a[j].is_zero())).unwrap();
        let piv = row.a[var].clone();
        rows = rows
            .into_iter()
            .map(|r| {
                if r.a[var].is_zero() {
                    r
                } else {
                    let t = -(&r.a[var] / &piv);
                    r.scaled_add(&Rat::one(), &row, &t)
                }
            })
            .collect();
        eliminated[var] = true;
        steps.push(Step::Substitute { var, row });
    }
    if let Some(bad) = rows.iter().find(|r| r.is_trivial() && r.contradicts()) {
        return Err(bad.mult.clone());
    }
    rows.retain(|r| !r.is_trivial());
    rows = prune(rows);

    for var in 0..n {
        if eliminated[var] || keep.contains(&var) {
            continue;
        }
        let (involved, rest): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| !r.a[var].is_zero());
        let pos: Vec<&Row> = involved.iter().filter(|r| r.a[var].is_positive()).collect();
        let neg: Vec<&Row> = involved.iter().filter(|r| r.a[var].is_negative()).collect();
        let mut next = rest;
        for p in &pos {
            for q in &neg {
                let s = -q.a[var].clone();
                let t = p.a[var].clone();
                next.push(p.scaled_add(&s, q, &t));
            }
        }
        if let Some(bad) = next.iter().find(|r| r.is_trivial() && r.contradicts()) {
            return Err(bad.mult.clone());
        }
        next.retain(|r| !r.is_trivial());
        rows = prune(next);
        steps.push(Step::Eliminate { var, rows: involved });
    }
    Ok(Elimination { steps, remaining: rows })
}

/// Bounds on `x[var]` implied by `rows` given the other coordinates of `x`.
fn pick_value(var: usize, rows: &[Row], x: &[Rat]) -> Rat {
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for r in rows {
        let rest: Rat = r.a.iter().enumerate().filter(|(j, _)| *j != var).map(|(j, a)| a * &x[j]).sum();
        let bound = (&r.b - rest) / &r.a[var];
        let strict = r.rel == Relation::Gt;
        if r.a[var].is_positive() {
            if lo.as_ref().is_none_or(|(v, s)| bound > *v || (bound == *v && strict && !s)) {
                lo = Some((bound, strict));
            }
        } else if hi.as_ref().is_none_or(|(v, s)| bound < *v || (bound == *v && strict && !s)) {
            hi = Some((bound, strict));
        }
    }
    let two = Rat::from_integer(2.into());
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) if l < h => (l + h) / two,
        (Some((l, _)), Some(_)) => l,
        (Some((l, s)), None) => {
            if s {
                l + Rat::one()
            } else {
                l
            }
        }
        (None, Some((h, s))) => {
            if s {
                h - Rat::one()
            } else {
                h
            }
        }
        (None, None) => Rat::zero(),
    }
}

fn back_substitute(steps: &[Step], x: &mut [Rat]) {
    for step in steps.iter().rev() {
        match step {
            Step::Eliminate { var, rows } => x[*var] = pick_value(*var, rows, x),
            Step::Substitute { var, row } => {
                let rest: Rat = row.a.iter().enumerate().filter(|(j, _)| j != var).map(|(j, a)| a * &x[j]).sum();
                x[*var] = (&row.b - rest) / &row.a[*var];
            }
        }
    }
}

/// Decides whether the system has a rational solution.
pub fn feasible(n: usize, constraints: &[Constraint]) -> Feasibility {
    match eliminate(n, constraints, &[]) {
        Err(y) => Feasibility::Infeasible(y),
        Ok(el) => {
            debug_assert!(el.remaining.is_empty());
            let mut x = vec![Rat::zero(); n];
            back_substitute(&el.steps, &mut x);
            debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
            Feasibility::Feasible(x)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Minimum {
    Infeasible(Vec<Rat>),
    Unbounded,
    /// The infimum, a point attaining it (when `attained`), and whether it is attained.
    Optimum {
        value: Rat,
        point: Vec<Rat>,
        attained: bool,
    },
}

/// Minimizes `objective · x` over the constraint set.
pub fn minimize(objective: &[Rat], constraints: &[Constraint]) -> Minimum {
    let n = objective.len();
    if let Feasibility::Infeasible(y) = feasible(n, constraints) {
        return Minimum::Infeasible(y);
    }
    let z = n;
    let mut ext: Vec<Constraint> = constraints
        .iter()
        .map(|c| {
            let mut coeffs = c.coeffs.clone();
            coeffs.push(Rat::zero());
            Constraint { coeffs, rel: c.rel, rhs: c.rhs.clone() }
        })
        .collect();
    let mut obj_row: Vec<Rat> = objective.iter().map(|c| -c.clone()).collect();
    obj_row.push(Rat::one());
    ext.push(Constraint { coeffs: obj_row, rel: Relation::Eq, rhs: Rat::zero() });
    let el = eliminate(n + 1, &ext, &[z]).expect("feasibility already established");
    let z_fixed = el.steps.iter().any(|s| matches!(s, Step::Substitute { var, .. } if *var == z));
    let mut x = vec![Rat::zero(); n + 1];
    let (value, attained) = if z_fixed {
        // z was pinned by the equalities alone: the objective is constant.
        back_substitute(&el.steps, &mut x);
        (x[z].clone(), true)
    } else {
        let mut lo: Option<(Rat, bool)> = None;
        for r in &el.remaining {
            if r.a[z].is_positive() {
                let bound = &r.b / &r.a[z];
                let strict = r.rel == Relation::Gt;
                if lo.as_ref().is_none_or(|(v, s)| bound > *v || (bound == *v && strict && !s)) {
                    lo = Some((bound, strict));
                }
            }
        }
        let Some((value, strict)) = lo else { return Minimum::Unbounded };
        x[z] = value.clone();
        if !strict {
            back_substitute(&el.steps, &mut x);
        }
        (value, !strict)
    };
    x.truncate(n);
    Minimum::Optimum { value, point: x, attained }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Point(Vec<Rat>),
    Farkas(Vec<Rat>),
}

/// Existence of `x` with `eqs · x = 0` and `strict · x > 0` componentwise.
pub fn strict_lp_feasible(eqs: &RatMatrix, strict: &RatMatrix) -> (bool, Certificate) {
    let n = eqs.cols().max(strict.cols());
    let mut cs = Vec::new();
    for i in 0..eqs.rows() {
        cs.push(Constraint::new(eqs.row_vec(i), Relation::Eq, Rat::zero()));
    }
    for i in 0..strict.rows() {
        cs.push(Constraint::new(strict.row_vec(i), Relation::Gt, Rat::zero()));
    }
    match feasible(n, &cs) {
        Feasibility::Feasible(x) => (true, Certificate::Point(x)),
        Feasibility::Infeasible(y) => (false, Certificate::Farkas(y)),
    }
}

/// Re-checks a certificate returned by [`strict_lp_feasible`] by substitution.
pub fn verify_strict_certificate(eqs: &RatMatrix, strict: &RatMatrix, feasible: bool, cert: &Certificate) -> bool {
    let n = eqs.cols().max(strict.cols());
    let mut cs = Vec::new();
    for i in 0..eqs.rows() {
        cs.push(Constraint::new(eqs.row_vec(i), Relation::Eq, Rat::zero()));
    }
    for i in 0..strict.rows() {
        cs.push(Constraint::new(strict.row_vec(i), Relation::Gt, Rat::zero()));
    }
    match (feasible, cert) {
        (true, Certificate::Point(x)) => x.len() == n && cs.iter().all(|c| c.holds_at(x)),
        (false, Certificate::Farkas(y)) => verify_farkas(n, &cs, y),
        _ => false,
    }
}
