//! Finite-dimensional Lie algebras, invariant forms and Chevalley–Eilenberg cohomology.

use std::fmt;

use crate::linalg::{self, SparseRow};
use crate::rat::Rat;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LieError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("action matrices are not a representation: [{a}, {b}] fails")]
    NotRepresentation { a: String, b: String },
}

/// Structure constants `f^c_{ab}` with `[v_a, v_b] = Σ_c f^c_{ab} v_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub labels: Vec<String>,
    /// `f[a][b][c]`
    pub f: Vec<Vec<Vec<Rat>>>,
}

/// Symmetric bilinear form `q[a][b] = Q(v_a, v_b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    pub q: Vec<Vec<Rat>>,
}

/// A linear functional on the Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector(pub Vec<Rat>);

/// One failed structural identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieViolation {
    Antisymmetry { a: usize, b: usize, c: usize },
    Jacobi { a: usize, b: usize, c: usize, e: usize },
}

impl fmt::Display for LieViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieViolation::Antisymmetry { a, b, c } => write!(f, "antisymmetry fails at ({a},{b},{c})"),
            LieViolation::Jacobi { a, b, c, e } => write!(f, "jacobi fails at ({a},{b},{c}) component {e}"),
        }
    }
}

impl LieAlgebraData {
    pub fn new(labels: Vec<String>, f: Vec<Vec<Vec<Rat>>>) -> Result<Self, LieError> {
        let n = labels.len();
        if n == 0 {
            return Err(LieError::Shape("dimension must be positive".into()));
        }
        if f.len() != n || f.iter().any(|r| r.len() != n || r.iter().any(|s| s.len() != n)) {
            return Err(LieError::Shape(format!("structure constants must be {n}x{n}x{n}")));
        }
        Ok(LieAlgebraData { labels, f })
    }

    /// Builds from sparse entries `(a, b, c, value)`.
    pub fn from_entries(labels: Vec<String>, entries: &[(usize, usize, usize, Rat)]) -> Result<Self, LieError> {
        let n = labels.len();
        let mut f = vec![vec![vec![Rat::zero(); n]; n]; n];
        for (a, b, c, v) in entries {
            if *a >= n || *b >= n || *c >= n {
                return Err(LieError::Shape(format!("index out of range in ({a},{b},{c})")));
            }
            f[*a][*b][*c] = v.clone();
        }
        Self::new(labels, f)
    }

    pub fn abelian(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("v{}", i + 1)).collect();
        LieAlgebraData { labels, f: vec![vec![vec![Rat::zero(); n]; n]; n] }
    }

    pub fn sl2() -> Self {
        let l = |s: &str| s.to_string();
        let (e, h, f) = (0, 1, 2);
        Self::from_entries(
            vec![l("e"), l("h"), l("f")],
            &[
                (h, e, e, Rat::from_int(2)),
                (e, h, e, Rat::from_int(-2)),
                (h, f, f, Rat::from_int(-2)),
                (f, h, f, Rat::from_int(2)),
                (e, f, h, Rat::one()),
                (f, e, h, Rat::from_int(-1)),
            ],
        )
        .expect("sl2 table")
    }

    pub fn borel() -> Self {
        let l = |s: &str| s.to_string();
        Self::from_entries(vec![l("h"), l("e")], &[(0, 1, 1, Rat::from_int(2)), (1, 0, 1, Rat::from_int(-2))]).expect("borel table")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Matrix of `ad_a`: column `b` holds the coordinates of `[a, b]`.
    pub fn ad(&self, a: usize) -> Vec<Vec<Rat>> {
        let n = self.dim();
        (0..n).map(|c| (0..n).map(|b| self.f[a][b][c].clone()).collect()).collect()
    }

    /// Coordinates of `[x, y]` for coordinate vectors `x`, `y`.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let s = &x[a] * &y[b];
                for (c, o) in out.iter_mut().enumerate() {
                    if !self.f[a][b][c].is_zero() {
                        *o += &(&s * &self.f[a][b][c]);
                    }
                }
            }
        }
        out
    }

    pub fn is_unimodular(&self) -> bool {
        modular_character(self).0.iter().all(|x| x.is_zero())
    }
}

impl BilinearForm {
    pub fn zero(n: usize) -> Self {
        BilinearForm { q: vec![vec![Rat::zero(); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn eval(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (a, row) in self.q.iter().enumerate() {
            if x[a].is_zero() {
                continue;
            }
            for (b, qab) in row.iter().enumerate() {
                if !qab.is_zero() && !y[b].is_zero() {
                    s += &(&(&x[a] * &y[b]) * qab);
                }
            }
        }
        s
    }

    pub fn scale(&self, c: &Rat) -> Self {
        BilinearForm { q: self.q.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn add(&self, o: &BilinearForm) -> Self {
        BilinearForm { q: self.q.iter().zip(&o.q).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rat::from_int(-1))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| self.q[a][b] == self.q[b][a]))
    }

    /// Triples `(a, b, c)` where `Q([a,b],c) + Q(b,[a,c]) ≠ 0`.
    pub fn invariance_violations(&self, lie: &LieAlgebraData) -> Vec<(usize, usize, usize)> {
        let n = lie.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut s = Rat::zero();
                    for d in 0..n {
                        s += &(&lie.f[a][b][d] * &self.q[d][c]);
                        s += &(&lie.f[a][c][d] * &self.q[b][d]);
                    }
                    if !s.is_zero() {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    pub fn is_invariant(&self, lie: &LieAlgebraData) -> bool {
        self.is_symmetric() && self.invariance_violations(lie).is_empty()
    }
}

/// Lists every antisymmetry and Jacobi failure; empty iff the table defines a Lie algebra.
pub fn validate_lie_algebra(l: &LieAlgebraData) -> Vec<LieViolation> {
    let n = l.dim();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if l.f[a][b][c] != -&l.f[b][a][c] && (a, b) <= (b, a) {
                    out.push(LieViolation::Antisymmetry { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let mut s = Rat::zero();
                    for d in 0..n {
                        s += &(&l.f[a][b][d] * &l.f[d][c][e]);
                        s += &(&l.f[b][c][d] * &l.f[d][a][e]);
                        s += &(&l.f[c][a][d] * &l.f[d][b][e]);
                    }
                    if !s.is_zero() {
                        out.push(LieViolation::Jacobi { a, b, c, e });
                    }
                }
            }
        }
    }
    out
}

/// `Q0(a, b) = tr(ad_a ad_b)`.
pub fn killing_form(l: &LieAlgebraData) -> BilinearForm {
    let n = l.dim();
    let mut q = vec![vec![Rat::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            // tr(ad_a ad_b) = Σ_{c,d} f^d_{a c} f^c_{b d}
            let mut s = Rat::zero();
            for c in 0..n {
                for d in 0..n {
                    if !l.f[a][c][d].is_zero() && !l.f[b][d][c].is_zero() {
                        s += &(&l.f[a][c][d] * &l.f[b][d][c]);
                    }
                }
            }
            q[a][b] = s;
        }
    }
    BilinearForm { q }
}

/// `ρ(v_a) = tr(ad_a) = Σ_b f^b_{ab}`.
pub fn modular_character(l: &LieAlgebraData) -> Covector {
    let n = l.dim();
    Covector((0..n).map(|a| (0..n).fold(Rat::zero(), |s, b| &s + &l.f[a][b][b])).collect())
}

/// `Q' = -Q - Q0`.
pub fn dual_form(q: &BilinearForm, l: &LieAlgebraData) -> BilinearForm {
    q.add(&killing_form(l)).neg()
}

/// A finite-dimensional module: `action[a]` is the matrix of `v_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleData {
    pub dim: usize,
    pub action: Vec<Vec<Vec<Rat>>>,
}

impl ModuleData {
    pub fn trivial(l: &LieAlgebraData) -> Self {
        ModuleData { dim: 1, action: vec![vec![vec![Rat::zero()]]; l.dim()] }
    }

    /// Checks `ρ([a,b]) = ρ(a)ρ(b) − ρ(b)ρ(a)` and returns the first failing pair.
    pub fn check_representation(&self, l: &LieAlgebraData) -> Result<(), LieError> {
        let n = l.dim();
        if self.action.len() != n || self.action.iter().any(|m| m.len() != self.dim || m.iter().any(|r| r.len() != self.dim)) {
            return Err(LieError::Shape("action matrices have the wrong shape".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = linalg::mat_mul(&self.action[a], &self.action[b]);
                let ba = linalg::mat_mul(&self.action[b], &self.action[a]);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        let mut lhs = Rat::zero();
                        for c in 0..n {
                            lhs += &(&l.f[a][b][c] * &self.action[c][i][j]);
                        }
                        if lhs != &ab[i][j] - &ba[i][j] {
                            return Err(LieError::NotRepresentation { a: l.labels[a].clone(), b: l.labels[b].clone() });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn subsets(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|s| s.count_ones() as usize == k).collect()
}

/// Dimensions of `H^k(g, M)` for `k = 0..=dim g`.
pub fn ce_cohomology(l: &LieAlgebraData, m: &ModuleData) -> Result<Vec<usize>, LieError> {
    m.check_representation(l)?;
    let n = l.dim();
    let dm = m.dim;
    let bases: Vec<Vec<u32>> = (0..=n + 1).map(|k| if k <= n { subsets(n, k) } else { Vec::new() }).collect();
    let mut ranks = vec![0usize; n + 2];
    for k in 0..=n {
        // cochain basis: (subset S of size k, module index i) meaning e^S ⊗ m_i
        let target: std::collections::HashMap<u32, usize> = bases[k + 1].iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut rows = Vec::new();
        for s in &bases[k] {
            for i in 0..dm {
                let mut row = SparseRow::new();
                let mut push = |set: u32, sign: Rat, j: usize| {
                    if sign.is_zero() {
                        return;
                    }
                    let col = target[&set] * dm + j;
                    let e = row.entry(col).or_default();
                    *e += &sign;
                    if e.is_zero() {
                        row.remove(&col);
                    }
                };
                // (dω)(x_0..x_k) = Σ_p (-1)^p x_p ω(..x̂_p..) + Σ_{p<q} (-1)^{p+q} ω([x_p,x_q], ..)
                // expressed on the dual basis: d(e^S ⊗ m) = Σ_a e^a ∧ e^S ⊗ a·m − ½ Σ f^c_{ab} e^a∧e^b ∧ ι_c(e^S) ⊗ m
                for a in 0..n {
                    if s & (1 << a) != 0 {
                        continue;
                    }
                    let sign = wedge_sign(a, *s);
                    for j in 0..dm {
                        let v = &m.action[a][j][i];
                        if !v.is_zero() {
                            push(s | (1 << a), &sign * v, j);
                        }
                    }
                }
                for c in 0..n {
                    if s & (1 << c) == 0 {
                        continue;
                    }
                    // ι_c e^S
                    let rest = s & !(1 << c);
                    let isign = wedge_sign(c, rest);
                    for a in 0..n {
                        for b in (a + 1)..n {
                            let fc = &l.f[a][b][c];
                            if fc.is_zero() || rest & (1 << a) != 0 || rest & (1 << b) != 0 {
                                continue;
                            }
                            // e^a ∧ e^b ∧ rest
                            let with_b = rest | (1 << b);
                            let sgn = &(&wedge_sign(b, rest) * &wedge_sign(a, with_b)) * &isign;
                            push(with_b | (1 << a), -&(&sgn * fc), i);
                        }
                    }
                }
                rows.push(row);
            }
        }
        ranks[k] = linalg::rank(rows);
    }
    Ok((0..=n)
        .map(|k| {
            let dimk = bases[k].len() * dm;
            let prev = if k == 0 { 0 } else { ranks[k - 1] };
            dimk - ranks[k] - prev
        })
        .collect())
}

/// Sign of `e^a ∧ e^S` relative to the sorted wedge of `S ∪ {a}`.
fn wedge_sign(a: usize, s: u32) -> Rat {
    let below = (s & ((1u32 << a) - 1)).count_ones();
    if below % 2 == 0 {
        Rat::one()
    } else {
        Rat::from_int(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn sl2_is_lie_and_killing() {
        let l = LieAlgebraData::sl2();
        assert!(validate_lie_algebra(&l).is_empty());
        let q0 = killing_form(&l);
        assert_eq!(q0.q[1][1], r(8));
        assert_eq!(q0.q[0][2], r(4));
        assert_eq!(q0.q[0][0], r(0));
        assert!(q0.is_invariant(&l));
        assert!(l.is_unimodular());
    }

    #[test]
    fn borel_character() {
        let l = LieAlgebraData::borel();
        assert_eq!(modular_character(&l).0, vec![r(2), r(0)]);
        assert_eq!(killing_form(&l).q, vec![vec![r(4), r(0)], vec![r(0), r(0)]]);
    }

    #[test]
    fn antisymmetry_violation_is_reported() {
        let mut l = LieAlgebraData::borel();
        l.f[1][0][1] = r(2);
        let v = validate_lie_algebra(&l);
        assert!(v.contains(&LieViolation::Antisymmetry { a: 0, b: 1, c: 1 }));
    }

    #[test]
    fn dual_form_involution() {
        let l = LieAlgebraData::sl2();
        let mut k = BilinearForm::zero(3);
        k.q[0][2] = r(1);
        k.q[2][0] = r(1);
        k.q[1][1] = r(2);
        assert_eq!(dual_form(&k, &l), k.scale(&r(-5)));
        assert_eq!(dual_form(&dual_form(&k, &l), &l), k);
        let crit = k.scale(&r(-2));
        assert_eq!(dual_form(&crit, &l), crit);
    }

    #[test]
    fn rejects_non_representation() {
        let l = LieAlgebraData::borel();
        let m = ModuleData { dim: 1, action: vec![vec![vec![r(0)]], vec![vec![r(1)]]] };
        assert!(matches!(ce_cohomology(&l, &m), Err(LieError::NotRepresentation { .. })));
    }
}
