//! Predicted graded dimensions of the vacuum module from generating functions.
//!
//! The prediction never looks at the jet Gröbner basis: it uses only the weight-0
//! ring and the shape of the relations, and is compared against basis enumeration.

use crate::group::GroupData;
use crate::poly::Poly;

/// How the jet-ring character is predicted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterModel {
    /// Homogeneous relations and a degree-0 invariant coframe: `J(G) ≅ O_G ⊗ Sym(jets of θ)`,
    /// so each degree contributes `dim O_G(d) · Π_{n≥1}(1−q^n)^{-dim g}`.
    Trivialized,
    /// Positive generator degrees, filtered by degree: the leading forms of the prolonged
    /// relations form a regular sequence, so
    /// `Π_{n≥0} Π_r (1 − z^{e_r} q^n) / Π_{n≥0} Π_k (1 − z^{g_k} q^n)`.
    CompleteIntersection { gen_degrees: Vec<u32>, rel_degrees: Vec<u32> },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("no generating-function model applies: {0}")]
    NoModel(String),
}

fn poly_degrees(g: &GroupData, p: &Poly) -> Vec<Vec<i32>> {
    p.iter().map(|(m, _)| g.ring.degree(m)).collect()
}

pub fn model(g: &GroupData) -> Result<CharacterModel, CharacterError> {
    let homogeneous = g.ring.relations.iter().all(|r| {
        let ds = poly_degrees(g, r);
        ds.windows(2).all(|w| w[0] == w[1])
    });
    let zero = vec![0; g.ring.grading_rank()];
    let coframe_zero = g.coframe.iter().all(|row| {
        row.iter().enumerate().all(|(k, p)| {
            p.iter().all(|(m, _)| {
                let d = g.ring.degree(m);
                d.iter().zip(&g.ring.degrees[k]).all(|(a, b)| a + b == 0)
            })
        })
    });
    let no_zero_gen = g.ring.degrees.iter().all(|d| d != &zero);
    if homogeneous && coframe_zero && no_zero_gen {
        return Ok(CharacterModel::Trivialized);
    }
    if g.ring.grading_rank() == 1 && g.ring.degrees.iter().all(|d| d[0] > 0) {
        let gen_degrees = g.ring.degrees.iter().map(|d| d[0] as u32).collect();
        let rel_degrees = g
            .ring
            .relations
            .iter()
            .map(|r| poly_degrees(g, r).iter().map(|d| d[0]).max().unwrap_or(0) as u32)
            .collect();
        return Ok(CharacterModel::CompleteIntersection { gen_degrees, rel_degrees });
    }
    Err(CharacterError::NoModel("relations are inhomogeneous and degrees are not all positive".into()))
}

/// Truncated series in `q` (rows, weight) and `z` (columns, degree ≥ 0).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Series {
    c: Vec<Vec<i64>>,
}

impl Series {
    fn one(w: usize, d: usize) -> Series {
        let mut c = vec![vec![0; d + 1]; w + 1];
        c[0][0] = 1;
        Series { c }
    }

    /// Multiplies by `1 − z^e q^n`.
    fn mul_factor(&mut self, e: usize, n: usize) {
        let (w, d) = (self.c.len(), self.c[0].len());
        for i in (0..w).rev() {
            for j in (0..d).rev() {
                if i >= n && j >= e {
                    self.c[i][j] -= self.c[i - n][j - e];
                }
            }
        }
    }

    /// Divides by `1 − z^e q^n` (requires `(e, n) ≠ (0, 0)`).
    fn div_factor(&mut self, e: usize, n: usize) {
        let (w, d) = (self.c.len(), self.c[0].len());
        for i in 0..w {
            for j in 0..d {
                if i >= n && j >= e {
                    self.c[i][j] += self.c[i - n][j - e];
                }
            }
        }
    }
}

/// Coefficients of `Π_{n≥1} (1 − q^n)^{-k}` up to `q^w`.
pub fn partition_power(k: usize, w: usize) -> Vec<i64> {
    let mut s = Series::one(w, 0);
    for n in 1..=w {
        for _ in 0..k {
            s.div_factor(0, n);
        }
    }
    s.c.into_iter().map(|r| r[0]).collect()
}

/// Predicted `dim V_{w,d}` for the vacuum module.
pub fn predicted_dimension(g: &GroupData, w: u32, d: &[i32]) -> Result<i64, CharacterError> {
    let dim = g.dim();
    match model(g)? {
        CharacterModel::Trivialized => {
            let bound = d.iter().map(|x| x.unsigned_abs()).sum::<u32>();
            let base = g.ring.normal_monomials(0, d, bound).len() as i64;
            Ok(base * partition_power(2 * dim, w as usize)[w as usize])
        }
        CharacterModel::CompleteIntersection { gen_degrees, rel_degrees } => {
            if d[0] < 0 {
                return Ok(0);
            }
            let (wu, du) = (w as usize, d[0] as usize);
            let mut s = Series::one(wu, du);
            for n in 0..=wu {
                for e in &rel_degrees {
                    s.mul_factor(*e as usize, n);
                }
                for e in &gen_degrees {
                    s.div_factor(*e as usize, n);
                }
                if n >= 1 {
                    for _ in 0..dim {
                        s.div_factor(0, n);
                    }
                }
            }
            Ok(s.c[wu][du])
        }
    }
}
