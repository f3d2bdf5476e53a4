//! Check outcomes shared by all verification suites.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

/// One verified claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// first counterexample, when failing
    pub witness: Option<String>,
    /// informational value (observed level, skip reason, counts)
    pub note: Option<String>,
    pub cases: usize,
    pub millis: u128,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: &'static str) -> Check {
        Check { id: id.into(), anchor, params: BTreeMap::new(), status: Status::Pass, witness: None, note: None, cases: 0, millis: 0 }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Check {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.status = Status::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Check {
        self.status = Status::Skipped;
        self.note = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Runs `f` on every case in parallel and records the first failure in case order.
    pub fn run_cases<T: Sync, F>(mut self, cases: &[T], f: F) -> Check
    where
        F: Fn(&T) -> Option<String> + Sync + Send,
    {
        let t = Instant::now();
        let results: Vec<Option<String>> = cases.par_iter().map(&f).collect();
        self.cases += cases.len();
        if let Some(w) = results.into_iter().flatten().next() {
            self.fail(w);
        }
        self.millis += t.elapsed().as_millis();
        self
    }

    pub fn timed<F: FnOnce(&mut Check)>(mut self, f: F) -> Check {
        let t = Instant::now();
        f(&mut self);
        self.millis += t.elapsed().as_millis();
        self
    }
}

/// Anchor names for the verified results.
pub mod anchors {
    pub const CATAFFINE: &str = "lemma:cataffine";
    pub const CATREP: &str = "prop:catrep";
    pub const RHO: &str = "lemma:rho";
    pub const KILLING: &str = "lemma:killing";
    pub const MAIN_A: &str = "thm:main(a)";
    pub const MAIN_B: &str = "thm:main(b)";
    pub const MAIN_C: &str = "thm:main(c)";
    pub const DUAL: &str = "thm:main:dual-level";
    pub const REMB: &str = "thm:main:remb";
    pub const ACTIONONETA: &str = "lemma:actiononeta";
    pub const PBW: &str = "thm:chiralPBW";
    pub const FILTRATION: &str = "prop:filtration";
    pub const JACOBI: &str = "chiral:jacobi";
    pub const EXTENSION: &str = "thm:extension";
    pub const CLIFFORD: &str = "clifford:car";
    pub const BRST: &str = "brst:square-zero";
    pub const SEMIVACUUM: &str = "prop:semivacuum";
    pub const SEMIINF: &str = "thm:semiinf";
    pub const REGULAR: &str = "thm:regular";
    pub const STRUCTURE: &str = "data:structure";

    pub const ALL: [&str; 20] = [
        CATAFFINE, CATREP, RHO, KILLING, MAIN_A, MAIN_B, MAIN_C, DUAL, REMB, ACTIONONETA, PBW, FILTRATION, JACOBI, EXTENSION, CLIFFORD, BRST, SEMIVACUUM,
        SEMIINF, REGULAR, STRUCTURE,
    ];
}

/// Truncation used by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// maximal conformal weight of spanning states
    pub weight: u32,
    /// maximal |degree| (per grading component)
    pub degree: u32,
    /// maximal |mode index|
    pub modes: i32,
}

impl Bounds {
    pub fn new(weight: u32, degree: u32, modes: i32) -> Bounds {
        Bounds { weight, degree, modes }
    }

    pub fn label(&self) -> String {
        format!("w<={},|d|<={},|n|<={}", self.weight, self.degree, self.modes)
    }
}
