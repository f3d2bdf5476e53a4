//! The vacuum module `V_{G,Q}` with exact mode actions.
//!
//! A basis vector is a jet monomial with a word of current creation operators
//! `J_a[-n]` (n ≥ 1) applied to it. Words are kept sorted by `(index, depth)`
//! descending; the first letter is the leftmost operator.

use std::hash::Hash;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use dashmap::DashMap;
use rustc_hash::FxBuildHasher;
use smallvec::SmallVec;

use crate::group::{Frame, GroupData};
use crate::lie::{BilinearForm, LieAlgebraData};
use crate::lin::Lin;
use crate::poly::{poly_weight, Mono, Poly};
use crate::rat::Rat;

/// Ordered creation operators `(basis index, depth)` for `J_index[-depth]`.
pub type Word = SmallVec<[(u8, u8); 4]>;

pub fn word_weight(w: &Word) -> u32 {
    w.iter().map(|(_, d)| *d as u32).sum()
}

/// Basis vector of the vacuum module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    pub word: Word,
    pub jet: Mono,
}

impl Basis {
    pub fn vacuum() -> Basis {
        Basis { word: Word::new(), jet: Mono::one() }
    }

    pub fn weight(&self) -> u32 {
        word_weight(&self.word) + self.jet.weight()
    }

    /// Number of creation operators (the PBW filtration level).
    pub fn filtration(&self) -> usize {
        self.word.len()
    }
}

pub type State = Lin<Basis>;

pub fn vacuum() -> State {
    State::single(Basis::vacuum(), Rat::one())
}

/// A formal field built from currents, functions and jets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldExpr {
    CurrentGen(usize),
    FunGen(Poly),
    Jet(Poly),
    Derive(Box<FieldExpr>),
    NormOrd(Box<FieldExpr>, Box<FieldExpr>),
    ScalarComb(Vec<(Rat, FieldExpr)>),
    /// current of an auxiliary module factor (tensor-product spaces only)
    ModuleCurrent(usize),
    /// a field whose modes the space may cache under a process-unique key
    Memo(u64, Box<FieldExpr>),
}

impl FieldExpr {
    pub fn weight(&self) -> i32 {
        match self {
            FieldExpr::CurrentGen(_) | FieldExpr::ModuleCurrent(_) => 1,
            FieldExpr::FunGen(_) => 0,
            FieldExpr::Jet(j) => poly_weight(j) as i32,
            FieldExpr::Derive(c) => c.weight() + 1,
            FieldExpr::NormOrd(a, b) => a.weight() + b.weight(),
            FieldExpr::ScalarComb(v) => v.iter().map(|(_, f)| f.weight()).max().unwrap_or(0),
            FieldExpr::Memo(_, f) => f.weight(),
        }
    }

    /// Wraps `f` so that spaces with a field cache reuse its modes.
    pub fn memo(f: FieldExpr) -> FieldExpr {
        static NEXT: AtomicU64 = AtomicU64::new(0);
        FieldExpr::Memo(NEXT.fetch_add(1, AtomicOrdering::Relaxed), Box::new(f))
    }

    pub fn normord(a: FieldExpr, b: FieldExpr) -> FieldExpr {
        FieldExpr::NormOrd(Box::new(a), Box::new(b))
    }

    pub fn derive(a: FieldExpr) -> FieldExpr {
        FieldExpr::Derive(Box::new(a))
    }

    pub fn comb(terms: Vec<(Rat, FieldExpr)>) -> FieldExpr {
        FieldExpr::ScalarComb(terms)
    }

    pub fn sum(a: FieldExpr, b: FieldExpr) -> FieldExpr {
        FieldExpr::ScalarComb(vec![(Rat::one(), a), (Rat::one(), b)])
    }

    pub fn diff(a: FieldExpr, b: FieldExpr) -> FieldExpr {
        FieldExpr::ScalarComb(vec![(Rat::one(), a), (Rat::from_int(-1), b)])
    }
}

/// A graded space on which the primitive modes act.
pub trait ModeSpace: Sync {
    type B: Clone + Eq + Hash + Ord + Send + Sync;

    fn weight(&self, b: &Self::B) -> u32;
    fn current(&self, a: usize, n: i32, b: &Self::B) -> Arc<Lin<Self::B>>;
    /// Mode `n` of the jet field of a jet monomial.
    fn jet(&self, m: &Mono, n: i32, b: &Self::B) -> Arc<Lin<Self::B>>;
    fn module_current(&self, _a: usize, _n: i32, _b: &Self::B) -> Arc<Lin<Self::B>> {
        panic!("this space has no module currents")
    }
    /// Cached mode of a [`FieldExpr::Memo`] field, if the space keeps a cache.
    fn memo_get(&self, _id: u64, _n: i32, _b: &Self::B) -> Option<Arc<Lin<Self::B>>> {
        None
    }
    fn memo_put(&self, _id: u64, _n: i32, _b: &Self::B, _v: Arc<Lin<Self::B>>) {}
}

/// Applies `F[n]` to a state.
pub fn apply_field<S: ModeSpace>(sp: &S, f: &FieldExpr, n: i32, s: &Lin<S::B>) -> Lin<S::B> {
    let mut out = Lin::new();
    for (b, c) in s.iter() {
        if let FieldExpr::Memo(id, inner) = f {
            let r = match sp.memo_get(*id, n, b) {
                Some(r) => r,
                None => {
                    let r = Arc::new(apply_field_basis(sp, inner, n, b).compacted());
                    sp.memo_put(*id, n, b, r.clone());
                    r
                }
            };
            out.add_scaled(&r, c);
            continue;
        }
        let r = apply_field_basis(sp, f, n, b);
        out.add_scaled(&r, c);
    }
    out
}

fn apply_jet_poly<S: ModeSpace>(sp: &S, p: &Poly, n: i32, b: &S::B) -> Lin<S::B> {
    let mut out = Lin::new();
    for (m, c) in p.iter() {
        out.add_scaled(&sp.jet(m, n, b), c);
    }
    out
}

pub fn apply_field_basis<S: ModeSpace>(sp: &S, f: &FieldExpr, n: i32, b: &S::B) -> Lin<S::B> {
    let w = sp.weight(b) as i32;
    match f {
        FieldExpr::CurrentGen(a) => (*sp.current(*a, n, b)).clone(),
        FieldExpr::ModuleCurrent(a) => (*sp.module_current(*a, n, b)).clone(),
        FieldExpr::FunGen(p) | FieldExpr::Jet(p) => apply_jet_poly(sp, p, n, b),
        FieldExpr::Derive(c) => {
            let k = -(n + c.weight());
            if k == 0 {
                return Lin::new();
            }
            apply_field_basis(sp, c, n, b).scaled(&Rat::from_int(k as i64))
        }
        FieldExpr::ScalarComb(v) => {
            let mut out = Lin::new();
            for (c, g) in v {
                out.add_scaled(&apply_field_basis(sp, g, n, b), c);
            }
            out
        }
        FieldExpr::Memo(id, f) => {
            if let Some(v) = sp.memo_get(*id, n, b) {
                return (*v).clone();
            }
            let v = apply_field_basis(sp, f, n, b);
            sp.memo_put(*id, n, b, Arc::new(v.clone()));
            v
        }
        FieldExpr::NormOrd(x, y) => {
            let hx = x.weight();
            let one = Lin::single(b.clone(), Rat::one());
            let mut out = Lin::new();
            // Σ_{m ≤ -hx} X[m] Y[n-m] + Σ_{m > -hx} Y[n-m] X[m]
            for m in (n - w)..=(-hx) {
                let inner = apply_field(sp, y, n - m, &one);
                if !inner.is_zero() {
                    out.add(&apply_field(sp, x, m, &inner));
                }
            }
            for m in (-hx + 1)..=w {
                let inner = apply_field(sp, x, m, &one);
                if !inner.is_zero() {
                    out.add(&apply_field(sp, y, n - m, &inner));
                }
            }
            out
        }
    }
}

/// `[F_a[m], F_b[n]] s`.
pub fn commutator<S: ModeSpace>(sp: &S, fa: &FieldExpr, m: i32, fb: &FieldExpr, n: i32, s: &Lin<S::B>) -> Lin<S::B> {
    let mut out = apply_field(sp, fa, m, &apply_field(sp, fb, n, s));
    out.sub(&apply_field(sp, fb, n, &apply_field(sp, fa, m, s)));
    out
}

/// Base action for the PBW straightener: how nonnegative current modes act on
/// the leaf a word is applied to.
pub trait AffineLeaf: Sync {
    type L: Clone + Eq + Hash + Ord + Send + Sync;
    fn leaf_weight(&self, l: &Self::L) -> u32;
    fn leaf_action(&self, a: usize, n: u32, l: &Self::L) -> Lin<Self::L>;
}

type WL<L> = (Word, L);
type CurKey<L> = (u8, i32, Word, L);

/// Straightens current words over a leaf space using the affine relations
/// `[J_a[m], J_b[n]] = Σ_c f^c_{ab} J_c[m+n] + m δ_{m+n,0} Q(a,b)`.
pub struct Affine<A: AffineLeaf> {
    pub leaf: A,
    pub lie: LieAlgebraData,
    pub level: BilinearForm,
    /// nonzero structure constants per pair
    brackets: Vec<Vec<Vec<(usize, Rat)>>>,
    cache: DashMap<CurKey<A::L>, Arc<Lin<WL<A::L>>>, FxBuildHasher>,
}

impl<A: AffineLeaf> Affine<A> {
    pub fn new(leaf: A, lie: LieAlgebraData, level: BilinearForm) -> Self {
        let n = lie.dim();
        let brackets = (0..n)
            .map(|a| (0..n).map(|b| (0..n).filter(|c| !lie.f[a][b][*c].is_zero()).map(|c| (c, lie.f[a][b][c].clone())).collect()).collect())
            .collect();
        Affine { leaf, lie, level, brackets, cache: DashMap::default() }
    }

    pub fn weight(&self, b: &WL<A::L>) -> u32 {
        word_weight(&b.0) + self.leaf.leaf_weight(&b.1)
    }

    pub fn act(&self, a: usize, n: i32, b: &WL<A::L>) -> Arc<Lin<WL<A::L>>> {
        if n > 0 && n as u32 > self.weight(b) {
            return Arc::new(Lin::new());
        }
        let key = (a as u8, n, b.0.clone(), b.1.clone());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let out = Arc::new(self.compute(a, n, b).compacted());
        self.cache.insert(key, out.clone());
        out
    }

    fn act_state(&self, a: usize, n: i32, s: &Lin<WL<A::L>>) -> Lin<WL<A::L>> {
        let mut out = Lin::new();
        for (b, c) in s.iter() {
            out.add_scaled(&self.act(a, n, b), c);
        }
        out
    }

    fn compute(&self, a: usize, n: i32, b: &WL<A::L>) -> Lin<WL<A::L>> {
        let (word, leaf) = b;
        if n < 0 {
            let letter = (a as u8, (-n) as u8);
            if word.is_empty() || letter >= word[0] {
                let mut w = Word::with_capacity(word.len() + 1);
                w.push(letter);
                w.extend_from_slice(word);
                return Lin::single((w, leaf.clone()), Rat::one());
            }
        } else if word.is_empty() {
            return self.leaf.leaf_action(a, n as u32, leaf).map_linear(|l| Lin::single((Word::new(), l.clone()), Rat::one()));
        }
        // J_a[n] J_b[-p] rest = J_b[-p] J_a[n] rest + [J_a[n], J_b[-p]] rest
        let (bi, p) = (word[0].0 as usize, word[0].1 as i32);
        let rest: WL<A::L> = (word[1..].into(), leaf.clone());
        let inner = self.act(a, n, &rest);
        let mut out = self.act_state(bi, -p, &inner);
        for (c, f) in &self.brackets[a][bi] {
            out.add_scaled(&self.act(*c, n - p, &rest), f);
        }
        if n == p {
            let q = &self.level.q[a][bi];
            if !q.is_zero() {
                out.add_term(rest, &Rat::from_int(n as i64) * q);
            }
        }
        out
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }
}

/// Jet leaves: the commutative sector `J(G)`.
pub struct JetLeaf {
    pub group: Arc<GroupData>,
}

impl AffineLeaf for JetLeaf {
    type L = Mono;

    fn leaf_weight(&self, l: &Mono) -> u32 {
        l.weight()
    }

    fn leaf_action(&self, a: usize, n: u32, l: &Mono) -> Lin<Mono> {
        self.group.jet_derivation_mono(Frame::Left, a, n, l).iter().cloned().collect()
    }
}

type JetKey = (Mono, i32, Word, Mono);

/// The vacuum module `V_{G,Q}`.
pub struct Vacuum {
    pub group: Arc<GroupData>,
    pub level: BilinearForm,
    affine: Affine<JetLeaf>,
    jet_cache: DashMap<JetKey, Arc<State>, FxBuildHasher>,
    memo_cache: DashMap<(u64, i32, Basis), Arc<State>, FxBuildHasher>,
    entry_limit: AtomicUsize,
}

fn to_state(l: &Lin<(Word, Mono)>) -> State {
    l.iter().map(|((w, m), c)| (Basis { word: w.clone(), jet: m.clone() }, c.clone())).collect()
}

/// Generalized binomial `C(m, k)` for integer `m`.
pub fn binom(m: i64, k: u32) -> Rat {
    let mut num = Rat::one();
    for t in 0..k as i64 {
        num = &num * &Rat::from_int(m - t);
    }
    let mut den = 1i64;
    for t in 1..=k as i64 {
        den *= t;
    }
    &num / &Rat::from_int(den)
}

impl Vacuum {
    pub fn new(group: Arc<GroupData>, level: BilinearForm) -> Vacuum {
        let affine = Affine::new(JetLeaf { group: group.clone() }, group.lie.clone(), level.clone());
        Vacuum { group, level, affine, jet_cache: DashMap::default(), memo_cache: DashMap::default(), entry_limit: AtomicUsize::new(usize::MAX) }
    }

    pub fn degree(&self, b: &Basis) -> Vec<i32> {
        self.group.ring.degree(&b.jet)
    }

    fn current_arc(&self, a: usize, n: i32, b: &Basis) -> Arc<State> {
        let r = self.affine.act(a, n, &(b.word.clone(), b.jet.clone()));
        Arc::new(to_state(&r))
    }

    fn jet_compute(&self, j: &Mono, n: i32, b: &Basis) -> State {
        let h = j.weight() as i32;
        if b.word.is_empty() {
            if n > -h {
                return State::new();
            }
            let k = (-n - h) as u32;
            let dj = self.group.ring.d_pow_mono(j, k);
            let mut out = State::new();
            for (m, c) in dj.iter() {
                for (r, d) in self.group.ring.nf_mono(&m.mul(&b.jet)).iter() {
                    out.add_term(Basis { word: Word::new(), jet: r.clone() }, c * d);
                }
            }
            return out;
        }
        // j[n] J_b[-p] rest = J_b[-p] j[n] rest − Σ_k C(-p,k) (D_k j)[n-p] rest
        let (bi, p) = (b.word[0].0 as usize, b.word[0].1 as i32);
        let rest = Basis { word: b.word[1..].into(), jet: b.jet.clone() };
        let inner = self.jet(j, n, &rest);
        let mut out = State::new();
        for (t, c) in inner.iter() {
            out.add_scaled(&self.current_arc(bi, -p, t), c);
        }
        for k in 0..=j.max_order() {
            let dk = self.group.jet_derivation_mono(Frame::Left, bi, k, j);
            if dk.is_empty() {
                continue;
            }
            let coef = -binom(-(p as i64), k);
            for (m, c) in dk.iter() {
                out.add_scaled(&self.jet(m, n - p, &rest), &(&coef * c));
            }
        }
        out
    }

    pub fn apply_current(&self, a: usize, n: i32, s: &State) -> State {
        apply_field(self, &FieldExpr::CurrentGen(a), n, s)
    }

    pub fn apply_fun_mode(&self, f: &Poly, n: i32, s: &State) -> State {
        apply_field(self, &FieldExpr::FunGen(f.clone()), n, s)
    }

    /// All basis vectors of weight `w` and degree `d`.
    pub fn basis(&self, w: u32, d: &[i32]) -> Vec<Basis> {
        let n = self.group.dim();
        let bound = d.iter().map(|x| x.unsigned_abs()).sum::<u32>() + 2 * w;
        let mut out = Vec::new();
        for wj in 0..=w {
            let jets = self.group.ring.normal_monomials(wj, d, bound);
            if jets.is_empty() {
                continue;
            }
            for word in words(n, w - wj) {
                for j in &jets {
                    out.push(Basis { word: word.clone(), jet: j.clone() });
                }
            }
        }
        out.sort();
        out
    }

    pub fn graded_dimension(&self, w: u32, d: &[i32]) -> usize {
        self.basis(w, d).len()
    }

    pub fn cache_entries(&self) -> usize {
        self.affine.cache_len() + self.jet_cache.len() + self.memo_cache.len()
    }

    /// Clears every cache once the process is over its memory budget; long
    /// suites trade recomputation for bounded memory.
    pub fn trim_caches(&self) {
        let entries = self.cache_entries();
        let mut limit = self.entry_limit.load(AtomicOrdering::Relaxed);
        if limit == usize::MAX {
            // the allocator keeps freed pages, so the resident size only calibrates
            // an entry-count limit the first time the budget is crossed
            match resident_bytes() {
                Some(r) if r > cache_budget_bytes() => limit = entries,
                None => limit = FALLBACK_CACHE_ENTRIES,
                _ => {}
            }
            self.entry_limit.store(limit, AtomicOrdering::Relaxed);
        }
        if entries >= limit {
            self.affine.clear_cache();
            self.jet_cache.clear();
            self.memo_cache.clear();
        }
    }
}

const FALLBACK_CACHE_ENTRIES: usize = 1_500_000;

/// Memory budget for engine caches, `CHIRALX_CACHE_MB` or 3000 MB.
pub fn cache_budget_bytes() -> u64 {
    std::env::var("CHIRALX_CACHE_MB").ok().and_then(|v| v.parse::<u64>().ok()).unwrap_or(3000) << 20
}

/// Resident set size, where the platform exposes it.
fn resident_bytes() -> Option<u64> {
    let statm = std::fs::read_to_string("/proc/self/statm").ok()?;
    let pages: u64 = statm.split_whitespace().nth(1)?.parse().ok()?;
    Some(pages * 4096)
}

/// All canonical current words of total depth `w` over `n` colors.
pub fn words(n: usize, w: u32) -> Vec<Word> {
    let mut letters: Vec<(u8, u8)> = Vec::new();
    for a in 0..n {
        for d in 1..=w {
            letters.push((a as u8, d as u8));
        }
    }
    letters.sort();
    letters.reverse();
    let mut out = Vec::new();
    let mut cur = Word::new();
    fn rec(letters: &[(u8, u8)], start: usize, left: u32, cur: &mut Word, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..letters.len() {
            let d = letters[i].1 as u32;
            if d <= left {
                cur.push(letters[i]);
                rec(letters, i, left - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&letters, 0, w, &mut cur, &mut out);
    out
}

impl ModeSpace for Vacuum {
    type B = Basis;

    fn weight(&self, b: &Basis) -> u32 {
        b.weight()
    }

    fn current(&self, a: usize, n: i32, b: &Basis) -> Arc<State> {
        self.current_arc(a, n, b)
    }

    fn jet(&self, m: &Mono, n: i32, b: &Basis) -> Arc<State> {
        if n > 0 && n as u32 > b.weight() {
            return Arc::new(State::new());
        }
        let key = (m.clone(), n, b.word.clone(), b.jet.clone());
        if let Some(v) = self.jet_cache.get(&key) {
            return v.clone();
        }
        let out = Arc::new(self.jet_compute(m, n, b).compacted());
        self.jet_cache.insert(key, out.clone());
        out
    }

    fn memo_get(&self, id: u64, n: i32, b: &Basis) -> Option<Arc<State>> {
        self.memo_cache.get(&(id, n, b.clone())).map(|v| v.clone())
    }

    fn memo_put(&self, id: u64, n: i32, b: &Basis, v: Arc<State>) {
        self.memo_cache.insert((id, n, b.clone()), v);
    }
}

/// Deterministic rendering of a state.
pub fn show_state(g: &GroupData, s: &State) -> String {
    if s.is_zero() {
        return "0".into();
    }
    s.sorted()
        .iter()
        .map(|(b, c)| {
            let mut parts: Vec<String> = b.word.iter().map(|(a, d)| format!("{}[-{}]", g.lie.labels[*a as usize], d)).collect();
            if !b.jet.is_one() {
                parts.push(crate::poly::mono_string(&b.jet, &g.ring.names));
            }
            let body = if parts.is_empty() { "|0>".to_string() } else { format!("{}|0>", parts.join(" ")) };
            format!("({c}) {body}")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
