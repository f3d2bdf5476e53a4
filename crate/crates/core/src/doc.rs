//! Group-data documents (JSON, schema `chiralx-group/1`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bimodule::IntegrableModuleData;
use crate::group::GroupData;
use crate::jet::{JetRing, RingError};
use crate::lie::{BilinearForm, LieAlgebraData, ModuleData};
use crate::poly::{leading, Poly};
use crate::rat::Rat;

pub const SCHEMA: &str = "chiralx-group/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupDocument {
    pub schema: String,
    pub name: String,
    pub lie: LieSection,
    pub ring: RingSection,
    pub fields: FieldsSection,
    pub ad_coeff: BTreeMap<String, BTreeMap<String, String>>,
    pub coframe: BTreeMap<String, BTreeMap<String, String>>,
    pub unit_point: BTreeMap<String, String>,
    #[serde(default)]
    pub forms: BTreeMap<String, Vec<(String, String, String)>>,
    #[serde(default)]
    pub reps: BTreeMap<String, RepSection>,
    #[serde(default)]
    pub defaults: Defaults,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LieSection {
    pub labels: Vec<String>,
    /// `(a, b, c, f^c_{ab})`
    pub brackets: Vec<(String, String, String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Generator {
    pub name: String,
    pub degree: Vec<i32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Rule {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RingSection {
    pub generators: Vec<Generator>,
    pub monomial_order: Vec<String>,
    pub rewrite_rules: Vec<Rule>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldsSection {
    pub left: BTreeMap<String, BTreeMap<String, String>>,
    pub right: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RepSection {
    pub dim: usize,
    pub action: BTreeMap<String, Vec<Vec<String>>>,
    pub coaction: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Defaults {
    pub form: Option<String>,
    pub rep: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("malformed JSON at byte {offset} (line {line}, column {column}): {msg}")]
    Json { offset: usize, line: usize, column: usize, msg: String },
    #[error("unsupported schema `{0}`, expected `{SCHEMA}`")]
    Schema(String),
    #[error("{at}: {msg}")]
    Content { at: String, msg: String },
    #[error("ring: {0}")]
    Ring(#[from] RingError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn content(at: impl Into<String>, msg: impl Into<String>) -> DocError {
    DocError::Content { at: at.into(), msg: msg.into() }
}

/// A parsed document: the group plus its named forms and representations.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub group: Arc<GroupData>,
    pub forms: BTreeMap<String, BilinearForm>,
    pub reps: BTreeMap<String, IntegrableModuleData>,
    pub defaults: Defaults,
    pub document: GroupDocument,
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut off = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return off + column.saturating_sub(1);
        }
        off += l.len();
    }
    off
}

pub fn parse_document(text: &str) -> Result<GroupDocument, DocError> {
    serde_json::from_str(text).map_err(|e| DocError::Json {
        offset: byte_offset(text, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

pub fn load_str(text: &str) -> Result<Loaded, DocError> {
    build(parse_document(text)?)
}

pub fn load_path(path: &std::path::Path) -> Result<Loaded, DocError> {
    load_str(&std::fs::read_to_string(path)?)
}

fn rat(s: &str, at: &str) -> Result<Rat, DocError> {
    s.parse().map_err(|e: crate::rat::ParseRatError| content(at, e.to_string()))
}

/// Builds the in-memory objects; structural validation of the group is left to
/// [`GroupData::validate`] so that a report can list every violation.
pub fn build(doc: GroupDocument) -> Result<Loaded, DocError> {
    if doc.schema != SCHEMA {
        return Err(DocError::Schema(doc.schema));
    }
    let labels = doc.lie.labels.clone();
    let li = |s: &str, at: &str| labels.iter().position(|l| l == s).ok_or_else(|| content(at, format!("unknown basis label `{s}`")));
    let mut entries = Vec::new();
    for (a, b, c, v) in &doc.lie.brackets {
        let at = format!("lie.brackets[{a},{b},{c}]");
        entries.push((li(a, &at)?, li(b, &at)?, li(c, &at)?, rat(v, &at)?));
    }
    let lie = LieAlgebraData::from_entries(labels.clone(), &entries).map_err(|e| content("lie", e.to_string()))?;

    let order = &doc.ring.monomial_order;
    let mut sorted = order.clone();
    sorted.sort();
    let mut gens: Vec<String> = doc.ring.generators.iter().map(|g| g.name.clone()).collect();
    gens.sort();
    if sorted != gens {
        return Err(content("ring.monomial_order", "must list every generator exactly once"));
    }
    let degrees: Vec<Vec<i32>> = order
        .iter()
        .map(|n| doc.ring.generators.iter().find(|g| &g.name == n).expect("checked").degree.clone())
        .collect();
    let names = order.clone();
    let pos_of = |x: &str| names.iter().position(|n| n == x);
    let parse = |s: &str, at: &str| crate::poly::parse_poly(s, &pos_of).map_err(|e| content(at, e.to_string()));
    let mut rules = Vec::new();
    for (i, r) in doc.ring.rewrite_rules.iter().enumerate() {
        let at = format!("ring.rewrite_rules[{i}]");
        let lhs = parse(&r.lhs, &at)?;
        let rhs = parse(&r.rhs, &at)?;
        let (m, c) = leading(&lhs).ok_or_else(|| content(&at, "empty left-hand side"))?;
        if lhs.len() != 1 || !c.is_one() {
            return Err(content(&at, "left-hand side must be a single monic monomial"));
        }
        rules.push((m, rhs));
    }
    let ring = JetRing::new(names.clone(), degrees, rules)?;

    let n = labels.len();
    let m = names.len();
    let table = |t: &BTreeMap<String, BTreeMap<String, String>>, inner_is_label: bool, at: &str| -> Result<Vec<Vec<Poly>>, DocError> {
        let width = if inner_is_label { n } else { m };
        let mut out = vec![vec![Poly::new(); width]; n];
        for (k, row) in t {
            let a = li(k, at)?;
            for (kk, s) in row {
                let at2 = format!("{at}.{k}.{kk}");
                let j = if inner_is_label { li(kk, &at2)? } else { pos_of(kk).ok_or_else(|| content(&at2, format!("unknown generator `{kk}`")))? };
                out[a][j] = parse(s, &at2)?;
            }
        }
        Ok(out)
    };
    let left = table(&doc.fields.left, false, "fields.left")?;
    let right = table(&doc.fields.right, false, "fields.right")?;
    // document keys ad_coeff by column a, then row i
    let ad_t = table(&doc.ad_coeff, true, "ad_coeff")?;
    let ad_coeff: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|a| ad_t[a][i].clone()).collect()).collect();
    let coframe = table(&doc.coframe, false, "coframe")?;
    let mut unit = vec![Rat::zero(); m];
    for (k, v) in &doc.unit_point {
        let at = format!("unit_point.{k}");
        let p = pos_of(k).ok_or_else(|| content(&at, "unknown generator"))?;
        unit[p] = rat(v, &at)?;
    }
    if doc.unit_point.len() != m {
        return Err(content("unit_point", "must assign every generator"));
    }
    let group = Arc::new(GroupData::new(doc.name.clone(), lie, ring, left, right, ad_coeff, coframe, unit));

    let mut forms = BTreeMap::new();
    for (name, ents) in &doc.forms {
        let at = format!("forms.{name}");
        let mut q = BilinearForm::zero(n);
        for (a, b, v) in ents {
            let (a, b, v) = (li(a, &at)?, li(b, &at)?, rat(v, &at)?);
            q.q[a][b] = v.clone();
            q.q[b][a] = v;
        }
        forms.insert(name.clone(), q);
    }
    let mut reps = BTreeMap::new();
    for (name, r) in &doc.reps {
        let at = format!("reps.{name}");
        let mut action = vec![vec![vec![Rat::zero(); r.dim]; r.dim]; n];
        for (lab, mat) in &r.action {
            let a = li(lab, &at)?;
            if mat.len() != r.dim || mat.iter().any(|row| row.len() != r.dim) {
                return Err(content(&at, format!("action of `{lab}` must be {0}x{0}", r.dim)));
            }
            for (i, row) in mat.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    action[a][i][j] = rat(s, &at)?;
                }
            }
        }
        if r.coaction.len() != r.dim || r.coaction.iter().any(|row| row.len() != r.dim) {
            return Err(content(&at, "coaction must be dim x dim"));
        }
        let coaction = r
            .coaction
            .iter()
            .map(|row| row.iter().map(|s| parse(s, &at).map(|p| group.ring.nf(&p))).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        reps.insert(name.clone(), IntegrableModuleData { name: name.clone(), module: ModuleData { dim: r.dim, action }, coaction });
    }
    Ok(Loaded { group, forms, reps, defaults: doc.defaults.clone(), document: doc })
}

/// The documents shipped with the library.
pub mod golden {
    use super::*;

    pub const GM1: &str = include_str!("../golden/gm1.json");
    pub const GM2: &str = include_str!("../golden/gm2.json");
    pub const BOREL: &str = include_str!("../golden/borel.json");
    pub const SL2: &str = include_str!("../golden/sl2.json");

    pub const ALL: [(&str, &str); 4] = [("gm1", GM1), ("gm2", GM2), ("borel", BOREL), ("sl2", SL2)];

    pub fn load(name: &str) -> Loaded {
        let text = ALL.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no golden document `{name}`")).1;
        load_str(text).expect("golden document loads")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_documents_validate() {
        for (name, _) in golden::ALL {
            let l = golden::load(name);
            assert!(crate::lie::validate_lie_algebra(&l.group.lie).is_empty(), "{name}");
            let v = l.group.validate();
            assert!(v.is_empty(), "{name}: {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "));
            for (f, q) in &l.forms {
                assert!(q.is_invariant(&l.group.lie), "{name}.{f}");
            }
        }
    }

    #[test]
    fn malformed_json_names_offset() {
        let err = load_str("{\"schema\": }").unwrap_err();
        match err {
            DocError::Json { offset, .. } => assert_eq!(offset, 11),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn broken_adjoint_is_reported() {
        let mut doc = parse_document(golden::SL2).unwrap();
        doc.ad_coeff.get_mut("e").unwrap().clear();
        let l = build(doc).unwrap();
        let v = l.group.validate();
        assert!(v.contains(&crate::group::GroupViolation::AdjointIdentity { a: "e".into(), generator: "b".into() }), "{v:?}");
    }
}
