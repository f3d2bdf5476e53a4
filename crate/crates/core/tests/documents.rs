//! Group documents: loading, round trips and rejection of corrupted data.

use chiralx_core::doc::{build, golden, load_str, parse_document, DocError, GroupDocument};
use chiralx_core::report::Status;
use chiralx_core::suites::check_structure;

fn verdict(doc: GroupDocument) -> Result<Status, DocError> {
    build(doc).map(|l| check_structure(&l).status)
}

#[test]
fn documents_round_trip_through_json() {
    for (name, text) in golden::ALL {
        let doc = parse_document(text).unwrap();
        let again = parse_document(&serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        assert_eq!(doc, again, "{name}");
        assert_eq!(check_structure(&build(again).unwrap()).status, Status::Pass, "{name}");
    }
}

#[test]
fn corrupted_structure_constant_is_rejected() {
    for (name, text) in golden::ALL {
        let mut doc = parse_document(text).unwrap();
        let Some(entry) = doc.lie.brackets.first_mut() else { continue };
        // "2" becomes "21": the antisymmetric partner no longer matches
        entry.3.push('1');
        assert_ne!(verdict(doc).ok(), Some(Status::Pass), "{name}");
    }
}

#[test]
fn corrupted_relation_is_rejected() {
    for (name, text) in golden::ALL {
        let mut doc = parse_document(text).unwrap();
        let rule = &mut doc.ring.rewrite_rules[0];
        rule.rhs = format!("2*({})", rule.rhs);
        assert_ne!(verdict(doc).ok(), Some(Status::Pass), "{name}");
    }
}

#[test]
fn unknown_schema_and_labels_are_errors() {
    let mut doc = parse_document(golden::GM1).unwrap();
    doc.schema = "other/9".into();
    assert!(matches!(build(doc), Err(DocError::Schema(_))));

    let mut doc = parse_document(golden::SL2).unwrap();
    doc.lie.brackets[0].0 = "nope".into();
    assert!(matches!(build(doc), Err(DocError::Content { .. })));

    let err = load_str("{\"schema\": \"chiralx-group/1\",\n  \"name\": }").unwrap_err();
    assert!(matches!(err, DocError::Json { line: 2, .. }), "{err}");
}
