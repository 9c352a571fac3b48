use proptest::prelude::*;
use warnsift::{parse_report, write_report};
use warnsift_core::report::normalize_digits;
use warnsift_core::{Category, WarningRecord};

const SINGLE: &[u8] = include_bytes!("fixtures/http_client/single.xml");
const CLIENT_REPORT: &[u8] = include_bytes!("fixtures/http_client/report.xml");

fn instance(attrs: &str, body: &str) -> String {
    format!("<BugCollection><BugInstance {attrs}>{body}</BugInstance></BugCollection>")
}

#[test]
fn single_instance_fields() {
    let parsed = parse_report(SINGLE).unwrap();
    assert!(parsed.diagnostics.is_empty(), "{:?}", parsed.diagnostics);
    assert_eq!(
        parsed.records,
        [WarningRecord {
            rule: "DM_DEFAULT_ENCODING".into(),
            category: Category::I18n,
            rank: 18,
            confidence: 2,
            message: "Found reliance on default encoding in HttpClientUtils.sendRequest(String, String, HttpURLConnection): String.getBytes()".into(),
            class_name: "HttpClientUtils".into(),
            method_name: Some("sendRequest".into()),
            source_path: "HttpClientUtils.java".into(),
            line_start: Some(5),
            line_end: Some(5),
        }]
    );
}

#[test]
fn client_report_has_two_lines() {
    let recs = parse_report(CLIENT_REPORT).unwrap().records;
    let lines: Vec<_> = recs.iter().map(|w| w.line_start).collect();
    assert_eq!(lines, [Some(5), Some(13)]);
}

#[test]
fn empty_collection_has_no_records() {
    let parsed = parse_report(b"<?xml version=\"1.0\"?><BugCollection version=\"4.8.3\"/>").unwrap();
    assert!(parsed.records.is_empty() && parsed.diagnostics.is_empty());
    let parsed = parse_report(b"<BugCollection><Project/><Errors/></BugCollection>").unwrap();
    assert!(parsed.records.is_empty());
}

#[test]
fn truncated_report_is_an_error() {
    let cut = &SINGLE[..SINGLE.len() / 2];
    let err = parse_report(cut).unwrap_err();
    assert!(err.offset as usize <= cut.len());
    assert!(err.to_string().starts_with("malformed report at byte "));
}

#[test]
fn unknown_category_rejects_only_its_entry() {
    let doc = format!(
        "<BugCollection>\
         <BugInstance type=\"A\" category=\"STYLE\" rank=\"5\" priority=\"1\"><Class classname=\"p.A\"/></BugInstance>\
         <BugInstance type=\"B\" category=\"WHIMSY\" rank=\"5\" priority=\"1\"><Class classname=\"p.B\"/></BugInstance>\
         <BugInstance type=\"C\" category=\"SECURITY\" rank=\"5\" priority=\"1\"><Class classname=\"p.C\"/></BugInstance>\
         </BugCollection>"
    );
    let parsed = parse_report(doc.as_bytes()).unwrap();
    let rules: Vec<_> = parsed.records.iter().map(|w| w.rule.as_str()).collect();
    assert_eq!(rules, ["A", "C"]);
    assert_eq!(parsed.diagnostics.len(), 1);
    assert!(parsed.diagnostics[0].rejected);
    assert_eq!(parsed.diagnostics[0].entry, 1);
    // Without a source path the class name decides it.
    assert_eq!(parsed.records[1].source_path, "p/C.java");
}

#[test]
fn out_of_range_attributes_are_clamped() {
    let doc = instance("type=\"R\" category=\"STYLE\" rank=\"27\" priority=\"0\"", "<Class classname=\"a.B$In\"/>");
    let parsed = parse_report(doc.as_bytes()).unwrap();
    let w = &parsed.records[0];
    assert_eq!((w.rank, w.confidence), (20, 1));
    assert_eq!(w.source_path, "a/B.java");
    assert_eq!(parsed.diagnostics.len(), 2);
    assert!(parsed.diagnostics.iter().all(|d| !d.rejected));

    let doc = instance(
        "type=\"R\" category=\"STYLE\" rank=\"3\" priority=\"2\"",
        "<Class classname=\"a.B\"/><SourceLine sourcepath=\"a/B.java\" start=\"9\" end=\"4\" primary=\"true\"/>",
    );
    let w = &parse_report(doc.as_bytes()).unwrap().records[0];
    assert_eq!((w.line_start, w.line_end), (Some(4), Some(9)));
}

#[test]
fn fingerprints_ignore_lines_and_digit_values() {
    let base = parse_report(SINGLE).unwrap().records.remove(0);
    let moved = WarningRecord {
        line_start: Some(40),
        line_end: Some(41),
        ..base.clone()
    };
    assert_eq!(base.fingerprint(), moved.fingerprint());
    let a = WarningRecord {
        message: "stores an array of length 12".into(),
        ..base.clone()
    };
    let b = WarningRecord {
        message: "stores an array of length 1500".into(),
        ..base.clone()
    };
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_eq!(normalize_digits("a1b22c333"), "a#b#c#");
    let other_method = WarningRecord {
        method_name: Some("close".into()),
        ..base.clone()
    };
    assert_ne!(base.fingerprint(), other_method.fingerprint());
    let other_rule = WarningRecord {
        rule: "OS_OPEN_STREAM".into(),
        ..base
    };
    assert_ne!(moved.fingerprint(), other_rule.fingerprint());
}

fn text() -> impl Strategy<Value = String> {
    "[A-Za-z0-9_.<>&\"' ()$-]{1,24}".prop_map(|s| s.trim().to_string()).prop_filter("non-empty", |s| !s.is_empty())
}

fn record() -> impl Strategy<Value = WarningRecord> {
    (
        "[A-Z_]{2,12}",
        proptest::sample::select(Category::ALL.to_vec()),
        1u8..=20,
        1u8..=3,
        text(),
        "[a-z]{1,6}(\\.[A-Z][a-z]{0,6}){1,2}",
        proptest::option::of("[a-z][A-Za-z0-9]{0,8}"),
        "[a-z]{1,6}/[A-Z][a-z]{0,6}\\.java",
        proptest::option::of((1u32..500, 0u32..20)),
    )
        .prop_map(|(rule, category, rank, confidence, message, class_name, method_name, source_path, lines)| {
            WarningRecord {
                rule,
                category,
                rank,
                confidence,
                message,
                class_name,
                method_name,
                source_path,
                line_start: lines.map(|l| l.0),
                line_end: lines.map(|l| l.0 + l.1),
            }
        })
}

proptest! {
    #[test]
    fn written_reports_read_back(records in proptest::collection::vec(record(), 0..6)) {
        let parsed = parse_report(write_report(&records).as_bytes()).unwrap();
        prop_assert!(parsed.diagnostics.is_empty());
        prop_assert_eq!(parsed.records, records);
    }
}
