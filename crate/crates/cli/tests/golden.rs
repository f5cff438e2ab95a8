mod common;

#[test]
fn transcripts_match_byte_for_byte() {
    let cases = common::run_all();
    assert!(!cases.is_empty());
    for c in &cases {
        assert!(
            c.matches(),
            "golden case `{}` differs\n--- expected\n{}\n--- actual\n{}",
            c.name,
            c.expected.as_deref().unwrap_or("<missing>"),
            c.actual
        );
    }
}
