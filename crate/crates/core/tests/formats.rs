use isocone::fixtures::{fixture_document, FIXTURE_NAMES};
use isocone::formats::{
    parse_flat, parse_manifold, parse_surface, parse_track, parse_tree, write_flat, write_manifold, write_surface,
    write_track, write_tree, FormatError,
};
use isocone::ordgroup::ratio;

/// Parses and rewrites a document, returning the rewritten text.
fn round_trip(name: &str, text: &str) -> Result<String, FormatError> {
    Ok(match name {
        "genus2_surface" => write_surface(&parse_surface(text)?.value),
        "genus2_track" => write_track(&parse_track(text)?.value),
        "tree" => write_tree(&parse_tree(text)?.value),
        "single_tet" | "two_tets" | "tet4" | "cone_g2" | "g2_product" | "g2_diagonal" => {
            write_manifold(&parse_manifold(text)?.value)
        }
        _ => write_flat(&parse_flat(text)?.value),
    })
}

#[test]
fn every_fixture_round_trips() {
    for name in FIXTURE_NAMES {
        let text = fixture_document(name).unwrap();
        let again = round_trip(name, &text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(again, text, "{name}");
    }
}

#[test]
fn unreduced_rationals_are_noted() {
    let text = "vertex a\nvertex b\nedge e a b (2/4)\n";
    let parsed = parse_tree(text).unwrap();
    assert_eq!(parsed.value.vertex_distance(0, 1).coords()[0], ratio(1, 2));
    assert_eq!(parsed.notes, vec!["line 3: 2/4 normalized to 1/2".to_string()]);
    assert!(parse_tree("vertex a\nvertex b\nedge e a b (1/2)\n").unwrap().notes.is_empty());
}

#[test]
fn stray_directives_report_their_line() {
    let err = parse_tree("vertex a\nvertx b\n").unwrap_err();
    assert!(err.is_syntax());
    assert_eq!(err.to_string(), "line 2: unknown directive `vertx`");
    let text = fixture_document("genus2_track").unwrap() + "\n# trailing comment\nbogus 1\n";
    let line = text.lines().count();
    let err = parse_track(&text).unwrap_err();
    assert!(err.to_string().starts_with(&format!("line {line}:")), "{err}");
}

#[test]
fn model_errors_are_not_syntax_errors() {
    let err = parse_tree("vertex a\nvertex b\nedge e a b (0)\n").unwrap_err();
    assert!(!err.is_syntax(), "{err}");
}
