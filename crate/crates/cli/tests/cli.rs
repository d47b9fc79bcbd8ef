use std::io::Write;
use std::process::{Command, Output, Stdio};

use isocone::cone3::ConeProblem;
use isocone::fixtures::fixture_document;
use isocone::flatsurf::ROUTES;
use isocone::formats::{parse_flat, parse_manifold};
use isocone::ordgroup::fmt_rat;
use isocone::track::weights_from_labels;

fn run(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_isocone"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    report.lines().find_map(|l| l.strip_prefix(prefix.as_str())).unwrap_or_else(|| panic!("no {key} in {report}"))
}

fn fixture(name: &str) -> String {
    let o = run(&["fixtures", name], "");
    assert!(o.status.success(), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn fixtures_match_the_library() {
    for name in ["g2_diagonal", "lshape_h2_tangents", "tree"] {
        assert_eq!(fixture(name), fixture_document(name).unwrap(), "{name}");
    }
    let list = stdout(&run(&["fixtures", "list"], ""));
    assert!(list.lines().any(|l| l == "cone_g2"));
    assert_eq!(run(&["fixtures", "nope"], "").status.code(), Some(2));
}

#[test]
fn diagonal_weights_are_members() {
    let text = fixture("g2_diagonal");
    let o = run(&["cone", "member"], &text);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    assert_eq!(field(&r, "status"), "ok");
    assert_eq!(field(&r, "member"), "true");
    assert_eq!(field(&r, "verified"), "true");

    let doc = parse_manifold(&text).unwrap().value;
    let problem = ConeProblem::new(&doc.tri, doc.out.as_ref().unwrap()).unwrap();
    let w = weights_from_labels(problem.track(), &doc.weights).unwrap();
    let isocone::cone3::Membership::Member { choice, .. } = problem.member(&w) else { panic!("library disagrees") };
    let digits: Vec<String> = choice.iter().map(u8::to_string).collect();
    assert_eq!(field(&r, "choice"), digits.join(" "));
}

#[test]
fn bundled_tangents_pair_equally_on_every_route() {
    let text = fixture("lshape_h2_tangents");
    let o = run(&["surface", "symplectic-check"], &text);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    let doc = parse_flat(&text).unwrap().value;
    let (a, b) = (&doc.tangents[0], &doc.tangents[1]);
    for route in ROUTES {
        let exact = route.pairing(&doc.surface, a, b).unwrap();
        assert_eq!(field(&r, route.name()), fmt_rat(&exact));
    }
    assert_eq!(field(&r, "agree"), "true");
    assert_eq!(field(&r, "period-defect"), "0");
}

#[test]
fn horizontal_edges_have_no_heights() {
    let o = run(&["surface", "heights"], &fixture("square_torus"));
    assert_eq!(o.status.code(), Some(1));
    let r = stdout(&o);
    assert_eq!(field(&r, "status"), "failed");
    assert!(field(&r, "error").contains("horizontal edge"), "{r}");
    let rotated = run(&["surface", "heights", "--rotate", "2+1i"], &fixture("square_torus"));
    assert!(rotated.status.success(), "{}", stdout(&rotated));
}

#[test]
fn syntax_errors_exit_two_with_the_line() {
    let o = run(&["tree", "fourpoint"], "vertex a\nvertx b\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2: unknown directive `vertx`"), "{}", stderr(&o));
}

#[test]
fn unreduced_input_is_noted() {
    let o = run(&["tree", "fourpoint"], "vertex a\nvertex b\nvertex c\nedge e a b (2/4)\nedge f b c (1)\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    assert_eq!(field(&r, "note"), "line 4: 2/4 normalized to 1/2");
    assert_eq!(field(&r, "zero-hyperbolic"), "true");
}

#[test]
fn sampling_needs_a_seed_and_is_deterministic() {
    let text = fixture("cone_g2");
    let o = run(&["cone", "compute", "--choices", "sample:5"], &text);
    assert_eq!(o.status.code(), Some(2));
    let args = ["cone", "compute", "--choices", "sample:20", "--seed", "3"];
    let (first, second) = (run(&args, &text), run(&args, &text));
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).starts_with("status: ok"));
    let zero = run(&["cone", "compute", "--choices", "sample:0", "--seed", "3"], &text);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn isotropy_covers_every_choice_of_a_small_manifold() {
    let o = run(&["cone", "isotropy"], &fixture("tet4"));
    assert!(o.status.success(), "{}", stderr(&o));
    let r = stdout(&o);
    assert!(r.contains("81"), "{r}");
}
