mod common;

use lexord::cli::run;

fn lexord(args: &[&str]) -> (i32, String, String) {
    let root = common::repo_root();
    let mut argv = vec!["lexord".to_string()];
    for a in args {
        if a.ends_with(".cfg") || a.ends_with(".json") {
            argv.push(root.join("grammars").join(a).display().to_string());
        } else {
            argv.push(a.to_string());
        }
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn type_of_worked_example() {
    let (code, out, _) = lexord(&["type", "worked_example.cfg"]);
    assert_eq!((code, out.as_str()), (0, "omega*2 + 1\n"));
    let (code, out, _) = lexord(&["type", "worked_example.cfg", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"kind":"omega_linear","k":2,"n":1}"#);
}

#[test]
fn verbose_type_shows_steps() {
    let (_, out, _) = lexord(&["type", "-v", "worked_example.cfg"]);
    assert!(out.contains("step 4: cut at (b)^w; upper part nonempty: {c}"), "{out}");
    assert!(out.contains(": omega + 1"), "{out}");
    assert!(out.contains("case 1"), "{out}");
}

#[test]
fn check_reports_json() {
    let (code, out, _) = lexord(&["check", "akb.cfg", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["scattered"], true);
    assert_eq!(v["well_ordered"], false);
    assert_eq!(v["classes"][0]["u_x"], "a");
}

#[test]
fn exit_codes() {
    assert_eq!(lexord(&["type", "akb.cfg"]).0, 2);
    let (code, out, _) = lexord(&["type", "omega_squared.cfg", "--max-depth", "8", "--max-iterations", "16"]);
    assert_eq!((code, out.as_str()), (3, "bound exceeded\n"));
    assert_eq!(lexord(&["type", "missing.cfg"]).0, 1);
    assert_eq!(lexord(&["frobnicate"]).0, 1);
    assert_eq!(lexord(&["type", "worked_example.cfg", "--max-depth", "0"]).0, 1);
}

#[test]
fn parse_errors_carry_locations() {
    let dir = std::env::temp_dir().join(format!("lexord-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "alphabet: a\nstart: S\nS -> a X\n").unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["lexord", "type", bad.to_str().unwrap()], &mut out, &mut err);
    let err = String::from_utf8(err).unwrap();
    assert_eq!(code, 1);
    assert!(err.contains("bad.cfg") && err.contains("3:8"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn omega_table_and_enumeration() {
    let (code, out, _) = lexord(&["omega", "bbka.cfg"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "S  omega");
    let (_, out, _) = lexord(&["enumerate", "worked_example.cfg", "-n", "4"]);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["eps", "a", "aa", "aaa", "aaaa", "ba", "bbaa", "c"]);
    let (_, out, _) = lexord(&["enumerate", "worked_example.cfg", "--probe", "4,6,8"]);
    assert!(out.contains("ba  5 7 9  growing"), "{out}");
}

#[test]
fn json_is_deterministic() {
    for args in [
        ["check", "worked_example.cfg", "--json"],
        ["omega", "worked_example.cfg", "--json"],
        ["type", "worked_example.cfg", "--json"],
        ["corpus", "corpus.json", "--json"],
    ] {
        let a = lexord(&args).1;
        let b = lexord(&args).1;
        assert_eq!(a, b, "{args:?}");
        serde_json::from_str::<serde_json::Value>(&a).unwrap();
    }
}

#[test]
fn text_and_json_agree() {
    for f in ["worked_example.cfg", "bbka.cfg", "akb.cfg", "corpus/omega_five_plus_five.cfg"] {
        let text = lexord(&["type", f]).1;
        let json: lexord::ordertype::OrderType = serde_json::from_str(&lexord(&["type", f, "--json"]).1).unwrap();
        assert_eq!(text.trim(), json.to_string());
    }
}

#[test]
fn normalize_and_dot() {
    let (code, out, _) = lexord(&["normalize", "worked_example.cfg"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# the empty word was removed"), "{out}");
    let reparsed = lexord::grammar::parse_grammar(out.split_once('\n').unwrap().1).unwrap();
    assert_eq!(
        lexord::oracle::enumerate(&reparsed, 6).unwrap().words.len() + 1,
        lexord::oracle::enumerate(&common::grammar_file("worked_example.cfg"), 6).unwrap().words.len()
    );
    let dir = std::env::temp_dir().join(format!("lexord-dot-{}", std::process::id()));
    let (code, _, _) = lexord(&["check", "bbka.cfg", "--emit-dot", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(dir.join("S.dot")).unwrap();
    assert!(dot.starts_with("digraph"), "{dot}");
    std::fs::remove_dir_all(&dir).unwrap();
}
