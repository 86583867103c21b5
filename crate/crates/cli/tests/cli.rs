use std::io::Write;
use std::process::{Command, Output, Stdio};

fn prgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn prgraph_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_prgraph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classical_witness_is_valid() {
    let o = prgraph(&["witness", "classical", "--m", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# prgraph "));
    assert!(out.contains("seed=0"));
    let row = out.lines().last().unwrap();
    assert!(row.ends_with("VALID") && !row.ends_with("INVALID"), "{row}");
    let cols: Vec<&str> = row.split(',').collect();
    let letters: usize = cols[5].parse().unwrap();
    assert!(letters <= 1 << 7);
}

#[test]
fn components_of_z3_squared() {
    let o = prgraph(&["prp", "components", "--group", "zpn", "--p", "3", "--n", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2 components: 24,24"));
}

#[test]
fn certificate_pipeline() {
    let built = prgraph(&["cert", "build", "--omega", "dcb", "--m", "4"]);
    assert!(built.status.success());
    let v = prgraph_stdin(&["cert", "verify"], &built.stdout);
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stderr));
    assert!(stdout(&v).lines().last().unwrap().ends_with(",VALID"));

    // Drop one move from the move list.
    let text = stdout(&built);
    let tampered: String = text
        .lines()
        .map(|l| match l.strip_prefix("moves ") {
            Some(rest) => format!("moves {}\n", rest.split_once(' ').unwrap().1),
            None => format!("{l}\n"),
        })
        .collect();
    let v = prgraph_stdin(&["cert", "verify"], tampered.as_bytes());
    assert_eq!(v.status.code(), Some(2));
    assert!(stdout(&v).contains("INVALID"));
}

#[test]
fn certificate_file_argument() {
    let built = prgraph(&["cert", "build", "--omega", "db", "--m", "2"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cert");
    std::fs::write(&path, &built.stdout).unwrap();
    let v = prgraph(&["cert", "verify", path.to_str().unwrap()]);
    assert!(v.status.success());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(prgraph(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(prgraph(&["witness", "classical"]).status.code(), Some(1));
    assert_eq!(
        prgraph(&["witness", "classical", "--m", "3", "--bogus"]).status.code(),
        Some(1)
    );
    assert!(prgraph(&["--help"]).status.success());
}

#[test]
fn engine_errors_name_the_precondition() {
    let o = prgraph(&["witness", "general", "--omega", "dc(b)", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-witness"));
    let o = prgraph(&["schreier", "--m", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds configured maximum"));
}

#[test]
fn parse_check_reports_positions() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.grp");
    std::fs::write(
        &good,
        "omega w = \"\"(\"dcb\")*\ngroup G = grigorchuk(w)\ngroup H { gen x = swap gen y = (x, y) }\n",
    )
    .unwrap();
    let o = prgraph(&["parse", "check", good.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("group G = grigorchuk(w)"));

    let bad = dir.path().join("bad.grp");
    std::fs::write(&bad, "omega w = \"\"(\"dcb\")*\ngroup H {\n  gen x = (z, id)\n}\n").unwrap();
    let o = prgraph(&["parse", "check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("3:12"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn file_groups_drive_element_commands() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.grp");
    std::fs::write(
        &f,
        "group G {\n  gen a = swap\n  gen b = (a, c)\n  gen c = (a, d)\n  gen d = (id, b)\n}\n",
    )
    .unwrap();
    let f = f.to_str().unwrap();
    let o = prgraph(&["element", "act", "abababab", "111", "--file", f, "--name", "G"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().last().unwrap().ends_with(",110"));
    let o = prgraph(&["element", "sections", "abab", "--file", f]);
    assert!(o.status.success());
}

#[test]
fn element_commands() {
    let o = prgraph(&["element", "act", "abababab", "111"]);
    assert_eq!(stdout(&o).lines().last().unwrap(), "abababab,111,110");
    let o = prgraph(&["element", "order", "ad"]);
    assert_eq!(stdout(&o).lines().last().unwrap(), "ad,4");
    let o = prgraph(&["element", "reduce", "abba"]);
    assert_eq!(stdout(&o).lines().last().unwrap(), "abba,1,0");
    let o = prgraph(&["element", "sections", "abab", "--format", "json"]);
    let last: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(last["swapped"], false);
}

#[test]
fn json_and_dot_headers() {
    let o = prgraph(&["schreier", "--m", "3", "--format", "json"]);
    let first: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["seed"], 0);
    assert!(first["prgraph"].is_string());
    let o = prgraph(&["schreier", "--m", "2", "--format", "dot"]);
    let out = stdout(&o);
    assert!(out.starts_with("// prgraph "));
    assert!(out.contains("digraph"));
    let o = prgraph(&[
        "prp", "ball", "--group", "zd", "--d", "1", "--tuple", "1;1", "--radius", "2", "--format", "dot",
    ]);
    assert!(stdout(&o).contains("graph prp"));
}

#[test]
fn ball_growth_on_z() {
    let o = prgraph(&[
        "prp", "ball", "--group", "zd", "--d", "1", "--tuple", "1;1", "--radius", "16", "--growth", "4,8,16",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("16,"));
    assert!(out.contains("# growth min_rate="));
}

#[test]
fn walk_respects_cost_bound() {
    let o = prgraph(&["walk", "--m", "5"]);
    let out = stdout(&o);
    let summary = out.lines().find(|l| l.starts_with("# visits=")).unwrap();
    let field = |k: &str| -> usize {
        summary
            .split_whitespace()
            .find_map(|t| t.strip_prefix(k))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(field("visits="), 32);
    assert!(field("cost=") <= field("bound="));
}

#[test]
fn rw_speed_is_thread_independent() {
    let base = [
        "rw-speed", "--group", "zpn", "--p", "5", "--n", "2", "--pad", "1", "--steps", "20", "--trials", "30",
        "--seed", "9",
    ];
    let one = prgraph(&[&base[..], &["--threads", "1"]].concat());
    let four = prgraph(&[&base[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let other = prgraph(&[&base[..13], &["--seed", "10"]].concat());
    assert_ne!(one.stdout, other.stdout);
}
