use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::NamedTempFile;

const EXAMPLE: &str = "\
# example tree
1 2
1 3
1 4
2 5
2 6
4 7
4 8
4 9
5 10
8 11
8 12
12 13
";

fn tree_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn exe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_path-ideals"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn with_tree(sub: &str, text: &str, extra: &[&str]) -> Output {
    let f = tree_file(text);
    let path = f.path().to_str().unwrap().to_string();
    let mut args = vec![sub, path.as_str()];
    args.extend_from_slice(extra);
    exe(&args)
}

#[test]
fn generators_of_example_tree() {
    let o = with_tree("generators", EXAMPLE, &["--t", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 4 8 12 13\n");
    let o = with_tree("generators", EXAMPLE, &["--t", "2"]);
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn betti_of_short_path() {
    let o = with_tree("betti", "1 2\n2 3\n3 4\n", &["--t", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0\t0\t1\n1\t2\t3\n2\t3\t2\n");
    let o = with_tree(
        "betti",
        "1 2\n2 3\n3 4\n",
        &["--t", "2", "--format", "json"],
    );
    assert_eq!(stdout(&o).trim(), r#"{"0,0":"1","1,2":"3","2,3":"2"}"#);
}

#[test]
fn invariants_of_example_tree() {
    let reg = with_tree("reg", EXAMPLE, &["--t", "3"]);
    let pd = with_tree("pd", EXAMPLE, &["--t", "3"]);
    let bound = with_tree("reg-bound", EXAMPLE, &["--t", "3"]);
    assert!(reg.status.success() && pd.status.success());
    let reg: usize = stdout(&reg).trim().parse().unwrap();
    let text = stdout(&bound);
    let b: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("bound\t"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(reg <= b);
    assert!(text.contains("disjoint_paths\t2\n"));
}

#[test]
fn linear_strand_and_linearity() {
    let o = with_tree("linear-strand", EXAMPLE, &["--t", "2", "--i", "1"]);
    assert_eq!(stdout(&o), "17\n");
    let o = with_tree("check-linear", "1 2\n1 3\n1 4\n", &["--t", "2"]);
    assert!(stdout(&o).starts_with("linear\ttrue\n"));
    let o = with_tree("check-linear", "1 2\n2 3\n3 4\n4 5\n5 6\n", &["--t", "2"]);
    assert!(stdout(&o).starts_with("linear\tfalse\n"));
}

#[test]
fn clean_and_broom() {
    let o = with_tree("clean", "1 2\n2 3\n1 4\n", &["--t", "3"]);
    assert_eq!(stdout(&o), "1 2\n2 3\n");
    let o = with_tree("broom", "1 2\n2 3\n2 4\n", &["--t", "2"]);
    assert_eq!(stdout(&o), "broom\ttrue\nhandle\t2\n");
}

#[test]
fn line_command() {
    let o = exe(&["line", "--n", "5", "--t", "3", "--verify"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "pd\t2\nreg\t2\nbeta\t0\t0\t1\nbeta\t1\t3\t3\nverified\ttrue\n"
    );
}

#[test]
fn oracle_and_compare() {
    let o = with_tree("compare", EXAMPLE, &["--t", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "match\n");
    let rec = with_tree("betti", EXAMPLE, &["--t", "2"]);
    let ora = with_tree("oracle", EXAMPLE, &["--t", "2", "--char", "2"]);
    assert_eq!(stdout(&rec), stdout(&ora));
    let bad = with_tree("oracle", EXAMPLE, &["--t", "2", "--char", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_path-ideals"))
        .args(["pd", "-", "--t", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"1 2\n1 3\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn malformed_input_exits_with_two() {
    let o = with_tree("betti", "1 2\n3 2\n", &["--t", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    let o = with_tree("betti", "1 2\n2 1\n", &["--t", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = exe(&["pd", "/nonexistent/tree.txt", "--t", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = with_tree("check-linear", "1 2\n3 4\n", &["--t", "2"]);
    assert_eq!(o.status.code(), Some(2));
}
