use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gstrata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gstrata")).args(args).env_remove("GSTRATA_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn dims_rows() {
    let o = gstrata(&["dims", "3", "1", "3", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["dimension"], "5");
    assert_eq!(v["rows"][0]["pi1"], "Unknown");

    let o = gstrata(&["dims", "1", "2", "4", "--format", "csv"]);
    let text = stdout(&o);
    let nonempty: Vec<&str> = text.lines().filter(|l| l.contains(",true,")).collect();
    assert_eq!(nonempty, vec!["1,2,4,2,true,4,-,3,Trivial"]);
    assert!(text.starts_with("h,k,n,i,nonempty,dimension,local_model,codim_step,pi1\n"));

    let o = gstrata(&["dims", "2", "2", "3", "4", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2,2,3,4,false,-"));

    assert_eq!(gstrata(&["dims", "2", "3", "3"]).status.code(), Some(2));
    assert_eq!(gstrata(&["dims", "2", "x", "3"]).status.code(), Some(2));
}

#[test]
fn sample_classify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (h, k, n, i, field) in [("2", "1", "3", "2", "5"), ("3", "2", "5", "5", "rational"), ("4", "1", "4", "3", "7")]
    {
        let o = gstrata(&["sample", h, k, n, i, "--field", field, "--seed", "1"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let again = gstrata(&["sample", h, k, n, i, "--field", field, "--seed", "1"]);
        assert_eq!(o.stdout, again.stdout);
        let file = write(dir.path(), "s.json", &stdout(&o));
        let c = gstrata(&["classify", &file, "--format", "json"]);
        assert!(c.status.success());
        let v: Value = serde_json::from_str(&stdout(&c)).unwrap();
        assert_eq!(v["rows"][0]["i"], i);
        assert_eq!(v["rows"][0]["h"], h);
    }
    assert_eq!(gstrata(&["sample", "2", "1", "3", "1", "--field", "5"]).status.code(), Some(6));
}

#[test]
fn sampling_cap_reports_exit_seven() {
    // three distinct lines of F_2^2 exist, but one draw rarely finds them
    let codes: Vec<Option<i32>> = (0..20)
        .map(|s| {
            gstrata(&["sample", "3", "1", "2", "2", "--field", "2", "--max-attempts", "1", "--seed", &s.to_string()])
                .status
                .code()
        })
        .collect();
    assert!(codes.contains(&Some(7)));
    assert!(codes.iter().all(|c| matches!(c, Some(0) | Some(7))));
}

#[test]
fn classify_errors() {
    let dir = tempfile::tempdir().unwrap();
    let axes = write(
        dir.path(),
        "axes.json",
        r#"{"field":{"kind":"rational"},"n":3,"k":1,"subspaces":[["1","0","0"],["0","1","0"]]}"#,
    );
    let o = gstrata(&["classify", &axes, "--format", "csv"]);
    assert_eq!(stdout(&o), "h,k,n,field,i,intersection_dim,dimension\n2,1,3,Q,2,0,4\n");

    let dup = write(
        dir.path(),
        "dup.json",
        r#"{"field":{"kind":"rational"},"n":3,"k":1,"subspaces":[["1","0","0"],["3","0","0"]]}"#,
    );
    assert_eq!(gstrata(&["classify", &dup]).status.code(), Some(4));
    let bad = write(dir.path(), "bad.json", r#"{"field":"#);
    assert_eq!(gstrata(&["classify", &bad]).status.code(), Some(3));
    assert_eq!(gstrata(&["dual", &bad]).status.code(), Some(3));
}

#[test]
fn dual_is_an_involution_on_files() {
    let dir = tempfile::tempdir().unwrap();
    let raw = r#"{"field":{"kind":"rational"},"n":3,"k":1,"subspaces":[["2","4","0"],["0","1","-1/2"]]}"#;
    let input = write(dir.path(), "in.json", raw);
    let d1 = gstrata(&["dual", &input]);
    assert!(d1.status.success());
    assert!(String::from_utf8_lossy(&d1.stderr).contains("dual intersection dimension 1"));
    let planes = write(dir.path(), "planes.json", &stdout(&d1));
    let c = gstrata(&["classify", &planes, "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&c)).unwrap();
    assert_eq!(v["rows"][0]["k"], "2");
    assert_eq!(v["rows"][0]["intersection_dim"], "1");

    let d2 = gstrata(&["dual", &planes]);
    let canonical = gstrata(&["dual", &write(dir.path(), "d2.json", &stdout(&d2))]);
    assert_eq!(
        stdout(&d2),
        r#"{"field":{"kind":"rational"},"n":3,"k":1,"subspaces":[["1","2","0"],["0","1","-1/2"]]}"#.to_string() + "\n"
    );
    assert_eq!(canonical.stdout, d1.stdout);
}

#[test]
fn census_output() {
    let o = gstrata(&["census", "3", "1", "3", "2", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "h,k,n,i,q,count\n3,1,3,0,2,0\n3,1,3,1,2,0\n3,1,3,2,2,42\n3,1,3,3,2,168\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("partition: PASS"));

    let o = gstrata(&["census", "2", "1", "3", "2"]);
    assert!(stdout(&o).contains("partition: PASS (total 42, expected 42)"));

    let o = gstrata(&["census", "3", "1", "3", "2", "--fit", "2,3,5,7,11,13", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let fit = &v["fits"][0];
    assert_eq!(fit["i"], "2");
    assert_eq!(fit["degree"], 5);
    assert_eq!(fit["matches_dimension"], true);
    assert_eq!(fit["coeffs"], serde_json::json!(["0", "-1", "-1", "0", "1", "1"]));
    assert_eq!(v["skipped"][0]["i"], "3");

    assert_eq!(gstrata(&["census", "3", "1", "3", "2", "--budget", "100"]).status.code(), Some(5));
    let o = Command::new(env!("CARGO_BIN_EXE_gstrata"))
        .args(["census", "3", "1", "3", "2"])
        .env("GSTRATA_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(5));
    assert_eq!(gstrata(&["census", "2", "1", "3", "4"]).status.code(), Some(2));
}

#[test]
fn braid_reports() {
    let o = gstrata(&["braid", "3", "--todd-coxeter", "100"]);
    assert!(stdout(&o).contains("todd-coxeter: FiniteOrder(2)"));
    let o = gstrata(&["braid", "4", "--abelianization", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["divisors"], serde_json::json!(["2"]));
    assert_eq!(v["free_rank"], "2");
    let o = gstrata(&["braid", "2"]);
    assert!(stdout(&o).contains("generators: 0"));
    assert_eq!(gstrata(&["braid", "1"]).status.code(), Some(2));

    let o = gstrata(&["braid", "4", "--emit"]);
    assert!(stdout(&o).starts_with("g 1 2\ng 1 3\ng 2 3\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("relators: 3"));
}

#[test]
fn json_and_csv_are_byte_stable() {
    for args in [
        vec!["dims", "3", "2", "5", "--format", "json"],
        vec!["census", "2", "2", "4", "2", "--format", "csv"],
        vec!["braid", "5", "--abelianization", "--format", "csv"],
        vec!["sample", "3", "2", "6", "5", "--seed", "9"],
    ] {
        assert_eq!(gstrata(&args).stdout, gstrata(&args).stdout, "{args:?}");
    }
}
