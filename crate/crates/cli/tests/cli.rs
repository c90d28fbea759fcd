use std::io::Write;
use std::process::{Command, Output, Stdio};

fn trispace(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_trispace"))
        .args(args)
        .env_remove("TRISPACE_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(args: &[&str]) -> String {
    let o = trispace(&[&["gen"], args].concat(), None);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn symmetric_space_is_rejected_with_witness() {
    let sym = gen(&["--kind", "sym", "--n", "2", "--field", "GF(3)"]);
    let o = trispace(&["check"], Some(&sym));
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("# weakly_triangularizable: false"));
    assert!(out.contains("witness: [[0,1],[1,1]]"));
}

#[test]
fn triangular_space_recovers_standard_flag() {
    let t = gen(&["--kind", "triangular", "--n", "3", "--field", "GF(3)"]);
    let o = trispace(&["check", "-"], Some(&t));
    assert_eq!(o.status.code(), Some(0));
    let o = trispace(&["recover"], Some(&t));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("e1: (1,0,0)\ne2: (0,1,0)\ne3: (0,0,1)\n"));
    assert!(out.contains("[structure]"));
    let o = trispace(&["adapted"], Some(&t));
    assert_eq!(stdout(&o), "(0,0,1)\n");
}

#[test]
fn trace_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.space");
    let trace = dir.path().join("trace.txt");
    std::fs::write(
        &file,
        gen(&[
            "--kind",
            "triangular",
            "--n",
            "2",
            "--field",
            "GF(5)",
            "--seed",
            "4",
        ]),
    )
    .unwrap();
    let o = trispace(
        &[
            "recover",
            file.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("[level 0]\nn: 2\n"));
    assert!(text.contains("beta: 0"));
}

#[test]
fn recover_refuses_non_triangularizable_input() {
    let sym = gen(&["--kind", "sym", "--n", "2", "--field", "GF(3)"]);
    let o = trispace(&["recover"], Some(&sym));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness"));
}

#[test]
fn gen_round_trips() {
    for args in [
        vec![
            "--kind", "random", "--n", "3", "--field", "GF(9)", "--dim", "4", "--seed", "9",
        ],
        vec!["--kind", "sl", "--n", "3", "--field", "GF(5)"],
        vec![
            "--kind",
            "triangular",
            "--n",
            "4",
            "--field",
            "GF(7)",
            "--seed",
            "1",
        ],
    ] {
        let text = gen(&args);
        assert_eq!(text, gen(&args));
        let body: String = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        let s = trispace::spacefile::parse(&text, true).unwrap();
        assert_eq!(trispace::spacefile::render(&s), body);
    }
}

#[test]
fn joint_of_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.space");
    let b = dir.path().join("b.space");
    std::fs::write(
        &a,
        gen(&["--kind", "triangular", "--n", "1", "--field", "GF(3)"]),
    )
    .unwrap();
    std::fs::write(
        &b,
        gen(&[
            "--kind",
            "triangular",
            "--n",
            "2",
            "--field",
            "GF(3)",
            "--seed",
            "2",
        ]),
    )
    .unwrap();
    let j = gen(&[
        "--kind",
        "joint",
        "--block",
        a.to_str().unwrap(),
        "--block",
        b.to_str().unwrap(),
    ]);
    assert!(j.contains("n 3\ndim 6\n"));
    assert_eq!(trispace(&["check"], Some(&j)).status.code(), Some(0));
}

#[test]
fn sample_mode_prints_seed() {
    let full = "field GF(3)\nn 2\ndim 4\nmat 1 0 0 0\nmat 0 1 0 0\nmat 0 0 1 0\nmat 0 0 0 1\n";
    let o = trispace(&["check", "--mode", "sample:20"], Some(full));
    assert!(stdout(&o).contains("# seed: 0"));
    assert_eq!(o.status.code(), Some(2));
    let t = gen(&["--kind", "triangular", "--n", "2", "--field", "GF(3)"]);
    let o = trispace(&["check", "--mode", "sample:20:5"], Some(&t));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# weakly_triangularizable: unknown"));
}

#[test]
fn lemma_sweep_summary() {
    let o = trispace(&["lemma31", "--field", "GF(3)", "--degree", "4"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2187 pairs, 0 violations\n");
    let o = trispace(&["lemma31", "--field", "GF(2)", "--degree", "3"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = trispace(
        &[
            "--exploratory",
            "lemma31",
            "--field",
            "GF(2)",
            "--degree",
            "3",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("counterexample: true"));
}

#[test]
fn campaign_reports_are_byte_identical() {
    let args = [
        "campaign", "--n", "2", "--field", "GF(5)", "--dim", "3", "--shards", "3",
    ];
    let a = trispace(&args, None);
    let b = trispace(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.contains("# total: 156\n# hits: 6\n"));
    let seq = trispace(&[&args[..], &["--sequential"]].concat(), None);
    assert_eq!(seq.stdout, a.stdout);
    let timed = trispace(&[&args[..], &["--timing"]].concat(), None);
    assert!(stdout(&timed).contains("# elapsed_seconds: "));
}

#[test]
fn campaign_resume_from_journal() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("c.journal");
    let j = journal.to_str().unwrap();
    let args = [
        "campaign",
        "--n",
        "2",
        "--field",
        "GF(3)",
        "--dim",
        "3",
        "--contains-identity",
        "--shards",
        "2",
        "--journal",
        j,
    ];
    let first = trispace(&args, None);
    assert_eq!(first.status.code(), Some(0));
    let resumed = trispace(&[&args[..], &["--resume"]].concat(), None);
    assert_eq!(resumed.stdout, first.stdout);
    assert!(stdout(&first).contains("# total: 13\n# hits: 4\n"));
}

#[test]
fn budget_precedence_and_exit_code() {
    let args = ["campaign", "--n", "2", "--field", "GF(3)", "--dim", "3"];
    let o = trispace(&[&["--budget", "10"], &args[..]].concat(), None);
    assert_eq!(o.status.code(), Some(4));
    let run_env = |budget: &str, extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_trispace"))
            .args([extra, &args[..]].concat())
            .env("TRISPACE_BUDGET", budget)
            .output()
            .unwrap()
    };
    assert_eq!(run_env("10", &[]).status.code(), Some(4));
    assert_eq!(run_env("10", &["--budget", "1000"]).status.code(), Some(0));
    assert_eq!(run_env("lots", &[]).status.code(), Some(1));
}

#[test]
fn errors_carry_positions() {
    let o = trispace(&["check"], Some("field GF(3)\nn 2\ndim 1\nmat 1 0 9 0\n"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4, column 9"));
    let o = trispace(&["flags", "--n", "3", "--field", "GF(6)"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = trispace(&["flags", "--n", "3", "--field", "GF(3)"], None);
    assert_eq!(stdout(&o), "52\n");
    assert_eq!(trispace(&["bogus"], None).status.code(), Some(1));
}
