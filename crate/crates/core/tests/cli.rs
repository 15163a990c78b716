use std::process::{Command, Output};

use reacert::qstruct::{EpsilonTensor, RHat};
use reacert::ring::LaurentPoly;
use reacert::tensor::{CoTensor, TensorOp};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reacert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn axioms_emit_five_passing_certificates() {
    let o = run(&["axioms", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn newton_json_has_one_certificate_per_index() {
    let o = run(&["newton", "--n", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let certs: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(certs.len(), 2);
    for (k, c) in certs.iter().enumerate() {
        assert_eq!(c["status"], "pass");
        assert_eq!(c["witness"], "");
        assert_eq!(c["n"], 2);
        assert_eq!(c["params"]["i"], (k + 1).to_string());
        assert!(c["wall_time_ms"].is_null());
    }
}

#[test]
fn failing_certificate_exits_one() {
    let o = run(&["bmatrix", "--n", "2", "--beta", "3", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let c: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(c["status"], "fail");
    assert_ne!(c["witness"], "");
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(run(&["newton", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["newton", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["axioms", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--q", "0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--q", "x/y"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--rep", "other"]).status.code(), Some(2));
}

#[test]
fn out_file_and_dash() {
    let dir = std::env::temp_dir().join(format!("reacert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("alpha.txt");
    let o = run(&["alpha", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let dash = stdout(&run(&["alpha", "--n", "3", "--out", "-"]));
    assert_eq!(written, dash);
    assert!(written.starts_with("alpha_1 = "));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dumps_round_trip() {
    for n in 2..=4 {
        let ns = n.to_string();
        let o = run(&["dump-rhat", "--n", &ns]);
        assert_eq!(o.status.code(), Some(0));
        let op: TensorOp<LaurentPoly> = TensorOp::from_json(&stdout(&o)).unwrap();
        assert_eq!(&op, RHat::build(n).unwrap().op());
        let o = run(&["dump-eps", "--n", &ns]);
        let v: CoTensor<LaurentPoly> = CoTensor::from_json(&stdout(&o)).unwrap();
        assert_eq!(&v, EpsilonTensor::build(n).tensor());
    }
}

#[test]
fn relation_dump_lists_rules() {
    let o = run(&["relations", "--n", "2", "--dump"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rules: Vec<&str> = text.lines().filter(|l| l.contains(" -> ")).collect();
    assert_eq!(rules.len(), 6);
    assert!(
        rules.contains(&"l_2_2*l_1_1 -> [1*q^0]*l_1_1*l_2_2"),
        "{rules:?}"
    );
}

#[test]
fn eval_and_classical_commands() {
    let o = run(&[
        "eval", "--n", "3", "--q", "7/2", "--rep", "rsquared", "--check", "inverse",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = run(&["eval", "--n", "2", "--rep", "identity", "--check", "newton"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["classical", "--n", "4", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn timing_flag_records_wall_time() {
    let o = run(&["cayley", "--n", "2", "--json", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    for l in stdout(&o).lines() {
        let c: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(c["wall_time_ms"].is_u64());
    }
}

#[test]
fn central_values_are_printed() {
    let o = run(&["central", "--n", "2", "--values"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains(
        "sigma_q(2) = [1*q^-2 + -1*q^0]*l_1_1*l_1_1 + [1*q^0]*l_1_1*l_2_2 + [-1*q^0]*l_1_2*l_2_1\n"
    ));
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("PASS central"))
            .count(),
        4
    );
}
