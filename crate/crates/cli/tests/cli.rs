use std::process::{Command, Output};

fn bifurcate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifurcate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

const HEADER: &str =
    "family,n,t,psi,algo,seed,steps,oracle_calls,found,target_inorder_rank,cost_linear_decider";

#[test]
fn search_prints_one_record() {
    let text = stdout(&bifurcate(&[
        "search", "--family", "comb", "--n", "40", "--t", "3", "--algo", "full", "--seed", "5",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("comb,40,3,0,full,5,"), "{}", lines[1]);
    assert!(lines[1].contains(",true,"));
}

#[test]
fn complete_path_from_h_and_delta() {
    let text = stdout(&bifurcate(&[
        "search",
        "--family",
        "complete_path",
        "--h",
        "3",
        "--delta",
        "4",
        "--psi",
        "2",
    ]));
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("complete_path,12,9,2,bifurcation,0,"));
}

#[test]
fn sweep_resumes_without_duplicating_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let csv = csv.to_str().unwrap();
    let args = [
        "sweep",
        "--n",
        "32,64",
        "--t",
        "2,5",
        "--trials",
        "2",
        "--algo",
        "bifurcation,rounds",
        "--out",
        csv,
    ];
    stdout(&bifurcate(&args));
    let first = std::fs::read_to_string(csv).unwrap();
    assert_eq!(first.lines().next(), Some(HEADER));
    assert_eq!(first.lines().count(), 1 + 2 * 2 * 2 * 2);
    stdout(&bifurcate(&args));
    assert_eq!(std::fs::read_to_string(csv).unwrap(), first);
    // Widening the grid only adds the missing rows.
    let wider = [
        "sweep",
        "--n",
        "32,64",
        "--t",
        "2,5",
        "--trials",
        "3",
        "--algo",
        "bifurcation,rounds",
        "--out",
        csv,
    ];
    stdout(&bifurcate(&wider));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with(&first));
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 3 * 2);
}

#[test]
fn fit_reads_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let csv = csv.to_str().unwrap();
    stdout(&bifurcate(&[
        "sweep",
        "--n",
        "64,128,256",
        "--t",
        "4,9,16",
        "--trials",
        "1",
        "--algo",
        "full",
        "--out",
        csv,
    ]));
    let text = stdout(&bifurcate(&["fit", csv]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algo,n_exponent,t_exponent,intercept,residual_rms,cells"
    );
    assert!(
        lines[1].starts_with("full,") && lines[1].ends_with(",9"),
        "{}",
        lines[1]
    );
}

#[test]
fn game_transcript_csv() {
    let text = stdout(&bifurcate(&["game", "--h", "4", "--strategy", "random:3"]));
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("step,query,price,answer,range_lo,range_hi")
    );
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    assert_eq!(last[4], last[5], "game ends with a single label");
}

#[test]
fn minimax_modes_agree() {
    let sensible = stdout(&bifurcate(&["minimax", "--h", "6"]));
    let in_range = stdout(&bifurcate(&["minimax", "--h", "6", "--mode", "in-range"]));
    assert_eq!(sensible, in_range);
    assert!(sensible.contains("\n1,1\n"));
}

#[test]
fn adversary_reports_every_player() {
    let text = stdout(&bifurcate(&["adversary", "--n", "64", "--t", "4"]));
    let players: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(players, ["bifurcation", "rounds", "full"]);
}

#[test]
fn contract_violations_exit_nonzero() {
    for args in [
        &["search", "--n", "3", "--t", "100"][..],
        &["search", "--family", "random", "--h", "3", "--delta", "4"],
        &["search", "--n", "50", "--t", "4", "--psi", "9"],
        &[
            "search",
            "--n",
            "50",
            "--t",
            "4",
            "--target",
            "fixed:100000",
        ],
        &["minimax", "--h", "11"],
        &["game", "--h", "0"],
        &["search", "--algo", "quantum", "--n", "5", "--t", "1"],
    ] {
        let out = bifurcate(args);
        assert!(!out.status.success(), "{args:?} succeeded");
    }
}
