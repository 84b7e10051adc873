use std::path::Path;
use std::process::{Command, Output};

const BUCKETS_3D: &str = include_str!("../../core/golden/v1/buckets_3d.txt");
const BUCKETS_2D: &str = include_str!("../../core/golden/v1/buckets_2d.txt");
const CLAIMS: &str = include_str!("../../core/golden/v1/claims.txt");

fn ncosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncosc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

/// Pascal's triangle, zero outside `0 ≤ k ≤ n`.
fn choose(n: i64, k: i64) -> i128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let mut row = vec![1i128];
    for _ in 0..n {
        let mut next = vec![1i128; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    row[k as usize]
}

fn f_ref(n: i64, m: i64) -> i128 {
    let b = 2 * choose(m + n, n) + 4 * choose(m + n - 2, n) + choose(m + n + 1, n) - choose(m + n + 2, n - 1);
    2 * choose(n + m, m) - 4 * m as i128 * choose(m + n + 2, n - 1) - (m * (1 + m)) as i128 * b
}

/// Published closed forms with ħ = m = ω = α = 1.
fn printed(n_rho: u32, mu: i32, n_z: u32, wc: f64, theta: f64, eta: f64) -> (f64, f64) {
    let wt = (1.0 + wc * wc / 4.0f64).sqrt();
    let n1 = f64::from(2 * n_rho) + f64::from(mu.abs()) + 1.0;
    let e0 = wt * n1 + 0.5 * wc * f64::from(mu) + f64::from(n_z) + 0.5;
    let f = f_ref(i64::from(n_rho), i64::from(mu.abs())) as f64;
    let de = -eta * f64::from(mu.abs()) / 2.0 - eta * wc / (4.0 * wt) * n1 - 0.5 * theta * wt * (wt - 0.5 * wc * f);
    (e0, de)
}

#[test]
fn energies_default_row() {
    let o = ncosc(&["energies", "--nrho", "1", "--mu", "0", "--nz", "1", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "n_rho,mu,n_z,omega_c,E0,dE_eta,dE_theta,dE_total,validity");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let e0 = field(&rows[0], 4);
    assert!((e0 - (3.0 * 1.25f64.sqrt() + 1.5)).abs() < 1e-14);
    assert!((e0 - 4.8541020).abs() < 1e-7);
    let (_, de) = printed(1, 0, 1, 1.0, 0.01, 0.01);
    assert!((field(&rows[0], 7) - de).abs() < 1e-15);
    assert_eq!(rows[0][8], "ok");
}

#[test]
fn energies_without_field_have_no_eta_shift_at_zero_mu() {
    let o = ncosc(&["energies", "--omega-c", "0", "--grid", "4:2", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 15 * 3);
    for r in rows.iter().filter(|r| r[1] == "0") {
        assert_eq!(field(r, 5), 0.0);
    }
}

#[test]
fn validity_fails_for_strong_eta() {
    let o = ncosc(&["energies", "--eta", "0.2", "--nrho", "0", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&stdout(&o))[0][8], "fail");
}

#[test]
fn ftable_rows() {
    let o = ncosc(&["ftable"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for (n, m, f) in [(1, 0, 2), (2, 0, 2), (2, 1, -28), (3, 0, 2), (3, 1, -58), (3, 2, -286)] {
        let row = text.lines().find(|l| {
            let c: Vec<&str> = l.split_whitespace().collect();
            c.len() == 3 && c[0] == n.to_string() && c[1] == m.to_string()
        });
        assert_eq!(row.unwrap().split_whitespace().nth(2).unwrap(), f.to_string());
    }
    let o = ncosc(&["ftable", "--nrho", "4", "--format", "csv"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1 + 2 + 3 + 4);
    for r in &rows {
        let (n, m): (i64, i64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(r[2].parse::<i128>().unwrap(), f_ref(n, m));
    }
    assert_eq!(rows.iter().find(|r| r[0] == "4" && r[1] == "0").unwrap()[2], "2");
    assert_eq!(rows.iter().find(|r| r[0] == "4" && r[1] == "3").unwrap()[2], f_ref(4, 3).to_string());
}

#[test]
fn sweep_first_row_and_header() {
    let o = ncosc(&["sweep", "--omega-c-range", "0.1:10:5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "omega_c,E0,dE1_paper,ratio_paper,dE1_oracle,ratio_oracle");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.len() == 6));
    assert_eq!(field(&rows[0], 0), 0.1);
    let (e0, de) = printed(1, 0, 1, 0.1, 0.01, 0.01);
    assert!((field(&rows[0], 1) - e0).abs() < 1e-14 * e0);
    assert!((field(&rows[0], 3) - (de / e0).abs()).abs() < 1e-14);
    // μ = 0: the oracle η part is +ηω_c(N+1)/(4mω̃), the θ part θmω̃ω_c(N+1)/4
    let wt = (1.0f64 + 0.0025).sqrt();
    let want = 0.01 * 0.1 * 3.0 / (4.0 * wt) + 0.01 * wt * 0.1 * 3.0 / 4.0;
    assert!((field(&rows[0], 4) - want).abs() < 1e-14);
}

#[test]
fn sweep_is_deterministic() {
    let a = ncosc(&["sweep", "--omega-c-range", "0.1:10:64", "--nrho", "2", "--mu", "1", "--nz", "1"]);
    let b = ncosc(&["sweep", "--omega-c-range", "0.1:10:64", "--nrho", "2", "--mu", "1", "--nz", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_grows_linearly_at_strong_field() {
    let o = ncosc(&["sweep", "--omega-c-range", "100:200:2"]);
    let rows = csv_rows(&stdout(&o));
    let r = field(&rows[1], 3) / field(&rows[0], 3);
    assert!((1.8..=2.2).contains(&r), "{r}");
}

#[test]
fn undeformed_sweep_has_no_corrections() {
    let o = ncosc(&["sweep", "--theta", "0", "--eta", "0", "--omega-c-range", "0.5:3:4"]);
    assert!(o.status.success());
    for r in csv_rows(&stdout(&o)) {
        for i in 2..6 {
            assert_eq!(field(&r, i), 0.0);
        }
    }
}

#[test]
fn quantum_numbers_must_fit_the_basis() {
    for args in [
        &["energies", "--nrho", "2", "--basis", "4"][..],
        &["sweep", "--nrho", "2", "--basis", "4"][..],
        &["verify", "--nrho", "2", "--basis", "4"][..],
    ] {
        let o = ncosc(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).contains("not representable"), "{}", stderr(&o));
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ncosc(&["sweep", "--omega-c-range", "3:1:5"]).status.code(), Some(1));
    assert_eq!(ncosc(&["sweep", "--omega-c-range", "1:3:1"]).status.code(), Some(1));
    assert_eq!(ncosc(&["energies", "--alpha", "1.5"]).status.code(), Some(1));
    assert_eq!(ncosc(&["energies", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(ncosc(&["nonsense"]).status.code(), Some(1));
    assert_eq!(ncosc(&["energies", "--omega-c", "x"]).status.code(), Some(1));
    assert_eq!(ncosc(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "omega_c = 2\neta = 0.05\nnrho = 1\nnz = 1\nformat = csv\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = csv_rows(&stdout(&ncosc(&["energies", "--config", c])));
    assert_eq!(field(&from_file[0], 3), 2.0);
    let (_, de) = printed(1, 0, 1, 2.0, 0.01, 0.05);
    assert!((field(&from_file[0], 7) - de).abs() < 1e-15);
    let flagged = csv_rows(&stdout(&ncosc(&["energies", "--config", c, "--omega-c", "3"])));
    assert_eq!(field(&flagged[0], 3), 3.0);
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(ncosc(&["energies", "--config", c]).status.code(), Some(1));
}

#[test]
fn output_file_and_spectrum_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let dump = dir.path().join("spectrum.txt");
    let o = ncosc(&[
        "energies",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
        "--dump-spectrum",
        dump.to_str().unwrap(),
        "--basis",
        "3",
        "--nrho",
        "0",
        "--theta",
        "0",
        "--eta",
        "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("n_rho,"));
    let spec = std::fs::read_to_string(&dump).unwrap();
    let mut lines = spec.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    let levels: Vec<f64> = lines.map(|l| l.parse().unwrap()).collect();
    assert_eq!(levels.len(), 64);
    assert!((levels[0] - (1.25f64.sqrt() + 0.5)).abs() < 1e-12);
}

#[test]
fn expand_matches_golden_buckets() {
    let o = ncosc(&["expand"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), BUCKETS_3D);
    let plane = stdout(&ncosc(&["expand", "--space", "plane"]));
    assert_eq!(plane, BUCKETS_2D);
    let eta = |s: &str| s.lines().find(|l| l.starts_with("(0,1)")).unwrap().to_string();
    assert_ne!(eta(&plane), eta(BUCKETS_3D));
    assert!(!eta(&plane).contains("pz"));
    let csv = stdout(&ncosc(&["expand", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 7);
}

fn verify_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--grid", "2:1", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    ncosc(&args)
}

#[test]
fn verify_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let oa = verify_into(&a, &[]);
    let ob = verify_into(&b, &[]);
    assert_eq!(oa.status.code(), Some(0), "{}", stderr(&oa));
    assert_eq!(ob.status.code(), Some(0));
    for name in ["ledger.txt", "report.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    let ledger = std::fs::read_to_string(a.join("ledger.txt")).unwrap();
    for published in ["1.79", "2.58", "2.71", "3.11", "2.81", "3.20"] {
        assert!(ledger.lines().any(|l| l.split_whitespace().nth(1) == Some(published)), "{published}");
    }
    let csv = std::fs::read_to_string(a.join("report.csv")).unwrap();
    assert!(csv.starts_with(
        "n_rho,mu,n_z,omega_c,e0_paper,e0_oracle,de_eta_paper,de_eta_oracle,de_theta_paper,de_theta_oracle,\
         slope_eta_fd,slope_theta_fd,verdict_eta,verdict_theta\n"
    ));
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 14));
}

#[test]
fn degenerate_field_is_flagged_not_fatal() {
    // ω_c = ω makes ω̃ ± ω_c/2 differ by ω, so many levels coincide
    let tmp = tempfile::tempdir().unwrap();
    let o = verify_into(tmp.path(), &["--omega-c", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ledger = std::fs::read_to_string(tmp.path().join("ledger.txt")).unwrap();
    assert!(ledger.contains("degenerate(gap="));
    assert!(ledger.contains("internal consistency: PASS"));
}

#[test]
fn tampered_claims_are_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let claims = tmp.path().join("claims.txt");
    let tampered = CLAIMS.replace("x_hat: alpha*x", "x_hat: -alpha*x");
    assert_ne!(tampered, CLAIMS);
    std::fs::write(&claims, tampered).unwrap();
    let out = tmp.path().join("r");
    let o = verify_into(&out, &["--claims", claims.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ledger = std::fs::read_to_string(out.join("ledger.txt")).unwrap();
    assert!(ledger.contains("[MISMATCH] x_hat"));
    std::fs::write(&claims, "no_such_claim: x\n").unwrap();
    assert_eq!(verify_into(&out, &["--claims", claims.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_defaults_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ncosc(&["verify", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("internal consistency: PASS"));
    let csv = std::fs::read_to_string(tmp.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 140);
}
