use std::path::PathBuf;
use std::process::{Command, Output};

fn escher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_escher"))
        .args(args)
        .env_remove("ESCHER_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("escher-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Pixels of a plain PPM as `(width, height, rows of rgb triples)`.
fn read_ppm(path: &PathBuf) -> (usize, usize, Vec<Vec<[u8; 3]>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut it = text.split_whitespace();
    assert_eq!(it.next(), Some("P3"));
    let w: usize = it.next().unwrap().parse().unwrap();
    let h: usize = it.next().unwrap().parse().unwrap();
    assert_eq!(it.next(), Some("255"));
    let vals: Vec<u8> = it.map(|v| v.parse().unwrap()).collect();
    assert_eq!(vals.len(), w * h * 3);
    let rows = vals
        .chunks(w * 3)
        .map(|r| r.chunks(3).map(|p| [p[0], p[1], p[2]]).collect())
        .collect();
    (w, h, rows)
}

#[test]
fn eval_prints_principal_values() {
    let o = escher(&["eval", "7 - 3 kis 2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5\n");
    assert_eq!(stdout(&escher(&["eval", "s3 + s4"])), "7\n");
    assert_eq!(stdout(&escher(&["eval", "5 sik 7"])), "s(4)\n");
    assert_eq!(stdout(&escher(&["eval", "5 sik 7", "--unicode"])), "ς(4)\n");
    assert_eq!(
        stdout(&escher(&["eval", "alts(s6 / 3)"])),
        "{ cx(2; 1/3), s(2), cx(2; 5/3) }\n"
    );
}

#[test]
fn chains_warn_on_stderr() {
    let o = escher(&["eval", "2 kis 3 kis 4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "5\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn exit_codes() {
    assert_eq!(escher(&["eval", "1 +"]).status.code(), Some(1));
    assert_eq!(escher(&["eval", "root(-4, 2)"]).status.code(), Some(1));
    assert_eq!(escher(&["check", "--law", "99.9"]).status.code(), Some(2));
    assert_eq!(escher(&["check", "--law", "14.0@0"]).status.code(), Some(2));
    assert_eq!(escher(&["check"]).status.code(), Some(2));
    assert_eq!(escher(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        escher(&["plot", "--out", "/nonexistent-dir/x.ppm"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn check_single_law() {
    let o = escher(&["check", "--law", "21.3", "--trials", "1000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS 21.3"));
}

#[test]
fn check_all_is_deterministic_and_dumps_json() {
    let json = tmp("suite.json");
    let args = [
        "check",
        "--all",
        "--trials",
        "200",
        "--seed",
        "1",
        "--json",
        json.to_str().unwrap(),
    ];
    let a = escher(&args);
    assert_eq!(a.status.code(), Some(0));
    let dump = std::fs::read_to_string(&json).unwrap();
    let b = escher(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(dump, std::fs::read_to_string(&json).unwrap());
    let lines = stdout(&a).lines().filter(|l| l.starts_with("PASS")).count();
    assert!(lines >= 30, "{lines} passing laws");
    assert!(dump.contains("\"passed\": true"));
    assert!(dump.contains("\"21.3S\""));
}

#[test]
fn precision_from_environment() {
    let run = |bits: &str| {
        Command::new(env!("CARGO_BIN_EXE_escher"))
            .args(["eval", "root(2, 2)", "--digits", "70"])
            .env("ESCHER_PRECISION_BITS", bits)
            .output()
            .unwrap()
    };
    let lo = stdout(&run("64"));
    let hi = stdout(&run("512"));
    assert!(
        hi.starts_with("1.41421356237309504880168872420969807856967187537694807317667973799"),
        "{hi}"
    );
    assert_ne!(lo, hi);
    assert_eq!(run("3").status.code(), Some(2));
}

#[test]
fn plot_marks_the_pseudoequal_cells() {
    let out = tmp("zero.ppm");
    let o = escher(&["plot", "--center", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (w, h, rows) = read_ppm(&out);
    assert_eq!((w, h), (64, 64));
    // re = 0 is column 32; t = 1 is row 31 and t = 0 is row 63
    let black: Vec<(usize, usize)> = (0..h)
        .flat_map(|r| (0..w).map(move |c| (c, r)))
        .filter(|&(c, r)| rows[r][c] == [0, 0, 0])
        .collect();
    assert_eq!(black, vec![(32, 31), (32, 63)]);
    let first = std::fs::read(&out).unwrap();
    escher(&["plot", "--center", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(first, std::fs::read(&out).unwrap());
}

#[test]
fn single_pixel_plot() {
    let out = tmp("one.ppm");
    let args = [
        "plot", "--center", "0", "--re-min", "-1/2", "--re-max", "1/2", "--t-min", "-1/2",
        "--t-max", "1/2",
    ];
    let o = escher(
        &[
            &args[..],
            &[
                "--width",
                "1",
                "--height",
                "1",
                "--out",
                out.to_str().unwrap(),
            ],
        ]
        .concat(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        "P3\n1 1\n255\n0 0 0\n"
    );
}

#[test]
fn stigma_centre_is_a_half_band_shift() {
    let (a, b) = (tmp("two.ppm"), tmp("stwo.ppm"));
    for (center, path) in [("2", &a), ("s(2)", &b)] {
        let o = escher(&["plot", "--center", center, "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (_, h, two) = read_ppm(&a);
    let (_, _, stwo) = read_ppm(&b);
    // the window spans one full period in t, so a half-band shift is a
    // cyclic rotation by half the rows
    for r in 0..h {
        assert_eq!(stwo[r], two[(r + h / 2) % h], "row {r}");
    }
}

#[test]
fn repl_keeps_bindings() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_escher"))
        .arg("repl")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"let x = 2 kis 3\nx * 2\n:digits 5\nroot(2, 2)\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x = 4\n8\n1.4142\n");
}
