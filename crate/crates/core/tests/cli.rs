use std::path::{Path, PathBuf};
use std::process::Command;

use coarse::cli::{parse_config, run, CliError, Report, EXIT_ERROR, EXIT_FAILS, EXIT_OK};
use coarse::logic::Status;

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn report(text: &str) -> Report {
    run(&parse_config(text).expect("config parses")).expect("config runs")
}

fn field<'a>(r: &'a Report, label: &str, key: &str) -> &'a str {
    r.entry(label).unwrap_or_else(|| panic!("no entry {label}")).field(key).unwrap_or_else(|| panic!("no field {label}.{key}"))
}

#[test]
fn half_line_has_one_end() {
    let r = report("space.kind = zplus\nparams.window = 256\nrun.e = ends(all)\n");
    assert_eq!(field(&r, "e", "ends.count"), "1");
    assert_eq!(r.exit_code(), EXIT_OK);
}

#[test]
fn parity_cover_fails_with_adjacent_witness() {
    let r = report(
        "space.kind = zn(1)\nparams.window = 256\n\
         subspace.evens = residue(2, 0)\nsubspace.odds = residue(2, 1)\n\
         run.parity = cover(all, [evens, odds])\n",
    );
    let e = r.entry("parity").unwrap();
    assert_eq!(e.status, Status::Fails);
    let first = field(&r, "parity", "verdict.witness").split_whitespace().next().unwrap();
    let (x, y) = first.split_once('~').unwrap();
    let (x, y): (i64, i64) = (x.parse().unwrap(), y.parse().unwrap());
    assert_eq!((x - y).abs(), 1);
    assert_eq!(r.exit_code(), EXIT_FAILS);
}

#[test]
fn shift_on_half_line_is_flasque() {
    let r = report("space.kind = zplus\nspace.max_window = 257\nparams.window = 256\nparams.horizon = 64\nmap.s = shift(1)\nrun.f = flasque(s)\n");
    assert_eq!(r.entry("f").unwrap().status, Status::Holds);
}

#[test]
fn shipped_plane_cake_has_the_circle_at_infinity() {
    let text = std::fs::read_to_string(shipped("z2_cake.cfg")).unwrap();
    let r = report(&text);
    let h = r.entries.iter().find(|e| e.command == "cohomology").expect("cake cohomology");
    assert_eq!(h.field("cohomology.H0"), Some("Z"));
    assert_eq!(h.field("cohomology.H1"), Some("Z"));
    assert_eq!(h.field("cohomology.H1.rank"), Some("1"));
    assert_eq!(r.exit_code(), EXIT_OK);
}

#[test]
fn shipped_configs_parse() {
    for entry in std::fs::read_dir(shipped("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let text = std::fs::read_to_string(&path).unwrap();
            parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        }
    }
}

#[test]
fn coentourage_commands() {
    let r = report(
        "space.kind = zn(1)\nparams.window = 256\nsubspace.minus = ray(-)\nsubspace.plus = ray(+)\n\
         run.cross = coentourage(cross(minus, plus))\nrun.off = coentourage(outside_squares(minus, plus))\n\
         run.all = coentourage(not(diagonal))\n",
    );
    assert_eq!(r.entry("cross").unwrap().status, Status::Holds);
    assert_eq!(r.entry("off").unwrap().status, Status::Holds);
    assert_eq!(r.entry("all").unwrap().status, Status::Fails);
}

#[test]
fn runs_are_byte_identical() {
    let text = std::fs::read_to_string(shipped("line.cfg")).unwrap();
    let a = report(&text);
    let b = report(&text);
    assert_eq!(a.key_values(), b.key_values());
    assert_eq!(a.table(), b.table());
}

#[test]
fn free_group_ends_are_unbounded() {
    let r = report("space.kind = free_group(2)\nparams.window = 8\nparams.ends_r = 1\nparams.ends_n = 2, 3, 4, 5\nrun.e = ends(all)\n");
    assert_eq!(field(&r, "e", "ends.count"), "infinite");
    assert_eq!(field(&r, "e", "ends.trace"), "r1n2:12 r1n3:36 r1n4:108 r1n5:324");
}

#[test]
fn errors_carry_command_and_position() {
    let err = parse_config("space.kind = zplus\nparams.window = 64\nrun.e = ends(all\n").unwrap_err();
    assert!(matches!(err, CliError::SyntaxError { line: 3, .. }), "{err:?}");
    let err = parse_config("space.kind = zplus\nrun.e = ends(all)\n").unwrap_err();
    assert_eq!(err, CliError::MissingKey("params.window".into()));
    let cfg = parse_config("space.kind = zplus\nparams.window = 64\nrun.a = ends(all)\nrun.b = bounded(points(1000))\n").unwrap();
    let err = run(&cfg).unwrap_err();
    assert!(matches!(err, CliError::Command { index: 2, ref label, .. } if label == "b"), "{err:?}");
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_coarse")).args(args).output().expect("binary runs");
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn binary_exit_codes_and_out_file() {
    let dir = std::env::temp_dir().join(format!("coarse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ok = dir.join("ok.cfg");
    std::fs::write(&ok, "space.kind = zplus\nparams.window = 256\nrun.e = ends(all)\n").unwrap();
    let out = dir.join("ok.kv");
    let (code, stdout) = binary(&["run", ok.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.starts_with("coarse-report/1"));
    let kv = std::fs::read_to_string(&out).unwrap();
    assert!(kv.contains("e.ends.count = 1\n"), "{kv}");
    assert!(kv.contains("window = 256\n"));

    let (code, _) = binary(&["run", ok.to_str().unwrap(), "--window", "128", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(std::fs::read_to_string(&out).unwrap().contains("window = 128\n"));

    let (code, _) = binary(&["run", shipped("line.cfg").to_str().unwrap()]);
    assert_eq!(code, EXIT_FAILS);

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "space.kind = zplus\nparams.window = 64\nrun.e = frobnicate(all)\n").unwrap();
    let (code, _) = binary(&["run", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    std::fs::remove_dir_all(&dir).ok();
}
