use std::process::{Command, Output};

use serde_json::Value;

fn bergq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn kernel_examples() {
    let out = bergq(&[
        "kernel",
        "--preset",
        "sym-det",
        "--d",
        "2",
        "--lambda",
        "2",
        "--z",
        "[0.5,0,0,0]",
        "--w",
        "[0.5,0,0,0]",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["re"].as_f64().unwrap() - 28.0 / 9.0).abs() < 1e-12);
    assert_eq!(v["preset"], "sym-det");
    assert_eq!(v["params"]["lambda"], 2.0);
    assert_eq!(v["z"], serde_json::json!([0.5, 0.0, 0.0, 0.0]));

    let out = bergq(&[
        "kernel",
        "--preset",
        "polydisc",
        "--d",
        "2",
        "--z",
        "[0,0,0,0]",
        "--w",
        "[0,0,0,0]",
    ]);
    assert_eq!(json(&out)["re"], 1.0);

    let out = bergq(&[
        "kernel",
        "--preset",
        "ellipsoid",
        "--p",
        "1",
        "--q",
        "1",
        "--z",
        "[0,0,0,0]",
        "--w",
        "[0,0,0,0]",
    ]);
    assert_eq!(json(&out)["re"], 1.0);
}

#[test]
fn every_preset_evaluates() {
    let z = "[0.3,0.1,-0.2,0.25]";
    let w = "[0.1,-0.3,0.35,0.05]";
    let cases: &[&[&str]] = &[
        &["--preset", "ball"],
        &["--preset", "weighted-polydisc", "--lambda", "3"],
        &["--preset", "sym-perm"],
        &["--preset", "dihedral-sign", "--k", "3"],
        &["--preset", "dihedral-trivial", "--k", "3"],
        &["--preset", "monomial", "--matrix", "[[2,-1],[0,1]]"],
        &["--preset", "fat-hartogs", "--gamma", "2"],
        &[
            "--preset",
            "quotient-sum",
            "--group",
            "dihedral:4",
            "--character",
            "rho2",
        ],
        &[
            "--preset",
            "quotient-sum",
            "--group",
            "cyclic:2,3",
            "--character",
            "exp(1,2)",
        ],
        &[
            "--preset",
            "rudin",
            "--group",
            "sym:2",
            "--psi-center",
            "[0.2,0,0,-0.1]",
        ],
        &[
            "--preset",
            "rudin",
            "--group",
            "cyclic:2,1",
            "--map",
            "power:2,1",
        ],
    ];
    for case in cases {
        let mut args = vec!["kernel"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--z", z, "--w", w]);
        let out = bergq(&args);
        assert_eq!(
            code(&out),
            0,
            "{case:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert!(v["re"].as_f64().unwrap().is_finite(), "{case:?}");
        assert!(v["params"].is_object());
    }
}

#[test]
fn near_singular_points_exit_2() {
    let out = bergq(&[
        "kernel",
        "--preset",
        "sym-det",
        "--z",
        "[0.5,0,0.5,0]",
        "--w",
        "[0.1,0,0,0]",
    ]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["error"], "near-singular");
    assert!(v["detail"].is_string());
}

#[test]
fn malformed_input_exits_2_without_panicking() {
    let cases: &[&[&str]] = &[
        &[
            "kernel", "--preset", "polydisc", "--z", "[0.1]", "--w", "[0,0]",
        ],
        &[
            "kernel", "--preset", "polydisc", "--z", "not json", "--w", "[0,0]",
        ],
        &[
            "kernel", "--preset", "polydisc", "--z", "[0.1,0]", "--w", "[0,0]", "--bogus",
        ],
        &["kernel", "--preset", "nope", "--z", "[0,0]", "--w", "[0,0]"],
        &[
            "kernel",
            "--preset",
            "ellipsoid",
            "--z",
            "[0,0,0,0]",
            "--w",
            "[0,0,0,0]",
        ],
        &[
            "kernel",
            "--preset",
            "quotient-sum",
            "--group",
            "sym:2",
            "--character",
            "rho1",
            "--z",
            "[0.1,0,0.2,0]",
            "--w",
            "[0.1,0,0.2,0]",
        ],
        &[
            "kernel", "--preset", "polydisc", "--z", "[1.5,0]", "--w", "[0,0]",
        ],
        &[
            "kernel",
            "--preset",
            "monomial",
            "--matrix",
            "[[1,2],[2,4]]",
            "--z",
            "[0.1,0,0.2,0]",
            "--w",
            "[0.1,0,0.2,0]",
        ],
        &["inspect", "--what", "group", "--group", "sym:x"],
        &["inspect", "--what", "snf", "--matrix", "[[1,2],[3]]"],
        &["inspect", "--what", "characters"],
        &["verify", "--suite", "reproducing"],
        &["verify", "--suite", "nope"],
        &["verify", "--suite", "snf", "--tol-sigma", "-1"],
        &["frobnicate"],
    ];
    for case in cases {
        let out = bergq(case);
        assert_eq!(
            code(&out),
            2,
            "{case:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(!stderr.contains("panicked"), "{case:?}: {stderr}");
    }
}

#[test]
fn verify_exit_codes() {
    let out = bergq(&["verify", "--suite", "closed-vs-sum", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["suite"], "closed-vs-sum");
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);

    let out = bergq(&["verify", "--suite", "snf"]);
    assert_eq!(code(&out), 0);

    // a threshold of a tiny fraction of a standard error cannot pass
    let out = bergq(&[
        "verify",
        "--suite",
        "reproducing",
        "--samples",
        "2000",
        "--seed",
        "1",
        "--tol-sigma",
        "1e-6",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn small_sample_verify_reports() {
    let out = bergq(&[
        "verify",
        "--suite",
        "reproducing",
        "--samples",
        "1000",
        "--seed",
        "3",
    ]);
    let c = code(&out);
    assert!(c == 0 || c == 1);
    assert_eq!(json(&out)["pass"], c == 0);
}

#[test]
fn inspect_examples() {
    let v = json(&bergq(&[
        "inspect",
        "--what",
        "hyperplanes",
        "--group",
        "sym:2",
    ]));
    assert_eq!(v["count"], 1);
    let h = &v["hyperplanes"][0];
    assert_eq!(h["order"], 2);
    assert_eq!(h["form"][0][0], 1.0);
    assert_eq!(h["form"][1][0], -1.0);

    let v = json(&bergq(&[
        "inspect",
        "--what",
        "snf",
        "--matrix",
        "[[2,0],[0,3]]",
    ]));
    assert_eq!(v["d"], serde_json::json!([1, 6]));

    let v = json(&bergq(&[
        "inspect",
        "--what",
        "characters",
        "--group",
        "dihedral:4",
    ]));
    assert_eq!(v["count"], 4);
    let v = json(&bergq(&[
        "inspect",
        "--what",
        "characters",
        "--group",
        "dihedral:3",
    ]));
    assert_eq!(v["count"], 2);

    let v = json(&bergq(&["inspect", "--what", "group", "--group", "sym:3"]));
    assert_eq!(v["order"], 6);

    let v = json(&bergq(&["inspect", "--what", "jacobian", "--map", "sym:2"]));
    assert_eq!(v["jacobian"]["terms"].as_array().unwrap().len(), 2);
    let v = json(&bergq(&[
        "inspect",
        "--what",
        "jacobian",
        "--group",
        "dihedral:3",
    ]));
    assert_eq!(v["map"], "basic(dihedral:3)");
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("bergq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k.json");
    let out = bergq(&[
        "--out",
        path.to_str().unwrap(),
        "kernel",
        "--preset",
        "ball",
        "--z",
        "[0,0,0,0]",
        "--w",
        "[0,0,0,0]",
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["re"], 1.0);
    std::fs::remove_dir_all(&dir).unwrap();
}
