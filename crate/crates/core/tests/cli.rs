use pts_core::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_UNDECIDED, EXIT_USAGE};
use pts_core::kernel::json;
use pts_core::{builtin, Kernel, System};

fn pts(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("pts").chain(args.iter().copied()), &mut out, &mut err);
    let mut text = String::from_utf8(out).unwrap();
    text.push_str(&String::from_utf8(err).unwrap());
    (code, text)
}

#[test]
fn t_rejects_ill_formed_context() {
    let (code, out) = pts(&["check", "--system", "t", "--ctx", "z : nat, nat : *", "--term", "z", "--type", "nat"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.starts_with("error: NotWellFormed (declaration 0, `z`)"), "{out}");
    assert!(out.contains("--ctx:1:5-1:8"), "{out}");
    assert!(out.contains("caused by: UnboundVariable"), "{out}");
}

#[test]
fn t_accepts_well_formed_context() {
    let (code, out) = pts(&["check", "--system", "t", "--ctx", "nat : *, z : nat", "--term", "z", "--type", "nat"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "ok (T): nat : *, z : nat ⊢ z : nat\n\
         (start) nat : *, z : nat ⊢ z : nat\n  \
         (start) nat : * ⊢ nat : *\n    \
         (sort) ⊢ * : BOX\n"
    );
}

#[test]
fn tprime_accepts_any_order() {
    let (code, out) = pts(&["check", "--ctx", "z : nat, nat : *", "--term", "z", "--type", "nat"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("ok (T'): z : nat, nat : * ⊢ z : nat\n(var') "), "{out}");
}

#[test]
fn inference_without_expected_type() {
    let (code, out) = pts(&["check", "--ctx", "nat : *", "--term", "\\x : nat. x"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("ok (T'): nat : * ⊢ \\x : nat. x : (x : nat) -> nat\n"), "{out}");
}

#[test]
fn ill_typed_declaration_reported_at_its_source() {
    let (code, out) = pts(&[
        "check",
        "--ctx",
        "nat : *, array : nat -> *, z : nat, nil : array z z",
        "--term",
        "nil",
        "--type",
        "array z z",
    ]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.starts_with("error: NotAProduct"), "{out}");
    assert!(out.contains("at type of nil.fun (--ctx:1:43-1:50)"), "{out}");
}

#[test]
fn curate_drops_junk() {
    let (code, out) = pts(&["curate", "--ctx", "nat : *, x : * *, z : nat", "--term", "z"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("delta: nat : *, z : nat\n"), "{out}");
    assert!(!out.contains("FAILED"), "{out}");
}

#[test]
fn wf_and_merge() {
    let (code, out) = pts(&["wf", "--ctx", "nat : *, z : nat, array : nat -> *, nil : array z"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "well-formed: nat : *, z : nat, array : nat -> *, nil : array z\n");

    let (code, out) = pts(&["wf", "--ctx", "nat : *, z : nat, nil : array z, array : nat -> *"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.starts_with("error: NotWellFormed (declaration 2, `nil`)"), "{out}");

    let (code, out) = pts(&["merge", "--ctx1", "nat : *, bool : *, z : nat", "--ctx2", "bool : *, true : bool, nat : *"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "nat : *, bool : *, z : nat, true : bool\n");
}

#[test]
fn normalization_and_fuel() {
    assert_eq!(pts(&["normalize", "--term", "(\\A : *. A) nat"]), (EXIT_OK, "nat\n".to_string()));
    let omega = "(\\x : *. x x) (\\x : *. x x)";
    let (code, out) = pts(&["normalize", "--spec", "type_in_type", "--term", omega]);
    assert_eq!(code, EXIT_UNDECIDED);
    assert!(out.starts_with("undecided: "), "{out}");

    let args = ["check", "--fuel", "0", "--ctx", "nat : *, z : (\\A : *. A) nat", "--term", "z", "--type", "nat"];
    let (code, out) = pts(&args);
    assert_eq!(code, EXIT_UNDECIDED, "{out}");
    assert!(out.starts_with("error: ConversionUndecided"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(pts(&["check", "--term", "(x"]).0, EXIT_USAGE);
    assert_eq!(pts(&["check", "--spec", "no-such-system", "--term", "x"]).0, EXIT_USAGE);
    assert_eq!(pts(&["frobnicate"]).0, EXIT_USAGE);
    let (code, out) = pts(&["check", "--ctx", "x : *, x : *", "--term", "x"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("--ctx:1:8"), "{out}");
}

#[test]
fn instances_listed() {
    let (code, out) = pts(&["instances"]);
    assert_eq!(code, EXIT_OK);
    for name in ["stlc", "systemF", "fomega", "lambdaP", "coc", "type_in_type"] {
        assert!(out.lines().any(|l| l.starts_with(&format!("{name}: "))), "{name} missing");
    }
}

#[test]
fn spec_files_and_emitted_derivations() {
    let dir = std::env::temp_dir().join(format!("pts-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("stlc.pts");
    std::fs::write(&spec, "name mine\nsort *\nsort BOX\naxiom * : BOX\nrule (*, *) : *\n").unwrap();
    let ctx = dir.join("ctx.txt");
    std::fs::write(&ctx, "f : nat -> nat\nnat : *\nz : nat\n").unwrap();
    let tree = dir.join("tree.json");
    let (code, out) = pts(&[
        "check",
        "--system",
        "t",
        "--spec",
        spec.to_str().unwrap(),
        "--ctx",
        "nat : *, f : nat -> nat, z : nat",
        "--term",
        "f (f z)",
        "--emit-derivation",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let stlc = builtin("stlc").unwrap();
    let k = Kernel::new(&stlc).unwrap();
    let parsed = json::from_json(&std::fs::read_to_string(&tree).unwrap(), &stlc).unwrap();
    assert_eq!(parsed.conclusion.to_string(), "nat : *, f : nat -> nat, z : nat ⊢ f (f z) : nat");
    k.validate_derivation(&parsed, System::T).unwrap();

    let (code, out) = pts(&["curate", "--spec", "stlc", "--ctx", ctx.to_str().unwrap(), "--term", "f z"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("delta: nat : *, f : nat -> nat, z : nat\n"), "{out}");
    std::fs::remove_dir_all(&dir).unwrap();
}
