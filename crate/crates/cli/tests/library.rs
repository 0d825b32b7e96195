use std::collections::BTreeSet;
use std::path::Path;

use liesym::cases::{all, by_label, suite, TOPICS};
use liesym::dsl::{BlockKind, Body};
use liesym::library::builtin;
use liesym::report::Verdict;
use liesym_core::expr::MultiIndex;
use liesym_core::lie::{check_symmetry, prolong};

#[test]
fn every_topic_has_a_case_and_every_case_a_topic() {
    let cases = all();
    let used: BTreeSet<&str> = cases.iter().map(|c| c.topic).collect();
    for t in TOPICS {
        assert!(used.contains(t), "no case for topic {t}");
    }
    for t in &used {
        assert!(TOPICS.contains(t), "topic {t} missing from the manifest");
    }
}

#[test]
fn every_library_block_is_exercised() {
    let m = builtin();
    let mut referenced = String::new();
    for c in all() {
        referenced.push_str(&format!("{:?}\n", c.check));
    }
    let mut indirect = BTreeSet::new();
    for b in m.doc.blocks() {
        for c in b.clauses("field").chain(b.clauses("ode")) {
            if let Body::Names(v) = &c.body {
                indirect.extend(v.iter().cloned());
            }
        }
    }
    for b in m.doc.blocks() {
        let quoted = format!("\"{}\"", b.name);
        let in_spec = referenced.contains(&format!("\"{}[", b.name));
        let fig1 = b.kind == BlockKind::Ode && b.name.starts_with("profile-");
        assert!(
            referenced.contains(&quoted) || in_spec || indirect.contains(&b.name) || fig1,
            "{} `{}` is not used by any case",
            b.kind.keyword(),
            b.name
        );
    }
}

#[test]
fn suite_has_no_failures_and_ledgers_every_mismatch() {
    let r = suite(&builtin());
    let failed: Vec<_> = r
        .cases
        .iter()
        .filter(|c| c.verdict == Verdict::Fail)
        .map(|c| (&c.label, &c.summary))
        .collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(r.ledger.len(), r.summary.mismatch_recorded);
    assert_eq!(r.exit_code(), 0);
    for e in &r.ledger {
        assert!(!e.note.is_empty(), "{} has no note", e.label);
    }
}

#[test]
fn expected_verdicts() {
    let r = suite(&builtin());
    let v = by_label(&r);
    let expect = |label: &str, want: Verdict| {
        let c = v.get(label).unwrap_or_else(|| panic!("missing {label}"));
        assert_eq!(c.verdict, want, "{label}: {}", c.summary);
    };
    for label in [
        "symmetry/cc/y-shift-exp-printed",
        "symmetry/gcc-reduced/power-scaling-printed",
        "commutator/cc-table/cc-scaling,time-translation",
        "commutator/cc-table/cc-scaling,x-translation",
        "commutator/cc-table/cc-scaling,y-translation",
        "commutator/cc-table/x-translation,cc-scaling",
        "commutator/cc-table/y-translation,cc-scaling",
        "commutator/cc-functions/scaling,x-shift-phi",
        "commutator/cc-functions/scaling,y-shift-psi",
        "reduction/cc/travelling",
        "reduction/gcc/travelling",
        "first-integral/stationary/printed",
        "first-integral/scaling/printed-pair",
        "first-integral/gcc-wave/printed",
        "first-integral/gcc-scaling/printed-grouping",
        "closed-form/stationary/tanh-printed-amplitude",
    ] {
        expect(label, Verdict::MismatchRecorded);
    }
    for label in [
        "symmetry/cc/linear-y-shift",
        "symmetry/cc/vertical-shift-rejected",
        "closure/cc/five-field-algebra",
        "closure/cc/six-field-set",
        "determining/cc/generic-generator",
        "reduction/cc/chained-wave",
        "reduction/gcc-reduced/scaling",
        "first-integral/scaling/printed-second-of-derived",
        "first-integral/gcc-scaling/integral-grouping",
        "closed-form/cc-reduced/linear-in-w",
        "closed-form/stationary/tanh-amplitude",
        "numeric/profile/n2",
    ] {
        expect(label, Verdict::Pass);
    }
    expect("reduction/cc-reduced/projective-from-generator", Verdict::Unsupported);
    assert_eq!(
        v["closure/cc/six-field-set"].details["witnesses"],
        "[(1, 4), (1, 5), (3, 5)]"
    );
    assert_eq!(v["closed-form/stationary/tanh-amplitude"].details["A"], "c^(-1)");
}

#[test]
fn vertical_shift_residual() {
    let m = builtin();
    let r = check_symmetry(m.field("du-field").unwrap(), m.pde("cc").unwrap()).unwrap();
    assert_eq!(r.to_string(), "-D(u;x,x)");
}

#[test]
fn x_shift_first_prolongation_in_time() {
    let m = builtin();
    let p = m.pde("cc").unwrap();
    let pf = prolong(m.field("x-shift-phi").unwrap(), p.independents(), 1).unwrap();
    let t = &p.independents()[0];
    let eta_t = &pf.eta_ext[&MultiIndex::from_vars(std::slice::from_ref(t))];
    assert_eq!(*eta_t, m.scope.parse("-D(phi;t,t) - D(phi;t)*u[x]").unwrap());
    assert_eq!(eta_t.to_string(), "-D(u;x)*D(phi;t) - D(phi;t,t)");
}

#[test]
fn paper_suite_is_stable() {
    let a = suite(&builtin()).to_json();
    let b = suite(&builtin()).to_json();
    assert_eq!(a, b);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/paper-suite.json");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &a).unwrap();
    }
    let want = std::fs::read_to_string(&golden).expect("golden report; regenerate with UPDATE_GOLDEN=1");
    assert_eq!(a, want.replace("\r\n", "\n"));
}

#[test]
fn report_matches_schema_fields() {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../report.schema.json")).unwrap();
    let report: serde_json::Value = serde_json::from_str(&suite(&builtin()).to_json()).unwrap();
    let keys = |v: &serde_json::Value| -> BTreeSet<String> { v.as_object().unwrap().keys().cloned().collect() };
    let required = |v: &serde_json::Value| -> BTreeSet<String> {
        v["required"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(keys(&report), required(&schema));
    assert_eq!(keys(&report["summary"]), required(&schema["properties"]["summary"]));
    let case_schema = &schema["properties"]["cases"]["items"];
    let kinds = case_schema["properties"]["kind"]["enum"].as_array().unwrap();
    let verdicts = case_schema["properties"]["verdict"]["enum"].as_array().unwrap();
    for c in report["cases"].as_array().unwrap() {
        assert_eq!(keys(c), required(case_schema));
        assert!(kinds.contains(&c["kind"]), "{}", c["kind"]);
        assert!(verdicts.contains(&c["verdict"]));
        assert!(c["details"].as_object().unwrap().values().all(|v| v.is_string()));
    }
    for e in report["ledger"].as_array().unwrap() {
        assert_eq!(keys(e), required(&schema["properties"]["ledger"]["items"]));
    }
}
