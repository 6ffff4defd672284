//! Every shipped fixture parses, round-trips through its dump format, and
//! has the basic diagram facts (planarity, colouring counts, writhes) it is
//! relied on for elsewhere.

use quandle_homology::diagram::{Conventions, OrientedDiagram};
use quandle_homology::quandle::Quandle;
use quandle_homology::wirtinger::{check_assignment, WordAssignment};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

const QUANDLES: &[&str] = &["z3", "z4", "z5", "t1", "t2", "t3", "s3conj"];
const DIAGRAMS: &[&str] = &[
    "unknot",
    "trefoil",
    "trefoil_ri",
    "trefoil_rii",
    "fig8",
    "hopf",
    "k9_37",
    "k10_59",
];

#[test]
fn quandle_fixtures_round_trip() {
    for name in QUANDLES {
        let text = fixture(&format!("{name}.qnd"));
        let q = Quandle::parse(&text).unwrap();
        assert!(q.is_quandle(), "{name}");
        let again = Quandle::parse(&q.dump()).unwrap();
        assert_eq!(q.table(), again.table(), "{name}");
    }
}

#[test]
fn quandle_fixtures_match_constructions() {
    for (name, q) in [
        ("z3", Quandle::dihedral(3).unwrap()),
        ("z4", Quandle::dihedral(4).unwrap()),
        ("z5", Quandle::dihedral(5).unwrap()),
        ("t1", Quandle::trivial(1).unwrap()),
        ("t2", Quandle::trivial(2).unwrap()),
        ("t3", Quandle::trivial(3).unwrap()),
        (
            "s3conj",
            Quandle::conjugation(&quandle_homology::quandle::s3_multiplication_table()).unwrap(),
        ),
    ] {
        let file = Quandle::parse(&fixture(&format!("{name}.qnd"))).unwrap();
        assert_eq!(file.table(), q.table(), "{name}");
    }
}

#[test]
fn diagram_fixtures_parse_and_are_planar() {
    for name in DIAGRAMS {
        let d = OrientedDiagram::parse_pd(&fixture(&format!("{name}.pd"))).unwrap();
        d.regions().unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = OrientedDiagram::parse_pd(&d.dump_pd()).unwrap();
        assert_eq!(d.components(), again.components(), "{name}");
        assert_eq!(d.crossings(), again.crossings(), "{name}");
    }
}

#[test]
fn cocycle_fixtures_round_trip() {
    use quandle_homology::chain::{Cochain, Theory};
    for name in ["theta_z3.cyc", "theta_z5.cyc"] {
        let text = fixture(name);
        let (f, quandle_ref) = Cochain::parse(&text, Theory::Quandle).unwrap();
        let q = Quandle::parse(&fixture(&quandle_ref)).unwrap();
        assert!(f.coboundary(&q).unwrap().is_zero(), "{name} is not closed");
        let (again, again_ref) = Cochain::parse(&f.dump(&quandle_ref), Theory::Quandle).unwrap();
        assert_eq!(again_ref, quandle_ref, "{name}");
        let pairs: Vec<_> = f.support().collect();
        let again_pairs: Vec<_> = again.support().collect();
        assert_eq!(pairs, again_pairs, "{name}");
    }
}

#[test]
fn writhes_and_colouring_counts() {
    let conv = Conventions::default();
    let z3 = Quandle::dihedral(3).unwrap();
    let z5 = Quandle::dihedral(5).unwrap();
    // (fixture, writhe, #Z3-colourings, #Z5-colourings)
    let expect = [
        ("unknot", 0, 3, 5),
        ("trefoil", 3, 9, 5),
        ("trefoil_ri", 4, 9, 5),
        ("trefoil_rii", 3, 9, 5),
        ("fig8", 0, 3, 25),
        ("hopf", -2, 3, 5),
        ("k9_37", -1, 27, 25),
        ("k10_59", 2, 9, 25),
    ];
    for (name, w, n3, n5) in expect {
        let d = OrientedDiagram::parse_pd(&fixture(&format!("{name}.pd"))).unwrap();
        assert_eq!(d.writhe(conv), w, "{name} writhe");
        assert_eq!(d.enumerate_colourings(&z3, conv).len(), n3, "{name} Z3");
        assert_eq!(d.enumerate_colourings(&z5, conv).len(), n5, "{name} Z5");
    }
}

#[test]
fn word_assignments_pass_over_z3_and_z5() {
    let conv = Conventions::default();
    let tests = vec![
        ("z3".to_string(), Quandle::dihedral(3).unwrap()),
        ("z5".to_string(), Quandle::dihedral(5).unwrap()),
    ];
    let target = OrientedDiagram::parse_pd(&fixture("fig8.pd")).unwrap();
    for (asg, src) in [("9_37_to_4_1.asg", "k9_37.pd"), ("10_59_to_4_1.asg", "k10_59.pd")] {
        let a = WordAssignment::parse(&fixture(asg)).unwrap();
        let source = OrientedDiagram::parse_pd(&fixture(src)).unwrap();
        let report = check_assignment(&a, &source, &target, &tests, conv).unwrap();
        assert!(report.passed(), "{asg}: {report:?}");
        let again = WordAssignment::parse(&a.dump()).unwrap();
        assert_eq!(a.map, again.map, "{asg} round trip");
    }
}
