use std::path::{Path, PathBuf};

use homdual::arcgraph::arc_graph;
use homdual::cli::formats::{
    format_nuf, format_pattern, format_structure, parse_documents, parse_nuf, parse_structure,
};
use homdual::cli::{run, CliOutcome};
use homdual::duality::{has_tree_duality, lift_nuf_arc_graph, NufCandidate};
use homdual::pultr::{blue_red_pattern, psi};
use homdual::sproink::{enumerate_sproinks, thunderbolt};
use homdual::{core, is_isomorphic, Digraph, Structure};
use tempfile::TempDir;

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn digraph(&self, name: &str, g: &Digraph) -> PathBuf {
        self.write(name, &format_structure(name, g))
    }
}

fn homdual(args: &[&dyn AsRef<std::ffi::OsStr>]) -> CliOutcome {
    let mut v: Vec<std::ffi::OsString> = vec!["homdual".into()];
    v.extend(args.iter().map(|a| a.as_ref().to_owned()));
    run(v)
}

fn t4() -> Digraph {
    Digraph::transitive_tournament(4)
}

#[test]
fn tree_duality_of_t4() {
    let d = Dir::new();
    let t4 = d.digraph("t4.dg", &t4());
    let out = homdual(&[&"tree-duality", &t4]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "yes\n"));
    let c3 = d.digraph("c3.dg", &Digraph::directed_cycle(3));
    let out = homdual(&[&"tree-duality", &c3]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "no\n"));
}

#[test]
fn p4_does_not_map_to_t4() {
    let d = Dir::new();
    let p4 = d.digraph("p4.dg", &Digraph::directed_path(4));
    let t4 = d.digraph("t4.dg", &t4());
    let out = homdual(&[&"hom", &p4, &t4]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "no homomorphism\n"));
    let p3 = d.digraph("p3.dg", &Digraph::directed_path(3));
    let out = homdual(&[&"hom", &p3, &t4]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "homomorphism\n0 -> 0\n1 -> 1\n2 -> 2\n3 -> 3\n");
}

#[test]
fn check_pair_t4_p4() {
    let d = Dir::new();
    let p4 = d.digraph("p4.dg", &Digraph::directed_path(4));
    let t4 = d.digraph("t4.dg", &t4());
    let family = format!("file:{}", p4.display());
    let out = homdual(&[&"check-pair", &t4, &"--family", &family, &"--max-g", &"4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("verified\n"));
    let out = homdual(&[
        &"check-pair",
        &t4,
        &"--family",
        &family,
        &"--max-g",
        &"3",
        &"--iso",
        &"--records",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("verdict\tverified\t"));
    assert!(out.stdout.contains("param\tup_to_isomorphism\ttrue\n"));
}

#[test]
fn check_pair_families() {
    let d = Dir::new();
    let p2 = d.digraph("p2.dg", &Digraph::directed_path(2));
    let out = homdual(&[
        &"check-pair",
        &p2,
        &"--family",
        &"thunderbolts:6",
        &"--max-g",
        &"3",
    ]);
    assert_eq!(out.code, 0);
    let out = homdual(&[
        &"check-pair",
        &p2,
        &"--family",
        &"thunderbolts:0",
        &"--max-g",
        &"2",
        &"--records",
    ]);
    assert_eq!(out.code, 0);
    let loop_ = d.digraph("loop.dg", &Digraph::loop_vertex());
    let out = homdual(&[
        &"check-pair",
        &p2,
        &"--family",
        &format!("file:{}", loop_.display()),
        &"--max-g",
        &"2",
        &"--records",
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("verdict\tinconclusive"));
    assert!(out.stdout.contains("witness\tuncovered\t2;E:0,1|1,0\t-\t"));

    let d4 = d.digraph("d4.dg", &arc_graph(&t4()).digraph);
    let p4 = d.digraph("p4.dg", &Digraph::directed_path(4));
    let out = homdual(&[
        &"check-pair",
        &d4,
        &"--family",
        &format!("sproink:{}", p4.display()),
        &"--max-g",
        &"3",
        &"--sproink-max-size",
        &"12",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = homdual(&[&"check-pair", &p2, &"--family", &"bogus", &"--max-g", &"2"]);
    assert_eq!(out.code, 2);
}

#[test]
fn arc_graph_and_core_outputs_parse() {
    let d = Dir::new();
    let t4p = d.digraph("t4.dg", &t4());
    let out = homdual(&[&"arcgraph", &t4p]);
    assert_eq!(out.code, 0);
    let dt4 = parse_structure(&out.stdout).unwrap();
    assert_eq!(dt4, *arc_graph(&t4()).digraph);
    assert!(out.stdout.starts_with("# 0 = arc 0 1\n"));

    let dpath = d.write("d.dg", &out.stdout);
    let out = homdual(&[&"core", &dpath]);
    assert_eq!(out.code, 0);
    let c = parse_structure(&out.stdout).unwrap();
    assert_eq!(c, core(&dt4).structure);
    assert!(is_isomorphic(&c, &Digraph::directed_path(2)));

    let out = homdual(&[&"arcgraph-inv", &dpath]);
    assert_eq!(out.code, 0);
    parse_structure(&out.stdout).unwrap();
}

#[test]
fn sproink_and_thunderbolt_outputs() {
    let d = Dir::new();
    let p4 = d.digraph("p4.dg", &Digraph::directed_path(4));
    let out = homdual(&[&"sproink", &p4, &"--max-size", &"7"]);
    assert_eq!(out.code, 0);
    let docs = parse_documents(&out.stdout).unwrap();
    let direct: Vec<Structure> = enumerate_sproinks(&Digraph::directed_path(4), 7, true)
        .unwrap()
        .map(Digraph::into_structure)
        .collect();
    assert_eq!(
        docs.iter().map(|d| d.structure.clone()).collect::<Vec<_>>(),
        direct
    );
    let out = homdual(&[&"sproink", &p4, &"--max-size", &"7", &"--all-trees"]);
    assert_eq!(out.code, 0);

    let out = homdual(&[&"thunderbolt", &"2"]);
    assert_eq!(parse_structure(&out.stdout).unwrap(), *thunderbolt(2));
}

#[test]
fn psi_with_builtin_and_file_patterns() {
    let d = Dir::new();
    let t4p = d.digraph("t4.dg", &t4());
    let out = homdual(&[&"psi", &"blue_red", &t4p]);
    assert_eq!(out.code, 0);
    let image = parse_structure(&out.stdout).unwrap();
    assert_eq!(image, psi(&blue_red_pattern(), &t4()).unwrap().structure);

    let pat = d.write("br.pat", &format_pattern("br", &blue_red_pattern()));
    let out2 = homdual(&[&"psi", &pat, &t4p]);
    assert_eq!(out2.stdout, out.stdout);

    let img = d.write("img.st", &format_structure("img", &image));
    let out = homdual(&[&"psi-inv", &pat, &img]);
    assert_eq!(out.code, 0);
    parse_structure(&out.stdout).unwrap();

    let out = homdual(&[&"psi", &"no_such_pattern", &t4p]);
    assert_eq!(out.code, 2);
}

#[test]
fn duality_decisions_match_the_library() {
    let d = Dir::new();
    for (name, g) in [
        ("t4", t4()),
        ("p1", Digraph::directed_path(1)),
        ("c3", Digraph::directed_cycle(3)),
        ("c4", Digraph::directed_cycle(4)),
    ] {
        let p = d.digraph(name, &g);
        let out = homdual(&[&"tree-duality", &p]);
        let expected = has_tree_duality(&g).unwrap();
        assert_eq!(out.stdout, if expected { "yes\n" } else { "no\n" });
    }

    let p2 = d.digraph("p2.dg", &Digraph::directed_path(2));
    let out = homdual(&[&"bh-duality", &p2]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("yes\nwitness_n 2\n"));
    let loop_ = d.digraph("loop.dg", &Digraph::loop_vertex());
    let out = homdual(&[&"bh-duality", &loop_, &"--max-n", &"3"]);
    assert!(out.stdout.starts_with("yes\nwitness_n 1\n"));
    let out = homdual(&[&"bh-duality", &d.digraph("c3", &Digraph::directed_cycle(3))]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("precondition"));

    let out = homdual(&[&"finite-duality", &d.digraph("t4", &t4())]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("yes\ndismantling "));
    let out = homdual(&[&"finite-duality", &p2]);
    assert_eq!((out.code, out.stdout.lines().next()), (1, Some("no")));
}

#[test]
fn nuf_commands() {
    let d = Dir::new();
    let t4p = d.digraph("t4.dg", &t4());
    let m = NufCandidate::median(t4().into_structure());
    let table = d.write("m.tbl", &format_nuf(&m));
    let out = homdual(&[&"verify-nuf", &t4p, &table]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "yes\n"));

    let out = homdual(&[&"lift-nuf", &"arc", &t4p, &table]);
    assert_eq!(out.code, 0);
    let lifted = lift_nuf_arc_graph(&m).unwrap();
    assert_eq!(out.stdout, format_nuf(&lifted));
    let dt4 = d.digraph("dt4.dg", &arc_graph(&t4()).digraph);
    let lifted_table = d.write("l.tbl", &out.stdout);
    let out = homdual(&[&"verify-nuf", &dt4, &lifted_table]);
    assert_eq!(out.code, 0);

    let out = homdual(&[&"lift-nuf", &"pultr", &"arc_graph", &t4p, &table]);
    assert_eq!(out.code, 0);
    assert_eq!(parse_nuf(&out.stdout, lifted.structure()).unwrap(), lifted);

    let proj = NufCandidate::from_fn(t4().into_structure(), 3, |a| a[0]).unwrap();
    let bad = d.write("p.tbl", &format_nuf(&proj));
    let out = homdual(&[&"verify-nuf", &t4p, &bad]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("no\nidentity fails"));
}

#[test]
fn adjunction_campaigns() {
    let out = homdual(&[
        &"check-adjunction",
        &"arc",
        &"--samples",
        &"50",
        &"--seed",
        &"7",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("verified\nchecked 50\n"));
    assert!(out.stdout.contains("seed = 7\n"));
    let again = homdual(&[
        &"check-adjunction",
        &"arc",
        &"--samples",
        &"50",
        &"--seed",
        &"7",
    ]);
    assert_eq!(again, out);
    let out = homdual(&[
        &"check-adjunction",
        &"pultr",
        &"blue_red",
        &"--samples",
        &"30",
        &"--max-size",
        &"4",
        &"--records",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("verdict\tverified\t30\n"));
}

#[test]
fn enumerate_counts() {
    let out = homdual(&[&"enumerate", &"2"]);
    assert_eq!(parse_documents(&out.stdout).unwrap().len(), 18);
    let out = homdual(&[&"enumerate", &"2", &"--no-loops"]);
    assert_eq!(parse_documents(&out.stdout).unwrap().len(), 5);
    let out = homdual(&[&"enumerate", &"3", &"--iso"]);
    assert_eq!(parse_documents(&out.stdout).unwrap().len(), 2 + 10 + 104);
}

#[test]
fn errors_map_to_exit_codes() {
    let d = Dir::new();
    let bad = d.write("bad.dg", "digraph g\nvertices 4\narcs\n0 5\nend\n");
    let out = homdual(&[&"tree-duality", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 4, column 3"), "{}", out.stderr);
    let out = homdual(&[&"tree-duality", &Path::new("/nonexistent/x.dg")]);
    assert_eq!(out.code, 2);
    let out = homdual(&[&"hom"]);
    assert_eq!(out.code, 2);
    let out = homdual(&[&"enumerate", &"6"]);
    assert_eq!(out.code, 3);
    let out = homdual(&[&"--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("check-pair"));
}
