use bumg::kernel::Clause;
use bumg::tptp::print_clauses;
use bumg::transform::{
    apply_pipeline, bl_sd, bl_sp, bl_ud, bs, crr, pf, rr, sh, Blocking, ConstantPolicy, PipelineConfig, RrVariant,
};

mod common;
use common::{contains, keys, load, problem};

fn clauses(text: &str) -> Vec<Clause> {
    problem(text).clauses
}

#[test]
fn rr_running_example_is_exact() {
    let (out, counts) = rr(&load("running_example.p"), ConstantPolicy::ReuseFirst);
    let expected = clauses(
        "cnf(a, axiom, (q(X,g(X,Y)) | r(Y,Z) | ~p(a,f(X,Y),X) | ~dom(Z))).
         cnf(b, axiom, dom(a)).
         cnf(c, axiom, (dom(a) | ~p(U,V,X))).
         cnf(d, axiom, (dom(f(X,Y)) | ~p(U,V,X) | ~dom(Y))).
         cnf(e1, axiom, (dom(X1) | ~p(X1,X2,X3))).
         cnf(e2, axiom, (dom(X2) | ~p(X1,X2,X3))).
         cnf(e3, axiom, (dom(X3) | ~p(X1,X2,X3))).
         cnf(e4, axiom, (dom(X1) | ~q(X1,X2))).
         cnf(e5, axiom, (dom(X2) | ~q(X1,X2))).
         cnf(e6, axiom, (dom(X1) | ~r(X1,X2))).
         cnf(e7, axiom, (dom(X2) | ~r(X1,X2))).
         cnf(f1, axiom, (dom(X1) | ~dom(f(X1,X2)))).
         cnf(f2, axiom, (dom(X2) | ~dom(f(X1,X2)))).
         cnf(f3, axiom, (dom(X1) | ~dom(g(X1,X2)))).
         cnf(f4, axiom, (dom(X2) | ~dom(g(X1,X2)))).",
    );
    assert_eq!(keys(&out.clauses), keys(&expected));
    assert_eq!(out.clauses.len(), 15);
    assert_eq!((counts.domain_constant, counts.body_terms, counts.predicate_dom, counts.function_dom), (1, 2, 7, 4));
    assert!(out.clauses.iter().all(Clause::is_range_restricted));
}

#[test]
fn transformation_output_is_byte_stable() {
    let p = load("dl_example.p");
    for cfg in PipelineConfig::all() {
        let (a, _) = apply_pipeline(&p, &cfg).unwrap();
        let (b, _) = apply_pipeline(&p, &cfg).unwrap();
        assert_eq!(print_clauses(&a), print_clauses(&b), "{cfg}");
    }
}

#[test]
fn crr_examples() {
    let (out, _) = crr(&problem(""), ConstantPolicy::ReuseFirst);
    assert_eq!(keys(&out.clauses), keys(&clauses("cnf(a, axiom, dom(c0)).")));

    let (out, _) = crr(&problem("cnf(a, axiom, p(X))."), ConstantPolicy::ReuseFirst);
    assert_eq!(keys(&out.clauses), keys(&clauses("cnf(a, axiom, dom(c0)). cnf(b, axiom, (p(X) | ~dom(X))).")));

    let (out, _) = crr(&problem("cnf(a, axiom, (p(f(X)) | ~q(X)))."), ConstantPolicy::ReuseFirst);
    assert_eq!(
        keys(&out.clauses),
        keys(&clauses(
            "cnf(a, axiom, dom(c0)). cnf(b, axiom, (p(f(X)) | ~q(X))). cnf(c, axiom, (dom(f(X)) | ~dom(X)))."
        ))
    );
}

#[test]
fn crr_enumerates_input_constants() {
    let (out, _) = crr(&problem("cnf(a, axiom, p(a)). cnf(b, axiom, q(b))."), ConstantPolicy::ReuseFirst);
    assert!(contains(&out.clauses, "cnf(x, axiom, dom(a))."));
    assert!(contains(&out.clauses, "cnf(x, axiom, dom(b))."));
    assert_eq!(out.domain_constant.as_deref(), Some("a"));
}

#[test]
fn fresh_constant_policy() {
    let (out, _) = rr(&problem("cnf(a, axiom, p(a))."), ConstantPolicy::AlwaysFresh);
    assert_eq!(out.domain_constant.as_deref(), Some("c0"));
    let (out, _) = rr(&problem("cnf(a, axiom, p(c0))."), ConstantPolicy::AlwaysFresh);
    assert_eq!(out.domain_constant.as_deref(), Some("c0_1"));
}

#[test]
fn myequal_replaces_positive_equality() {
    let (out, counts) = rr(&problem("cnf(a, axiom, (f(X) = X | ~p(X)))."), ConstantPolicy::ReuseFirst);
    assert_eq!(counts.myequal, 3);
    assert!(contains(&out.clauses, "cnf(x, axiom, (myequal(f(X),X) | ~p(X)))."));
    assert!(contains(&out.clauses, "cnf(x, axiom, (X = Y | ~myequal(X,Y)))."));
    assert!(contains(&out.clauses, "cnf(x, axiom, (dom(X) | ~myequal(X,Y)))."));
    assert!(contains(&out.clauses, "cnf(x, axiom, (dom(Y) | ~myequal(X,Y)))."));
    assert!(!out
        .clauses
        .iter()
        .any(|c| c.head().iter().any(|a| a.is_equality() && !c.body()[0].pred.starts_with("myequal"))));

    let (out, counts) = rr(&problem("cnf(a, axiom, (q(X) | ~p(X)))."), ConstantPolicy::ReuseFirst);
    assert_eq!(counts.myequal, 0);
    assert!(!out.signature.predicates.contains_key("myequal"));
}

#[test]
fn blocking_clauses_are_not_rewritten_to_myequal() {
    let p = problem("cnf(a, axiom, (f(X) = X | ~p(X))). cnf(b, axiom, p(a)).");
    let (out, _) =
        apply_pipeline(&p, &PipelineConfig::new(RrVariant::New, false, Blocking::UnrestrictedDomain)).unwrap();
    assert!(contains(&out.clauses, "cnf(x, axiom, (X = Y | '!='(X,Y) | ~dom(X) | ~dom(Y)))."));
}

#[test]
fn basic_shifting_examples() {
    let (out, added) = bs(&load("shifting_example.p"));
    assert_eq!(added, 1);
    assert_eq!(
        keys(&out.clauses),
        keys(&clauses("cnf(a, axiom, (r(X) | 'NOT_p'(f(X)) | ~q(X))). cnf(b, axiom, (~'NOT_p'(X) | ~p(X)))."))
    );

    let (out, _) = bs(&problem("cnf(a, axiom, ~r(X,f(X)))."));
    assert_eq!(
        keys(&out.clauses),
        keys(&clauses("cnf(a, axiom, 'NOT_r'(X,f(X))). cnf(b, axiom, (~r(X,Y) | ~'NOT_r'(X,Y)))."))
    );

    let flat = problem("cnf(a, axiom, (r(X) | ~q(X) | ~p(a))).");
    let (out, added) = bs(&flat);
    assert_eq!(added, 0);
    assert_eq!(out.clauses, flat.clauses);
}

#[test]
fn partial_flattening_examples() {
    let out = pf(&load("shifting_example.p"));
    assert_eq!(keys(&out.clauses), keys(&clauses("cnf(a, axiom, (r(X) | ~q(X) | ~p(U) | f(X) != U)).")));

    let eq = problem("cnf(a, axiom, f(a) != b).");
    assert_eq!(pf(&eq).clauses, eq.clauses);
    assert_eq!(pf(&eq).clauses.len(), 1, "no reflexivity unit");
}

#[test]
fn shifting_then_rr_worked_example() {
    let cfg = PipelineConfig::new(RrVariant::New, true, Blocking::None);
    let (out, _) = apply_pipeline(&load("shifting_example.p"), &cfg).unwrap();
    for want in [
        "cnf(x, axiom, (r(X) | '!='(f(X),U) | ~q(X) | ~p(U))).",
        "cnf(x, axiom, (dom(X) | ~'!='(X,Y))).",
        "cnf(x, axiom, (dom(Y) | ~'!='(X,Y))).",
        "cnf(x, axiom, (dom(X) | ~r(X))).",
        "cnf(x, axiom, ~'!='(X,Y) | X != Y).",
    ] {
        assert!(contains(&out.clauses, want), "missing {want}");
    }
}

#[test]
fn shifting_identity_cases() {
    assert!(sh(&problem("")).0.clauses.is_empty());
    let flat = problem("cnf(a, axiom, (r(X) | ~q(X,Y) | ~p(Y))).");
    assert_eq!(sh(&flat).0.clauses, flat.clauses);
}

#[test]
fn rr_after_basic_shifting_shields_shifted_predicate() {
    let (b, _) = bs(&load("shifting_example.p"));
    let (out, _) = rr(&b, ConstantPolicy::ReuseFirst);
    assert!(contains(&out.clauses, "cnf(x, axiom, (dom(X) | ~'NOT_p'(X)))."));
    assert!(contains(&out.clauses, "cnf(x, axiom, (dom(X) | ~dom(f(X))))."));
    assert!(out.clauses.iter().all(Clause::is_range_restricted));
}

#[test]
fn blocking_clause_shapes() {
    let base = problem("cnf(a, axiom, p(a)). cnf(b, axiom, (q(f(X)) | ~p(X))).");
    let (ranged, _) = rr(&base, ConstantPolicy::ReuseFirst);

    let (sd, added) = bl_sd(&ranged).unwrap();
    assert_eq!(added, 4);
    let new: Vec<Clause> = sd.clauses[ranged.clauses.len()..].to_vec();
    assert_eq!(
        keys(&new),
        keys(&clauses(
            "cnf(a, axiom, (sub(X,X) | ~dom(X))).
             cnf(b, axiom, (sub(Z,f(X1)) | ~sub(Z,X1) | ~dom(Z) | ~dom(f(X1)))).
             cnf(c, axiom, (X = Y | '!='(X,Y) | ~sub(X,Y))).
             cnf(d, axiom, (~ X = Y | ~'!='(X,Y)))."
        ))
    );

    let (ud, added) = bl_ud(&ranged).unwrap();
    assert_eq!(added, 2);
    assert_eq!(
        keys(&ud.clauses[ranged.clauses.len()..]),
        keys(&clauses("cnf(c, axiom, (X = Y | '!='(X,Y) | ~dom(X) | ~dom(Y))). cnf(d, axiom, (X != Y | ~'!='(X,Y)))."))
    );

    let (sp, _) = bl_sp(&ranged).unwrap();
    assert!(contains(&sp.clauses, "cnf(x, axiom, (X = Y | '!='(X,Y) | ~sub(X,Y) | ~p(X) | ~p(Y)))."));
    assert!(contains(&sp.clauses, "cnf(x, axiom, (X = Y | '!='(X,Y) | ~sub(X,Y) | ~q(X) | ~q(Y)))."));
    assert!(!sp
        .clauses
        .iter()
        .any(|c| c.body().iter().any(|a| a.pred == "dom") && c.body().len() == 3 && c.head().len() == 2));
}

#[test]
fn blocking_requires_dom() {
    let p = problem("cnf(a, axiom, p(a)).");
    assert!(bl_sd(&p).is_err());
    let cfg = PipelineConfig::new(RrVariant::None, false, Blocking::SubtermDomain);
    assert!(apply_pipeline(&p, &cfg).is_err());
}

#[test]
fn identity_pipeline() {
    let p = load("dl_example.p");
    let (out, report) = apply_pipeline(&p, &PipelineConfig::identity()).unwrap();
    assert_eq!(out.clauses, p.clauses);
    assert_eq!(report.steps.total(), 0);
    assert_eq!(report.input_clauses, report.output_clauses);
}

#[test]
fn dl_example_with_rr_and_ud() {
    let p = load("dl_example.p");
    let cfg = PipelineConfig::new(RrVariant::New, false, Blocking::UnrestrictedDomain);
    let (out, report) = apply_pipeline(&p, &cfg).unwrap();
    assert!(out.clauses.iter().all(Clause::is_range_restricted));
    assert!(contains(&out.clauses, "cnf(x, axiom, (p2(f(X)) | ~p1(X)))."));
    assert!(contains(&out.clauses, "cnf(x, axiom, (X = Y | '!='(X,Y) | ~dom(X) | ~dom(Y)))."));
    assert_eq!(report.steps.blocking, 2);
    assert_eq!(report.output_clauses, report.input_clauses + report.steps.total() - report.replaced);
}

#[test]
fn report_csv_row_shape() {
    let (_, report) = apply_pipeline(&load("running_example.p"), &PipelineConfig::default()).unwrap();
    let header_cols = bumg::transform::TransformReport::CSV_HEADER.split(',').count();
    assert_eq!(report.csv_row().split(',').count(), header_cols);
    assert!(report.csv_row().starts_with("1,15,"));
}

#[test]
fn labels_parse_back() {
    for cfg in PipelineConfig::all().into_iter().chain([PipelineConfig::identity()]) {
        assert_eq!(cfg.label().parse::<PipelineConfig>().unwrap(), cfg);
    }
    for bad in ["", "rr.rr", "rr.blxx", "blud.rr", "sh.rr.blud.x"] {
        assert!(bad.parse::<PipelineConfig>().is_err(), "{bad}");
    }
}
