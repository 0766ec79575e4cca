#![allow(dead_code)]

use bumg::kernel::{Atom, Clause, Term};
use bumg::tptp::{parse, Problem};

pub fn problem(text: &str) -> Problem {
    parse(text, "test").unwrap()
}

pub fn load(name: &str) -> Problem {
    let path = format!("{}/../../problems/{name}", env!("CARGO_MANIFEST_DIR"));
    let stem = name.rsplit('/').next().unwrap().trim_end_matches(".p");
    parse(&std::fs::read_to_string(path).unwrap(), stem).unwrap()
}

pub fn app(f: &str, args: Vec<Term>) -> Term {
    Term::App(f.to_string(), args)
}

pub fn subterms(t: &Term, out: &mut Vec<Term>) {
    if let Term::App(_, args) = t {
        for a in args {
            subterms(a, out);
        }
    }
    if !out.contains(t) {
        out.push(t.clone());
    }
}

/// Smallest congruence on `universe` containing `eqs`, by fixpoint iteration over all pairs.
pub fn naive_closure(universe: &[Term], eqs: &[(Term, Term)]) -> Vec<Vec<bool>> {
    let n = universe.len();
    let ix = |t: &Term| universe.iter().position(|u| u == t).unwrap();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (s, t) in eqs {
        r[ix(s)][ix(t)] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if r[i][j] {
                    continue;
                }
                let mut add = r[j][i] || (0..n).any(|k| r[i][k] && r[k][j]);
                if !add {
                    if let (Term::App(f, xs), Term::App(g, ys)) = (&universe[i], &universe[j]) {
                        add = f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| r[ix(x)][ix(y)]);
                    }
                }
                if add {
                    r[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

fn skeleton(t: &Term) -> String {
    match t {
        Term::Var(_) => "_".into(),
        Term::App(f, args) => format!("{f}({})", args.iter().map(skeleton).collect::<Vec<_>>().join(",")),
    }
}

fn atom_skeleton(a: &Atom) -> String {
    format!("{}({})", a.pred, a.args.iter().map(skeleton).collect::<Vec<_>>().join(","))
}

/// Canonical text of a clause that ignores variable names and literal order.
pub fn key(c: &Clause) -> String {
    let mut head = c.head().to_vec();
    let mut body = c.body().to_vec();
    head.sort_by_key(atom_skeleton);
    body.sort_by_key(atom_skeleton);
    Clause::new(head, body).canonical().to_string()
}

pub fn keys(clauses: &[Clause]) -> Vec<String> {
    let mut k: Vec<String> = clauses.iter().map(key).collect();
    k.sort();
    k
}

pub fn contains(set: &[Clause], text: &str) -> bool {
    let want = key(&problem(text).clauses[0]);
    set.iter().any(|c| key(c) == want)
}
