use std::time::Instant;
use teamdim::dims::SearchBudget;
use teamdim::teamlogic::{parse_formula, team_family, Structure};

fn main() {
    let st = Structure::bare(2).unwrap();
    let b = SearchBudget::extended();
    let cases: Vec<(&str, &str, Vec<&str>)> = vec![
        // dep from exclusion
        ("dep(x ; y)", "A z . (z = y or exc(x z ; x y))", vec!["x", "y"]),
        // dep from pure independence
        (
            "dep(x ; y)",
            "A z . E w . ((! z = x or w = y) and ind(z y ; ; z w))",
            vec!["x", "y"],
        ),
        // exclusion from dep
        (
            "exc(x ; y)",
            "A z . E u1 . E u2 . (dep(z ; u1) and dep(z ; u2) and ((u1 = u2 and ! z = x) or (! u1 = u2 and ! z = y)))",
            vec!["x", "y"],
        ),
        // exclusion from inclusion + pure independence
        (
            "exc(x ; y)",
            "E z . (inc(x ; z) and ind(y ; ; z) and ! y = z)",
            vec!["x", "y"],
        ),
        // inclusion from pure independence
        (
            "inc(x ; y)",
            "A v1 . A v2 . A z . ((! z = x and ! z = y) or (! v1 = v2 and ! z = y) or ((v1 = v2 or z = y) and ind(z ; ; v1 v2)))",
            vec!["x", "y"],
        ),
        // inclusion from anonymity
        (
            "inc(x ; y)",
            "(E u . A w . u = w) or A w1 . A w2 . E p . E q . (((w1 = w2 and p = x) or (! w1 = w2 and p = y)) and ano(p ; q))",
            vec!["x", "y"],
        ),
        // anonymity from inclusion
        ("ano(x ; y)", "E u . (! u = y and inc(x u ; x y))", vec!["x", "y"]),
        // conditional independence from dep + exclusion + inclusion
        (
            "ind(x ; z ; y)",
            "A p . A q . A r . E u1 . E u2 . E u3 . E u4 . (dep(p q r ; u1) and dep(p q r ; u2) and dep(p q r ; u3) and dep(p q r ; u4) and ((! u1 = u2 and exc(p q ; z x)) or (u1 = u2 and ! u3 = u4 and exc(p r ; z y)) or (u1 = u2 and u3 = u4 and inc(p q r ; z x y))))",
            vec!["x", "z", "y"],
        ),
        // conditional from pure independence
        (
            "ind(x ; z ; y)",
            "A p . A q . E u . E w . ((! z = p or ! z = q or (u = x and w = y)) and (! z = p or ! z = q or ! p = q or z = p) and ind(p u ; ; q w))",
            vec!["x", "z", "y"],
        ),
    ];
    for (lhs, rhs, vars) in cases {
        let ctx: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let t0 = Instant::now();
        let fl = parse_formula(lhs).unwrap();
        let fr = parse_formula(rhs).unwrap();
        let a = team_family(&st, &fl, &ctx, &b);
        let c = team_family(&st, &fr, &ctx, &b);
        match (a, c) {
            (Ok(a), Ok(c)) => println!(
                "{lhs}: equal={} ({} vs {} members) in {:?}",
                a == c,
                a.len(),
                c.len(),
                t0.elapsed()
            ),
            (x, y) => println!("{lhs}: ERR {x:?} / {y:?}"),
        }
    }
}
