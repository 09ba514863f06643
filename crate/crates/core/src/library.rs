//! Bundled presentations and witness algebras.

use crate::algebra::Algebra;
use crate::base::{IndexCategory, Presheaf};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::syntax::{Equation, FreeFormSignature, ParamTerm, Symbol, Term};

fn var(i: usize) -> Term {
    Term::var(0, i)
}

fn app(op: usize, args: Vec<Term>, c: usize) -> Term {
    Term::app(op, vec![args], (0, c))
}

fn sym(name: &str, arity: usize, param: usize) -> Symbol {
    Symbol {
        name: name.into(),
        arity: Presheaf::set(arity),
        param: Presheaf::set(param),
    }
}

/// An equation over the point index with arity `n` and parameter `c`,
/// given componentwise.
fn point_eq(
    sig: &FreeFormSignature,
    name: &str,
    n: usize,
    c: usize,
    f: impl Fn(usize) -> (Term, Term),
) -> Result<Equation> {
    let (lhs, rhs): (Vec<Term>, Vec<Term>) = (0..c).map(f).unzip();
    let j = Presheaf::set(n);
    let p = Presheaf::set(c);
    Equation::new(
        sig,
        name,
        ParamTerm::new(sig, &j, &p, vec![lhs])?,
        ParamTerm::new(sig, &j, &p, vec![rhs])?,
    )
}

/// Join semilattices: one binary operation, associative, commutative and
/// idempotent.
pub fn semilattice() -> Presentation {
    let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("join", 2, 1)]).expect("signature");
    let j = |a, b| app(0, vec![a, b], 0);
    let eqs = vec![
        point_eq(&sig, "assoc", 3, 1, |_| (j(j(var(0), var(1)), var(2)), j(var(0), j(var(1), var(2))))),
        point_eq(&sig, "comm", 2, 1, |_| (j(var(0), var(1)), j(var(1), var(0)))),
        point_eq(&sig, "idem", 1, 1, |_| (j(var(0), var(0)), var(0))),
    ];
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new("semilattice", &sig, eqs).expect("presentation")
}

/// Monoids: an associative binary operation with a two-sided unit.
pub fn monoid() -> Presentation {
    let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("mul", 2, 1), sym("unit", 0, 1)])
        .expect("signature");
    let m = |a, b| app(0, vec![a, b], 0);
    let e = || app(1, vec![], 0);
    let eqs = vec![
        point_eq(&sig, "assoc", 3, 1, |_| (m(m(var(0), var(1)), var(2)), m(var(0), m(var(1), var(2))))),
        point_eq(&sig, "left_unit", 1, 1, |_| (m(e(), var(0)), var(0))),
        point_eq(&sig, "right_unit", 1, 1, |_| (m(var(0), e()), var(0))),
    ];
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new("monoid", &sig, eqs).expect("presentation")
}

/// Global state with `locations` locations each holding one of `values`
/// values. `lookup` has arity V and parameter L; `update` has arity 1 and
/// parameter L×V.
pub fn global_state(locations: usize, values: usize) -> Presentation {
    let (nl, nv) = (locations, values);
    let sig = FreeFormSignature::new(
        &IndexCategory::point(),
        vec![sym("lookup", nv, nl), sym("update", 1, nl * nv)],
    )
    .expect("signature");
    let lookup = |args: Vec<Term>, l: usize| app(0, args, l);
    let update = |t: Term, l: usize, v: usize| app(1, vec![t], l * nv + v);
    let pairs: Vec<(usize, usize)> = (0..nl)
        .flat_map(|a| (0..nl).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let np = pairs.len();
    let eqs = vec![
        point_eq(&sig, "lookup_update", 1, nl, |l| {
            (lookup((0..nv).map(|v| update(var(0), l, v)).collect(), l), var(0))
        }),
        point_eq(&sig, "lookup_lookup", nv * nv, nl, |l| {
            let lhs = lookup(
                (0..nv)
                    .map(|v| lookup((0..nv).map(|w| var(v * nv + w)).collect(), l))
                    .collect(),
                l,
            );
            (lhs, lookup((0..nv).map(|v| var(v * nv + v)).collect(), l))
        }),
        point_eq(&sig, "update_update", 1, nl * nv * nv, |k| {
            let (l, v, w) = (k / (nv * nv), (k / nv) % nv, k % nv);
            (update(update(var(0), l, w), l, v), update(var(0), l, w))
        }),
        point_eq(&sig, "update_lookup", nv, nl * nv, |k| {
            let (l, v) = (k / nv, k % nv);
            (update(lookup((0..nv).map(var).collect(), l), l, v), update(var(v), l, v))
        }),
        point_eq(&sig, "lookup_lookup_distinct", nv * nv, np, |k| {
            let (l, m) = pairs[k];
            let lhs = lookup(
                (0..nv)
                    .map(|v| lookup((0..nv).map(|w| var(v * nv + w)).collect(), m))
                    .collect(),
                l,
            );
            let rhs = lookup(
                (0..nv)
                    .map(|w| lookup((0..nv).map(|v| var(v * nv + w)).collect(), l))
                    .collect(),
                m,
            );
            (lhs, rhs)
        }),
        point_eq(&sig, "update_update_distinct", 1, np * nv * nv, |k| {
            let (p, v, w) = (k / (nv * nv), (k / nv) % nv, k % nv);
            let (l, m) = pairs[p];
            (update(update(var(0), m, w), l, v), update(update(var(0), l, v), m, w))
        }),
        point_eq(&sig, "update_lookup_distinct", nv, np * nv, |k| {
            let (p, v) = (k / nv, k % nv);
            let (l, m) = pairs[p];
            let lhs = update(lookup((0..nv).map(var).collect(), m), l, v);
            let rhs = lookup((0..nv).map(|w| update(var(w), l, v)).collect(), m);
            (lhs, rhs)
        }),
    ];
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new("global_state", &sig, eqs).expect("presentation")
}

/// The state-transformer algebra: functions from states `V^L` to `X`, with
/// `lookup_l(f)(s) = f_{s(l)}(s)` and `update_{l,v}(a)(s) = a(s[l := v])`.
pub fn state_transformers(locations: usize, values: usize, x: usize) -> Algebra {
    let p = global_state(locations, values);
    let states = values.pow(locations as u32);
    let size = x.pow(states as u32);
    let digit = |a: usize, s: usize| (a / x.pow(s as u32)) % x;
    let from_digits = |f: &dyn Fn(usize) -> usize| (0..states).map(|s| f(s) * x.pow(s as u32)).sum::<usize>();
    let at = |s: usize, l: usize| (s / values.pow(l as u32)) % values;
    let set = |s: usize, l: usize, v: usize| s - at(s, l) * values.pow(l as u32) + v * values.pow(l as u32);
    Algebra::from_fn(p.signature(), &Presheaf::set(size), |op, flat, _, c| {
        if op == 0 {
            from_digits(&|s| digit(flat[at(s, c)], s))
        } else {
            let (l, v) = (c / values, c % values);
            from_digits(&|s| digit(flat[0], set(s, l, v)))
        }
    })
    .expect("state transformers")
}

/// A finite rig (unital semiring) given by tables on `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRig {
    pub name: String,
    pub size: usize,
    pub add: Vec<usize>,
    pub mul: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

impl FiniteRig {
    pub fn z2() -> Self {
        FiniteRig {
            name: "z2".into(),
            size: 2,
            add: vec![0, 1, 1, 0],
            mul: vec![0, 0, 0, 1],
            zero: 0,
            one: 1,
        }
    }

    pub fn boolean() -> Self {
        FiniteRig {
            name: "bool".into(),
            size: 2,
            add: vec![0, 1, 1, 1],
            mul: vec![0, 0, 0, 1],
            zero: 0,
            one: 1,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }
}

/// Left modules over a finite rig `R`: `+` of arity 2, `0` of arity 0 and
/// scalar action `•` of arity 1 and parameter `R`.
pub fn rmodule(rig: &FiniteRig) -> Presentation {
    let r = rig.size;
    let sig = FreeFormSignature::new(
        &IndexCategory::point(),
        vec![sym("add", 2, 1), sym("zero", 0, 1), sym("act", 1, r)],
    )
    .expect("signature");
    let add = |a, b| app(0, vec![a, b], 0);
    let zero = || app(1, vec![], 0);
    let act = |s: usize, t| app(2, vec![t], s);
    let eqs = vec![
        point_eq(&sig, "add_assoc", 3, 1, |_| {
            (add(var(0), add(var(1), var(2))), add(add(var(0), var(1)), var(2)))
        }),
        point_eq(&sig, "add_comm", 2, 1, |_| (add(var(0), var(1)), add(var(1), var(0)))),
        point_eq(&sig, "add_zero", 1, 1, |_| (add(var(0), zero()), var(0))),
        point_eq(&sig, "zero_add", 1, 1, |_| (add(zero(), var(0)), var(0))),
        point_eq(&sig, "one_act", 1, 1, |_| (act(rig.one, var(0)), var(0))),
        point_eq(&sig, "act_assoc", 1, r * r, |k| {
            let (a, b) = (k / r, k % r);
            (act(a, act(b, var(0))), act(rig.mul(a, b), var(0)))
        }),
        point_eq(&sig, "zero_act", 1, 1, |_| (act(rig.zero, var(0)), zero())),
        point_eq(&sig, "act_zero", 0, r, |a| (act(a, zero()), zero())),
        point_eq(&sig, "scalar_distrib", 1, r * r, |k| {
            let (a, b) = (k / r, k % r);
            (act(rig.add(a, b), var(0)), add(act(a, var(0)), act(b, var(0))))
        }),
        point_eq(&sig, "vector_distrib", 2, r, |a| {
            (act(a, add(var(0), var(1))), add(act(a, var(0)), act(a, var(1))))
        }),
    ];
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new(&format!("rmodule_{}", rig.name), &sig, eqs).expect("presentation")
}

/// The rig acting on itself by multiplication.
pub fn regular_module(rig: &FiniteRig) -> Algebra {
    let p = rmodule(rig);
    Algebra::from_fn(p.signature(), &Presheaf::set(rig.size), |op, flat, _, c| match op {
        0 => rig.add(flat[0], flat[1]),
        1 => rig.zero,
        _ => rig.mul(c, flat[0]),
    })
    .expect("regular module")
}

/// Reading bits: `?` of arity 2 and parameter `α`, with the idempotence,
/// duplication and commutation laws.
pub fn reading_bits(alpha: usize) -> Presentation {
    let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("read", 2, alpha)]).expect("signature");
    let q = |a: Term, b: Term, c: usize| app(0, vec![a, b], c);
    let eqs = vec![
        point_eq(&sig, "idem", 1, alpha, |a| (var(0), q(var(0), var(0), a))),
        point_eq(&sig, "dup", 4, alpha, |a| {
            (q(q(var(0), var(1), a), q(var(2), var(3), a), a), q(var(0), var(3), a))
        }),
        point_eq(&sig, "commute", 4, alpha * alpha, |k| {
            let (a, b) = (k / alpha, k % alpha);
            (
                q(q(var(0), var(1), b), q(var(2), var(3), b), a),
                q(q(var(0), var(2), a), q(var(1), var(3), a), b),
            )
        }),
    ];
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new("reading_bits", &sig, eqs).expect("presentation")
}

/// Functions from bit vectors of length `alpha` to `x`, with `f ?_a g`
/// reading bit `a` to choose between `f` and `g`.
pub fn bit_readers(alpha: usize, x: usize) -> Algebra {
    let p = reading_bits(alpha);
    let states = 1usize << alpha;
    let size = x.pow(states as u32);
    let digit = |a: usize, s: usize| (a / x.pow(s as u32)) % x;
    Algebra::from_fn(p.signature(), &Presheaf::set(size), |_, flat, _, c| {
        (0..states)
            .map(|s| {
                let chosen = if (s >> c) & 1 == 0 { flat[0] } else { flat[1] };
                digit(chosen, s) * x.pow(s as u32)
            })
            .sum()
    })
    .expect("bit readers")
}

/// Restriction: `ν` of arity `J` and parameter 1, idempotent on constant
/// families and invariant under swapping nested binders.
pub fn restriction(j: usize) -> Presentation {
    let sig = FreeFormSignature::new(&IndexCategory::point(), vec![sym("new", j, 1)]).expect("signature");
    let nu = |args: Vec<Term>| app(0, args, 0);
    let eqs = vec![
        point_eq(&sig, "idem", 1, 1, |_| (nu(vec![var(0); j]), var(0))),
        point_eq(&sig, "swap", j * j, 1, |_| {
            let lhs = nu((0..j).map(|a| nu((0..j).map(|b| var(a * j + b)).collect())).collect());
            let rhs = nu((0..j).map(|a| nu((0..j).map(|b| var(b * j + a)).collect())).collect());
            (lhs, rhs)
        }),
    ];
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new("restriction", &sig, eqs).expect("presentation")
}

/// `ν(f) = f(0)` on a set of size `x`.
pub fn first_choice(j: usize, x: usize) -> Algebra {
    let p = restriction(j);
    Algebra::from_fn(p.signature(), &Presheaf::set(x), |_, flat, _, _| flat[0]).expect("first choice")
}

/// The graph with one vertex and no edges.
pub fn vertex() -> Presheaf {
    Presheaf::graph(1, &[]).expect("vertex")
}

/// Internal categories over the graph base: identities `e` of arity `[0]`,
/// composition `c` of arity `[2]`, both with parameter `[1]`. The first four
/// equations fix sources and targets; associativity and the unit laws bind
/// composites whose naturality holds only modulo the first four, so they
/// are relative equations.
pub fn internal_category() -> Presentation {
    let index = IndexCategory::parallel_pair();
    let (p0, p1, p2, p3) = (vertex(), Presheaf::path(1), Presheaf::path(2), Presheaf::path(3));
    let sig = FreeFormSignature::new(
        &index,
        vec![
            Symbol {
                name: "e".into(),
                arity: p0.clone(),
                param: p1.clone(),
            },
            Symbol {
                name: "c".into(),
                arity: p2.clone(),
                param: p1.clone(),
            },
        ],
    )
    .expect("signature");
    let v = |i| Term::var(0, i);
    let edge = |i| Term::var(1, i);
    let e = |x: Term, p: (usize, usize)| Term::app(0, vec![vec![x], vec![]], p);
    let c = |vs: [Term; 3], es: [Term; 2], p: (usize, usize)| Term::app(1, vec![vs.to_vec(), es.to_vec()], p);
    let at_vertex = |t: Term| vec![vec![t], vec![]];
    let pt = |arity: &Presheaf, param: &Presheaf, comps| ParamTerm::new(&sig, arity, param, comps).expect("term");
    let composite = |f: &dyn Fn((usize, usize)) -> Term| vec![vec![f((0, 0)), f((0, 1))], vec![f((1, 0))]];
    let mut eqs = vec![
        Equation::new(
            &sig,
            "c_source",
            pt(&p2, &p0, at_vertex(c([v(0), v(1), v(2)], [edge(0), edge(1)], (0, 0)))),
            pt(&p2, &p0, at_vertex(v(0))),
        ),
        Equation::new(
            &sig,
            "c_target",
            pt(&p2, &p0, at_vertex(c([v(0), v(1), v(2)], [edge(0), edge(1)], (0, 1)))),
            pt(&p2, &p0, at_vertex(v(2))),
        ),
        Equation::new(&sig, "e_source", pt(&p0, &p0, at_vertex(e(v(0), (0, 0)))), pt(&p0, &p0, at_vertex(v(0)))),
        Equation::new(&sig, "e_target", pt(&p0, &p0, at_vertex(e(v(0), (0, 1)))), pt(&p0, &p0, at_vertex(v(0)))),
    ];
    let identity_edge = || vec![vec![v(0), v(1)], vec![edge(0)]];
    eqs.push(Equation::relative(
        &sig,
        "assoc",
        pt(
            &p3,
            &p1,
            composite(&|p| {
                let inner = c([v(0), v(1), v(2)], [edge(0), edge(1)], (1, 0));
                c([v(0), v(2), v(3)], [inner, edge(2)], p)
            }),
        ),
        pt(
            &p3,
            &p1,
            composite(&|p| {
                let inner = c([v(1), v(2), v(3)], [edge(1), edge(2)], (1, 0));
                c([v(0), v(1), v(3)], [edge(0), inner], p)
            }),
        ),
    ));
    eqs.push(Equation::relative(
        &sig,
        "left_unit",
        pt(&p1, &p1, composite(&|p| c([v(0), v(0), v(1)], [e(v(0), (1, 0)), edge(0)], p))),
        pt(&p1, &p1, identity_edge()),
    ));
    eqs.push(Equation::relative(
        &sig,
        "right_unit",
        pt(&p1, &p1, composite(&|p| c([v(0), v(1), v(1)], [edge(0), e(v(1), (1, 0))], p))),
        pt(&p1, &p1, identity_edge()),
    ));
    let eqs = eqs.into_iter().collect::<Result<Vec<_>>>().expect("equations");
    Presentation::new("internal_category", &sig, eqs).expect("presentation")
}

/// The category `0 → 1` with its two identities, as an internal category
/// on the graph with edges `id0, id1, f`.
pub fn arrow_category() -> Algebra {
    let p = internal_category();
    let carrier = Presheaf::graph(2, &[(0, 0), (1, 1), (0, 1)]).expect("graph");
    let src = [0, 1, 0];
    let tgt = [0, 1, 1];
    Algebra::from_fn(p.signature(), &carrier, |op, flat, b, c| {
        let edge = if op == 0 {
            flat[0]
        } else {
            let (f, g) = (flat[3], flat[4]);
            if f < 2 {
                g
            } else {
                f
            }
        };
        match (b, c) {
            (1, _) => edge,
            (_, 0) => src[edge],
            _ => tgt[edge],
        }
    })
    .expect("arrow category")
}

/// Every bundled presentation, by name.
pub fn bundled() -> Vec<Presentation> {
    vec![
        semilattice(),
        monoid(),
        global_state(1, 2),
        rmodule(&FiniteRig::z2()),
        internal_category(),
        reading_bits(2),
        restriction(2),
    ]
}

/// A witness algebra for each bundled presentation, in the same order.
pub fn bundled_witnesses() -> Vec<(String, Algebra)> {
    let sl = semilattice();
    let chain = Algebra::from_fn(sl.signature(), &Presheaf::set(2), |_, f, _, _| f[0].max(f[1])).expect("chain");
    let mo = monoid();
    let parity = Algebra::from_fn(mo.signature(), &Presheaf::set(2), |op, f, _, _| {
        if op == 0 {
            f[0] ^ f[1]
        } else {
            0
        }
    })
    .expect("parity");
    vec![
        ("chain2".into(), chain),
        ("parity".into(), parity),
        ("state_transformers".into(), state_transformers(1, 2, 2)),
        ("regular_z2".into(), regular_module(&FiniteRig::z2())),
        ("arrow".into(), arrow_category()),
        ("bit_readers".into(), bit_readers(2, 2)),
        ("first_choice".into(), first_choice(2, 2)),
    ]
}
