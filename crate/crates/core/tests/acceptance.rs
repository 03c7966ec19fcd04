//! Acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the summary is always printed.

use std::collections::{BTreeMap, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use palitrie::check;
use palitrie::colored_ancestor::{ColoredAncestor, NcaId};
use palitrie::eertree::{Backend, Eertree, EtId, Strategy};
use palitrie::engine::EngineKind;
use palitrie::oracles::{self, NaiveNca, NaiveOrderList};
use palitrie::order_list::OrderList;
use palitrie::palgroups::{self, Case, PalGroup};
use palitrie::persistent_map::PersistentMap;
use palitrie::script::{self, GenConfig, Op, Shape};
use palitrie::suffix_tree::SuffixTree;
use palitrie::{Label, NodeId, Session, Trie};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)*));
        }
    };
}

fn l(c: char) -> Label {
    Label::new(c)
}

const SIGMAS: [u32; 4] = [1, 2, 3, 26];
const SHAPES: [Shape; 4] = [Shape::Path, Shape::Star, Shape::Caterpillar, Shape::Uniform];

/// Seeded random scripts of at most `max_ops` operations. Deletions only
/// shrink the trie, so `N <= max_ops` throughout.
fn corpus(count: u64, max_ops: usize, base_seed: u64) -> Vec<(u64, Vec<Op>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    (0..count)
        .map(|i| {
            let seed = base_seed * 1_000_003 + i;
            let sigma = SIGMAS[i as usize % 4];
            let shape = SHAPES[(i / 4) as usize % 4];
            let ops = rng.gen_range(1..=max_ops);
            let ratio = [0.0, 0.15, 0.3][i as usize % 3];
            (
                seed,
                script::generate(&GenConfig::new(seed, ops, sigma, shape).with_deletes(ratio)),
            )
        })
        .collect()
}

fn apply(s: &mut Session, op: Op) -> palitrie::Result<palitrie::Event> {
    match op {
        Op::Insert { parent, label } => s.insert(parent, label),
        Op::Delete { id } => s.delete(id),
    }
}

fn build(ops: &[Op]) -> Trie {
    let mut t = Trie::new();
    for &op in ops {
        match op {
            Op::Insert { parent, label } => {
                t.insert_leaf(parent, label).unwrap();
            }
            Op::Delete { id } => t.delete_leaf(id).unwrap(),
        }
    }
    t
}

fn path_ops(s: &str) -> Vec<Op> {
    s.chars()
        .enumerate()
        .map(|(i, c)| Op::Insert {
            parent: NodeId(i as u32),
            label: l(c),
        })
        .collect()
}

fn c1_count_formula() -> Outcome {
    let scripts = corpus(1000, 300, 1);
    let mut checks = 0u64;
    for (seed, ops) in &scripts {
        let mut s = Session::open(EngineKind::EertreeQuick);
        for (i, &op) in ops.iter().enumerate() {
            apply(&mut s, op).map_err(|e| e.to_string())?;
            let st = s.trie().stats();
            let want = 2 * st.edges - st.leaves;
            let got = s.groups().unwrap().count_maximal(s.trie()).unwrap_or(0);
            ensure!(
                got == want,
                "seed {seed}, op {}: count {got}, 2N-L = {want}",
                i + 1
            );
            ensure!(
                s.maximal_count() == want,
                "seed {seed}, op {}: event counter drifted",
                i + 1
            );
            checks += 1;
        }
    }
    Ok(format!("{} scripts, {checks} states", scripts.len()))
}

fn c2_distinct_bound() -> Outcome {
    let scripts = corpus(1000, 300, 1);
    for (seed, ops) in &scripts {
        let mut s = Session::open(EngineKind::EertreeDirectPersistent);
        for (i, &op) in ops.iter().enumerate() {
            let ev = apply(&mut s, op).map_err(|e| e.to_string())?;
            ensure!(
                ev.d <= ev.n,
                "seed {seed}, op {}: D = {} > N = {}",
                i + 1,
                ev.d,
                ev.n
            );
        }
    }
    for kind in [EngineKind::EertreeQuick, EngineKind::SuffixTree] {
        let mut s = Session::open(kind);
        for (i, &op) in path_ops(&"a".repeat(512)).iter().enumerate() {
            let ev = apply(&mut s, op).map_err(|e| e.to_string())?;
            ensure!(ev.d == ev.n, "{kind}: a^{}: D = {}", i + 1, ev.d);
        }
    }
    Ok(format!(
        "{} scripts; D = N on a^n for n <= 512",
        scripts.len()
    ))
}

fn c3_maximal_oracle() -> Outcome {
    let scripts = corpus(200, 120, 3);
    for (seed, ops) in &scripts {
        let mut s = Session::open(EngineKind::EertreeQuick);
        for (i, &op) in ops.iter().enumerate() {
            apply(&mut s, op).map_err(|e| e.to_string())?;
            let got = s.groups().unwrap().enumerate_maximal();
            let want = oracles::maximal_bruteforce(s.trie());
            ensure!(got == want, "seed {seed}, op {}: multisets differ", i + 1);
        }
    }
    let mut big = 0;
    for (k, shape) in Shape::ALL.into_iter().enumerate() {
        for sigma in [1, 2, 26] {
            let ops = script::generate(
                &GenConfig::new(900 + k as u64, 2000, sigma, shape).with_deletes(0.1),
            );
            let mut s = Session::open(EngineKind::EertreeQuick);
            for &op in &ops {
                apply(&mut s, op).map_err(|e| e.to_string())?;
            }
            let got = s.groups().unwrap().enumerate_maximal();
            ensure!(
                got == oracles::maximal_bruteforce(s.trie()),
                "{shape}, sigma {sigma}: endpoint differs"
            );
            big += 1;
        }
    }
    Ok(format!(
        "200 scripts stepwise (N <= 120), {big} endpoint checks up to 2000 ops"
    ))
}

fn c4_engine_equivalence() -> Outcome {
    let mut scripts: Vec<Vec<Op>> = corpus(1000, 150, 4)
        .into_iter()
        .map(|(_, ops)| ops)
        .collect();
    for m in [8, 16, 32] {
        scripts.push(script::adversarial(m, m));
    }
    let deletes: usize = scripts
        .iter()
        .flatten()
        .filter(|op| matches!(op, Op::Delete { .. }))
        .count();
    ensure!(deletes > 0, "corpus has no deletions");
    let engines: Vec<_> = EngineKind::ALL
        .into_iter()
        .filter(|&k| k != EngineKind::Oracle)
        .collect();
    let bad = check::check_all(&engines, &scripts, false);
    if let Some(d) = bad.first() {
        return Err(d.report());
    }
    // distinct counts also agree with the definition
    for ops in scripts.iter().step_by(25) {
        let mut s = Session::open(EngineKind::Oracle);
        for &op in ops {
            let ev = apply(&mut s, op).map_err(|e| e.to_string())?;
            ensure!(
                ev.d == oracles::distinct_bruteforce(s.trie()).len(),
                "oracle engine disagrees with brute force"
            );
        }
    }
    Ok(format!(
        "{} scripts, {deletes} deletions, {} engines",
        scripts.len(),
        engines.len()
    ))
}

fn c5_direct_link_vector() -> Outcome {
    let mut ops = path_ops("abacaba");
    ops.push(Op::Insert {
        parent: NodeId(7),
        label: l('b'),
    });
    for kind in [
        EngineKind::EertreeDirectPersistent,
        EngineKind::EertreeDirectNca,
    ] {
        let mut s = Session::open(kind);
        for &op in &ops[..7] {
            apply(&mut s, op).map_err(|e| e.to_string())?;
        }
        let e = s.eertree().unwrap();
        let x = e.lps(NodeId(7)).unwrap();
        let name = |e: &Eertree, y: EtId| e.reconstruct(s.trie(), y).unwrap();
        ensure!(name(e, x) == "abacaba", "lps is {}", name(e, x));
        let y = e
            .dlink_ancestor(x, l('b'))
            .unwrap()
            .ok_or("no direct-link ancestor")?;
        ensure!(name(e, y) == "aba", "{kind}: ancestor {}", name(e, y));
        ensure!(
            name(e, e.slink(y)) == "a",
            "{kind}: slink {}",
            name(e, e.slink(y))
        );
        ensure!(name(e, e.dlink(x, l('b')).unwrap()) == "a", "{kind}: dlink");
        let ev = apply(&mut s, ops[7]).map_err(|e| e.to_string())?;
        let np = ev.new_palindrome.ok_or("no new palindrome")?;
        ensure!(np.len == 3, "{kind}: new palindrome of length {}", np.len);
        let r = s.reconstruct(np.len, np.end).map_err(|e| e.to_string())?;
        ensure!(r == "bab", "{kind}: reconstructed {r}");
    }
    Ok("new palindrome \"bab\"; slink(dlink(abacaba, b)) = slink(aba) = a".into())
}

fn c6_group_vectors() -> Outcome {
    let state = || {
        vec![
            PalGroup::with_chars(1, 1, 3, Some(l('a')), Some(l('b'))),
            PalGroup::with_chars(7, 4, 4, Some(l('b')), Some(l('c'))),
            PalGroup::with_chars(39, 20, 2, Some(l('c')), Some(l('c'))),
        ]
    };
    let nofetch =
        |_: usize| -> palitrie::Result<Option<Label>> { panic!("fixture is fully cached") };
    ensure!(
        palgroups::tuples(&state()) == vec![(1, 1, 3), (7, 4, 4), (39, 20, 2)],
        "fixture prints as {:?}",
        palgroups::tuples(&state())
    );
    let mut g = state();
    let ext =
        palgroups::extend(&mut g, Some(l('a')), l('a'), nofetch).map_err(|e| e.to_string())?;
    ensure!(
        ext.cases[0] == Case::AllButLongest,
        "first group case {:?}",
        ext.cases[0]
    );
    ensure!(
        ext.moved[0] == (3, 1, 2),
        "first group became {:?}",
        ext.moved[0]
    );
    let mut g = state();
    let ext =
        palgroups::extend(&mut g, Some(l('a')), l('c'), nofetch).map_err(|e| e.to_string())?;
    let got = palgroups::tuples(&ext.leaf);
    ensure!(
        got == vec![(1, 0, 1), (21, 20, 3)],
        "extension by c gave {got:?}"
    );
    Ok("a: <1,1,3> -> <3,1,2>; c: {<1,0,1>, <21,20,3>}".into())
}

fn check_group_structure(s: &Session) -> Result<usize, String> {
    let t = s.trie();
    let mut groups = 0;
    for (v, list) in s.groups().unwrap().nodes() {
        let lens = list.lengths();
        let mut prev = 0;
        let gaps: Vec<usize> = lens
            .iter()
            .map(|&x| {
                let d = x - prev;
                prev = x;
                d
            })
            .collect();
        for j in 1..gaps.len() {
            ensure!(gaps[j] >= gaps[j - 1], "node {v}: gaps {gaps:?} decrease");
            if j >= 2 && gaps[j] != gaps[j - 1] {
                ensure!(
                    gaps[j] >= gaps[j - 1] + gaps[j - 2],
                    "node {v}: gaps {gaps:?} grow too slowly"
                );
            }
        }
        let path = t.path_labels(v).unwrap();
        for g in &list.groups {
            groups += 1;
            if g.t < 2 {
                continue;
            }
            for len in g.members() {
                let p = &path[path.len() - len..];
                ensure!(
                    (0..len - g.d).all(|k| p[k] == p[k + g.d]),
                    "node {v}: {len} lacks period {}",
                    g.d
                );
            }
        }
    }
    Ok(groups)
}

fn c7_group_structure() -> Outcome {
    let mut groups = 0;
    let mut scripts = corpus(200, 120, 7);
    scripts.push((0, path_ops(&"ab".repeat(30))));
    scripts.push((0, path_ops("abaabaabaababaabaabaabaabaab")));
    for (seed, ops) in &scripts {
        let mut s = Session::open(EngineKind::EertreeQuick);
        for (i, &op) in ops.iter().enumerate() {
            apply(&mut s, op).map_err(|e| e.to_string())?;
            groups +=
                check_group_structure(&s).map_err(|e| format!("seed {seed}, op {}: {e}", i + 1))?;
        }
    }
    Ok(format!(
        "{groups} group checks over {} scripts",
        scripts.len()
    ))
}

fn c8_adversarial() -> Outcome {
    let mut totals = Vec::new();
    for m in [64usize, 128, 256, 512] {
        let ops = script::adversarial(m, m);
        let mut basic = Session::open(EngineKind::EertreeBasic);
        let mut quick = Session::open(EngineKind::EertreeQuick);
        let bound = 2 * (m.ilog2() as u64 + 2);
        for &op in &ops {
            apply(&mut basic, op).map_err(|e| e.to_string())?;
            apply(&mut quick, op).map_err(|e| e.to_string())?;
            let q = quick.last_chain_steps();
            ensure!(
                q <= bound,
                "m = {m}: quick insertion took {q} steps > {bound}"
            );
        }
        totals.push((m, basic.chain_steps(), quick.chain_steps()));
    }
    for w in totals.windows(2) {
        let ratio = w[1].1 as f64 / w[0].1 as f64;
        ensure!(
            ratio >= 3.5,
            "basic steps {} -> {} (ratio {ratio:.2})",
            w[0].1,
            w[1].1
        );
    }
    let shown: Vec<String> = totals
        .iter()
        .map(|(m, b, q)| format!("m={m}: basic {b}, quick {q}"))
        .collect();
    Ok(shown.join("; "))
}

fn order_list_differential() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let colors = [l('a'), l('b'), l('c')];
    let mut fast: OrderList<()> = OrderList::new();
    let mut slow = NaiveOrderList::new();
    let mut live: Vec<usize> = Vec::new();
    for step in 0..100_000 {
        let r = rng.gen_range(0..100);
        if live.len() < 2000 && (r < 40 || live.is_empty()) {
            let after = if live.is_empty() || rng.gen_bool(0.05) {
                None
            } else {
                Some(live[rng.gen_range(0..live.len())])
            };
            let e = fast.insert_after(after, ()).unwrap();
            slow.insert_after(after, e);
            live.push(e);
        } else if r < 50 {
            let i = rng.gen_range(0..live.len());
            let e = live.swap_remove(i);
            for &c in fast.colors(e).unwrap().clone().iter() {
                fast.uncolor(e, c).unwrap();
                slow.uncolor(e, c);
            }
            fast.delete(e).unwrap();
            slow.delete(e);
        } else if r < 70 {
            let e = live[rng.gen_range(0..live.len())];
            let c = colors[rng.gen_range(0..3)];
            if rng.gen_bool(0.6) {
                fast.color(e, c).unwrap();
                slow.color(e, c);
            } else if fast.colors(e).unwrap().contains(&c) {
                fast.uncolor(e, c).unwrap();
                slow.uncolor(e, c);
            }
        } else {
            let a = live[rng.gen_range(0..live.len())];
            let b = live[rng.gen_range(0..live.len())];
            let c = colors[rng.gen_range(0..3)];
            ensure!(
                fast.order_less(a, b).unwrap() == slow.order_less(a, b),
                "order, step {step}"
            );
            ensure!(
                fast.pred(a, c).unwrap() == slow.pred(a, c),
                "pred, step {step}"
            );
            ensure!(
                fast.succ(a, c).unwrap() == slow.succ(a, c),
                "succ, step {step}"
            );
        }
    }
    ensure!(
        fast.iter().collect::<Vec<_>>() == slow.ids(),
        "final order differs"
    );
    fast.validate().map_err(|e| e.to_string())
}

fn colored_ancestor_differential() -> Result<(), String> {
    let colors = [l('x'), l('y'), l('z'), l('w')];
    for seed in 0..6 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fast = ColoredAncestor::new(Label::SENTINEL);
        let mut slow = NaiveNca::new(Label::SENTINEL);
        let mut ids: BTreeMap<usize, NcaId> = BTreeMap::from([(0, fast.root())]);
        let mut children: HashMap<usize, usize> = HashMap::new();
        for step in 0..1500 {
            let nodes: Vec<usize> = ids.keys().copied().collect();
            if nodes.len() < 500 && rng.gen_bool(0.7) {
                let u = nodes[rng.gen_range(0..nodes.len())];
                let c = colors[rng.gen_range(0..colors.len())];
                let f = fast.insert_leaf(ids[&u], c).unwrap();
                let w = slow.insert_leaf(u, c);
                ids.insert(w, f);
                *children.entry(u).or_default() += 1;
            } else {
                let leaves: Vec<usize> = nodes
                    .iter()
                    .copied()
                    .filter(|&v| v != 0 && slow.is_leaf(v))
                    .collect();
                if leaves.is_empty() {
                    continue;
                }
                let v = leaves[rng.gen_range(0..leaves.len())];
                fast.delete_leaf(ids[&v]).unwrap();
                slow.delete_leaf(v);
                ids.remove(&v);
            }
            if step % 100 == 99 {
                for (&v, &f) in &ids {
                    for c in colors.into_iter().chain([Label::SENTINEL]) {
                        let want = slow.nca(v, c).map(|w| ids[&w]);
                        ensure!(
                            fast.nca(f, c).unwrap() == want,
                            "seed {seed}, step {step}: nca({v}, {c})"
                        );
                    }
                }
                fast.validate().map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

fn persistent_map_differential() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut versions = vec![PersistentMap::<u32, u64>::empty()];
    let mut snaps = vec![BTreeMap::new()];
    for i in 0..1000u64 {
        let base = rng.gen_range(0..versions.len());
        let k = rng.gen_range(0..200u32);
        versions.push(versions[base].with_set(k, i));
        let mut s = snaps[base].clone();
        s.insert(k, i);
        snaps.push(s);
    }
    for (v, s) in versions.iter().zip(&snaps) {
        ensure!(v.len() == s.len(), "lengths differ");
        ensure!(
            v.iter()
                .map(|(k, x)| (*k, *x))
                .eq(s.iter().map(|(k, x)| (*k, *x))),
            "contents differ"
        );
        for k in 0..200 {
            ensure!(v.get(&k) == s.get(&k), "get({k}) differs");
        }
    }
    Ok(())
}

fn suffix_tree_differential() -> Result<usize, String> {
    let mut contractions = 0;
    for (k, shape) in SHAPES.into_iter().enumerate() {
        for (j, sigma) in [1u32, 2, 3].into_iter().enumerate() {
            let ops = script::generate(
                &GenConfig::new((k * 3 + j) as u64, 300, sigma, shape).with_deletes(0.2),
            );
            let mut t = Trie::new();
            let mut st = SuffixTree::new();
            for (i, &op) in ops.iter().enumerate() {
                match op {
                    Op::Insert { parent, label } => {
                        let v = t.insert_leaf(parent, label).unwrap();
                        st.on_insert(&t, v).map_err(|e| e.to_string())?;
                    }
                    Op::Delete { id } => {
                        st.on_delete(&t, id).map_err(|e| e.to_string())?;
                        t.delete_leaf(id).unwrap();
                    }
                }
                let nodes = oracles::naive_st(&t);
                let at = format!("{shape}, sigma {sigma}, op {}", i + 1);
                ensure!(st.node_strings(&t).unwrap() == nodes, "{at}: nodes differ");
                ensure!(
                    st.mark_set(&t).unwrap() == oracles::naive_marks(&nodes),
                    "{at}: marks differ"
                );
                if i % 10 == 9 {
                    for x in st.nodes().collect::<Vec<_>>() {
                        for (c, _) in st.marks_of(x).collect::<Vec<_>>() {
                            ensure!(
                                st.check_contraction(x, c).unwrap(),
                                "{at}: contraction fails"
                            );
                            contractions += 1;
                        }
                    }
                }
            }
            st.validate(&t).map_err(|e| e.to_string())?;
        }
    }
    Ok(contractions)
}

fn dlink_backends_agree() -> Result<(), String> {
    for (seed, ops) in corpus(60, 150, 9) {
        let t = build(&ops);
        let mut trees = Vec::new();
        for backend in [Backend::Persistent, Backend::Nca] {
            let mut s = Session::open(if backend == Backend::Nca {
                EngineKind::EertreeDirectNca
            } else {
                EngineKind::EertreeDirectPersistent
            });
            for &op in &ops {
                apply(&mut s, op).map_err(|e| e.to_string())?;
            }
            assert_eq!(s.eertree().unwrap().strategy(), Strategy::Direct(backend));
            trees.push(s);
        }
        let alphabet: Vec<Label> = (0..4).map(Label::nth).collect();
        let mut tables = Vec::new();
        for s in &trees {
            let e = s.eertree().unwrap();
            let name = |y: Option<EtId>| y.map(|y| e.reconstruct(&t, y).unwrap());
            let mut table = BTreeMap::new();
            for x in e.palindromes() {
                for &c in &alphabet {
                    let fast = e.dlink_ancestor(x, c).unwrap();
                    ensure!(
                        fast == e.dlink_ancestor_scan(x, c),
                        "seed {seed}: scan disagrees"
                    );
                    table.insert((name(Some(x)), c), name(fast));
                }
            }
            tables.push(table);
        }
        ensure!(tables[0] == tables[1], "seed {seed}: backends disagree");
    }
    Ok(())
}

fn c9_substructures() -> Outcome {
    order_list_differential().map_err(|e| format!("order list: {e}"))?;
    colored_ancestor_differential().map_err(|e| format!("colored ancestor: {e}"))?;
    persistent_map_differential().map_err(|e| format!("persistent map: {e}"))?;
    let contractions = suffix_tree_differential().map_err(|e| format!("suffix tree: {e}"))?;
    dlink_backends_agree().map_err(|e| format!("direct links: {e}"))?;
    Ok(format!("order list 1e5 ops, colored ancestor, persistent map 1e3 versions, suffix tree ({contractions} contractions), direct links"))
}

/// Fresh session holding the same trie as `s`, built only from insertions.
fn rebuild(kind: EngineKind, t: &Trie) -> Result<Session, String> {
    let mut fresh = Session::open(kind);
    let mut ids = HashMap::from([(NodeId::ROOT, NodeId::ROOT)]);
    for v in t.nodes().filter(|&v| v != NodeId::ROOT) {
        let p = ids[&t.parent(v).unwrap().unwrap()];
        let ev = fresh
            .insert(p, t.label(v).unwrap().unwrap())
            .map_err(|e| e.to_string())?;
        ids.insert(v, ev.id);
    }
    Ok(fresh)
}

fn c10_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut compared = 0;
    for (seed, base) in corpus(120, 120, 10) {
        // interleave: every insertion of the base script is followed, at a
        // random later point, by an extra leaf that is deleted again
        let t = build(&base);
        let mut ops = base.clone();
        let mut next = t.next_id().0;
        let mut pending = Vec::new();
        let mut nodes: Vec<NodeId> = t.nodes().collect();
        nodes.sort();
        for &v in &nodes {
            let fresh = Label::nth(27 + rng.gen_range(0..3));
            if t.child(v, fresh).unwrap().is_none() && rng.gen_bool(0.5) {
                ops.push(Op::Insert {
                    parent: v,
                    label: fresh,
                });
                pending.push(NodeId(next));
                next += 1;
            }
        }
        while !pending.is_empty() {
            let i = rng.gen_range(0..pending.len());
            ops.push(Op::Delete {
                id: pending.swap_remove(i),
            });
        }
        for kind in EngineKind::ALL {
            let mut s = Session::open(kind);
            for &op in &ops {
                apply(&mut s, op).map_err(|e| e.to_string())?;
            }
            let fresh = rebuild(kind, s.trie())?;
            let a = s.canonical().map_err(|e| e.to_string())?;
            let b = fresh.canonical().map_err(|e| e.to_string())?;
            ensure!(
                a == b,
                "seed {seed}, {kind}: state differs from a fresh rebuild"
            );
            compared += 1;
        }
    }
    Ok(format!("{compared} engine/script pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 maximal count 2N-L", c1_count_formula),
        ("2 distinct bound D <= N", c2_distinct_bound),
        ("3 maximal palindromes vs brute force", c3_maximal_oracle),
        ("4 engine event streams vs oracle", c4_engine_equivalence),
        ("5 direct-link vector abacaba+b", c5_direct_link_vector),
        ("6 group extension vectors", c6_group_vectors),
        ("7 group structure (gaps, period)", c7_group_structure),
        ("8 adversarial chain steps", c8_adversarial),
        ("9 substructure differentials", c9_substructures),
        ("10 deletion round trips", c10_round_trips),
    ];
    panic::set_hook(Box::new(|_| {}));
    let results: Vec<(Outcome, f64)> = thread::scope(|sc| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                sc.spawn(move || {
                    let start = Instant::now();
                    let r = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
                        let msg = p
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_default();
                        Err(format!("panicked: {msg}"))
                    });
                    (r, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for ((name, _), (r, secs)) in criteria.iter().zip(results) {
        match r {
            Ok(detail) => println!("PASS  {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.1}s): {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
