//! Differential checking: replay scripts on several engines and compare
//! their event streams with the brute-force oracle engine.

use std::collections::HashMap;
use std::thread;

use crate::engine::{EngineKind, Event, Session};
use crate::script::{self, Op};
use crate::trie::NodeId;

/// Result of one operation: the event, or the error message.
pub type Outcome = std::result::Result<Event, String>;

/// Replays `ops` on a fresh session. Stops at the first error.
pub fn replay(kind: EngineKind, ops: &[Op], fault: bool) -> Vec<Outcome> {
    let mut s = Session::open(kind);
    if fault {
        s.inject_fault();
    }
    let mut out = Vec::with_capacity(ops.len());
    for op in ops {
        let r = match *op {
            Op::Insert { parent, label } => s.insert(parent, label),
            Op::Delete { id } => s.delete(id),
        };
        let failed = r.is_err();
        out.push(r.map_err(|e| e.to_string()));
        if failed {
            break;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub engine: EngineKind,
    /// 0-based index of the first differing operation in `script`
    pub op_index: usize,
    pub expected: Option<Outcome>,
    pub got: Option<Outcome>,
    /// minimized script reproducing the divergence
    pub script: Vec<Op>,
}

impl Divergence {
    pub fn report(&self) -> String {
        let show = |o: &Option<Outcome>| match o {
            None => "<nothing>".to_string(),
            Some(Ok(ev)) => serde_json::to_string(ev).unwrap_or_else(|e| e.to_string()),
            Some(Err(e)) => format!("error: {e}"),
        };
        format!(
            "engine {} diverges at operation {} ({})\n  oracle: {}\n  engine: {}\nminimized script ({} ops):\n{}",
            self.engine,
            self.op_index + 1,
            self.script.get(self.op_index).map(|o| o.to_string()).unwrap_or_default(),
            show(&self.expected),
            show(&self.got),
            self.script.len(),
            script::format(&self.script)
        )
    }
}

fn first_difference(
    kind: EngineKind,
    ops: &[Op],
    fault: bool,
) -> Option<(usize, Option<Outcome>, Option<Outcome>)> {
    let want = replay(EngineKind::Oracle, ops, false);
    let got = replay(kind, ops, fault);
    (0..want.len().max(got.len()))
        .find(|&i| want.get(i) != got.get(i))
        .map(|i| (i, want.get(i).cloned(), got.get(i).cloned()))
}

/// Removes the ops at `skip` and renumbers the remaining node ids. `None`
/// if some remaining op refers to a removed node or the result is not a
/// valid script.
pub fn remove_ops(ops: &[Op], skip: std::ops::Range<usize>) -> Option<Vec<Op>> {
    let mut ids = HashMap::from([(NodeId::ROOT, NodeId::ROOT)]);
    let mut old_next = 1u32;
    let mut new_next = 1u32;
    let mut out = Vec::with_capacity(ops.len());
    for (i, op) in ops.iter().enumerate() {
        let keep = !skip.contains(&i);
        match *op {
            Op::Insert { parent, label } => {
                let old = NodeId(old_next);
                old_next += 1;
                if keep {
                    let parent = *ids.get(&parent)?;
                    ids.insert(old, NodeId(new_next));
                    new_next += 1;
                    out.push(Op::Insert { parent, label });
                }
            }
            Op::Delete { id } => {
                if keep {
                    out.push(Op::Delete { id: *ids.get(&id)? });
                }
            }
        }
    }
    script::validate(&out).ok()?;
    Some(out)
}

/// Greedy chunk-removal minimization: keeps any smaller valid script for
/// which `fails` still holds.
pub fn minimize(ops: &[Op], mut fails: impl FnMut(&[Op]) -> bool) -> Vec<Op> {
    let mut cur = ops.to_vec();
    let mut chunk = cur.len().div_ceil(2).max(1);
    loop {
        let mut progress = false;
        let mut start = 0;
        while start < cur.len() {
            let end = (start + chunk).min(cur.len());
            match remove_ops(&cur, start..end) {
                Some(cand) if fails(&cand) => {
                    cur = cand;
                    progress = true;
                }
                _ => start += chunk,
            }
        }
        if chunk == 1 && !progress {
            return cur;
        }
        if !progress {
            chunk = chunk.div_ceil(2);
        }
    }
}

/// Compares one engine with the oracle; on mismatch, returns a minimized
/// reproduction.
pub fn check_engine(kind: EngineKind, ops: &[Op], fault: bool) -> Option<Divergence> {
    first_difference(kind, ops, fault)?;
    let small = minimize(ops, |cand| first_difference(kind, cand, fault).is_some());
    let (op_index, expected, got) =
        first_difference(kind, &small, fault).expect("minimized script still fails");
    Some(Divergence {
        engine: kind,
        op_index,
        expected,
        got,
        script: small,
    })
}

/// Checks every engine on every script, one thread per engine. Returns the
/// first divergence found per engine.
pub fn check_all(kinds: &[EngineKind], scripts: &[Vec<Op>], fault: bool) -> Vec<Divergence> {
    thread::scope(|sc| {
        let handles: Vec<_> = kinds
            .iter()
            .map(|&kind| {
                sc.spawn(move || {
                    scripts
                        .iter()
                        .find_map(|ops| check_engine(kind, ops, fault))
                })
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("checker thread panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::script::{generate, GenConfig, Shape};
    use crate::Label;

    #[test]
    fn engines_agree_on_small_scripts() {
        let scripts: Vec<_> = (0..20)
            .map(|s| generate(&GenConfig::new(s, 60, 2, Shape::Uniform).with_deletes(0.25)))
            .collect();
        let bad = check_all(&EngineKind::ALL, &scripts, false);
        assert!(bad.is_empty(), "{}", bad[0].report());
    }

    #[test]
    fn injected_fault_is_found_and_minimized() {
        let ops = generate(&GenConfig::new(1, 80, 2, Shape::Uniform));
        let d = check_engine(EngineKind::EertreeQuick, &ops, true).expect("fault must be caught");
        assert!(d.script.len() <= 6, "{}", d.report());
        assert_eq!(d.op_index + 1, d.script.len());
        // 1-minimal: dropping any single operation loses the failure
        for i in 0..d.script.len() {
            if let Some(c) = remove_ops(&d.script, i..i + 1) {
                assert!(first_difference(EngineKind::EertreeQuick, &c, true).is_none());
            }
        }
    }

    #[test]
    fn removal_renumbers() {
        let a = Label::new('a');
        let ops = vec![
            Op::Insert {
                parent: NodeId(0),
                label: a,
            },
            Op::Insert {
                parent: NodeId(0),
                label: Label::new('b'),
            },
            Op::Insert {
                parent: NodeId(2),
                label: a,
            },
            Op::Delete { id: NodeId(3) },
        ];
        let r = remove_ops(&ops, 0..1).unwrap();
        assert_eq!(
            r[1],
            Op::Insert {
                parent: NodeId(1),
                label: a
            }
        );
        assert_eq!(r[2], Op::Delete { id: NodeId(2) });
        assert!(remove_ops(&ops, 1..2).is_none());
    }
}
