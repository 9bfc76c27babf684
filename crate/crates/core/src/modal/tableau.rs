//! Labelled tableau for K, K4 and GL.
//!
//! A node is a set of formulas closed under the propositional rules; each
//! `¬□A` in it gets a successor:
//!
//! | logic | successor of `¬□A` |
//! |-------|--------------------|
//! | K     | `{¬A} ∪ {B : □B}` |
//! | K4    | `{¬A} ∪ {B, □B : □B}` |
//! | GL    | `{¬A, □A} ∪ {B, □B : □B}` |
//!
//! In K and K4 an existing node whose formulas include the required set is
//! reused instead of expanding a new one (this is what terminates K4). GL
//! needs no reuse: the boxed formulas grow strictly along every path.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{KripkeModel, Logic, ModalError, ModalFormula as F};

/// Node expansions allowed per decision.
pub const TABLEAU_NODE_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Validity {
    Valid,
    /// World 0 falsifies the formula.
    Countermodel {
        model: KripkeModel,
    },
}

type Label = BTreeSet<F>;

struct Node {
    label: Label,
    edges: Vec<usize>,
}

struct Tableau {
    logic: Logic,
    nodes: Vec<Node>,
    failed: HashSet<Label>,
    expansions: usize,
}

impl Tableau {
    /// Index of a node satisfying `initial`, or `None` when it is
    /// unsatisfiable in the logic.
    fn satisfy(&mut self, initial: Label) -> Result<Option<usize>, ModalError> {
        self.expansions += 1;
        if self.expansions > TABLEAU_NODE_LIMIT {
            return Err(ModalError::ResourceBound(format!(
                "tableau exceeded {TABLEAU_NODE_LIMIT} node expansions"
            )));
        }
        if self.failed.contains(&initial) {
            return Ok(None);
        }
        let mark = self.nodes.len();
        let todo: Vec<F> = initial.iter().cloned().collect();
        let found = self.branch(Label::new(), todo)?;
        if found.is_none() {
            self.nodes.truncate(mark);
            self.failed.insert(initial);
        }
        Ok(found)
    }

    fn branch(&mut self, mut done: Label, mut todo: Vec<F>) -> Result<Option<usize>, ModalError> {
        while let Some(f) = todo.pop() {
            if done.contains(&f) {
                continue;
            }
            match &f {
                F::Const(false) => return Ok(None),
                F::Atom(_) | F::Box(_) => {
                    if done.contains(&F::not(f.clone())) {
                        return Ok(None);
                    }
                }
                F::Not(g) => match g.as_ref() {
                    F::Const(false) => {}
                    F::Atom(_) | F::Box(_) => {
                        if done.contains(g.as_ref()) {
                            return Ok(None);
                        }
                    }
                    F::Not(a) => todo.push((**a).clone()),
                    F::Implies(a, b) => {
                        todo.push((**a).clone());
                        todo.push(F::not((**b).clone()));
                    }
                    _ => unreachable!("tableau works on normalized formulas"),
                },
                F::Implies(a, b) => {
                    done.insert(f.clone());
                    let mut left = todo.clone();
                    left.push(F::not((**a).clone()));
                    if let Some(i) = self.branch(done.clone(), left)? {
                        return Ok(Some(i));
                    }
                    todo.push((**b).clone());
                    return self.branch(done, todo);
                }
                _ => unreachable!("tableau works on normalized formulas"),
            }
            done.insert(f);
        }
        self.open_node(done)
    }

    fn successor(&self, label: &Label, a: &F) -> Label {
        let mut out = Label::new();
        out.insert(F::not(a.clone()));
        if self.logic == Logic::GL {
            out.insert(F::boxed(a.clone()));
        }
        for f in label {
            if let F::Box(b) = f {
                out.insert((**b).clone());
                if self.logic.transitive() {
                    out.insert(f.clone());
                }
            }
        }
        out
    }

    fn open_node(&mut self, label: Label) -> Result<Option<usize>, ModalError> {
        let index = self.nodes.len();
        let diamonds: Vec<F> = label
            .iter()
            .filter_map(|f| match f {
                F::Not(g) => match g.as_ref() {
                    F::Box(a) => Some((**a).clone()),
                    _ => None,
                },
                _ => None,
            })
            .collect();
        self.nodes.push(Node {
            label,
            edges: Vec::new(),
        });
        for a in diamonds {
            let required = self.successor(&self.nodes[index].label, &a);
            let reuse = if self.logic == Logic::GL {
                None
            } else {
                self.nodes.iter().position(|n| n.label.is_superset(&required))
            };
            let target = match reuse {
                Some(j) => j,
                None => match self.satisfy(required)? {
                    Some(j) => j,
                    None => {
                        self.nodes.truncate(index);
                        return Ok(None);
                    }
                },
            };
            self.nodes[index].edges.push(target);
        }
        Ok(Some(index))
    }

    fn model(&self, atoms: usize) -> KripkeModel {
        let mut relation: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.edges.iter().map(move |&j| (i, j)))
            .collect();
        relation.sort_unstable();
        relation.dedup();
        let valuation = self
            .nodes
            .iter()
            .map(|n| (0..atoms as u32).filter(|p| n.label.contains(&F::Atom(*p))).collect())
            .collect();
        let mut model = KripkeModel {
            logic: self.logic,
            worlds: self.nodes.len(),
            relation,
            valuation,
        };
        if self.logic.transitive() {
            model.transitive_closure();
        }
        model
    }
}

/// Decides validity; a countermodel is checked against the direct
/// evaluator and the frame conditions before it is returned.
pub fn is_valid(f: &F, logic: Logic) -> Result<Validity, ModalError> {
    f.check_atoms()?;
    let negation = F::not(f.clone()).normalize();
    let mut t = Tableau {
        logic,
        nodes: Vec::new(),
        failed: HashSet::new(),
        expansions: 0,
    };
    match t.satisfy(Label::from([negation]))? {
        None => Ok(Validity::Valid),
        Some(root) => {
            debug_assert_eq!(root, 0);
            let model = t.model(f.atom_bound());
            if !model.frame_ok() || model.eval(0, f) {
                return Err(ModalError::Unsound(format!(
                    "tableau countermodel for {f} in {logic} does not falsify it"
                )));
            }
            Ok(Validity::Countermodel { model })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::parse_modal;

    fn valid(s: &str, logic: Logic) -> bool {
        matches!(is_valid(&parse_modal(s).unwrap(), logic).unwrap(), Validity::Valid)
    }

    #[test]
    fn liar_negation_is_valid() {
        for logic in Logic::ALL {
            assert!(valid("~([]p0 <-> ~[]p0)", logic));
        }
    }

    #[test]
    fn loeb() {
        let loeb = "[]([]p0 -> p0) -> []p0";
        assert!(valid(loeb, Logic::GL));
        assert!(!valid(loeb, Logic::K4));
        let Validity::Countermodel { model } = is_valid(&parse_modal(loeb).unwrap(), Logic::K).unwrap() else {
            panic!("Loeb is not valid in K");
        };
        assert_eq!(model.worlds, 2);
        assert_eq!(model.relation, vec![(0, 1), (1, 1)]);
        assert!(!model.valuation[1].contains(&0));
    }

    #[test]
    fn four_axiom() {
        assert!(!valid("[]p0 -> [][]p0", Logic::K));
        assert!(valid("[]p0 -> [][]p0", Logic::K4));
        assert!(valid("[]p0 -> [][]p0", Logic::GL));
    }

    #[test]
    fn reflection_fails_everywhere() {
        for logic in Logic::ALL {
            assert!(!valid("[]p0 -> p0", logic));
        }
    }
}
