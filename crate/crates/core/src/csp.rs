//! Locational constraints as a binary CSP over robot-valued variables.
//!
//! Each capability kind named by a locational constraint becomes one
//! variable; its domain is the coalition members owning at least one unit of
//! that kind. Constraints are `x = y` (same robot) or `x != y` (different
//! robots). A robot may serve several variables unless a `!=` forbids it.
//!
//! Both solvers first collapse interchangeable robots: two robots that appear
//! in exactly the same set of domains are indistinguishable to every
//! constraint, so at most `|set|` of them can ever be used at once. Keeping
//! that many representatives per class preserves every answer while bounding
//! the branching factor independently of coalition size.

use std::collections::BTreeMap;

pub use crate::model::Relation;
use crate::error::{Error, Result};
use crate::model::{CapabilityKind, Coalition, Scenario, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CspVariable {
    pub id: usize,
    pub capability: CapabilityKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub relation: Relation,
    pub left: usize,
    pub right: usize,
}

impl Constraint {
    pub fn holds(&self, assignment: &[usize]) -> bool {
        self.relation.holds(assignment[self.left], assignment[self.right])
    }
}

/// Robot id chosen for each variable, indexed by variable id.
pub type Assignment = Vec<usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct CspInstance {
    variables: Vec<CspVariable>,
    domains: Vec<Vec<usize>>,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    /// Domains are sorted and deduplicated. Every variable must be named by
    /// some constraint, and no constraint may relate a variable to itself.
    pub fn new(
        variables: Vec<CspVariable>,
        mut domains: Vec<Vec<usize>>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        if domains.len() != variables.len() {
            return Err(Error::invalid("one domain per variable is required"));
        }
        if variables.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(Error::invalid("variable ids must be dense 0..k in order"));
        }
        let mut referenced = vec![false; variables.len()];
        for c in &constraints {
            if c.left >= variables.len() || c.right >= variables.len() {
                return Err(Error::invalid("constraint references an undeclared variable"));
            }
            if c.left == c.right {
                return Err(Error::invalid("constraint relates a variable to itself"));
            }
            referenced[c.left] = true;
            referenced[c.right] = true;
        }
        if referenced.iter().any(|r| !r) {
            return Err(Error::invalid("every variable must appear in a constraint"));
        }
        for d in &mut domains {
            d.sort_unstable();
            d.dedup();
        }
        Ok(Self {
            variables,
            domains,
            constraints,
        })
    }

    pub fn variables(&self) -> &[CspVariable] {
        &self.variables
    }

    pub fn domains(&self) -> &[Vec<usize>] {
        &self.domains
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn satisfied_count(&self, assignment: &[usize]) -> usize {
        self.constraints.iter().filter(|c| c.holds(assignment)).count()
    }

    /// Every value lies in its domain and every constraint holds.
    pub fn is_solution(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.variables.len()
            && assignment
                .iter()
                .zip(&self.domains)
                .all(|(v, d)| d.binary_search(v).is_ok())
            && self.satisfied_count(assignment) == self.constraints.len()
    }

    /// Domains with interchangeable robots collapsed to the representatives
    /// that could possibly be used together.
    fn compressed_domains(&self) -> Vec<Vec<usize>> {
        let mut signature: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (var, domain) in self.domains.iter().enumerate() {
            for &robot in domain {
                signature.entry(robot).or_default().push(var);
            }
        }
        let mut taken: BTreeMap<&[usize], usize> = BTreeMap::new();
        let mut keep = Vec::new();
        for (&robot, sig) in &signature {
            let used = taken.entry(sig.as_slice()).or_insert(0);
            if *used < sig.len() {
                *used += 1;
                keep.push(robot);
            }
        }
        self.domains
            .iter()
            .map(|d| d.iter().copied().filter(|r| keep.binary_search(r).is_ok()).collect())
            .collect()
    }
}

/// One variable per distinct capability kind named in the task's locational
/// constraints, ordered by kind; domains are the coalition members owning at
/// least one unit of the kind.
pub fn build_csp(task: &Task, coalition: &Coalition, scenario: &Scenario) -> Result<CspInstance> {
    coalition.check_len(scenario)?;
    let r = scenario.sensing_width();
    let mut kinds: Vec<CapabilityKind> = task.constraints().flat_map(|c| [c.left, c.right]).collect();
    kinds.sort_by_key(|k| k.flat_index(r));
    kinds.dedup();
    let index_of = |k: CapabilityKind| kinds.iter().position(|x| *x == k).expect("collected above");

    let variables = kinds
        .iter()
        .enumerate()
        .map(|(id, &capability)| CspVariable { id, capability })
        .collect();
    let domains = kinds
        .iter()
        .map(|&kind| {
            coalition
                .members()
                .filter(|&i| kind.quantity(&scenario.robots[i]) >= 1.0)
                .collect()
        })
        .collect();
    let constraints = task
        .constraints()
        .map(|c| Constraint {
            relation: c.relation,
            left: index_of(c.left),
            right: index_of(c.right),
        })
        .collect();
    CspInstance::new(variables, domains, constraints)
}

/// Chronological backtracking; variables in id order, values by robot id.
pub fn solve_csp(instance: &CspInstance) -> Option<Assignment> {
    let domains = instance.compressed_domains();
    if domains.iter().any(Vec::is_empty) {
        return None;
    }
    // Constraints checked when `var` is assigned: those whose other end has a lower id.
    let mut backward: Vec<Vec<(usize, Relation)>> = vec![Vec::new(); domains.len()];
    for c in instance.constraints() {
        let (early, late) = (c.left.min(c.right), c.left.max(c.right));
        backward[late].push((early, c.relation));
    }
    let mut assignment = vec![usize::MAX; domains.len()];
    fn extend(
        var: usize,
        domains: &[Vec<usize>],
        backward: &[Vec<(usize, Relation)>],
        assignment: &mut Vec<usize>,
    ) -> bool {
        if var == domains.len() {
            return true;
        }
        for &value in &domains[var] {
            if backward[var].iter().all(|&(other, rel)| rel.holds(value, assignment[other])) {
                assignment[var] = value;
                if extend(var + 1, domains, backward, assignment) {
                    return true;
                }
            }
        }
        false
    }
    extend(0, &domains, &backward, &mut assignment).then_some(assignment)
}

/// `satisfied` is the most constraints any single assignment satisfies;
/// `total` is the constraint count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxSatisfied {
    pub satisfied: usize,
    pub total: usize,
}

impl MaxSatisfied {
    pub fn all(&self) -> bool {
        self.satisfied == self.total
    }
}

/// Exact max-CSP by branch-and-bound, solved independently per connected
/// component of the constraint graph. Constraints on a variable with an empty
/// domain can never hold.
pub fn max_satisfied_constraints(instance: &CspInstance) -> MaxSatisfied {
    let total = instance.constraints().len();
    let domains = instance.compressed_domains();
    let components = components(domains.len(), instance.constraints());
    let mut violated = 0;
    for vars in components {
        let mut local = Vec::new();
        for c in instance.constraints() {
            if !vars.contains(&c.left) {
                continue;
            }
            if domains[c.left].is_empty() || domains[c.right].is_empty() {
                violated += 1;
            } else {
                local.push(*c);
            }
        }
        if !local.is_empty() {
            violated += ComponentSearch::new(&domains, &local).min_violations();
        }
    }
    MaxSatisfied {
        satisfied: total - violated,
        total,
    }
}

fn components(vars: usize, constraints: &[Constraint]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..vars).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for c in constraints {
        let (a, b) = (root(&mut parent, c.left), root(&mut parent, c.right));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..vars {
        let r = root(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

struct ComponentSearch<'a> {
    domains: &'a [Vec<usize>],
    order: Vec<usize>,
    /// For each variable: (neighbour, relation, constraint index).
    adjacency: Vec<Vec<(usize, Relation, usize)>>,
    constraints: &'a [Constraint],
    /// Constraints no pair of domain values can satisfy.
    hopeless: Vec<bool>,
    assignment: Vec<Option<usize>>,
    best: usize,
    floor: usize,
}

impl<'a> ComponentSearch<'a> {
    fn new(domains: &'a [Vec<usize>], constraints: &'a [Constraint]) -> Self {
        let mut adjacency = vec![Vec::new(); domains.len()];
        let mut order = Vec::new();
        for (k, c) in constraints.iter().enumerate() {
            adjacency[c.left].push((c.right, c.relation, k));
            adjacency[c.right].push((c.left, c.relation, k));
            order.extend([c.left, c.right]);
        }
        order.sort_unstable();
        order.dedup();
        let hopeless = constraints
            .iter()
            .map(|c| {
                let (dl, dr) = (&domains[c.left], &domains[c.right]);
                match c.relation {
                    Relation::SameRobot => !dl.iter().any(|v| dr.binary_search(v).is_ok()),
                    Relation::DifferentRobot => dl.len() == 1 && dr.len() == 1 && dl[0] == dr[0],
                }
            })
            .collect();
        Self {
            domains,
            order,
            adjacency,
            constraints,
            hopeless,
            assignment: vec![None; domains.len()],
            best: constraints.len() + 1,
            floor: 0,
        }
    }

    fn min_violations(mut self) -> usize {
        self.floor = self.lower_bound(0);
        self.search(0, 0);
        self.best
    }

    fn conflicts(&self, var: usize, value: usize) -> usize {
        self.adjacency[var]
            .iter()
            .filter(|&&(other, rel, _)| {
                self.assignment[other].is_some_and(|assigned| !rel.holds(value, assigned))
            })
            .count()
    }

    /// Violations any completion of the current partial assignment must add.
    fn lower_bound(&self, depth: usize) -> usize {
        let mut bound = 0;
        for &var in &self.order[depth..] {
            bound += self.domains[var]
                .iter()
                .map(|&value| self.conflicts(var, value))
                .min()
                .unwrap_or(0);
        }
        let unassigned = |v: usize| self.assignment[v].is_none();
        bound
            + self
                .constraints
                .iter()
                .zip(&self.hopeless)
                .filter(|(c, h)| **h && unassigned(c.left) && unassigned(c.right))
                .count()
    }

    fn search(&mut self, depth: usize, violated: usize) {
        if self.best == self.floor || violated + self.lower_bound(depth) >= self.best {
            return;
        }
        if depth == self.order.len() {
            self.best = violated;
            return;
        }
        let var = self.order[depth];
        for i in 0..self.domains[var].len() {
            let value = self.domains[var][i];
            let cost = self.conflicts(var, value);
            self.assignment[var] = Some(value);
            self.search(depth + 1, violated + cost);
            self.assignment[var] = None;
            if self.best == self.floor {
                return;
            }
        }
    }
}
