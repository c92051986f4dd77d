use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Components,
    Empty,
    CompleteMultipartite,
    NoEvenCycle,
    UniquePerfectMatching,
    KPath,
    CutVertex,
    Bounds,
    Oracle,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::Components,
        Rule::Empty,
        Rule::CompleteMultipartite,
        Rule::NoEvenCycle,
        Rule::UniquePerfectMatching,
        Rule::KPath,
        Rule::CutVertex,
        Rule::Bounds,
        Rule::Oracle,
    ];

    /// Short identifier, `R0` to `R7`, or `oracle`.
    pub fn id(self) -> &'static str {
        match self {
            Rule::Components => "R0",
            Rule::Empty => "R1",
            Rule::CompleteMultipartite => "R2",
            Rule::NoEvenCycle => "R3",
            Rule::UniquePerfectMatching => "R4",
            Rule::KPath => "R5",
            Rule::CutVertex => "R6",
            Rule::Bounds => "R7",
            Rule::Oracle => "oracle",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Components => "components",
            Rule::Empty => "empty",
            Rule::CompleteMultipartite => "complete-multipartite",
            Rule::NoEvenCycle => "no-even-cycle",
            Rule::UniquePerfectMatching => "unique-perfect-matching",
            Rule::KPath => "k-path",
            Rule::CutVertex => "cut-vertex",
            Rule::Bounds => "bounds",
            Rule::Oracle => "oracle",
        }
    }

    /// Valid over every field, as opposed to infinite fields only.
    pub fn any_field(self) -> bool {
        !matches!(self, Rule::CompleteMultipartite | Rule::KPath)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Oracle => f.write_str("oracle"),
            r => write!(f, "{} {}", r.id(), r.name()),
        }
    }
}

/// One rule application. `children` hold the sub-results the rule combined:
/// one per component for `Components`, and `G_i`, `G_i - v` for each branch
/// in turn for `CutVertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub subgraph: Graph,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex: Option<usize>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<TraceStep>,
}

impl TraceStep {
    pub(crate) fn exact(rule: Rule, g: &Graph, value: usize, note: String) -> Self {
        TraceStep {
            rule,
            subgraph: g.clone(),
            value: Some(value),
            lower: value,
            upper: value,
            vertex: None,
            note,
            children: Vec::new(),
        }
    }

    /// Every rule used anywhere in this subtree.
    pub fn rules_used(&self) -> BTreeSet<Rule> {
        let mut out = BTreeSet::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut BTreeSet<Rule>) {
        out.insert(self.rule);
        for c in &self.children {
            c.collect_rules(out);
        }
    }

    fn render(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let value = match self.value {
            Some(v) => v.to_string(),
            None => format!("[{}, {}]", self.lower, self.upper),
        };
        write!(out, "{:indent$}{}: {} = {}", "", self.rule, self.subgraph, value, indent = 2 * depth).unwrap();
        if let Some(v) = self.vertex {
            write!(out, " at vertex {v}").unwrap();
        }
        if !self.note.is_empty() {
            write!(out, " ({})", self.note).unwrap();
        }
        out.push('\n');
        for c in &self.children {
            c.render(depth + 1, out);
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render(0, &mut out);
        f.write_str(out.trim_end())
    }
}
