use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INDENT: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonomyNode {
    pub label: String,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Arena-allocated labeled tree. Node 0 is the root; children keep file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaxonomyTree {
    nodes: Vec<TaxonomyNode>,
}

impl TaxonomyTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, id: usize) -> &TaxonomyNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Node ids in depth-first pre-order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    /// Leaves below (or equal to) `id`, depth-first.
    pub fn leaves_under(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if self.is_leaf(n) {
                out.push(n);
            }
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    pub fn path_to(&self, id: usize) -> RootToLeafPath {
        let mut labels = Vec::new();
        let mut cur = Some(id);
        while let Some(n) = cur {
            labels.push(self.nodes[n].label.clone());
            cur = self.nodes[n].parent;
        }
        labels.reverse();
        RootToLeafPath(labels)
    }

    /// Inverse of [`load_taxonomy`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            out.push_str(&" ".repeat(depth * INDENT));
            out.push_str(&self.nodes[id].label);
            out.push('\n');
            stack.extend(self.nodes[id].children.iter().rev().map(|&c| (c, depth + 1)));
        }
        out
    }
}

/// Labels from the root to one leaf.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootToLeafPath(pub Vec<String>);

impl RootToLeafPath {
    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn leaf(&self) -> &str {
        self.0.last().map(String::as_str).unwrap_or("")
    }

    /// Labels joined with " / "; the text that gets embedded.
    pub fn render(&self) -> String {
        self.0.join(" / ")
    }
}

impl fmt::Display for RootToLeafPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// One label per line, two spaces of indentation per level. Blank lines and
/// lines starting with `#` are ignored.
pub fn load_taxonomy(text: &str) -> Result<TaxonomyTree> {
    let mut nodes: Vec<TaxonomyNode> = Vec::new();
    // ancestors of the next line, indexed by depth
    let mut stack: Vec<usize> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let label = line.trim_start();
        let indent = &line[..line.len() - label.len()];
        if indent.contains('\t') {
            return Err(Error::parse(Some(lineno), "tabs are not allowed in indentation"));
        }
        if indent.len() % INDENT != 0 {
            return Err(Error::parse(Some(lineno), format!("indentation of {} spaces is not a multiple of {INDENT}", indent.len())));
        }
        let depth = indent.len() / INDENT;
        if nodes.is_empty() {
            if depth != 0 {
                return Err(Error::parse(Some(lineno), "first label must not be indented"));
            }
        } else if depth == 0 {
            return Err(Error::parse(Some(lineno), format!("second root `{label}`")));
        } else if depth > stack.len() {
            return Err(Error::parse(Some(lineno), format!("`{label}` is indented more than one level past its parent")));
        }
        stack.truncate(depth);
        let id = nodes.len();
        let parent = stack.last().copied();
        nodes.push(TaxonomyNode { label: label.to_string(), parent, children: Vec::new() });
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }
        stack.push(id);
    }
    if nodes.is_empty() {
        return Err(Error::parse(None, "taxonomy has no labels"));
    }
    Ok(TaxonomyTree { nodes })
}

/// One path per leaf, depth-first.
pub fn enumerate_paths(tree: &TaxonomyTree) -> Vec<RootToLeafPath> {
    tree.leaves_under(tree.root()).into_iter().map(|l| tree.path_to(l)).collect()
}

#[cfg(test)]
pub(crate) const SAMPLE: &str = "\
Aircraft Events
  Operation of the aircraft related event
    Aircraft handling related event
      Dragged wing/rotor/pod/float
";
