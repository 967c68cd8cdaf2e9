//! Simple bipartite graphs `G(X, Y)` and their girth.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::text::{content_lines, header, parse_numbers, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({x}, {y}) out of range for G({x_size}, {y_size})")]
    EdgeOutOfRange {
        x: usize,
        y: usize,
        x_size: usize,
        y_size: usize,
    },
    #[error("repeated edge ({0}, {1})")]
    RepeatedEdge(usize, usize),
}

/// A vertex of a bipartite graph, tagged with its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    X(usize),
    Y(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::X(i) => write!(f, "x{i}"),
            Vertex::Y(i) => write!(f, "y{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    x_size: usize,
    y_size: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn new(
        x_size: usize,
        y_size: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if let Some(&(x, y)) = edges.iter().find(|&&(x, y)| x >= x_size || y >= y_size) {
            return Err(GraphError::EdgeOutOfRange {
                x,
                y,
                x_size,
                y_size,
            });
        }
        let mut edges = edges;
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::RepeatedEdge(w[0].0, w[0].1));
        }
        Ok(BipartiteGraph {
            x_size,
            y_size,
            edges,
        })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn vertex(&self, id: usize) -> Vertex {
        if id < self.x_size {
            Vertex::X(id)
        } else {
            Vertex::Y(id - self.x_size)
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.x_size + self.y_size];
        for &(x, y) in &self.edges {
            adj[x].push(self.x_size + y);
            adj[self.x_size + y].push(x);
        }
        adj
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        self.shortest_cycle().map(|c| c.len())
    }

    /// A shortest cycle as its vertex sequence. Breadth-first search from
    /// every vertex of degree at least 2; ties go to the smallest root so
    /// the witness does not depend on scheduling.
    pub fn shortest_cycle(&self) -> Option<Vec<Vertex>> {
        let adj = self.adjacency();
        let roots: Vec<usize> = (0..adj.len()).filter(|&v| adj[v].len() >= 2).collect();
        let best = roots
            .par_iter()
            .filter_map(|&root| shortest_cycle_through(&adj, root).map(|c| (c.len(), root, c)))
            .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))?;
        Some(best.2.into_iter().map(|id| self.vertex(id)).collect())
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = content_lines(text, false);
        let [u, v, e] = header::<3>(&lines, "graph")?;
        let body = &lines[1..];
        if body.len() != e {
            return Err(ParseError::new(
                lines[0].0,
                format!("header declares {e} edges, found {}", body.len()),
            ));
        }
        let mut edges = Vec::with_capacity(e);
        for &(line, text) in body {
            let nums: Vec<usize> = parse_numbers(line, text)?;
            match nums[..] {
                [x, y] => edges.push((x, y)),
                _ => {
                    return Err(ParseError::new(
                        line,
                        "an edge line needs exactly two indices",
                    ))
                }
            }
        }
        BipartiteGraph::new(u, v, edges).map_err(|err| ParseError::new(lines[0].0, err.to_string()))
    }
}

/// The shortest cycle found by one BFS from `root`: a non-tree edge `(u, w)`
/// closes the walk `root .. u w .. root`. Over all roots the minimum is the
/// girth, and a minimal walk is a simple cycle.
fn shortest_cycle_through(adj: &[Vec<usize>], root: usize) -> Option<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut dist = vec![UNSEEN; adj.len()];
    let mut parent = vec![UNSEEN; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    let mut best: Option<(usize, usize, usize)> = None;
    while let Some(u) = queue.pop_front() {
        if let Some((len, _, _)) = best {
            if 2 * dist[u] + 1 >= len {
                break;
            }
        }
        for &w in &adj[u] {
            if dist[w] == UNSEEN {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            } else if w != parent[u] && parent[w] != u {
                let len = dist[u] + dist[w] + 1;
                if best.is_none_or(|(b, _, _)| len < b) {
                    best = Some((len, u, w));
                }
            }
        }
    }
    let (_, u, w) = best?;
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while v != root {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let mut cycle = path_to_root(u);
    cycle.reverse();
    let back = path_to_root(w);
    cycle.extend_from_slice(&back[..back.len() - 1]);
    let distinct: BTreeSet<_> = cycle.iter().collect();
    // Walks whose two branches meet below the root are not simple; a shorter
    // cycle exists and is found from another root.
    (distinct.len() == cycle.len()).then_some(cycle)
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.x_size, self.y_size, self.edges.len())?;
        for (x, y) in &self.edges {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}
