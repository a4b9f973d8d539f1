use crate::error::Result;
use crate::graph::{Edge, Graph};

/// The (2,3) pebble game: every vertex starts with two pebbles and an edge
/// is accepted when four pebbles can be gathered on its endpoints.
#[derive(Debug, Clone)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    /// Accepted edges, oriented away from the vertex whose pebble covers them.
    out: Vec<Vec<usize>>,
    accepted: Vec<Edge>,
}

impl PebbleGame {
    pub fn new(n: usize) -> Self {
        PebbleGame { pebbles: vec![2; n], out: vec![Vec::new(); n], accepted: Vec::new() }
    }

    pub fn accepted(&self) -> &[Edge] {
        &self.accepted
    }

    pub fn rank(&self) -> usize {
        self.accepted.len()
    }

    /// Moves a pebble to `start` along a reversed path, never visiting
    /// `blocked`.
    fn fetch(&mut self, start: usize, blocked: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        parent[start] = start;
        parent[blocked] = blocked;
        let mut stack = vec![start];
        let mut found = None;
        while let Some(x) = stack.pop() {
            if x != start && self.pebbles[x] > 0 {
                found = Some(x);
                break;
            }
            for &y in &self.out[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let Some(w) = found else { return false };
        let mut y = w;
        while y != start {
            let x = parent[y];
            let pos = self.out[x].iter().position(|&z| z == y).expect("path edge exists");
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        self.pebbles[w] -= 1;
        self.pebbles[start] += 1;
        true
    }

    /// Tries to accept `uv`; returns whether it is independent of the
    /// edges accepted so far.
    pub fn try_add(&mut self, e: Edge) -> bool {
        let (u, v) = (e.0, e.1);
        while self.pebbles[u] < 2 {
            if !self.fetch(u, v) {
                return false;
            }
        }
        while self.pebbles[v] < 2 {
            if !self.fetch(v, u) {
                return false;
            }
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        self.accepted.push(e);
        true
    }
}

/// Rank of `edges` in the generic 2-dimensional rigidity matroid of `g`.
pub fn pebble_rank_23(g: &Graph, edges: &[Edge]) -> Result<usize> {
    for e in edges {
        g.check_vertex(e.0)?;
        g.check_vertex(e.1)?;
    }
    let mut game = PebbleGame::new(g.n());
    for &e in edges {
        game.try_add(e);
    }
    Ok(game.rank())
}

pub fn pebble_rank_graph(g: &Graph) -> usize {
    let mut game = PebbleGame::new(g.n());
    for e in g.edges() {
        game.try_add(e);
    }
    game.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert_eq!(pebble_rank_graph(&Graph::complete(4)), 5);
        assert_eq!(pebble_rank_graph(&Graph::complete(3)), 3);
        assert_eq!(pebble_rank_graph(&Graph::complete_bipartite(3, 3)), 9);
        assert_eq!(pebble_rank_graph(&Graph::complete_bipartite(5, 5)), 17);
        // two triangles sharing a vertex
        let bowtie = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(pebble_rank_graph(&bowtie), 6);
    }

    #[test]
    fn subset_rank() {
        let g = Graph::complete(5);
        let some: Vec<Edge> = g.edges().take(4).collect();
        assert_eq!(pebble_rank_23(&g, &some).unwrap(), 4);
        assert!(pebble_rank_23(&g, &[Edge(0, 9)]).is_err());
    }

    #[test]
    fn double_banana_is_dependent() {
        // two copies of K4 minus 01 glued along 0 and 1, plus a pendant edge
        let mut g = Graph::empty(8);
        for (a, b, c, d) in [(0, 1, 2, 3), (0, 1, 4, 5)] {
            for (x, y) in [(a, c), (a, d), (b, c), (b, d), (c, d)] {
                g.add_edge(x, y).unwrap();
            }
        }
        g.add_edge(6, 0).unwrap();
        assert_eq!(g.edge_count(), 11);
        assert_eq!(pebble_rank_graph(&g), 10);
    }
}
