use crate::game::ParityGame;
use crate::index::{Player, Priority};

/// Vertex-labelled view of an edge-labelled game.
///
/// Vertices `0..n` are the game's vertices with priority 0; vertex `n + e`
/// stands for edge `e`, carries its priority and has the edge's target as
/// its only successor. The maximum priority on any cycle is unchanged.
pub(crate) struct Arena {
    pub original: usize,
    pub owner: Vec<Player>,
    pub priority: Vec<Priority>,
    pub succ: Vec<Vec<usize>>,
    pub pred: Vec<Vec<usize>>,
}

impl Arena {
    pub fn new(game: &ParityGame) -> Self {
        Self::build(game, false)
    }

    /// Same arena with owners swapped and edge priorities shifted by one, so
    /// that Eve's winning region here is Adam's in the original.
    pub fn dual(game: &ParityGame) -> Self {
        Self::build(game, true)
    }

    fn build(game: &ParityGame, dual: bool) -> Self {
        let n = game.vertex_count();
        let m = game.edge_count();
        let total = n + m;
        let mut owner = Vec::with_capacity(total);
        let mut priority = Vec::with_capacity(total);
        let mut succ = Vec::with_capacity(total);
        let mut pred = vec![Vec::new(); total];

        for v in 0..n {
            let o = game.owner(v);
            owner.push(if dual { o.opponent() } else { o });
            priority.push(0);
            let s: Vec<usize> = game.out(v).iter().map(|&e| n + e).collect();
            for &x in &s {
                pred[x].push(v);
            }
            succ.push(s);
        }
        for (e, edge) in game.edges().iter().enumerate() {
            owner.push(Player::Adam);
            priority.push(if dual { edge.priority + 1 } else { edge.priority });
            succ.push(vec![edge.dst]);
            pred[edge.dst].push(n + e);
        }
        for p in &mut pred {
            p.sort_unstable();
        }
        Arena {
            original: n,
            owner,
            priority,
            succ,
            pred,
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    /// Edge id represented by an edge vertex.
    pub fn edge_of(&self, x: usize) -> usize {
        debug_assert!(x >= self.original);
        x - self.original
    }
}
