//! The Star graph `S_n`: Cayley graph of `Sym_n` with generators `(1 i)`.
//!
//! The graph is never stored. The neighbours of `g` are `(1 i)∘g` for
//! `2 <= i <= n`, which swaps the values 1 and `i` in the word of `g`.

use crate::error::{Error, Result};
use crate::group::PermutationSet;
use crate::perm::{factorial, Permutation};

/// Largest degree [`StarGraph::distance`] will search.
pub const MAX_BFS_DEGREE: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StarGraph {
    n: usize,
}

impl StarGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegreeTooSmall { min: 2, got: n });
        }
        // keep vertex counts rankable
        if n > crate::perm::MAX_RANK_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: n,
                cap: crate::perm::MAX_RANK_DEGREE,
            });
        }
        Ok(Self { n })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> u64 {
        factorial(self.n)
    }

    /// Valency of every vertex.
    pub fn regularity(&self) -> usize {
        self.n - 1
    }

    fn check(&self, g: &Permutation) -> Result<()> {
        if g.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: g.degree(),
            });
        }
        Ok(())
    }

    /// `(1 i)∘g` for `i = 2..=n`, in that order.
    pub fn neighbors(&self, g: &Permutation) -> Result<Vec<Permutation>> {
        self.check(g)?;
        Ok((2..=self.n).map(|i| g.swap_values(1, i)).collect())
    }

    /// `g` together with its neighbours.
    pub fn closed_ball(&self, g: &Permutation) -> Result<PermutationSet> {
        let mut ball = self.neighbors(g)?;
        ball.push(*g);
        PermutationSet::from_perms(self.n, ball)
    }

    /// Vertices at distance exactly 2: `(1 x)∘(1 y)∘g` for distinct `x, y >= 2`.
    pub fn sphere2(&self, g: &Permutation) -> Result<PermutationSet> {
        self.check(g)?;
        if self.n < 3 {
            return Err(Error::DegreeTooSmall {
                min: 3,
                got: self.n,
            });
        }
        let perms = (2..=self.n).flat_map(|x| {
            (2..=self.n)
                .filter(move |&y| y != x)
                .map(move |y| g.swap_values(1, y).swap_values(1, x))
        });
        PermutationSet::from_perms(self.n, perms)
    }

    /// Graph distance by bidirectional breadth-first search.
    pub fn distance(&self, g: &Permutation, h: &Permutation) -> Result<usize> {
        self.check(g)?;
        self.check(h)?;
        if self.n > MAX_BFS_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: self.n,
                cap: MAX_BFS_DEGREE,
            });
        }
        if g == h {
            return Ok(0);
        }
        let size = self.vertex_count() as usize;
        let mut dist = [vec![u32::MAX; size], vec![u32::MAX; size]];
        let mut frontier = [vec![*g], vec![*h]];
        let mut depth = [0u32; 2];
        dist[0][g.rank() as usize] = 0;
        dist[1][h.rank() as usize] = 0;
        loop {
            let side = usize::from(frontier[1].len() < frontier[0].len());
            let other = 1 - side;
            let mut next = Vec::new();
            let mut best: Option<u32> = None;
            for v in &frontier[side] {
                for i in 2..=self.n {
                    let w = v.swap_values(1, i);
                    let r = w.rank() as usize;
                    if dist[side][r] != u32::MAX {
                        continue;
                    }
                    dist[side][r] = depth[side] + 1;
                    if dist[other][r] != u32::MAX {
                        let total = depth[side] + 1 + dist[other][r];
                        best = Some(best.map_or(total, |b| b.min(total)));
                    }
                    next.push(w);
                }
            }
            if let Some(d) = best {
                return Ok(d as usize);
            }
            // the graph is connected, so an empty layer cannot occur before meeting
            debug_assert!(!next.is_empty());
            depth[side] += 1;
            frontier[side] = next;
        }
    }

    /// Which block `Γ_i = {g : g(n) = i}` contains `g`.
    pub fn block_of(&self, g: &Permutation) -> Result<usize> {
        self.check(g)?;
        if self.n < 3 {
            return Err(Error::DegreeTooSmall {
                min: 3,
                got: self.n,
            });
        }
        Ok(g.apply(self.n))
    }
}

/// Closed balls of every vertex of `S_n`, indexed by rank.
///
/// `ball(v)` lists `v` first and then `(1 i)∘v` for `i = 2..=n`. Because the
/// closed-neighbourhood relation is symmetric, it also lists the centres of
/// every ball that contains `v`.
#[derive(Debug, Clone)]
pub struct BallTable {
    n: usize,
    members: Vec<u32>,
}

/// Largest degree for which [`BallTable`] is built.
pub const MAX_TABLE_DEGREE: usize = 10;

impl BallTable {
    pub fn new(n: usize) -> Result<Self> {
        StarGraph::new(n)?;
        if n > MAX_TABLE_DEGREE {
            return Err(Error::DegreeCapExceeded {
                got: n,
                cap: MAX_TABLE_DEGREE,
            });
        }
        let mut members = Vec::with_capacity(factorial(n) as usize * n);
        let mut next = Some(Permutation::identity(n)?);
        while let Some(g) = next {
            members.push(g.rank() as u32);
            for i in 2..=n {
                members.push(g.swap_values(1, i).rank() as u32);
            }
            next = g.next_lexicographic();
        }
        Ok(Self { n, members })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.members.len() / self.n
    }

    #[inline]
    pub fn ball(&self, v: usize) -> &[u32] {
        &self.members[v * self.n..(v + 1) * self.n]
    }
}

/// The automorphism `g ↦ l∘g∘r`; `l` must fix point 1.
pub fn feng_map(l: &Permutation, r: &Permutation, g: &Permutation) -> Result<Permutation> {
    if l.apply(1) != 1 {
        return Err(Error::LeftFactorMovesOne);
    }
    l.compose(g)?.compose(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn w(word: &[usize]) -> Permutation {
        Permutation::from_word(word).unwrap()
    }

    #[test]
    fn neighbor_examples() {
        let s6 = StarGraph::new(6).unwrap();
        let g = w(&[3, 5, 1, 6, 2, 4]);
        assert_eq!(s6.neighbors(&g).unwrap().len(), 5);
        let s3 = StarGraph::new(3).unwrap();
        let id = Permutation::identity(3).unwrap();
        assert_eq!(
            s3.neighbors(&id).unwrap(),
            vec![
                Permutation::transposition(3, 1, 2).unwrap(),
                Permutation::transposition(3, 1, 3).unwrap()
            ]
        );
        assert!(s3.neighbors(&g).is_err());
        assert!(StarGraph::new(1).is_err());
    }

    #[test]
    fn neighbors_are_left_multiplication() {
        let s4 = StarGraph::new(4).unwrap();
        for g in all_permutations(4).unwrap() {
            let by_compose: Vec<Permutation> = (2..=4)
                .map(|i| {
                    Permutation::transposition(4, 1, i)
                        .unwrap()
                        .compose(&g)
                        .unwrap()
                })
                .collect();
            assert_eq!(s4.neighbors(&g).unwrap(), by_compose);
        }
    }

    #[test]
    fn regular_and_symmetric() {
        for n in 2..=5 {
            let s = StarGraph::new(n).unwrap();
            for g in all_permutations(n).unwrap() {
                let nb = s.neighbors(&g).unwrap();
                let distinct = PermutationSet::from_perms(n, nb.iter().copied()).unwrap();
                assert_eq!(distinct.len(), n - 1);
                assert!(!distinct.contains(&g));
                for h in nb {
                    assert!(s.neighbors(&h).unwrap().contains(&g));
                }
            }
        }
    }

    #[test]
    fn balls_and_spheres() {
        let s4 = StarGraph::new(4).unwrap();
        let id = Permutation::identity(4).unwrap();
        let ball = s4.closed_ball(&id).unwrap();
        let expected = PermutationSet::from_perms(
            4,
            [id].into_iter()
                .chain((2..=4).map(|i| Permutation::transposition(4, 1, i).unwrap())),
        )
        .unwrap();
        assert_eq!(ball, expected);

        let s6 = StarGraph::new(6).unwrap();
        assert_eq!(
            s6.sphere2(&Permutation::identity(6).unwrap())
                .unwrap()
                .len(),
            20
        );

        let s3 = StarGraph::new(3).unwrap();
        let sph = s3.sphere2(&Permutation::identity(3).unwrap()).unwrap();
        assert_eq!(sph.elements(), &[w(&[2, 3, 1]), w(&[3, 1, 2])]);
    }

    #[test]
    fn sphere2_matches_bfs_layer() {
        let s4 = StarGraph::new(4).unwrap();
        for g in all_permutations(4).unwrap() {
            let ball = s4.closed_ball(&g).unwrap();
            let sph = s4.sphere2(&g).unwrap();
            assert_eq!(sph.len(), 6);
            assert!(ball.intersection(&sph).is_empty());
            for h in &sph {
                assert_eq!(s4.distance(&g, h).unwrap(), 2);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let s6 = StarGraph::new(6).unwrap();
        let id = Permutation::identity(6).unwrap();
        let t = |a, b| Permutation::transposition(6, a, b).unwrap();
        assert_eq!(s6.distance(&id, &id).unwrap(), 0);
        assert_eq!(s6.distance(&id, &t(1, 2)).unwrap(), 1);
        assert_eq!(s6.distance(&id, &t(2, 3)).unwrap(), 3);
        let s3 = StarGraph::new(3).unwrap();
        assert_eq!(
            s3.distance(&Permutation::identity(3).unwrap(), &w(&[2, 3, 1]))
                .unwrap(),
            2
        );
        let s10 = StarGraph::new(10).unwrap();
        let id10 = Permutation::identity(10).unwrap();
        assert!(s10.distance(&id10, &id10).is_err());
    }

    /// Plain single-source BFS, used as the oracle for the bidirectional search.
    fn bfs_layers(n: usize) -> Vec<u32> {
        let s = StarGraph::new(n).unwrap();
        let mut dist = vec![u32::MAX; s.vertex_count() as usize];
        let id = Permutation::identity(n).unwrap();
        dist[0] = 0;
        let mut queue = std::collections::VecDeque::from([id]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.rank() as usize];
            for u in s.neighbors(&v).unwrap() {
                if dist[u.rank() as usize] == u32::MAX {
                    dist[u.rank() as usize] = d + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    #[test]
    fn distance_agrees_with_bfs_and_parity() {
        let s = StarGraph::new(4).unwrap();
        let layers = bfs_layers(4);
        let id = Permutation::identity(4).unwrap();
        for g in all_permutations(4).unwrap() {
            let d = s.distance(&id, &g).unwrap();
            assert_eq!(d as u32, layers[g.rank() as usize]);
            let odd = g.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2;
            assert_eq!(d % 2, odd);
        }
        // vertex transitivity: d(g, h) = d(id, g⁻¹... ) checked on a few pairs
        for (a, b) in [(3u64, 17u64), (0, 23), (11, 12)] {
            let g = Permutation::unrank(4, a).unwrap();
            let h = Permutation::unrank(4, b).unwrap();
            let shifted = h.compose(&g.inverse()).unwrap();
            assert_eq!(
                s.distance(&g, &h).unwrap(),
                s.distance(&id, &shifted).unwrap()
            );
        }
    }

    #[test]
    fn feng_map_examples() {
        let g = w(&[4, 2, 6, 1, 3, 5]);
        let id = Permutation::identity(6).unwrap();
        assert_eq!(feng_map(&id, &id, &g).unwrap(), g);
        let moves_one = Permutation::transposition(6, 1, 2).unwrap();
        assert_eq!(
            feng_map(&moves_one, &id, &g),
            Err(Error::LeftFactorMovesOne)
        );
    }

    #[test]
    fn block_structure() {
        let s6 = StarGraph::new(6).unwrap();
        assert_eq!(s6.block_of(&Permutation::identity(6).unwrap()).unwrap(), 6);
        let sigma = w(&[2, 3, 1, 5, 4, 6]);
        let g = Permutation::transposition(6, 3, 6)
            .unwrap()
            .compose(&sigma)
            .unwrap();
        assert_eq!(s6.block_of(&g).unwrap(), 3);

        let s5 = StarGraph::new(5).unwrap();
        let mut sizes = [0usize; 6];
        for g in all_permutations(5).unwrap() {
            let i = s5.block_of(&g).unwrap();
            sizes[i] += 1;
            let outside: Vec<usize> = s5
                .neighbors(&g)
                .unwrap()
                .iter()
                .map(|h| s5.block_of(h).unwrap())
                .filter(|&j| j != i)
                .collect();
            if (2..=4).contains(&i) {
                assert_eq!(outside, vec![1]);
            }
        }
        assert_eq!(&sizes[1..], &[24; 5]);
    }

    #[test]
    fn ball_table_matches_closed_balls() {
        let s = StarGraph::new(5).unwrap();
        let table = BallTable::new(5).unwrap();
        assert_eq!(table.vertex_count(), 120);
        for g in all_permutations(5).unwrap() {
            let v = g.rank() as usize;
            assert_eq!(table.ball(v)[0] as usize, v);
            let mut got: Vec<u64> = table.ball(v).iter().map(|&r| r as u64).collect();
            got.sort_unstable();
            assert_eq!(got, s.closed_ball(&g).unwrap().ranks());
        }
    }
}
