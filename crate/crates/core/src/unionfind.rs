/// Plain union-find with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: alloc::vec::Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Dense class labels `0..k` numbered by first appearance.
    pub(crate) fn classes(&mut self) -> (alloc::vec::Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = alloc::vec![usize::MAX; n];
        let mut out = alloc::vec![0; n];
        let mut next = 0;
        for i in 0..n {
            let r = self.find(i);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[i] = label[r];
        }
        (out, next)
    }
}

/// Union-find with undo, union by size and no path compression. Each class
/// also carries a bitmask of owners (tetrahedra or cells) so that merging
/// two classes that share an owner can be refused.
#[derive(Clone, Debug)]
pub(crate) struct UndoUnionFind {
    parent: alloc::vec::Vec<u32>,
    size: alloc::vec::Vec<u32>,
    owners: alloc::vec::Vec<u64>,
    history: alloc::vec::Vec<(u32, u32, u64)>,
}

/// Outcome of a guarded union.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Merge {
    Joined,
    Already,
    Conflict,
}

impl UndoUnionFind {
    pub(crate) fn new() -> Self {
        UndoUnionFind {
            parent: alloc::vec::Vec::new(),
            size: alloc::vec::Vec::new(),
            owners: alloc::vec::Vec::new(),
            history: alloc::vec::Vec::new(),
        }
    }

    /// Adds a singleton owned by `owner` and returns its index.
    pub(crate) fn push(&mut self, owner: u32) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.size.push(1);
        self.owners.push(1u64 << owner);
        id
    }

    /// Shrinks back to `len` elements; the removed ones must be unmerged.
    pub(crate) fn truncate(&mut self, len: usize) {
        self.parent.truncate(len);
        self.size.truncate(len);
        self.owners.truncate(len);
    }

    pub(crate) fn len(&self) -> usize {
        self.parent.len()
    }

    pub(crate) fn find(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    pub(crate) fn class_size(&self, x: u32) -> u32 {
        self.size[self.find(x) as usize]
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) -> Merge {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Merge::Already;
        }
        if self.owners[ra as usize] & self.owners[rb as usize] != 0 {
            return Merge::Conflict;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.history.push((rb, ra, self.owners[ra as usize]));
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.owners[ra as usize] |= self.owners[rb as usize];
        Merge::Joined
    }

    pub(crate) fn mark(&self) -> usize {
        self.history.len()
    }

    pub(crate) fn rollback(&mut self, mark: usize) {
        while self.history.len() > mark {
            let (child, root, owners) = self.history.pop().expect("nonempty");
            self.parent[child as usize] = child;
            self.size[root as usize] -= self.size[child as usize];
            self.owners[root as usize] = owners;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undo_restores_classes() {
        let mut uf = UndoUnionFind::new();
        for owner in [0, 0, 1, 2] {
            uf.push(owner);
        }
        assert_eq!(uf.union(0, 1), Merge::Conflict);
        let m = uf.mark();
        assert_eq!(uf.union(0, 2), Merge::Joined);
        assert_eq!(uf.union(2, 3), Merge::Joined);
        assert_eq!(uf.union(0, 3), Merge::Already);
        assert_eq!(uf.union(1, 3), Merge::Conflict);
        uf.rollback(m);
        assert_ne!(uf.find(0), uf.find(2));
        assert_eq!(uf.union(1, 3), Merge::Joined);
    }

    #[test]
    fn plain_classes_are_dense() {
        let mut uf = UnionFind::new(5);
        uf.union(3, 1);
        uf.union(4, 0);
        assert_eq!(uf.classes(), (alloc::vec![0, 1, 2, 1, 0], 3));
    }
}
