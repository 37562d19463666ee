"""Disjoint-set (union-find) with path compression and union by size."""


class UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, element):
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while element != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, a, b):
        """Merge the sets holding a and b; returns the new root, or the
        shared root if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra
