"""
Finite groups given by multiplication tables.

Elements are the integers 0..n-1; table[a, b] is the index of a*b.
Used to build function algebras, group algebras and crossed-product actions,
and to enumerate subgroup lattices for the idempotent-state search.
"""

import itertools
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, List, Optional, Sequence

import numpy as np

from src.utils.errors import NotAGroupError


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group multiplication table."""

    table: np.ndarray
    labels: Optional[List[str]] = None
    name: str = "G"
    identity: int = field(init=False)
    inverses: np.ndarray = field(init=False)

    def __post_init__(self):
        table = np.asarray(self.table)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise NotAGroupError(f"multiplication table must be a non-empty square, got shape {table.shape}")
        if not np.issubdtype(table.dtype, np.integer):
            if not np.all(table == np.round(table)):
                raise NotAGroupError("multiplication table entries must be integers")
            table = table.astype(int)
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise NotAGroupError(f"multiplication table entries must lie in 0..{n - 1}")
        object.__setattr__(self, "table", table)
        if self.labels is None:
            object.__setattr__(self, "labels", [str(i) for i in range(n)])
        elif len(self.labels) != n:
            raise NotAGroupError(f"{len(self.labels)} labels for a group of order {n}")

        # associativity: (ab)c == a(bc)
        left = table[table, :]                      # left[a, b, c] = (ab)c
        right = table[:, table]                     # right[a, b, c] = a(bc)
        bad = np.argwhere(left != right)
        if bad.size:
            a, b, c = (int(v) for v in bad[0])
            raise NotAGroupError(f"associativity fails at ({a}, {b}, {c})", triple=(a, b, c))

        identity = None
        for e in range(n):
            if np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n)):
                identity = e
                break
        if identity is None:
            raise NotAGroupError("table has no two-sided identity")
        object.__setattr__(self, "identity", identity)

        inverses = np.full(n, -1)
        for a in range(n):
            hits = np.where(table[a] == identity)[0]
            if hits.size != 1 or table[hits[0], a] != identity:
                raise NotAGroupError(f"element {a} has no two-sided inverse", triple=(a, -1, identity))
            inverses[a] = hits[0]
        object.__setattr__(self, "inverses", inverses)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def order_sequence(self) -> List[int]:
        """Sorted element orders, a cheap isomorphism-class fingerprint."""
        return sorted(self.element_order(a) for a in range(self.order))

    def closure(self, generators: Sequence[int]) -> FrozenSet[int]:
        """Subgroup generated by the given elements."""
        members = {self.identity}
        frontier = set(generators)
        while frontier:
            members |= frontier
            frontier = {self.mul(a, b) for a in members for b in members} - members
        return frozenset(members)

    def subgroups(self) -> List[FrozenSet[int]]:
        """
        All subgroups, by iterated joins starting from the cyclic ones.

        Returns:
            List of subgroups ordered by (size, sorted elements).
        """
        found = {self.closure([a]) for a in range(self.order)}
        frontier = set(found)
        while frontier:
            new = set()
            for h in frontier:
                for k in found:
                    joined = self.closure(sorted(h | k))
                    if joined not in found:
                        new.add(joined)
            found |= new
            frontier = new
        return sorted(found, key=lambda h: (len(h), sorted(h)))

    def is_normal(self, subgroup: FrozenSet[int]) -> bool:
        for g in range(self.order):
            for h in subgroup:
                if self.mul(self.mul(g, h), self.inv(g)) not in subgroup:
                    return False
        return True

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        perm = np.asarray(perm)
        if sorted(perm.tolist()) != list(range(self.order)):
            return False
        return bool(np.array_equal(perm[self.table], self.table[perm][:, perm]))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=int), labels=["e"], name="Z1")


def cyclic_group(n: int) -> FiniteGroup:
    table = np.add.outer(np.arange(n), np.arange(n)) % n
    return FiniteGroup(table, labels=[f"g{k}" for k in range(n)], name=f"Z{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """
    S_n on the permutations of range(n) in itertools order.

    The product p*q is the composition p after q: (p*q)(i) = p[q[i]].
    """
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    table = np.array([[index[tuple(p[i] for i in q)] for q in perms] for p in perms])
    labels = ["".join(str(i) for i in p) for p in perms]
    return FiniteGroup(table, labels=labels, name=f"S{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G x H with element (a, b) stored at index a * |H| + b."""
    m = h.order
    table = np.empty((g.order * m, g.order * m), dtype=int)
    for a1, b1, a2, b2 in itertools.product(range(g.order), range(m), range(g.order), range(m)):
        table[a1 * m + b1, a2 * m + b2] = g.mul(a1, a2) * m + h.mul(b1, b2)
    labels = [f"({x},{y})" for x in g.labels for y in h.labels]
    return FiniteGroup(table, labels=labels, name=f"{g.name}x{h.name}")


def named_group(family: str, n: int) -> FiniteGroup:
    """Look up a group by family name: 'trivial', 'cyclic' or 'symmetric'."""
    builders = {
        "trivial": lambda _: trivial_group(),
        "cyclic": cyclic_group,
        "symmetric": symmetric_group,
    }
    if family not in builders:
        raise NotAGroupError(f"unknown group family '{family}'")
    return builders[family](n)


def inversion_automorphism(g: FiniteGroup) -> List[int]:
    """The permutation a -> a^-1, an automorphism exactly when g is abelian."""
    return [g.inv(a) for a in range(g.order)]


def table_from_products(
    elements: Sequence[np.ndarray],
    product: Callable[[np.ndarray, np.ndarray], np.ndarray],
    atol: float,
    name: str = "G",
    labels: Optional[List[str]] = None,
) -> FiniteGroup:
    """
    Multiplication table of a finite set closed under `product`.

    Args:
        elements: Coefficient vectors, one per group element.
        product: Bilinear product on coefficient vectors.
        atol: Two vectors match when they differ by at most atol (max norm).

    Raises:
        NotAGroupError: a product matches no element, or the table is not a group table.
    """
    stacked = np.stack([np.asarray(e) for e in elements])
    n = stacked.shape[0]
    table = np.empty((n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            gap = np.max(np.abs(stacked - product(stacked[a], stacked[b])), axis=1)
            hit = int(np.argmin(gap))
            if gap[hit] > atol:
                raise NotAGroupError(f"product of elements {a} and {b} leaves the set (gap {gap[hit]:.3e})", (a, b, -1))
            table[a, b] = hit
    return FiniteGroup(table, labels=labels, name=name)
