"""Finite dynamical systems (X, F) on X = {0..n-1} and their orbit structure.

A self-map of a finite set decomposes into "rho" shapes: trees of transient
states hanging off disjoint cycles.  Everything downstream (solvability
criteria, closed-form solutions, ergodic projectors) is driven by this
decomposition, so it is computed once, exactly, with deterministic output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import lcm


@dataclass(frozen=True)
class FiniteSystem:
    """A deterministic self-map F of {0..n-1}, stored as a successor table.

    succ[x] = F(x).  Immutable after construction; all derived quantities are
    pure functions of the table, so instances are safe to share across
    threads.
    """

    n: int
    succ: tuple[int, ...]

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("state count must be positive")
        if len(self.succ) != self.n:
            raise ValueError("successor table length must equal n")
        object.__setattr__(self, "succ", tuple(int(y) for y in self.succ))
        if any(not (0 <= y < self.n) for y in self.succ):
            raise ValueError("successor out of range")

    @staticmethod
    def from_succ(succ) -> "FiniteSystem":
        succ = tuple(int(y) for y in succ)
        return FiniteSystem(len(succ), succ)

    def step(self, x: int) -> int:
        return self.succ[x]

    def iterate(self, x: int, k: int) -> int:
        for _ in range(k):
            x = self.succ[x]
        return x

    def to_json(self) -> dict:
        return {"n": self.n, "succ": list(self.succ)}

    @staticmethod
    def from_json(obj: dict) -> "FiniteSystem":
        extra = set(obj) - {"n", "succ"}
        if extra:
            raise ValueError(f"unknown fields in system description: {sorted(extra)}")
        return FiniteSystem(int(obj["n"]), tuple(int(v) for v in obj["succ"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Full orbit structure of a FiniteSystem.

    component_id[x]   index of x's equivalence class (x1 ~ x2 iff some
                      F^m x1 = F^n x2); classes are numbered in increasing
                      order of their smallest cycle state.
    on_cycle[x]       whether x lies on a cycle.
    preperiod[x]      minimal l with F^l x on a cycle.
    period[x]         length of the cycle reached from x.
    cycle_lists       per component, the cycle states in orbit order,
                      starting from the smallest cycle state.
    transversal       the smallest cycle state of each component.
    global_preperiod  minimal l with F^(l+p) = F^l as maps.
    global_period     the matching minimal p (lcm of all cycle lengths).
    """

    component_id: tuple[int, ...]
    on_cycle: tuple[bool, ...]
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    cycle_lists: tuple[tuple[int, ...], ...]
    transversal: tuple[int, ...]
    global_preperiod: int
    global_period: int

    @property
    def num_components(self) -> int:
        return len(self.cycle_lists)


def decompose(sys: FiniteSystem) -> OrbitDecomposition:
    """Compute the orbit decomposition by iterative coloring, O(n).

    Each unvisited state walks its forward orbit on an explicit path; when
    the walk closes on the in-progress path a new cycle is recorded, and when
    it lands on settled territory the path is a tree branch.  Per-state
    preperiods fall out of unwinding the path, no second traversal needed.
    """
    n = sys.n
    succ = sys.succ
    cycle_of = [-1] * n          # cycle index (discovery order), -1 = unvisited
    pre = [0] * n
    on_path = [False] * n
    cycles: list[list[int]] = []

    for start in range(n):
        if cycle_of[start] >= 0:
            continue
        path: list[int] = []
        x = start
        while cycle_of[x] < 0 and not on_path[x]:
            on_path[x] = True
            path.append(x)
            x = succ[x]
        if on_path[x] and cycle_of[x] < 0:
            # the walk closed on its own path: path[k:] is a new cycle
            k = path.index(x)
            cyc = path[k:]
            ci = len(cycles)
            cycles.append(cyc)
            for y in cyc:
                cycle_of[y] = ci
                pre[y] = 0
            tree = path[:k]
            base = 0
        else:
            # the walk hit a settled state x
            ci = cycle_of[x]
            tree = path
            base = pre[x]
        for i in range(len(tree) - 1, -1, -1):
            y = tree[i]
            cycle_of[y] = ci
            pre[y] = base + (len(tree) - i)
        for y in path:
            on_path[y] = False

    # renumber components by smallest cycle state; rotate cycles to start there
    keyed = sorted(range(len(cycles)), key=lambda ci: min(cycles[ci]))
    remap = {old: new for new, old in enumerate(keyed)}
    cycle_lists = []
    transversal = []
    for old in keyed:
        cyc = cycles[old]
        m = cyc.index(min(cyc))
        rot = tuple(cyc[m:] + cyc[:m])
        cycle_lists.append(rot)
        transversal.append(rot[0])

    component_id = tuple(remap[cycle_of[x]] for x in range(n))
    on_cycle = tuple(pre[x] == 0 for x in range(n))
    period = tuple(len(cycle_lists[component_id[x]]) for x in range(n))

    global_l = max(pre)
    global_p = lcm(*(len(c) for c in cycle_lists))
    return OrbitDecomposition(
        component_id=component_id,
        on_cycle=on_cycle,
        preperiod=tuple(pre),
        period=period,
        cycle_lists=tuple(cycle_lists),
        transversal=tuple(transversal),
        global_preperiod=global_l,
        global_period=global_p,
    )


def total_attractor(sys: FiniteSystem) -> set[int]:
    """The largest invariant subset on which F is surjective.

    Equals the intersection of the images F^k(X), k >= 1, which for a finite
    system is exactly the union of all cycles.  Computed by shrinking the
    image until it stabilizes.
    """
    current = set(range(sys.n))
    while True:
        image = {sys.succ[x] for x in current}
        if image == current:
            return current
        current = image


def periodic_points(sys: FiniteSystem) -> set[int]:
    """States lying on a cycle."""
    dec = decompose(sys)
    return {x for x in range(sys.n) if dec.on_cycle[x]}
