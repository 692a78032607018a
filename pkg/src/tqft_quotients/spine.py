"""Ladder spines of genus-g handlebodies.

The handlebody is a thickened disk with g holes in a row.  Its spine has
g+1 vertical rungs r0..rg separating the holes, joined by a top path and a
bottom path (edges t1.., b1..).  For g = 2 this is the theta graph; for
g = 1 it degenerates to the core circle of a solid torus.

Curve names follow the Lickorish generators:

* ``a1`` / ``a{g}``: meridians of the outer rungs r0 / rg,
* ``c{i}`` (1 <= i < g): meridian of the inner rung r_i,
* ``b{i}`` (1 <= i <= g): boundary-parallel curve around hole i.

Consecutive members of a1, b1, c1, b2, ..., c_{g-1}, b_g, a_g meet once;
all other pairs are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FaceVertex:
    """A vertex met by a hole cycle: the two cycle edges and the third edge."""

    vertex: int
    edge_in: int
    edge_out: int
    third: int


@dataclass(frozen=True)
class HoleCycle:
    edges: tuple[int, ...]
    corners: tuple[FaceVertex, ...]


@dataclass(frozen=True)
class Spine:
    genus: int
    edges: tuple[str, ...]
    vertices: tuple[tuple[int, int, int], ...]
    holes: tuple[HoleCycle, ...]

    def edge_index(self, name: str) -> int:
        return self.edges.index(name)

    def curve(self, name: str):
        """('meridian', edge) or ('hole', HoleCycle) for a named curve."""
        g = self.genus
        kind, idx = name[0], name[1:]
        if not idx.isdigit():
            raise ValueError(f"unsupported curve name {name!r}")
        i = int(idx)
        if g == 1:
            if name == "a1":
                return "meridian", 0
            if name == "b1":
                return "hole", self.holes[0]
            raise ValueError(f"unsupported curve name {name!r} in genus 1")
        if kind == "a" and i == 1:
            return "meridian", self.edge_index("r0")
        if kind == "a" and i == g:
            return "meridian", self.edge_index(f"r{g}")
        if kind == "c" and 1 <= i < g:
            return "meridian", self.edge_index(f"r{i}")
        if kind == "b" and 1 <= i <= g:
            return "hole", self.holes[i - 1]
        raise ValueError(f"unsupported curve name {name!r} in genus {g}")

    def curve_names(self) -> list[str]:
        g = self.genus
        if g == 1:
            return ["a1", "b1"]
        names = ["a1"]
        for i in range(1, g):
            names += [f"b{i}", f"c{i}"]
        names += [f"b{g}", f"a{g}"]
        return names


def ladder_spine(g: int) -> Spine:
    if g < 1:
        raise ValueError("genus must be >= 1")
    if g == 1:
        return Spine(1, ("x",), (), (HoleCycle((0,), ()),))

    rungs = [f"r{i}" for i in range(g + 1)]
    tops = [f"t{i}" for i in range(1, g - 1)]
    bots = [f"s{i}" for i in range(1, g - 1)]
    edges = tuple(rungs + tops + bots)
    ix = {name: n for n, name in enumerate(edges)}

    vertices = []
    top_v, bot_v = [], []
    for prefix, store in (("t", top_v), ("s", bot_v)):
        # vertex k (1..g-1) joins path edge k-1, rung r_k and path edge k;
        # the outer rungs r0, r_g stand in for the missing path edges
        for k in range(1, g):
            if g == 2:
                tri = ("r0", "r1", "r2")
            elif k == 1:
                tri = ("r0", "r1", f"{prefix}1")
            elif k == g - 1:
                tri = (f"{prefix}{g - 2}", f"r{g - 1}", f"r{g}")
            else:
                tri = (f"{prefix}{k - 1}", f"r{k}", f"{prefix}{k}")
            store.append(len(vertices))
            vertices.append(tuple(ix[e] for e in tri))

    def third_of(v, e1, e2):
        (rest,) = [e for e in vertices[v] if e not in (e1, e2)]
        return rest

    holes = []
    for i in range(1, g + 1):
        left, right = ix[f"r{i - 1}"], ix[f"r{i}"]
        if g == 2 or i == 1 or i == g:
            # two-edge cycle through one top and one bottom vertex
            vt = top_v[0] if i == 1 else top_v[-1]
            vb = bot_v[0] if i == 1 else bot_v[-1]
            if g == 2:
                vt, vb = top_v[0], bot_v[0]
            corners = (
                FaceVertex(vt, left, right, third_of(vt, left, right)),
                FaceVertex(vb, right, left, third_of(vb, left, right)),
            )
            holes.append(HoleCycle((left, right), corners))
        else:
            t, s = ix[f"t{i - 1}"], ix[f"s{i - 1}"]
            vt1, vt2 = top_v[i - 2], top_v[i - 1]
            vb1, vb2 = bot_v[i - 2], bot_v[i - 1]
            corners = (
                FaceVertex(vt1, left, t, third_of(vt1, left, t)),
                FaceVertex(vt2, t, right, third_of(vt2, t, right)),
                FaceVertex(vb2, right, s, third_of(vb2, right, s)),
                FaceVertex(vb1, s, left, third_of(vb1, s, left)),
            )
            holes.append(HoleCycle((left, t, right, s), corners))
    return Spine(g, edges, tuple(vertices), tuple(holes))
