"""Webs, movie-presented foams, and their compiled combinatorial complexes.

A *web* is a closed oriented trivalent graph whose edges carry a thickness;
at every vertex two thin edges of thicknesses a and b meet one thick edge of
thickness a+b (merge: thin in, thick out; split: thick in, thin out).
Vertex-free circle edges are allowed.

A foam is presented as a *movie*: an input web and a list of basic moves,
each rewriting the current slice locally.  Compiling a movie produces a
:class:`FoamComplex` that records the stratification of the swept surface:

* facets (maximal sheets between seams) with exact compact-surface Euler
  characteristics, thicknesses and decorations,
* bindings (maximal seam arcs/circles where two thin sheets meet a thick
  one) with slot-ordered side data used for seam-sign bookkeeping,
* singular points (from reassociation moves) where four seams meet.

Euler characteristics are accumulated additively over the canonical
stratified cell decomposition of the movie: every slab contributes the
compactly-supported Euler characteristic of its open pieces and every
internal interface contributes that of its web cells.  This is exact for
closed movies; for movies with boundary the tallies are relative to the
boundary web (only closed movies are ever evaluated).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    BoundaryMismatch,
    PatternMismatch,
    SeamSignInconsistent,
    WebInvalid,
)
from .polyring import MultiPoly, SymPoly

# ---------------------------------------------------------------------------
# Webs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    id: str
    thickness: int
    tail: str | None  # vertex id, None for circle edges
    head: str | None

    @property
    def is_circle(self) -> bool:
        return self.tail is None and self.head is None


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str  # "merge" | "split"
    ins: tuple[str, ...]  # slot-ordered incoming edge ids
    outs: tuple[str, ...]  # slot-ordered outgoing edge ids


class Web:
    """An immutable web slice: edges and trivalent split/merge vertices."""

    __slots__ = ("edges", "vertices")

    def __init__(self, edges: Mapping[str, Edge] = (), vertices: Mapping[str, Vertex] = ()):
        self.edges = dict(edges)
        self.vertices = dict(vertices)

    @classmethod
    def empty(cls) -> "Web":
        return cls()

    @classmethod
    def circle(cls, thickness: int, edge_id: str = "c") -> "Web":
        return cls({edge_id: Edge(edge_id, thickness, None, None)})

    def is_empty(self) -> bool:
        return not self.edges and not self.vertices

    def __eq__(self, other) -> bool:
        if not isinstance(other, Web):
            return NotImplemented
        return self.edges == other.edges and self.vertices == other.vertices

    def __hash__(self):
        return hash(
            (tuple(sorted(self.edges.items(), key=lambda kv: kv[0])),
             tuple(sorted(self.vertices.items(), key=lambda kv: kv[0])))
        )

    def with_changes(
        self,
        drop_edges: Iterable[str] = (),
        drop_vertices: Iterable[str] = (),
        add_edges: Iterable[Edge] = (),
        add_vertices: Iterable[Vertex] = (),
    ) -> "Web":
        edges = {k: v for k, v in self.edges.items() if k not in set(drop_edges)}
        vertices = {k: v for k, v in self.vertices.items() if k not in set(drop_vertices)}
        for e in add_edges:
            if e.id in edges:
                raise PatternMismatch(f"edge id {e.id} already present")
            edges[e.id] = e
        for v in add_vertices:
            if v.id in vertices:
                raise PatternMismatch(f"vertex id {v.id} already present")
            vertices[v.id] = v
        return Web(edges, vertices)

    def replace_edge_endpoint_refs(self, old_edge: str, new_edge: str, at: Iterable[str]) -> "Web":
        """Rewrite vertex slot references from one edge id to another."""
        vertices = dict(self.vertices)
        for vid in at:
            v = vertices[vid]
            vertices[vid] = Vertex(
                v.id,
                v.kind,
                tuple(new_edge if e == old_edge else e for e in v.ins),
                tuple(new_edge if e == old_edge else e for e in v.outs),
            )
        return Web(self.edges, vertices)


def validate_web(w: Web) -> None:
    """Raise :class:`WebInvalid` describing the first violated condition."""
    for e in w.edges.values():
        if e.thickness < 1:
            raise WebInvalid(f"edge {e.id}: thickness must be >= 1")
        if (e.tail is None) != (e.head is None):
            raise WebInvalid(f"edge {e.id}: half-attached edge")
        for vid in (e.tail, e.head):
            if vid is not None and vid not in w.vertices:
                raise WebInvalid(f"edge {e.id}: missing vertex {vid}")
    for v in w.vertices.values():
        if v.kind == "merge":
            if len(v.ins) != 2 or len(v.outs) != 1:
                raise WebInvalid(f"vertex {v.id}: merge must have two in, one out")
        elif v.kind == "split":
            if len(v.ins) != 1 or len(v.outs) != 2:
                raise WebInvalid(f"vertex {v.id}: split must have one in, two out")
        else:
            raise WebInvalid(f"vertex {v.id}: unknown kind {v.kind!r}")
        for eid in v.ins:
            e = w.edges.get(eid)
            if e is None or e.head != v.id:
                raise WebInvalid(f"vertex {v.id}: edge {eid} is not incoming")
        for eid in v.outs:
            e = w.edges.get(eid)
            if e is None or e.tail != v.id:
                raise WebInvalid(f"vertex {v.id}: edge {eid} is not outgoing")
        t_in = sum(w.edges[e].thickness for e in v.ins)
        t_out = sum(w.edges[e].thickness for e in v.outs)
        if t_in != t_out:
            raise WebInvalid(
                f"vertex {v.id}: flow violation {t_in} != {t_out} (FlowViolation)"
            )
    # Count incidences: every edge endpoint must be registered in a slot.
    slot_count: dict[str, int] = {}
    for v in w.vertices.values():
        for eid in v.ins + v.outs:
            slot_count[eid] = slot_count.get(eid, 0) + 1
    for e in w.edges.values():
        expected = (0 if e.tail is None else 1) + (0 if e.head is None else 1)
        if e.tail == e.head and e.tail is not None:
            expected = 2
        if slot_count.get(e.id, 0) != expected:
            raise WebInvalid(f"edge {e.id}: endpoint/slot mismatch")


def check_planarity(w: Web, rotations: Mapping[str, tuple[str, str, str]]) -> bool:
    """Check that an explicit rotation system embeds each component in S^2.

    ``rotations`` gives, per vertex, the cyclic (counterclockwise) order of
    its three incident edge ids.  Circle components are ignored (always
    planar).  Returns True iff every connected component with vertices has
    Euler characteristic 2 under the rotation system.
    """
    darts = []  # (edge, end) with end in {"tail", "head"}
    for e in w.edges.values():
        if not e.is_circle:
            darts.append((e.id, "tail"))
            darts.append((e.id, "head"))
    if not darts:
        return True

    def flip(d):
        return (d[0], "head" if d[1] == "tail" else "tail")

    # next dart around a vertex per rotation
    succ = {}
    for vid, order in rotations.items():
        v = w.vertices[vid]
        incident = []
        for eid in order:
            e = w.edges[eid]
            end = "tail" if e.tail == vid else "head"
            # loops at a vertex appear twice; disambiguate by multiplicity
            if (eid, end) in incident:
                end = "head" if end == "tail" else "tail"
            incident.append((eid, end))
        for k, d in enumerate(incident):
            succ[d] = incident[(k + 1) % 3]
    # faces = orbits of d -> succ[flip(d)]
    seen = set()
    faces = 0
    for d in darts:
        if d in seen:
            continue
        faces += 1
        cur = d
        while cur not in seen:
            seen.add(cur)
            cur = succ[flip(cur)]
    # components over vertices
    comp = {vid: vid for vid in w.vertices}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for e in w.edges.values():
        if not e.is_circle:
            a, b = find(e.tail), find(e.head)
            comp[a] = b
    n_comp = len({find(v) for v in w.vertices})
    V = len(w.vertices)
    E = sum(1 for e in w.edges.values() if not e.is_circle)
    return V - E + faces == 2 * n_comp


# ---------------------------------------------------------------------------
# Basic moves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cup:
    thickness: int
    out_edge: str


@dataclass(frozen=True)
class Cap:
    edge: str


@dataclass(frozen=True)
class Saddle:
    edge1: str
    edge2: str
    out1: str
    out2: str | None = None


@dataclass(frozen=True)
class Zip:
    edge_a: str
    edge_b: str
    merge_v: str
    split_v: str
    thick_edge: str
    out_a1: str
    out_a2: str
    out_b1: str
    out_b2: str


@dataclass(frozen=True)
class Unzip:
    thick_edge: str
    out_a: str
    out_b: str


@dataclass(frozen=True)
class DigonCup:
    edge: str
    a: int
    b: int
    split_v: str
    merge_v: str
    edge_a: str
    edge_b: str
    out_low: str
    out_high: str


@dataclass(frozen=True)
class DigonCap:
    edge_a: str
    edge_b: str
    out_edge: str


@dataclass(frozen=True)
class Assoc:
    """Reassociation of two adjacent merge vertices across their middle edge."""

    mid_edge: str
    out_mid: str


@dataclass(frozen=True)
class Coassoc:
    """Reassociation of two adjacent split vertices across their middle edge."""

    mid_edge: str
    out_mid: str


@dataclass(frozen=True)
class Decorate:
    edge: str
    poly: SymPoly  # blocks (inner, outer); outer may be empty


@dataclass(frozen=True)
class Isotopy:
    note: str = ""


BasicMove = Union[
    Cup, Cap, Saddle, Zip, Unzip, DigonCup, DigonCap, Assoc, Coassoc, Decorate, Isotopy
]


def _get_edge(w: Web, eid: str) -> Edge:
    e = w.edges.get(eid)
    if e is None:
        raise PatternMismatch(f"edge {eid} not in slice")
    return e


def _get_vertex(w: Web, vid: str) -> Vertex:
    v = w.vertices.get(vid)
    if v is None:
        raise PatternMismatch(f"vertex {vid} not in slice")
    return v


def apply_move(w: Web, m: BasicMove) -> Web:
    """Apply a basic move to a web slice, returning the new slice."""
    if isinstance(m, (Decorate, Isotopy)):
        if isinstance(m, Decorate):
            _get_edge(w, m.edge)
        return w

    if isinstance(m, Cup):
        if m.thickness < 1:
            raise PatternMismatch("cup thickness must be >= 1")
        return w.with_changes(add_edges=[Edge(m.out_edge, m.thickness, None, None)])

    if isinstance(m, Cap):
        e = _get_edge(w, m.edge)
        if not e.is_circle:
            raise PatternMismatch(f"cap requires a circle edge, got {m.edge}")
        return w.with_changes(drop_edges=[m.edge])

    if isinstance(m, Saddle):
        e1 = _get_edge(w, m.edge1)
        e2 = _get_edge(w, m.edge2)
        if e1.thickness != e2.thickness:
            raise PatternMismatch("saddle requires equal thicknesses")
        th = e1.thickness
        if m.edge1 == m.edge2:
            if e1.is_circle:
                # one circle splits into two circles
                return w.with_changes(
                    drop_edges=[m.edge1],
                    add_edges=[
                        Edge(m.out1, th, None, None),
                        Edge(m.out2, th, None, None),
                    ],
                )
            # interval self-saddle: interval + split-off circle
            out = Edge(m.out1, th, e1.tail, e1.head)
            new = w.with_changes(
                drop_edges=[m.edge1],
                add_edges=[out, Edge(m.out2, th, None, None)],
            )
            return new.replace_edge_endpoint_refs(m.edge1, m.out1, [e1.tail, e1.head])
        if e1.is_circle and e2.is_circle:
            # two circles merge into one
            return w.with_changes(
                drop_edges=[m.edge1, m.edge2],
                add_edges=[Edge(m.out1, th, None, None)],
            )
        if e1.is_circle or e2.is_circle:
            circ, seg = (e1, e2) if e1.is_circle else (e2, e1)
            out = Edge(m.out1, th, seg.tail, seg.head)
            new = w.with_changes(
                drop_edges=[m.edge1, m.edge2], add_edges=[out]
            )
            return new.replace_edge_endpoint_refs(seg.id, m.out1, [seg.tail, seg.head])
        # two interval edges: cross the connections
        out1 = Edge(m.out1, th, e1.tail, e2.head)
        out2 = Edge(m.out2, th, e2.tail, e1.head)
        new = w.with_changes(drop_edges=[m.edge1, m.edge2], add_edges=[out1, out2])
        new = new.replace_edge_endpoint_refs(m.edge1, m.out1, [e1.tail])
        new = new.replace_edge_endpoint_refs(m.edge2, m.out1, [e2.head])
        new = new.replace_edge_endpoint_refs(m.edge2, m.out2, [e2.tail])
        new = new.replace_edge_endpoint_refs(m.edge1, m.out2, [e1.head])
        return new

    if isinstance(m, Zip):
        if m.edge_a == m.edge_b:
            raise PatternMismatch("zip requires two distinct edges")
        ea = _get_edge(w, m.edge_a)
        eb = _get_edge(w, m.edge_b)
        tha, thb = ea.thickness, eb.thickness
        merge = Vertex(m.merge_v, "merge", (m.out_a1, m.out_b1), (m.thick_edge,))
        split = Vertex(m.split_v, "split", (m.thick_edge,), (m.out_a2, m.out_b2))
        thick = Edge(m.thick_edge, tha + thb, m.merge_v, m.split_v)
        new_edges = [thick]
        drop = [m.edge_a, m.edge_b]
        fixups = []
        if ea.is_circle:
            # the remaining arc runs from the split back around to the merge
            if m.out_a1 != m.out_a2:
                raise PatternMismatch("zip on a circle must reuse one arc id")
            new_edges.append(Edge(m.out_a1, tha, m.split_v, m.merge_v))
        else:
            new_edges.append(Edge(m.out_a1, tha, ea.tail, m.merge_v))
            new_edges.append(Edge(m.out_a2, tha, m.split_v, ea.head))
            fixups.append((m.edge_a, m.out_a1, ea.tail))
            fixups.append((m.edge_a, m.out_a2, ea.head))
        if eb.is_circle:
            if m.out_b1 != m.out_b2:
                raise PatternMismatch("zip on a circle must reuse one arc id")
            new_edges.append(Edge(m.out_b1, thb, m.split_v, m.merge_v))
        else:
            new_edges.append(Edge(m.out_b1, thb, eb.tail, m.merge_v))
            new_edges.append(Edge(m.out_b2, thb, m.split_v, eb.head))
            fixups.append((m.edge_b, m.out_b1, eb.tail))
            fixups.append((m.edge_b, m.out_b2, eb.head))
        new = w.with_changes(
            drop_edges=drop, add_edges=new_edges, add_vertices=[merge, split]
        )
        for old, fresh, at in fixups:
            new = new.replace_edge_endpoint_refs(old, fresh, [at])
        return new

    if isinstance(m, Unzip):
        t = _get_edge(w, m.thick_edge)
        if t.is_circle:
            raise PatternMismatch("unzip requires an edge between two vertices")
        mv = _get_vertex(w, t.tail)
        sv = _get_vertex(w, t.head)
        if mv.kind != "merge" or sv.kind != "split":
            raise PatternMismatch("unzip requires a merge-to-split edge")
        if mv.outs != (m.thick_edge,) or sv.ins != (m.thick_edge,):
            raise PatternMismatch("unzip pattern does not match")
        a1, b1 = mv.ins
        a2, b2 = sv.outs
        ea1, eb1 = w.edges[a1], w.edges[b1]
        ea2, eb2 = w.edges[a2], w.edges[b2]
        if ea1.thickness != ea2.thickness or eb1.thickness != eb2.thickness:
            raise PatternMismatch("unzip slot thicknesses do not match")
        drop = {m.thick_edge, a1, b1, a2, b2}
        add = []
        fixups = []
        for lo, hi, out in ((ea1, ea2, m.out_a), (eb1, eb2, m.out_b)):
            if lo.id == hi.id:
                # the thin edge loops from split back to merge: it closes up
                add.append(Edge(out, lo.thickness, None, None))
            else:
                add.append(Edge(out, lo.thickness, lo.tail, hi.head))
                fixups.append((lo.id, out, lo.tail))
                fixups.append((hi.id, out, hi.head))
        new = w.with_changes(
            drop_edges=drop, drop_vertices=[mv.id, sv.id], add_edges=add
        )
        for old, fresh, at in fixups:
            if at is not None:
                new = new.replace_edge_endpoint_refs(old, fresh, [at])
        return new

    if isinstance(m, DigonCup):
        e = _get_edge(w, m.edge)
        if e.thickness != m.a + m.b:
            raise PatternMismatch(
                f"digon-cup on {m.edge}: thickness {e.thickness} != {m.a}+{m.b}"
            )
        split = Vertex(m.split_v, "split", (m.out_low,), (m.edge_a, m.edge_b))
        merge = Vertex(m.merge_v, "merge", (m.edge_a, m.edge_b), (m.out_high,))
        da = Edge(m.edge_a, m.a, m.split_v, m.merge_v)
        db = Edge(m.edge_b, m.b, m.split_v, m.merge_v)
        add = [da, db]
        fixups = []
        if e.is_circle:
            if m.out_low != m.out_high:
                raise PatternMismatch("digon-cup on a circle must reuse one arc id")
            add.append(Edge(m.out_low, e.thickness, m.merge_v, m.split_v))
        else:
            add.append(Edge(m.out_low, e.thickness, e.tail, m.split_v))
            add.append(Edge(m.out_high, e.thickness, m.merge_v, e.head))
            fixups.append((m.edge, m.out_low, e.tail))
            fixups.append((m.edge, m.out_high, e.head))
        new = w.with_changes(
            drop_edges=[m.edge], add_edges=add, add_vertices=[split, merge]
        )
        for old, fresh, at in fixups:
            new = new.replace_edge_endpoint_refs(old, fresh, [at])
        return new

    if isinstance(m, DigonCap):
        da = _get_edge(w, m.edge_a)
        db = _get_edge(w, m.edge_b)
        if da.tail != db.tail or da.head != db.head or da.tail is None:
            raise PatternMismatch("digon-cap requires a parallel digon pair")
        sv = _get_vertex(w, da.tail)
        mv = _get_vertex(w, da.head)
        if sv.kind != "split" or mv.kind != "merge":
            raise PatternMismatch("digon-cap requires split-to-merge digon")
        if sv.outs != (m.edge_a, m.edge_b) or mv.ins != (m.edge_a, m.edge_b):
            raise PatternMismatch("digon-cap slot order does not match")
        lo = w.edges[sv.ins[0]]
        hi = w.edges[mv.outs[0]]
        drop = {m.edge_a, m.edge_b, lo.id, hi.id}
        fixups = []
        if lo.id == hi.id:
            add = [Edge(m.out_edge, lo.thickness, None, None)]
        else:
            add = [Edge(m.out_edge, lo.thickness, lo.tail, hi.head)]
            fixups.append((lo.id, m.out_edge, lo.tail))
            fixups.append((hi.id, m.out_edge, hi.head))
        new = w.with_changes(
            drop_edges=drop, drop_vertices=[sv.id, mv.id], add_edges=add
        )
        for old, fresh, at in fixups:
            if at is not None:
                new = new.replace_edge_endpoint_refs(old, fresh, [at])
        return new

    if isinstance(m, Assoc):
        g = _get_edge(w, m.mid_edge)
        if g.is_circle:
            raise PatternMismatch("assoc middle edge must join two vertices")
        v1 = _get_vertex(w, g.tail)
        v2 = _get_vertex(w, g.head)
        if v1.kind != "merge" or v2.kind != "merge":
            raise PatternMismatch("assoc requires two merge vertices")
        if v1.outs != (m.mid_edge,):
            raise PatternMismatch("assoc: middle edge must be the full output of v1")
        if m.mid_edge not in v2.ins:
            raise PatternMismatch("assoc: middle edge must feed v2")
        x_id, y_id = v1.ins
        slot = v2.ins.index(m.mid_edge)
        if slot == 0:
            # (x+y)+z -> x+(y+z)
            z_id = v2.ins[1]
            new_g = Edge(m.out_mid, w.edges[y_id].thickness + w.edges[z_id].thickness,
                         v1.id, v2.id)
            nv1 = Vertex(v1.id, "merge", (y_id, z_id), (m.out_mid,))
            nv2 = Vertex(v2.id, "merge", (x_id, m.out_mid), v2.outs)
            moved, kept = z_id, x_id
        else:
            # z+(x+y) -> (z+x)+y ... mirror pattern with the middle in slot 1
            z_id = v2.ins[0]
            new_g = Edge(m.out_mid, w.edges[z_id].thickness + w.edges[x_id].thickness,
                         v1.id, v2.id)
            nv1 = Vertex(v1.id, "merge", (z_id, x_id), (m.out_mid,))
            nv2 = Vertex(v2.id, "merge", (m.out_mid, y_id), v2.outs)
            moved, kept = z_id, y_id
        if moved in (x_id, y_id) or len({x_id, y_id, z_id}) != 3:
            raise PatternMismatch("assoc requires three distinct thin edges")
        new = w.with_changes(drop_edges=[m.mid_edge], drop_vertices=[v1.id, v2.id],
                             add_edges=[new_g], add_vertices=[nv1, nv2])
        # the moved edge now ends at v1 instead of v2; the kept edge moves to v2
        em = new.edges[moved]
        new = Web(
            {**new.edges, moved: Edge(em.id, em.thickness, em.tail, v1.id)},
            new.vertices,
        )
        ek = new.edges[kept]
        new = Web(
            {**new.edges, kept: Edge(ek.id, ek.thickness, ek.tail, v2.id)},
            new.vertices,
        )
        return new

    if isinstance(m, Coassoc):
        g = _get_edge(w, m.mid_edge)
        if g.is_circle:
            raise PatternMismatch("coassoc middle edge must join two vertices")
        v1 = _get_vertex(w, g.tail)
        v2 = _get_vertex(w, g.head)
        if v1.kind != "split" or v2.kind != "split":
            raise PatternMismatch("coassoc requires two split vertices")
        if v2.ins != (m.mid_edge,):
            raise PatternMismatch("coassoc: middle edge must be the full input of v2")
        if m.mid_edge not in v1.outs:
            raise PatternMismatch("coassoc: middle edge must come from v1")
        x_id, y_id = v2.outs
        slot = v1.outs.index(m.mid_edge)
        if slot == 0:
            z_id = v1.outs[1]
            new_g = Edge(m.out_mid, w.edges[y_id].thickness + w.edges[z_id].thickness,
                         v1.id, v2.id)
            nv1 = Vertex(v1.id, "split", v1.ins, (x_id, m.out_mid))
            nv2 = Vertex(v2.id, "split", (m.out_mid,), (y_id, z_id))
            moved, kept = z_id, x_id
        else:
            z_id = v1.outs[0]
            new_g = Edge(m.out_mid, w.edges[z_id].thickness + w.edges[x_id].thickness,
                         v1.id, v2.id)
            nv1 = Vertex(v1.id, "split", v1.ins, (m.out_mid, y_id))
            nv2 = Vertex(v2.id, "split", (m.out_mid,), (z_id, x_id))
            moved, kept = z_id, y_id
        if len({x_id, y_id, z_id}) != 3:
            raise PatternMismatch("coassoc requires three distinct thin edges")
        new = w.with_changes(drop_edges=[m.mid_edge], drop_vertices=[v1.id, v2.id],
                             add_edges=[new_g], add_vertices=[nv1, nv2])
        em = new.edges[moved]
        new = Web(
            {**new.edges, moved: Edge(em.id, em.thickness, v2.id, em.head)},
            new.vertices,
        )
        ek = new.edges[kept]
        new = Web(
            {**new.edges, kept: Edge(ek.id, ek.thickness, v1.id, ek.head)},
            new.vertices,
        )
        return new

    raise PatternMismatch(f"unknown move {m!r}")


# ---------------------------------------------------------------------------
# Movies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Movie:
    input_web: Web
    moves: tuple[BasicMove, ...]

    def slices(self) -> list[Web]:
        out = [self.input_web]
        for mv in self.moves:
            out.append(apply_move(out[-1], mv))
        return out

    @property
    def output_web(self) -> Web:
        return self.slices()[-1]

    def is_closed(self) -> bool:
        return self.input_web.is_empty() and self.output_web.is_empty()

    def validate(self) -> None:
        validate_web(self.input_web)
        for w in self.slices()[1:]:
            validate_web(w)


class MovieBuilder:
    """Incrementally builds a movie with deterministic fresh ids."""

    def __init__(self, input_web: Web | None = None, prefix: str = ""):
        self.web = input_web if input_web is not None else Web.empty()
        self.input_web = self.web
        self.moves: list[BasicMove] = []
        self.prefix = prefix
        self._n = 0

    def fresh(self, kind: str) -> str:
        self._n += 1
        return f"{self.prefix}{kind}{self._n}"

    def _push(self, m: BasicMove) -> BasicMove:
        self.web = apply_move(self.web, m)
        self.moves.append(m)
        return m

    # -- convenience wrappers ----------------------------------------------
    def cup(self, thickness: int, out_edge: str | None = None) -> str:
        m = Cup(thickness, out_edge or self.fresh("e"))
        self._push(m)
        return m.out_edge

    def cap(self, edge: str) -> None:
        self._push(Cap(edge))

    def saddle(self, e1: str, e2: str) -> tuple[str, str | None]:
        a = self.web.edges[e1]
        b = self.web.edges[e2]
        if e1 == e2:
            m = Saddle(e1, e2, self.fresh("e"), self.fresh("e"))
        elif a.is_circle or b.is_circle:
            m = Saddle(e1, e2, self.fresh("e"), None)
        else:
            m = Saddle(e1, e2, self.fresh("e"), self.fresh("e"))
        self._push(m)
        return m.out1, m.out2

    def zip(self, ea: str, eb: str) -> Zip:
        a = self.web.edges[ea]
        b = self.web.edges[eb]
        a1 = self.fresh("e")
        a2 = a1 if a.is_circle else self.fresh("e")
        b1 = self.fresh("e")
        b2 = b1 if b.is_circle else self.fresh("e")
        m = Zip(ea, eb, self.fresh("v"), self.fresh("v"), self.fresh("e"), a1, a2, b1, b2)
        self._push(m)
        return m

    def unzip(self, thick_edge: str) -> Unzip:
        m = Unzip(thick_edge, self.fresh("e"), self.fresh("e"))
        self._push(m)
        return m

    def digon_cup(self, edge: str, a: int, b: int) -> DigonCup:
        e = self.web.edges[edge]
        low = self.fresh("e")
        high = low if e.is_circle else self.fresh("e")
        m = DigonCup(edge, a, b, self.fresh("v"), self.fresh("v"),
                     self.fresh("e"), self.fresh("e"), low, high)
        self._push(m)
        return m

    def digon_cap(self, ea: str, eb: str) -> DigonCap:
        m = DigonCap(ea, eb, self.fresh("e"))
        self._push(m)
        return m

    def assoc(self, mid_edge: str) -> Assoc:
        m = Assoc(mid_edge, self.fresh("e"))
        self._push(m)
        return m

    def coassoc(self, mid_edge: str) -> Coassoc:
        m = Coassoc(mid_edge, self.fresh("e"))
        self._push(m)
        return m

    def decorate(self, edge: str, poly: SymPoly) -> None:
        self._push(Decorate(edge, poly))

    def movie(self) -> Movie:
        return Movie(self.input_web, tuple(self.moves))


# -- movie algebra ----------------------------------------------------------


def _rename_movie(m: Movie, keep: set[str], tag: str) -> Movie:
    """Rename every edge/vertex id not in ``keep`` by suffixing ``tag``."""

    def r(x: str | None) -> str | None:
        if x is None or x in keep:
            return x
        return f"{x}{tag}"

    def r_web(w: Web) -> Web:
        return Web(
            {
                r(e.id): Edge(r(e.id), e.thickness, r(e.tail), r(e.head))
                for e in w.edges.values()
            },
            {
                r(v.id): Vertex(
                    r(v.id), v.kind, tuple(r(e) for e in v.ins), tuple(r(e) for e in v.outs)
                )
                for v in w.vertices.values()
            },
        )

    def r_move(mv: BasicMove) -> BasicMove:
        if isinstance(mv, (Decorate, Isotopy)):
            return replace(mv, edge=r(mv.edge)) if isinstance(mv, Decorate) else mv
        kwargs = {}
        for f in mv.__dataclass_fields__:
            val = getattr(mv, f)
            if isinstance(val, str) and f not in ("a", "b"):
                kwargs[f] = r(val)
            else:
                kwargs[f] = val
        return type(mv)(**kwargs)

    return Movie(r_web(m.input_web), tuple(r_move(mv) for mv in m.moves))


def compose(a: Movie, b: Movie) -> Movie:
    """Concatenate movies; requires output(a) == input(b) (same ids)."""
    out = a.output_web
    if out != b.input_web:
        raise BoundaryMismatch("output of the first movie != input of the second")
    interface_ids = set(out.edges) | set(out.vertices)
    used = set()
    for w in a.slices():
        used |= set(w.edges) | set(w.vertices)
    tag = "'"
    while True:
        b2 = _rename_movie(b, interface_ids, tag)
        internal = set()
        for w in b2.slices():
            internal |= set(w.edges) | set(w.vertices)
        if not (internal - interface_ids) & used:
            break
        tag += "'"
    return Movie(a.input_web, a.moves + b2.moves)


def mirror(m: Movie) -> Movie:
    """Time-reverse a movie: each move is replaced by its reverse.

    The reversal swaps cup/cap, zip/unzip and digon-cup/digon-cap; a saddle
    reverses to a saddle and a reassociation to the reassociation of the
    rewired pattern (the web arrows themselves are unchanged).  Decorations
    are preserved on the same facet.
    """
    webs = m.slices()
    rev: list[BasicMove] = []
    for idx in range(len(m.moves) - 1, -1, -1):
        mv = m.moves[idx]
        before, after = webs[idx], webs[idx + 1]
        if isinstance(mv, (Decorate, Isotopy)):
            rev.append(mv)
        elif isinstance(mv, Cup):
            rev.append(Cap(mv.out_edge))
        elif isinstance(mv, Cap):
            rev.append(Cup(before.edges[mv.edge].thickness, mv.edge))
        elif isinstance(mv, Saddle):
            if mv.out2 is None:
                rev.append(Saddle(mv.out1, mv.out1, mv.edge1, mv.edge2))
            elif mv.edge1 == mv.edge2:
                rev.append(Saddle(mv.out1, mv.out2, mv.edge1, None))
            else:
                rev.append(Saddle(mv.out1, mv.out2, mv.edge1, mv.edge2))
        elif isinstance(mv, Zip):
            rev.append(Unzip(mv.thick_edge, mv.edge_a, mv.edge_b))
        elif isinstance(mv, Unzip):
            t = before.edges[mv.thick_edge]
            mvx = before.vertices[t.tail]
            svx = before.vertices[t.head]
            a1, b1 = mvx.ins
            a2, b2 = svx.outs
            rev.append(
                Zip(mv.out_a, mv.out_b, t.tail, t.head, mv.thick_edge, a1, a2, b1, b2)
            )
        elif isinstance(mv, DigonCup):
            rev.append(DigonCap(mv.edge_a, mv.edge_b, mv.edge))
        elif isinstance(mv, DigonCap):
            da = before.edges[mv.edge_a]
            db = before.edges[mv.edge_b]
            sv = da.tail
            mvv = da.head
            low = before.vertices[sv].ins[0]
            high = before.vertices[mvv].outs[0]
            rev.append(
                DigonCup(
                    mv.out_edge, da.thickness, db.thickness, sv, mvv,
                    mv.edge_a, mv.edge_b, low, high,
                )
            )
        elif isinstance(mv, Assoc):
            rev.append(Assoc(mv.out_mid, mv.mid_edge))
        elif isinstance(mv, Coassoc):
            rev.append(Coassoc(mv.out_mid, mv.mid_edge))
        else:
            raise PatternMismatch(f"cannot mirror {mv!r}")
    return Movie(m.output_web, tuple(rev))


def movie_algebra(op: str, a: Movie, b: Movie | None = None) -> Movie:
    if op == "compose":
        if b is None:
            raise ValueError("compose needs two movies")
        return compose(a, b)
    if op == "mirror":
        return mirror(a)
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# Compilation to a foam complex
# ---------------------------------------------------------------------------


class _UF:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def make(self, x: str) -> str:
        self.parent.setdefault(x, x)
        return x

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: str, b: str) -> str:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the lexicographically earlier label as root for determinism
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra
        return ra


@dataclass
class Facet:
    id: str
    thickness: int
    chi: int
    decorations: tuple[SymPoly, ...]


@dataclass
class Binding:
    id: str
    is_circle: bool
    segments: tuple[tuple[str, str, str], ...]  # (sideA facet, sideB facet, thick facet)
    endpoints: tuple[str, ...]  # singular vertex ids (intervals)
    boundary: bool  # True if the binding reaches the movie boundary

    @property
    def sideA(self) -> str:
        return self.segments[0][0]

    @property
    def sideB(self) -> str:
        return self.segments[0][1]

    @property
    def thick(self) -> str:
        return self.segments[0][2]

    def thin_thicknesses(self, facets: Mapping[str, Facet]) -> tuple[int, int]:
        return facets[self.sideA].thickness, facets[self.sideB].thickness


@dataclass
class SingularVertex:
    id: str
    facets: tuple[str, ...]  # six incident facet ids (with repetition allowed)
    bindings: tuple[str, ...]  # four incident binding ids
    thin_thicknesses: tuple[int, int, int]  # (a, b, c) of the local model


@dataclass
class MoveTrace:
    """Facet roles of one basic move, for per-slice bookkeeping."""

    kind: str  # cup|cap|saddle|zip|unzip|digon_cup|digon_cap|assoc|decorate|isotopy
    index: int
    facets: tuple[str, ...] = ()  # role order documented per kind
    thickness: tuple[int, ...] = ()


@dataclass
class FoamComplex:
    facets: dict[str, Facet]
    bindings: dict[str, Binding]
    vertices: dict[str, SingularVertex]
    traces: tuple[MoveTrace, ...]
    closed: bool
    # per-slice resolution of web edges to facet ids (one dict per slice)
    edge_facets: tuple[dict[str, str], ...] = ()

    def facet_ids(self) -> list[str]:
        return sorted(self.facets, key=lambda s: int(s[1:]))

    def to_record(self) -> dict:
        return {
            "facets": {
                f.id: {
                    "thickness": f.thickness,
                    "euler": f.chi,
                    "decorations": [str(d.poly) for d in f.decorations],
                }
                for f in self.facets.values()
            },
            "bindings": {
                b.id: {
                    "kind": "circle" if b.is_circle else "interval",
                    "segments": [list(s) for s in b.segments],
                    "endpoints": list(b.endpoints),
                }
                for b in self.bindings.values()
            },
            "vertices": {
                v.id: {"facets": list(v.facets), "bindings": list(v.bindings)}
                for v in self.vertices.values()
            },
        }


class _BindingRec:
    __slots__ = ("segments", "endpoints", "open_ends")

    def __init__(self):
        self.segments: list[tuple[str, str, str]] = []
        self.endpoints: list[str] = []
        self.open_ends: set[str] = set()


def compile_movie(mov: Movie) -> FoamComplex:
    """Compile a movie into its stratified foam complex.

    Facet Euler characteristics are exact compact-surface values for closed
    movies (and relative to the boundary web otherwise).
    """
    webs = mov.slices()
    T = len(mov.moves)
    uf = _UF()
    facet_of: dict[str, str] = {}  # current edge id -> facet label
    chi: dict[str, int] = {}
    thick_of: dict[str, int] = {}
    decs: dict[str, list[SymPoly]] = {}
    label_order: list[str] = []
    n_label = 0

    def new_facet(thickness: int) -> str:
        nonlocal n_label
        n_label += 1
        lbl = f"F{n_label:04d}"
        uf.make(lbl)
        chi[lbl] = 0
        thick_of[lbl] = thickness
        decs[lbl] = []
        label_order.append(lbl)
        return lbl

    def bump(lbl: str, d: int) -> None:
        chi[lbl] = chi.get(lbl, 0) + d

    # seed facets for a nonempty input web
    for e in webs[0].edges.values():
        facet_of[e.id] = new_facet(e.thickness)

    buf = _UF()  # binding union-find
    brecs: dict[str, _BindingRec] = {}
    n_bind = 0
    binding_of_vertex: dict[str, str] = {}

    def new_binding(segment: tuple[str, str, str], ends: Iterable[str]) -> str:
        nonlocal n_bind
        n_bind += 1
        bid = f"b{n_bind:04d}"
        buf.make(bid)
        rec = _BindingRec()
        rec.segments.append(segment)
        rec.open_ends |= set(ends)
        brecs[bid] = rec
        return bid

    def binding_join(b1: str, b2: str, segment: tuple[str, str, str], drop_ends) -> None:
        r1, r2 = buf.find(b1), buf.find(b2)
        if r1 == r2:
            rec = brecs[r1]
            rec.segments.append(segment)
            rec.open_ends -= set(drop_ends)
        else:
            root = buf.union(r1, r2)
            other = r2 if root == r1 else r1
            rec, o = brecs[root], brecs[other]
            rec.segments += o.segments
            rec.endpoints += o.endpoints
            rec.open_ends |= o.open_ends
            rec.segments.append(segment)
            rec.open_ends -= set(drop_ends)
            del brecs[other]

    # seed boundary seam arcs for vertices already present in the input web
    for v in webs[0].vertices.values():
        if v.kind == "merge":
            ea, eb = v.ins
            et = v.outs[0]
        else:
            et = v.ins[0]
            ea, eb = v.outs
        binding_of_vertex[v.id] = new_binding(
            (facet_of[ea], facet_of[eb], facet_of[et]), (v.id,)
        )

    sing: dict[str, SingularVertex] = {}
    n_sing = 0
    traces: list[MoveTrace] = []
    snapshots: list[dict[str, str]] = [dict(facet_of)]

    for t, mv in enumerate(mov.moves):
        before = webs[t]
        after = webs[t + 1]

        consumed: set[str] = set()
        if isinstance(mv, Cap):
            consumed = {mv.edge}
        elif isinstance(mv, Saddle):
            consumed = {mv.edge1, mv.edge2}
        elif isinstance(mv, Zip):
            consumed = {mv.edge_a, mv.edge_b}
        elif isinstance(mv, Unzip):
            tke = before.edges[mv.thick_edge]
            mvx, svx = before.vertices[tke.tail], before.vertices[tke.head]
            consumed = {mv.thick_edge, *mvx.ins, *svx.outs}
        elif isinstance(mv, DigonCup):
            consumed = {mv.edge}
        elif isinstance(mv, DigonCap):
            da = before.edges[mv.edge_a]
            svx, mvx = before.vertices[da.tail], before.vertices[da.head]
            consumed = {mv.edge_a, mv.edge_b, svx.ins[0], mvx.outs[0]}
        elif isinstance(mv, (Assoc, Coassoc)):
            consumed = {mv.mid_edge}

        # slab product contributions of unchanged edges
        for e in before.edges.values():
            if e.id not in consumed and not e.is_circle:
                bump(facet_of[e.id], +1)

        # move-local contributions and facet tracking
        if isinstance(mv, (Decorate, Isotopy)):
            if isinstance(mv, Decorate):
                lbl = facet_of[mv.edge]
                decs[uf.find(lbl)].append(mv.poly)
                traces.append(MoveTrace("decorate", t, (lbl,)))
            else:
                traces.append(MoveTrace("isotopy", t))
        elif isinstance(mv, Cup):
            lbl = new_facet(mv.thickness)
            facet_of[mv.out_edge] = lbl
            bump(lbl, +1)
            traces.append(MoveTrace("cup", t, (lbl,), (mv.thickness,)))
        elif isinstance(mv, Cap):
            lbl = facet_of.pop(mv.edge)
            bump(lbl, +1)
            traces.append(MoveTrace("cap", t, (lbl,), (before.edges[mv.edge].thickness,)))
        elif isinstance(mv, Saddle):
            e1 = before.edges[mv.edge1]
            e2 = before.edges[mv.edge2]
            l1 = facet_of.pop(mv.edge1)
            l2 = facet_of.pop(mv.edge2, l1)
            root = uf.union(l1, l2)
            outs = [
                out
                for out in (mv.out1, mv.out2)
                if out is not None and out in after.edges
            ]
            # slab piece value: (number of interval output strands) - 1
            bump(root, sum(1 for o in outs if not after.edges[o].is_circle) - 1)
            for out in outs:
                facet_of[out] = root
            traces.append(MoveTrace("saddle", t, (root,), (e1.thickness,)))
        elif isinstance(mv, Zip):
            ea = before.edges[mv.edge_a]
            eb = before.edges[mv.edge_b]
            fa = facet_of.pop(mv.edge_a)
            fb = facet_of.pop(mv.edge_b)
            ft = new_facet(ea.thickness + eb.thickness)
            facet_of[mv.thick_edge] = ft
            for out in (mv.out_a1, mv.out_a2):
                facet_of[out] = fa
            for out in (mv.out_b1, mv.out_b2):
                facet_of[out] = fb
            bump(fa, 0 if ea.is_circle else 1)
            bump(fb, 0 if eb.is_circle else 1)
            bump(ft, +1)
            bid = new_binding((fa, fb, ft), (mv.merge_v, mv.split_v))
            binding_of_vertex[mv.merge_v] = bid
            binding_of_vertex[mv.split_v] = bid
            traces.append(MoveTrace("zip", t, (fa, fb, ft),
                                    (ea.thickness, eb.thickness)))
        elif isinstance(mv, Unzip):
            tke = before.edges[mv.thick_edge]
            mvx = before.vertices[tke.tail]
            svx = before.vertices[tke.head]
            a1, b1 = mvx.ins
            a2, b2 = svx.outs
            ft = facet_of.pop(mv.thick_edge)
            la1 = facet_of.pop(a1)
            fa = la1 if a1 == a2 else uf.union(la1, facet_of.pop(a2))
            lb1 = facet_of.pop(b1)
            fb = lb1 if b1 == b2 else uf.union(lb1, facet_of.pop(b2))
            facet_of[mv.out_a] = fa
            facet_of[mv.out_b] = fb
            bump(fa, 0 if after.edges[mv.out_a].is_circle else 1)
            bump(fb, 0 if after.edges[mv.out_b].is_circle else 1)
            bump(ft, +1)
            binding_join(
                binding_of_vertex.pop(tke.tail),
                binding_of_vertex.pop(tke.head),
                (fa, fb, ft),
                (tke.tail, tke.head),
            )
            traces.append(MoveTrace("unzip", t, (fa, fb, ft),
                                    (before.edges[a1].thickness, before.edges[b1].thickness)))
        elif isinstance(mv, DigonCup):
            e = before.edges[mv.edge]
            ft = facet_of.pop(mv.edge)
            fa = new_facet(mv.a)
            fb = new_facet(mv.b)
            facet_of[mv.edge_a] = fa
            facet_of[mv.edge_b] = fb
            for out in (mv.out_low, mv.out_high):
                facet_of[out] = ft
            bump(ft, 0 if e.is_circle else 1)
            bump(fa, +1)
            bump(fb, +1)
            bid = new_binding((fa, fb, ft), (mv.split_v, mv.merge_v))
            binding_of_vertex[mv.split_v] = bid
            binding_of_vertex[mv.merge_v] = bid
            traces.append(MoveTrace("digon_cup", t, (fa, fb, ft), (mv.a, mv.b)))
        elif isinstance(mv, DigonCap):
            da = before.edges[mv.edge_a]
            db = before.edges[mv.edge_b]
            svx = before.vertices[da.tail]
            mvx = before.vertices[da.head]
            lo, hi = svx.ins[0], mvx.outs[0]
            fa = facet_of.pop(mv.edge_a)
            fb = facet_of.pop(mv.edge_b)
            if lo == hi:
                ft = facet_of.pop(lo)
            else:
                ft = uf.union(facet_of.pop(lo), facet_of.pop(hi))
            facet_of[mv.out_edge] = ft
            bump(fa, +1)
            bump(fb, +1)
            bump(ft, 0 if after.edges[mv.out_edge].is_circle else 1)
            binding_join(
                binding_of_vertex.pop(da.tail),
                binding_of_vertex.pop(da.head),
                (fa, fb, ft),
                (da.tail, da.head),
            )
            traces.append(MoveTrace("digon_cap", t, (fa, fb, ft),
                                    (da.thickness, db.thickness)))
        elif isinstance(mv, (Assoc, Coassoc)):
            g = before.edges[mv.mid_edge]
            v1 = before.vertices[g.tail]
            v2 = before.vertices[g.head]
            f_old = facet_of.pop(mv.mid_edge)
            f_new = new_facet(after.edges[mv.out_mid].thickness)
            facet_of[mv.out_mid] = f_new
            bump(f_old, +1)
            bump(f_new, +1)
            if isinstance(mv, Assoc):
                x_id, y_id = v1.ins
                slot = v2.ins.index(mv.mid_edge)
                z_id = v2.ins[1 - slot]
                w_id = v2.outs[0]
                av1 = after.vertices[v1.id]
                av2 = after.vertices[v2.id]
                seg_v1 = (facet_of[av1.ins[0]], facet_of[av1.ins[1]], f_new)
                seg_v2 = (facet_of[av2.ins[0]], facet_of[av2.ins[1]], facet_of[w_id])
            else:
                x_id, y_id = v2.outs
                slot = v1.outs.index(mv.mid_edge)
                z_id = v1.outs[1 - slot]
                w_id = v1.ins[0]
                av1 = after.vertices[v1.id]
                av2 = after.vertices[v2.id]
                seg_v1 = (facet_of[av1.outs[0]], facet_of[av1.outs[1]], facet_of[w_id])
                seg_v2 = (facet_of[av2.outs[0]], facet_of[av2.outs[1]], f_new)
            n_sing += 1
            sid = f"s{n_sing:04d}"
            b1 = binding_of_vertex.pop(v1.id)
            b2 = binding_of_vertex.pop(v2.id)
            for b in (b1, b2):
                rec = brecs[buf.find(b)]
                rec.open_ends -= {v1.id, v2.id}
                rec.endpoints.append(sid)
            nb1 = new_binding(seg_v1, (v1.id,))
            brecs[nb1].endpoints.append(sid)
            nb2 = new_binding(seg_v2, (v2.id,))
            brecs[nb2].endpoints.append(sid)
            binding_of_vertex[v1.id] = nb1
            binding_of_vertex[v2.id] = nb2
            thin = sorted(
                (
                    before.edges[x_id].thickness,
                    before.edges[y_id].thickness,
                    before.edges[z_id].thickness,
                )
            )
            sing[sid] = SingularVertex(
                sid,
                (
                    facet_of[x_id], facet_of[y_id], facet_of[z_id],
                    facet_of[w_id] if w_id in facet_of else uf.find(f_old),
                    f_old, f_new,
                ),
                (buf.find(b1), buf.find(b2), nb1, nb2),
                tuple(thin),
            )
            traces.append(MoveTrace("assoc", t))
        else:
            raise PatternMismatch(f"cannot compile move {mv!r}")

        # internal interface contribution
        if t < T - 1:
            for e in after.edges.values():
                if not e.is_circle:
                    bump(facet_of[e.id], -1)
        snapshots.append(dict(facet_of))

    # resolve facets
    root_chi: dict[str, int] = {}
    root_dec: dict[str, list[SymPoly]] = {}
    root_first: dict[str, int] = {}
    for idx, lbl in enumerate(label_order):
        root = uf.find(lbl)
        root_chi[root] = root_chi.get(root, 0) + chi[lbl]
        root_dec.setdefault(root, []).extend(decs[lbl])
        root_first.setdefault(root, idx)
        if thick_of[root] != thick_of[lbl]:
            raise PatternMismatch("internal error: facet thickness clash")
    roots = sorted(root_chi, key=lambda r: root_first[r])
    facet_name = {r: f"f{k + 1}" for k, r in enumerate(roots)}

    def fname(lbl: str) -> str:
        return facet_name[uf.find(lbl)]

    facets = {
        facet_name[r]: Facet(facet_name[r], thick_of[r], root_chi[r], tuple(root_dec[r]))
        for r in roots
    }

    closed = mov.input_web.is_empty() and webs[-1].is_empty()
    bindings: dict[str, Binding] = {}
    bname = {}
    for k, (bid, rec) in enumerate(sorted(brecs.items())):
        name = f"b{k + 1}"
        bname[bid] = name
        bindings[name] = Binding(
            name,
            is_circle=not rec.endpoints and not rec.open_ends,
            segments=tuple((fname(a), fname(b), fname(c)) for a, b, c in rec.segments),
            endpoints=tuple(sorted(rec.endpoints)),
            boundary=bool(rec.open_ends),
        )
    vertices = {
        v.id: SingularVertex(
            v.id,
            tuple(fname(f) for f in v.facets),
            tuple(bname[buf.find(b)] for b in v.bindings),
            v.thin_thicknesses,
        )
        for v in sing.values()
    }
    named_traces = tuple(
        MoveTrace(tr.kind, tr.index, tuple(fname(f) for f in tr.facets), tr.thickness)
        for tr in traces
    )
    edge_facets = tuple(
        {e: fname(lbl) for e, lbl in snap.items()} for snap in snapshots
    )
    return FoamComplex(facets, bindings, vertices, named_traces, closed, edge_facets)


# alias matching the spec-facing operation name
compile = compile_movie  # noqa: A001


# ---------------------------------------------------------------------------
# Colorings
# ---------------------------------------------------------------------------

Coloring = dict  # facet id -> frozenset of pigments


def _colex_subsets(N: int, k: int) -> list[frozenset[int]]:
    combos = sorted(
        itertools.combinations(range(1, N + 1), k), key=lambda s: tuple(reversed(s))
    )
    return [frozenset(c) for c in combos]


def enumerate_colorings(F: FoamComplex, N: int) -> Iterator[Coloring]:
    """Yield admissible pigment assignments in deterministic order.

    Backtracking over facets in id order, candidate subsets in colex order,
    pruning on every fully-assigned binding constraint.
    """
    ids = F.facet_ids()
    constraints = []  # (A, B, thick)
    for b in F.bindings.values():
        for seg in {tuple(s) for s in b.segments}:
            constraints.append(seg)
    by_facet: dict[str, list[tuple[str, str, str]]] = {}
    for c in constraints:
        for f in c:
            by_facet.setdefault(f, []).append(c)

    assignment: dict[str, frozenset[int]] = {}

    def consistent(f: str) -> bool:
        for (A, B, TH) in by_facet.get(f, ()):  # noqa: N806
            ca, cb, ct = assignment.get(A), assignment.get(B), assignment.get(TH)
            if ca is not None and cb is not None:
                if ca & cb:
                    return False
                if ct is not None and (ca | cb) != ct:
                    return False
            if ct is not None:
                if ca is not None and not ca <= ct:
                    return False
                if cb is not None and not cb <= ct:
                    return False
        return True

    def rec(i: int) -> Iterator[Coloring]:
        if i == len(ids):
            yield dict(assignment)
            return
        f = ids[i]
        k = F.facets[f].thickness
        if k > N:
            return
        for s in _colex_subsets(N, k):
            assignment[f] = s
            if consistent(f):
                yield from rec(i + 1)
        assignment.pop(f, None)

    yield from rec(0)


# ---------------------------------------------------------------------------
# Colored Euler-characteristic data
# ---------------------------------------------------------------------------


def monochrome_euler(F: FoamComplex, c: Coloring, i: int) -> int:
    """Euler characteristic of the closed surface of facets containing i."""
    total = 0
    for f in F.facets.values():
        if i in c[f.id]:
            total += f.chi
    for b in F.bindings.values():
        # the seam lies in the surface iff the thick facet contains i
        if i in c[b.thick]:
            if not b.is_circle:
                total -= 1
    for v in F.vertices.values():
        if any(i in c[f] for f in v.facets):
            total += 1
    return total


def _in_bichrome(color: frozenset[int], i: int, j: int) -> bool:
    return (i in color) != (j in color)


def _binding_in_bichrome(F: FoamComplex, c: Coloring, b: Binding, i: int, j: int) -> bool:
    A, B, TH = b.sideA, b.sideB, b.thick  # noqa: N806
    return any(
        _in_bichrome(c[f], i, j) for f in (A, B, TH)
    )


def _binding_separates(c: Coloring, seg: tuple[str, str, str], i: int, j: int) -> bool:
    A, B, _ = seg  # noqa: N806
    return (i in c[A] and j in c[B]) or (j in c[A] and i in c[B])


@dataclass
class LocalCounts:
    """Slice tallies for one coloring and one ordered pigment pair (i, j)."""

    U: int = 0  # cups with i in the facet color, j outside
    A: int = 0  # caps likewise
    V: int = 0  # digon-cups with i in the first thin facet, j in the second
    Lam: int = 0  # digon-caps likewise
    Z: int = 0  # zips likewise
    Y: int = 0  # unzips likewise
    S: int = 0  # saddles with i in the facet color, j outside


def local_counts(F: FoamComplex, c: Coloring, i: int, j: int) -> LocalCounts:
    out = LocalCounts()
    for tr in F.traces:
        if tr.kind in ("cup", "cap", "saddle"):
            col = c[tr.facets[0]]
            if i in col and j not in col:
                if tr.kind == "cup":
                    out.U += 1
                elif tr.kind == "cap":
                    out.A += 1
                else:
                    out.S += 1
        elif tr.kind in ("digon_cup", "digon_cap", "zip", "unzip"):
            ca, cb = c[tr.facets[0]], c[tr.facets[1]]
            if i in ca and j in cb:
                if tr.kind == "digon_cup":
                    out.V += 1
                elif tr.kind == "digon_cap":
                    out.Lam += 1
                elif tr.kind == "zip":
                    out.Z += 1
                else:
                    out.Y += 1
    return out


def bichrome_data(
    F: FoamComplex, c: Coloring, i: int, j: int
) -> tuple[int, int, LocalCounts, LocalCounts]:
    """(chi of the bichrome surface, positive-circle count, counts ij, ji).

    The bichrome surface consists of facets whose color contains exactly one
    of i, j.  Separating circles are the components of the union of bindings
    whose two thin sides carry i and j on opposite sides; a circle is
    *positive* iff the i-carrying thin facet sits in the first slot along
    the whole circle (``SeamSignInconsistent`` otherwise).
    """
    if not i < j:
        raise ValueError("pigments must satisfy i < j")
    chi = 0
    for f in F.facets.values():
        if _in_bichrome(c[f.id], i, j):
            chi += f.chi
    for b in F.bindings.values():
        if _binding_in_bichrome(F, c, b, i, j):
            if not b.is_circle:
                chi -= 1
    for v in F.vertices.values():
        if any(_in_bichrome(c[f], i, j) for f in v.facets):
            chi += 1

    # separating circles and their signs
    theta_plus = 0
    separating = [
        b for b in F.bindings.values() if _binding_separates(c, b.segments[0], i, j)
    ]

    def seg_positive(seg: tuple[str, str, str]) -> bool:
        return i in c[seg[0]]

    def circle_sign(bs: list[Binding]) -> bool:
        signs = {seg_positive(s) for b in bs for s in b.segments}
        if len(signs) != 1:
            raise SeamSignInconsistent(
                f"mixed seam signs for pigments ({i},{j}) on bindings "
                f"{[b.id for b in bs]}"
            )
        return signs.pop()

    circles = [b for b in separating if b.is_circle]
    intervals = [b for b in separating if not b.is_circle]
    for b in circles:
        if circle_sign([b]):
            theta_plus += 1
    # chain interval bindings through singular vertices
    if intervals:
        adj: dict[str, list[Binding]] = {}
        for b in intervals:
            for v in b.endpoints:
                adj.setdefault(v, []).append(b)
        for v, bs in adj.items():
            if len(bs) not in (0, 2):
                raise SeamSignInconsistent(
                    f"separating seam has odd valence at vertex {v}"
                )
        seen: set[str] = set()
        for b in intervals:
            if b.id in seen:
                continue
            comp = [b]
            seen.add(b.id)
            frontier = [b]
            while frontier:
                cur = frontier.pop()
                for v in cur.endpoints:
                    for nb in adj[v]:
                        if nb.id not in seen:
                            seen.add(nb.id)
                            comp.append(nb)
                            frontier.append(nb)
            if circle_sign(comp):
                theta_plus += 1

    return chi, theta_plus, local_counts(F, c, i, j), local_counts(F, c, j, i)
