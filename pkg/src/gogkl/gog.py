"""Graphs of groups: structure, validation, presentations, normal forms.

A graph of groups assigns a group descriptor to every vertex and edge and a
pair of injective homomorphisms from each edge group into the two end
vertex groups (two independent maps also when the edge is a loop).  The
fundamental group is presented relative to a deterministic spanning tree:
tree-edge letters are trivialized, every other edge contributes a stable
letter, so a single edge reproduces the amalgamated free product or the
HNN extension on the nose.

Words in the fundamental group are handled as path words (alternating
vertex elements and edge traversals); pinch removal on path words is the
normal-form algorithm behind the triviality test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .abelian import AbelianGroup, IntMatrix, canonicalize
from .groups import (
    UNSUPPORTED,
    YES, NO, UNKNOWN,
    FgAbelian,
    FiniteByTable,
    FiniteCyclic,
    Free,
    GroupDescriptor,
    GroupError,
    GroupHom,
    Opaque,
    Surface,
    Trivial,
    VirtuallyCyclic,
    Word,
    element_as_word,
    element_mul,
    finite_identity,
    finite_mul,
    generator_count,
    hom_apply,
    hom_injective,
    hom_preimage,
    identity_element,
    is_finite_group,
    is_identity_element,
    order_of,
    word_eval,
)


class GraphError(ValueError):
    """Raised for structurally malformed graphs of groups."""


@dataclass(frozen=True)
class Edge:
    """An edge with its group and the two end inclusions.

    ``hom_u`` maps the edge group into the group at ``u``, ``hom_v`` into
    the group at ``v``; u may equal v (a loop), in which case the two maps
    are still independent.
    """

    id: str
    u: str
    v: str
    group: GroupDescriptor
    hom_u: GroupHom
    hom_v: GroupHom


class GraphOfGroups:
    """Immutable-by-convention graph of groups with cached spanning tree."""

    def __init__(self, vertices: dict[str, GroupDescriptor],
                 edges: Iterable[Edge], name: str = "graph"):
        if not vertices:
            raise GraphError("a graph of groups needs at least one vertex")
        self.name = name
        self.vertices = {str(k): v for k, v in sorted(vertices.items())}
        self.edges = tuple(sorted(edges, key=lambda e: e.id))
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.u not in self.vertices or e.v not in self.vertices:
                raise GraphError(f"edge {e.id!r} references a missing vertex")
            if e.hom_u.source != e.group or e.hom_v.source != e.group:
                raise GraphError(f"edge {e.id!r}: hom source is not the edge group")
            if e.hom_u.target != self.vertices[e.u]:
                raise GraphError(f"edge {e.id!r}: hom_u target is not the group at {e.u!r}")
            if e.hom_v.target != self.vertices[e.v]:
                raise GraphError(f"edge {e.id!r}: hom_v target is not the group at {e.v!r}")
        self._tree: tuple[str, ...] | None = None

    # -- basic graph structure ----------------------------------------------

    def vertex_ids(self) -> list[str]:
        return list(self.vertices)

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"no edge {eid!r}")

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {next(iter(self.vertices))}
        changed = True
        while changed:
            changed = False
            for e in self.edges:
                if (e.u in seen) != (e.v in seen):
                    seen.update((e.u, e.v))
                    changed = True
        return len(seen) == len(self.vertices)

    def spanning_tree(self) -> tuple[str, ...]:
        """Deterministic spanning tree: grow from the least vertex id, always
        taking the least edge id that reaches a new vertex."""
        if self._tree is not None:
            return self._tree
        if not self.is_connected():
            raise GraphError("spanning tree of a disconnected graph")
        visited = {min(self.vertices)}
        tree: list[str] = []
        while len(visited) < len(self.vertices):
            candidate = None
            for e in self.edges:  # edges are sorted by id
                if (e.u in visited) != (e.v in visited):
                    candidate = e
                    break
            if candidate is None:
                raise GraphError("graph not connected")
            tree.append(candidate.id)
            visited.update((candidate.u, candidate.v))
        self._tree = tuple(tree)
        return self._tree

    def first_betti_number(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def incident_edges(self, vid: str) -> list[Edge]:
        return [e for e in self.edges if vid in (e.u, e.v)]

    def with_name(self, name: str) -> "GraphOfGroups":
        return GraphOfGroups(dict(self.vertices), self.edges, name)

    def __repr__(self) -> str:
        return (f"GraphOfGroups({self.name!r}, {len(self.vertices)} vertices, "
                f"{len(self.edges)} edges)")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[str, ...]
    assumptions: tuple[str, ...]
    injectivity: tuple[tuple[str, str, str], ...]  # (edge id, side, verdict)

    def __str__(self) -> str:
        lines = ["valid" if self.ok else "INVALID"]
        for e in self.errors:
            lines.append(f"error: {e}")
        for a in self.assumptions:
            lines.append(f"assumed: {a}")
        for eid, side, verdict in self.injectivity:
            lines.append(f"edge {eid} hom_{side}: injective={verdict}")
        return "\n".join(lines)


def validate(g: GraphOfGroups) -> ValidationReport:
    """Connectivity, hom well-definedness and injectivity status per edge."""
    errors: list[str] = []
    assumptions: list[str] = []
    inj: list[tuple[str, str, str]] = []
    if not g.is_connected():
        errors.append("underlying graph is not connected")
    for e in g.edges:
        for side, hom in (("u", e.hom_u), ("v", e.hom_v)):
            verdict = hom_injective(hom)
            inj.append((e.id, side, verdict))
            if verdict == NO:
                errors.append(f"edge {e.id}: hom_{side} is not injective")
            elif verdict == UNKNOWN:
                assumptions.append(
                    f"edge {e.id}: injectivity of hom_{side} ASSUMED")
    return ValidationReport(not errors, tuple(errors), tuple(assumptions), tuple(inj))


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Generators and relators of the fundamental group.

    Generators are labelled ("v", vertex id, k) for the k-th generator of a
    vertex group and ("t", edge id) for a stable letter.  Relators are words
    of signed 1-based generator indices.  Tree edges carry no letter; their
    ids are recorded in ``tree_edges``.
    """

    generators: tuple[tuple, ...]
    relations: tuple[Word, ...]
    tree_edges: tuple[str, ...]

    def index_of(self, label) -> int:
        return self.generators.index(label) + 1

    def gen_names(self) -> list[str]:
        out = []
        for lab in self.generators:
            if lab[0] == "v":
                out.append(f"{lab[1]}.g{lab[2] + 1}")
            else:
                out.append(f"t.{lab[1]}")
        return out

    def __str__(self) -> str:
        names = self.gen_names()

        def spell(word: Word) -> str:
            if not word:
                return "1"
            parts = []
            for letter in word:
                base = names[abs(letter) - 1]
                parts.append(base if letter > 0 else base + "^-1")
            return " ".join(parts)

        gens = ", ".join(names)
        rels = ", ".join(spell(r) for r in self.relations)
        return f"< {gens} | {rels} >"


class PresentationUnsupported(GroupError):
    """The graph contains a vertex kind without a stored finite presentation."""


def vertex_relations(g: GroupDescriptor) -> list[Word]:
    """Defining relators of the descriptor in its canonical generators."""
    if isinstance(g, (Trivial, Free)):
        return []
    if isinstance(g, FiniteCyclic):
        return [(1,) * g.order]
    if isinstance(g, FiniteByTable):
        rels: list[Word] = []
        e = g.identity
        rels.append((e + 1,))
        for i in range(g.order):
            for j in range(g.order):
                k = g.table[i][j]
                rels.append((i + 1, j + 1, -(k + 1)))
        return rels
    if isinstance(g, FgAbelian):
        grp = g.group
        rels = []
        for k, d in enumerate(grp.invariant_factors):
            rels.append(((grp.free_rank + k + 1),) * d)
        n = grp.ngens
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                rels.append((i, j, -i, -j))
        return rels
    if isinstance(g, Surface):
        if g.orientable:
            rel: list[int] = []
            for k in range(g.genus):
                a, b = 2 * k + 1, 2 * k + 2
                rel.extend((a, b, -a, -b))
            return [tuple(rel)]
        n = 2 * g.genus + 2
        return [tuple(x for i in range(1, n + 1) for x in (i, i))]
    if isinstance(g, VirtuallyCyclic):
        fp = g.finite_part
        n = order_of(fp)
        rels = [w for w in vertex_relations_finite_part(fp)]
        t = n + 1
        for i in range(n):
            rels.append((t, i + 1, -t, -(g.action[i] + 1)))
        return rels
    raise PresentationUnsupported(
        f"no finite presentation stored for {type(g).__name__}")


def vertex_relations_finite_part(g: GroupDescriptor) -> list[Word]:
    if isinstance(g, Trivial):
        return [(1,)] if False else []
    if isinstance(g, (FiniteCyclic, FiniteByTable)):
        if isinstance(g, FiniteCyclic):
            # inside a vc descriptor the finite part uses element-indexed
            # generators, like a table group
            n = g.order
            rels: list[Word] = [(1,)]  # identity element (index 0) dies
            for i in range(n):
                for j in range(n):
                    rels.append((i + 1, j + 1, -(((i + j) % n) + 1)))
            return rels
        return vertex_relations(g)
    raise PresentationUnsupported("virtually cyclic finite part must be finite")


def fundamental_group(g: GraphOfGroups,
                      tree: Sequence[str] | None = None) -> Presentation:
    """Presentation of the fundamental group relative to a spanning tree.

    For a single-edge graph this reproduces the amalgamated free product
    (two vertices) or the HNN extension (loop) presentation exactly.
    """
    if not g.is_connected():
        raise GraphError("fundamental group of a disconnected graph")
    tree_ids = tuple(tree) if tree is not None else g.spanning_tree()
    _check_tree(g, tree_ids)

    generators: list[tuple] = []
    offsets: dict[str, int] = {}
    for vid, desc in g.vertices.items():
        if isinstance(desc, Opaque) and desc.backref is not None:
            raise PresentationUnsupported(
                "expand component back-references before presenting")
        offsets[vid] = len(generators)
        n = generator_count(desc)  # raises for opaque kinds
        generators.extend(("v", vid, k) for k in range(n))
    letter_index: dict[str, int] = {}
    for e in g.edges:
        if e.id not in tree_ids:
            letter_index[e.id] = len(generators)
            generators.append(("t", e.id))

    def vertex_word(vid: str, local: Word) -> Word:
        off = offsets[vid]
        return tuple(x + off if x > 0 else x - off for x in local)

    relations: list[Word] = []
    for vid, desc in g.vertices.items():
        for rel in vertex_relations(desc):
            relations.append(vertex_word(vid, rel))

    for e in g.edges:
        n = generator_count(e.group)
        for k in range(n):
            gen = _standard_generator(e.group, k)
            img_u = hom_apply(e.hom_u, gen)
            img_v = hom_apply(e.hom_v, gen)
            if img_u is UNSUPPORTED or img_v is UNSUPPORTED:
                raise PresentationUnsupported(
                    f"edge {e.id}: cannot spell images of edge generators")
            wu = vertex_word(e.u, element_as_word(g.vertices[e.u], img_u))
            wv = vertex_word(e.v, element_as_word(g.vertices[e.v], img_v))
            wv_inv = tuple(-x for x in reversed(wv))
            if e.id in tree_ids:
                relations.append(wu + wv_inv)
            else:
                t = letter_index[e.id] + 1
                relations.append((-t,) + wu + (t,) + wv_inv)

    return Presentation(tuple(generators), tuple(relations), tuple(tree_ids))


def _standard_generator(desc: GroupDescriptor, k: int):
    if isinstance(desc, Trivial):
        raise GroupError("trivial group has no generators")
    if isinstance(desc, FiniteCyclic):
        if k != 0:
            raise GroupError("cyclic group has one generator")
        return 1
    if isinstance(desc, FiniteByTable):
        return k
    if isinstance(desc, FgAbelian):
        return desc.group.standard_generators()[k]
    if isinstance(desc, Free):
        return (k + 1,)
    raise GroupError(f"no standard generators for {type(desc).__name__}")


def _check_tree(g: GraphOfGroups, tree_ids: Sequence[str]) -> None:
    ids = set(tree_ids)
    if len(ids) != len(tree_ids):
        raise GraphError("duplicate edges in spanning tree")
    if len(tree_ids) != len(g.vertices) - 1:
        raise GraphError("spanning tree must have #vertices - 1 edges")
    visited = {min(g.vertices)} if g.vertices else set()
    remaining = set(tree_ids)
    while remaining:
        progressed = False
        for eid in sorted(remaining):
            e = g.edge(eid)
            if e.u in visited or e.v in visited:
                visited.update((e.u, e.v))
                remaining.discard(eid)
                progressed = True
        if not progressed:
            raise GraphError("edges do not form a spanning tree")
    if visited != set(g.vertices):
        raise GraphError("spanning tree does not reach every vertex")


def abelianization(g: GraphOfGroups) -> AbelianGroup:
    """H_1 of the fundamental group, from the presentation."""
    pres = fundamental_group(g)
    return abelianize_presentation(pres)


def abelianize_presentation(pres: Presentation) -> AbelianGroup:
    n = len(pres.generators)
    rows = []
    for rel in pres.relations:
        row = [0] * n
        for letter in rel:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    return canonicalize(IntMatrix.from_rows(rows, n))


# ---------------------------------------------------------------------------
# Path words and Britton-style reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathStep:
    edge_id: str
    sign: int  # +1 traverses u -> v, -1 traverses v -> u
    word: Word  # word in the vertex group at the far end of the traversal

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise GraphError("traversal sign must be +1 or -1")


@dataclass(frozen=True)
class PathWord:
    """g0 t1^e1 g1 ... tk^ek gk along an edge path.

    ``head`` is a word in the vertex group at ``start``; each step crosses
    an edge and carries the following vertex word.
    """

    start: str
    head: Word
    steps: tuple[PathStep, ...] = ()

    def length(self) -> int:
        return len(self.steps)


def path_vertices(g: GraphOfGroups, w: PathWord) -> list[str]:
    """The vertex sequence visited by the path; validates matching ends."""
    cur = w.start
    if cur not in g.vertices:
        raise GraphError(f"unknown start vertex {w.start!r}")
    out = [cur]
    for step in w.steps:
        e = g.edge(step.edge_id)
        if step.sign == 1:
            if e.u != cur:
                raise GraphError(
                    f"step over {e.id} expects to stand at {e.u!r}, not {cur!r}")
            cur = e.v
        else:
            if e.v != cur:
                raise GraphError(
                    f"step over {e.id} expects to stand at {e.v!r}, not {cur!r}")
            cur = e.u
        out.append(cur)
    return out


def _eval_segments(g: GraphOfGroups, w: PathWord):
    """Canonical elements for head and each step word, or UNSUPPORTED."""
    verts = path_vertices(g, w)
    head = word_eval(g.vertices[verts[0]], w.head)
    if head is UNSUPPORTED:
        return UNSUPPORTED
    elements = [head]
    for step, vid in zip(w.steps, verts[1:]):
        el = word_eval(g.vertices[vid], step.word)
        if el is UNSUPPORTED:
            return UNSUPPORTED
        elements.append(el)
    return verts, elements


def britton_reduce(g: GraphOfGroups, w: PathWord):
    """Remove pinches t^-1 (edge image) t until none remain.

    Returns the reduced PathWord, or UNSUPPORTED when a needed edge-image
    membership test has no algorithm for the kinds involved.
    """
    res = _eval_segments(g, w)
    if res is UNSUPPORTED:
        return UNSUPPORTED
    verts, elements = res
    steps = [(s.edge_id, s.sign) for s in w.steps]

    changed = True
    while changed:
        changed = False
        for i in range(len(steps) - 1):
            (e1, s1), (e2, s2) = steps[i], steps[i + 1]
            if e1 != e2 or s1 != -s2:
                continue
            e = g.edge(e1)
            # crossing with sign +1 lands at v; a pinch goes back with -1
            into = e.hom_v if s1 == 1 else e.hom_u
            outof = e.hom_u if s1 == 1 else e.hom_v
            mid = elements[i + 1]
            pre = hom_preimage(into, mid)
            if pre is UNSUPPORTED:
                return UNSUPPORTED
            if pre is None:
                continue
            carried = hom_apply(outof, pre)
            if carried is UNSUPPORTED:
                return UNSUPPORTED
            near_desc = g.vertices[verts[i]]
            merged = element_mul(near_desc,
                                 element_mul(near_desc, elements[i], carried),
                                 elements[i + 2])
            elements[i:i + 3] = [merged]
            del steps[i:i + 2]
            del verts[i + 1:i + 3]
            changed = True
            break

    head_word = element_as_word(g.vertices[verts[0]], elements[0])
    out_steps = []
    for k, (eid, sign) in enumerate(steps):
        vid = verts[k + 1]
        out_steps.append(PathStep(eid, sign,
                                  element_as_word(g.vertices[vid], elements[k + 1])))
    return PathWord(w.start, head_word, tuple(out_steps))


def has_pinch(g: GraphOfGroups, w: PathWord):
    """Directly scan a path word for a remaining pinch (for assertions)."""
    res = _eval_segments(g, w)
    if res is UNSUPPORTED:
        return UNSUPPORTED
    verts, elements = res
    for i in range(len(w.steps) - 1):
        s1, s2 = w.steps[i], w.steps[i + 1]
        if s1.edge_id != s2.edge_id or s1.sign != -s2.sign:
            continue
        e = g.edge(s1.edge_id)
        into = e.hom_v if s1.sign == 1 else e.hom_u
        pre = hom_preimage(into, elements[i + 1])
        if pre is UNSUPPORTED:
            return UNSUPPORTED
        if pre is not None:
            return True
    return False


def is_trivial_element(g: GraphOfGroups, w: PathWord):
    """'yes' / 'no' / UNSUPPORTED for a closed path word."""
    verts = path_vertices(g, w)
    if verts[-1] != verts[0]:
        raise GraphError("triviality is asked of closed paths only")
    red = britton_reduce(g, w)
    if red is UNSUPPORTED:
        return UNSUPPORTED
    if red.steps:
        return NO
    el = word_eval(g.vertices[red.start], red.head)
    return YES if is_identity_element(g.vertices[red.start], el) else NO
