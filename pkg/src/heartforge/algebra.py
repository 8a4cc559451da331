"""Finite-dimensional quiver algebras A = kQ/I with an explicit path basis.

Paths compose left to right: `ab` is "first a then b".  The algebra is
built by enumerating paths of increasing length and reducing against the
relation ideal with exact linear algebra; the construction terminates
exactly when the ideal is admissible at the configured caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .linalg import FieldSpec, Mat, rref


class AlgebraError(Exception):
    pass


class NonAdmissibleError(AlgebraError):
    pass


class DimensionOverflowError(AlgebraError):
    pass


class Arrow(NamedTuple):
    name: str
    source: object
    target: object


class Path(NamedTuple):
    source: object
    target: object
    arrows: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


class Quiver:
    """A finite quiver with ordered vertices and named arrows."""

    def __init__(self, vertices: Sequence[object], arrows: Sequence[Tuple[str, object, object]]):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex ids")
        vset = set(self.vertices)
        self.arrows = []
        names = set()
        for name, s, t in arrows:
            if name in names:
                raise AlgebraError(f"duplicate arrow name {name!r}")
            if s not in vset or t not in vset:
                raise AlgebraError(f"arrow {name!r} has unknown endpoint")
            names.add(name)
            self.arrows.append(Arrow(name, s, t))
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.arrows_from = {v: [a for a in self.arrows if a.source == v] for v in self.vertices}
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}

    def reverse(self) -> "Quiver":
        return Quiver(self.vertices, [(a.name, a.target, a.source) for a in self.arrows])


# A relation is a k-linear combination of parallel paths of length >= 2,
# encoded as a list of (coeff, arrow-name tuple).
Relation = List[Tuple[int, Tuple[str, ...]]]

Elem = Dict[int, int]  # algebra element: basis index -> coefficient


def elem_add(p: int, x: Elem, y: Elem) -> Elem:
    out = dict(x)
    for k, c in y.items():
        v = (out.get(k, 0) + c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def elem_scale(p: int, c: int, x: Elem) -> Elem:
    c %= p
    if c == 0:
        return {}
    return {k: (c * v) % p for k, v in x.items()}


@dataclass
class PathBasisAlgebra:
    quiver: Quiver
    field: FieldSpec
    m: int
    basis: List[Path] = field(default_factory=list)
    basis_index: Dict[Path, int] = field(default_factory=dict)
    basis_by_pair: Dict[Tuple[object, object], List[int]] = field(default_factory=dict)
    reduction: Dict[Path, Elem] = field(default_factory=dict)
    nilpotency_bound: int = 0
    relations: List[Relation] = field(default_factory=list)
    _opposite: Optional["PathBasisAlgebra"] = None
    _right_mul: Dict[Tuple[int, str], Elem] = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    # -- element arithmetic -------------------------------------------------

    def unit_path(self, vertex) -> Elem:
        return {self.basis_index[Path(vertex, vertex, ())]: 1}

    def reduce_path(self, path: Path) -> Elem:
        """Class of an arbitrary path in the chosen basis."""
        if path in self.reduction:
            return dict(self.reduction[path])
        # fold arrow by arrow; every intermediate stays within table range
        cur = Path(path.source, path.source, ())
        out = self.reduce_known(cur)
        for a in path.arrows:
            out = self.right_mul_arrow(out, a)
        return out

    def reduce_known(self, path: Path) -> Elem:
        red = self.reduction.get(path)
        if red is None:
            raise AlgebraError(f"path {path} outside reduction table")
        return dict(red)

    def right_mul_arrow(self, x: Elem, arrow_name: str) -> Elem:
        p = self.p
        out: Elem = {}
        for k, c in x.items():
            ext = self._right_mul.get((k, arrow_name))
            if ext is None:
                continue
            out = elem_add(p, out, elem_scale(p, c, ext))
        return out

    def mul(self, x: Elem, y: Elem) -> Elem:
        """Product x·y, i.e. "first x then y" on paths."""
        p = self.p
        out: Elem = {}
        for k2, c2 in y.items():
            q = self.basis[k2]
            term: Elem = {}
            for k1, c1 in x.items():
                pth = self.basis[k1]
                if pth.target != q.source:
                    continue
                cur: Elem = {k1: c1}
                for a in q.arrows:
                    cur = self.right_mul_arrow(cur, a)
                term = elem_add(p, term, cur)
            out = elem_add(p, out, elem_scale(p, c2, term))
        return out

    def elem_source_target(self, x: Elem) -> Tuple[object, object]:
        pairs = {(self.basis[k].source, self.basis[k].target) for k in x}
        if len(pairs) != 1:
            raise AlgebraError("element not homogeneous in (source, target)")
        return next(iter(pairs))

    def trivial_coeff(self, x: Elem, vertex) -> int:
        idx = self.basis_index[Path(vertex, vertex, ())]
        return x.get(idx, 0)

    def is_radical(self, x: Elem) -> bool:
        return all(self.basis[k].length > 0 for k in x)

    def local_inverse(self, x: Elem, vertex) -> Elem:
        """Inverse of a unit of e_v A e_v (nonzero coefficient on e_v)."""
        p = self.p
        c = self.trivial_coeff(x, vertex)
        if c == 0:
            raise AlgebraError("not a unit in e_v A e_v")
        cinv = self.field.inv(c)
        e = self.unit_path(vertex)
        r = elem_scale(p, cinv, elem_add(p, x, elem_scale(p, p - c, e)))  # c^{-1}·(x - c·e)
        # (c(e + r))^{-1} = c^{-1} * sum (-r)^k, r nilpotent
        out = dict(e)
        power = dict(e)
        while True:
            power = self.mul(power, elem_scale(p, p - 1, r))
            if not power:
                break
            out = elem_add(p, out, power)
        return elem_scale(p, cinv, out)

    # -- opposite algebra ---------------------------------------------------

    def opposite(self) -> "PathBasisAlgebra":
        if self._opposite is None:
            self._opposite = _build_opposite(self)
        return self._opposite

    def op_elem(self, x: Elem) -> Elem:
        """Transport an element to the opposite algebra (reverse each path)."""
        self.opposite()
        return dict(x)  # basis indices are shared by construction


def _path_key(quiver: Quiver, path: Path):
    arr_idx = {a.name: i for i, a in enumerate(quiver.arrows)}
    return (
        path.length,
        quiver.vertex_index[path.source],
        tuple(arr_idx[a] for a in path.arrows),
    )


def build_algebra(
    quiver: Quiver,
    relations: Sequence[Relation],
    field: FieldSpec,
    m: int,
    max_dim: int = 512,
    max_len: int = 24,
) -> PathBasisAlgebra:
    """Construct A = kQ/I with a reduced path basis.

    Relations must be linear combinations of parallel paths of length >= 2.
    Raises NonAdmissibleError when paths fail to die off by `max_len` and
    DimensionOverflowError past `max_dim`.
    """
    if m < 1:
        raise AlgebraError("extension degree m must be >= 1")
    p = field.p
    rels: List[Tuple[object, object, List[Tuple[int, Path]]]] = []
    for rel in relations:
        if not rel:
            continue
        terms = []
        st = None
        for coeff, arrow_names in rel:
            if len(arrow_names) < 2:
                raise AlgebraError("relation paths must have length >= 2")
            src = quiver.arrow_by_name[arrow_names[0]].source
            cur = src
            for a in arrow_names:
                arr = quiver.arrow_by_name[a]
                if arr.source != cur:
                    raise AlgebraError(f"non-composable relation path {arrow_names}")
                cur = arr.target
            pth = Path(src, cur, tuple(arrow_names))
            if st is None:
                st = (src, cur)
            elif st != (src, cur):
                raise AlgebraError("relation not homogeneous in (source, target)")
            terms.append((coeff % p, pth))
        rels.append((st[0], st[1], terms))

    # enumerate paths by length
    paths_by_len: List[List[Path]] = [[Path(v, v, ()) for v in quiver.vertices]]

    def extend_paths():
        nxt = []
        for pth in paths_by_len[-1]:
            for arr in quiver.arrows_from[pth.target]:
                nxt.append(Path(pth.source, arr.target, pth.arrows + (arr.name,)))
        paths_by_len.append(nxt)

    basis: List[Path] = []
    reduction: Dict[Path, Elem] = {}
    L = 1
    prev_dim = -1
    while True:
        extend_paths()
        all_paths = [pth for layer in paths_by_len for pth in layer]
        if len(all_paths) > 200000:
            raise NonAdmissibleError("path explosion; ideal not admissible at caps")
        order = sorted(all_paths, key=lambda q: _path_key(quiver, q), reverse=True)
        col_of = {q: j for j, q in enumerate(order)}
        rows = []
        for src, tgt, terms in rels:
            for u in all_paths:
                if u.target != src:
                    continue
                for v in all_paths:
                    if v.source != tgt:
                        continue
                    if u.length + max(t[1].length for t in terms) + v.length > L:
                        continue
                    row = [0] * len(order)
                    for coeff, pth in terms:
                        w = Path(u.source, v.target, u.arrows + pth.arrows + v.arrows)
                        row[col_of[w]] = (row[col_of[w]] + coeff) % p
                    rows.append(row)
        R, rk, pivots = rref(Mat(p, rows, len(order)))
        piv_set = set(pivots)
        basis = [order[j] for j in range(len(order)) if j not in piv_set]
        basis.sort(key=lambda q: _path_key(quiver, q))
        if len(basis) > max_dim:
            raise DimensionOverflowError(f"dim A exceeds cap {max_dim}")
        reduction = {}
        basis_pos = {q: i for i, q in enumerate(basis)}
        non_piv = [j for j in range(len(order)) if j not in piv_set]
        bidx_of_col = {j: basis_pos[order[j]] for j in non_piv}
        for q in basis:
            reduction[q] = {basis_pos[q]: 1}
        for i, pc in enumerate(pivots):
            red: Elem = {}
            for j in non_piv:
                c = R.rows[i][j]
                if c:
                    red[bidx_of_col[j]] = (-c) % p
            reduction[order[pc]] = red
        top_basis_len = max((q.length for q in basis), default=0)
        if L >= top_basis_len + 3 and len(basis) == prev_dim:
            break
        prev_dim = len(basis)
        L += 1
        if L > max_len:
            cyc = next(
                (q for q in basis if q.length >= 1 and len(set((q.source,) + tuple(
                    quiver.arrow_by_name[a].target for a in q.arrows))) <= q.length),
                None,
            )
            raise NonAdmissibleError(
                f"paths do not die off by length {max_len}; offending cycle: {cyc}"
            )

    A = PathBasisAlgebra(quiver=quiver, field=field, m=m, relations=[r for r in relations])
    A.basis = basis
    A.basis_index = {q: i for i, q in enumerate(basis)}
    A.basis_by_pair = {}
    for i, q in enumerate(basis):
        A.basis_by_pair.setdefault((q.source, q.target), []).append(i)
    A.reduction = reduction
    A.nilpotency_bound = max((q.length for q in basis), default=0) + 1
    # right-multiplication table: basis element times an arrow
    for i, q in enumerate(basis):
        for arr in quiver.arrows_from[q.target]:
            ext = Path(q.source, arr.target, q.arrows + (arr.name,))
            red = reduction.get(ext)
            if red is None:
                raise AlgebraError("reduction table too shallow; raise max_len")
            A._right_mul[(i, arr.name)] = {k: c for k, c in red.items() if c}
    return A


def _build_opposite(A: PathBasisAlgebra) -> PathBasisAlgebra:
    """Opposite algebra sharing basis indices: basis path k is reversed."""
    qop = A.quiver.reverse()
    op = PathBasisAlgebra(quiver=qop, field=A.field, m=A.m)
    op.relations = [
        [(c, tuple(reversed(names))) for c, names in rel] for rel in A.relations
    ]

    def rev(path: Path) -> Path:
        return Path(path.target, path.source, tuple(reversed(path.arrows)))

    op.basis = [rev(q) for q in A.basis]
    op.basis_index = {q: i for i, q in enumerate(op.basis)}
    op.basis_by_pair = {}
    for i, q in enumerate(op.basis):
        op.basis_by_pair.setdefault((q.source, q.target), []).append(i)
    op.reduction = {rev(q): dict(red) for q, red in A.reduction.items()}
    op.nilpotency_bound = A.nilpotency_bound
    # x ·op a  (append arrow a to reversed path) == a · x in A (prepend)
    for i, q in enumerate(A.basis):
        for arr in A.quiver.arrows:
            if arr.target != q.source:
                continue
            ext = Path(arr.source, q.target, (arr.name,) + q.arrows)
            red = A.reduction.get(ext)
            if red is None:
                raise AlgebraError("reduction table too shallow for opposite")
            op._right_mul[(i, arr.name)] = {k: c for k, c in red.items() if c}
    op._opposite = A
    A._opposite = op
    return op
