"""Right modules over a PathBasisAlgebra as quiver representations.

A representation assigns to each vertex a column-vector space and to each
arrow a matrix acting source -> target; for a path "first a then b" the
acting matrix is M(b)·M(a).  All maps are column-convention: composing
"first f then g" multiplies g·f.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, Elem, Path, PathBasisAlgebra
from .linalg import (
    Mat,
    kernel_basis,
    quotient_coordinates,
    rank,
    row_space_basis,
    rref,
    solve,
    stack,
)


@dataclass
class Representation:
    algebra: PathBasisAlgebra
    dims: Dict[object, int]
    mats: Dict[str, Mat]

    @property
    def p(self) -> int:
        return self.algebra.p

    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def mat(self, arrow_name: str) -> Mat:
        return self.mats[arrow_name]

    def path_matrix(self, path: Path) -> Mat:
        M = Mat.identity(self.p, self.dims[path.source])
        for a in path.arrows:
            M = self.mats[a].mul(M)
        return M

    def elem_matrix(self, x: Elem, source, target) -> Mat:
        """Matrix of the right action of x in e_src·A·e_tgt on vertex spaces."""
        out = Mat.zero(self.p, self.dims[target], self.dims[source])
        for k, c in x.items():
            q = self.algebra.basis[k]
            if (q.source, q.target) != (source, target):
                raise AlgebraError("element does not live in e_s A e_t")
            out = out.add(self.path_matrix(q).scale(c))
        return out

    def act(self, vec: Sequence[int], vertex, x: Elem) -> Tuple[object, List[int]]:
        """Right action vec·x for vec at `vertex`; x homogeneous."""
        src, tgt = self.algebra.elem_source_target(x)
        if src != vertex:
            return tgt, [0] * self.dims[tgt]
        return tgt, self.elem_matrix(x, src, tgt).apply(vec)

    def check_relations(self) -> None:
        for rel in self.algebra.relations:
            if not rel:
                continue
            first = rel[0][1]
            src = self.algebra.quiver.arrow_by_name[first[0]].source
            acc = None
            for coeff, names in rel:
                cur = Mat.identity(self.p, self.dims[src])
                for a in names:
                    cur = self.mats[a].mul(cur)
                cur = cur.scale(coeff)
                acc = cur if acc is None else acc.add(cur)
            if acc is not None and not acc.is_zero():
                raise AlgebraError("relations do not vanish on representation")


@dataclass
class ModuleMap:
    source: Representation
    target: Representation
    mats: Dict[object, Mat]

    @property
    def p(self) -> int:
        return self.source.p

    def mat(self, v) -> Mat:
        return self.mats[v]

    def compose_after(self, first: "ModuleMap") -> "ModuleMap":
        """self ∘ first (apply `first`, then self)."""
        return ModuleMap(
            first.source,
            self.target,
            {v: self.mats[v].mul(first.mats[v]) for v in self.mats},
        )

    def add(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(
            self.source, self.target, {v: self.mats[v].add(other.mats[v]) for v in self.mats}
        )

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, {v: m.scale(c) for v, m in self.mats.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def is_module_map(self) -> bool:
        for a in self.source.algebra.quiver.arrows:
            lhs = self.mats[a.target].mul(self.source.mats[a.name])
            rhs = self.target.mats[a.name].mul(self.mats[a.source])
            if lhs != rhs:
                return False
        return True

    def is_injective(self) -> bool:
        return all(rank(m) == m.ncols for m in self.mats.values())

    def is_surjective(self) -> bool:
        return all(rank(m) == m.nrows for m in self.mats.values())

    def is_isomorphism(self) -> bool:
        return all(m.nrows == m.ncols and rank(m) == m.nrows for m in self.mats.values())


def zero_map(M: Representation, N: Representation) -> ModuleMap:
    p = M.p
    return ModuleMap(
        M, N, {v: Mat.zero(p, N.dims[v], M.dims[v]) for v in M.algebra.quiver.vertices}
    )


def identity_map(M: Representation) -> ModuleMap:
    return ModuleMap(M, M, {v: Mat.identity(M.p, M.dims[v]) for v in M.algebra.quiver.vertices})


def zero_rep(A: PathBasisAlgebra) -> Representation:
    return Representation(
        A,
        {v: 0 for v in A.quiver.vertices},
        {a.name: Mat.zero(A.p, 0, 0) for a in A.quiver.arrows},
    )


def _cache(A: PathBasisAlgebra) -> dict:
    c = getattr(A, "_rep_cache", None)
    if c is None:
        c = {}
        A._rep_cache = c
    return c


def proj_rep(A: PathBasisAlgebra, i) -> Representation:
    """Indecomposable projective P_i = e_i·A, coordinates = basis paths from i."""
    key = ("P", i)
    cache = _cache(A)
    if key in cache:
        return cache[key]
    dims = {v: len(A.basis_by_pair.get((i, v), [])) for v in A.quiver.vertices}
    mats = {}
    for arr in A.quiver.arrows:
        src_list = A.basis_by_pair.get((i, arr.source), [])
        tgt_list = A.basis_by_pair.get((i, arr.target), [])
        tgt_pos = {b: r for r, b in enumerate(tgt_list)}
        M = Mat.zero(A.p, len(tgt_list), len(src_list))
        for c, b in enumerate(src_list):
            ext = A._right_mul.get((b, arr.name), {})
            for k, coeff in ext.items():
                M.rows[tgt_pos[k]][c] = coeff
        mats[arr.name] = M
    rep = Representation(A, dims, mats)
    cache[key] = rep
    return rep


def simple_rep(A: PathBasisAlgebra, i) -> Representation:
    key = ("S", i)
    cache = _cache(A)
    if key in cache:
        return cache[key]
    dims = {v: (1 if v == i else 0) for v in A.quiver.vertices}
    mats = {
        a.name: Mat.zero(A.p, dims[a.target], dims[a.source]) for a in A.quiver.arrows
    }
    rep = Representation(A, dims, mats)
    cache[key] = rep
    return rep


def dual_rep(M: Representation) -> Representation:
    """k-dual as a module over the opposite algebra."""
    A = M.algebra
    Aop = A.opposite()
    mats = {}
    for arr in A.quiver.arrows:
        mats[arr.name] = M.mats[arr.name].transpose()
    return Representation(Aop, dict(M.dims), mats)


def inj_rep(A: PathBasisAlgebra, i) -> Representation:
    """Indecomposable injective I_i = D(A·e_i); coordinates dual to paths into i."""
    key = ("I", i)
    cache = _cache(A)
    if key in cache:
        return cache[key]
    rep = dual_rep(proj_rep(A.opposite(), i))
    cache[key] = rep
    return rep


def direct_sum(A: PathBasisAlgebra, reps: Sequence[Representation]) -> Representation:
    if not reps:
        return zero_rep(A)
    p = A.p
    dims = {v: sum(r.dims[v] for r in reps) for v in A.quiver.vertices}
    mats = {}
    for arr in A.quiver.arrows:
        M = Mat.zero(p, dims[arr.target], dims[arr.source])
        ro = co = 0
        for r in reps:
            blk = r.mats[arr.name]
            for ri in range(blk.nrows):
                for ci in range(blk.ncols):
                    M.rows[ro + ri][co + ci] = blk.rows[ri][ci]
            ro += r.dims[arr.target]
            co += r.dims[arr.source]
        mats[arr.name] = M
    return Representation(A, dims, mats)


def hom_modules(M: Representation, N: Representation) -> List[ModuleMap]:
    """Canonical basis of Hom_A(M, N) by intertwiner solve."""
    if M.algebra is not N.algebra:
        raise AlgebraError("modules over different algebras")
    A = M.algebra
    p = A.p
    verts = A.quiver.vertices
    offsets = {}
    nvars = 0
    for v in verts:
        offsets[v] = nvars
        nvars += N.dims[v] * M.dims[v]

    def var(v, r, c):
        return offsets[v] + r * M.dims[v] + c

    rows = []
    for arr in A.quiver.arrows:
        i, j = arr.source, arr.target
        Ma, Na = M.mats[arr.name], N.mats[arr.name]
        for r in range(N.dims[j]):
            for c in range(M.dims[i]):
                row = [0] * nvars
                for k in range(M.dims[j]):
                    if Ma.rows[k][c]:
                        row[var(j, r, k)] = (row[var(j, r, k)] + Ma.rows[k][c]) % p
                for k in range(N.dims[i]):
                    if Na.rows[r][k]:
                        row[var(i, k, c)] = (row[var(i, k, c)] - Na.rows[r][k]) % p
                if any(row):
                    rows.append(row)
    K = kernel_basis(Mat(p, rows, nvars))
    out = []
    for vec in K.rows:
        mats = {}
        for v in verts:
            m = Mat.zero(p, N.dims[v], M.dims[v])
            for r in range(N.dims[v]):
                for c in range(M.dims[v]):
                    m.rows[r][c] = vec[var(v, r, c)]
            mats[v] = m
        out.append(ModuleMap(M, N, mats))
    return out


def hom_dim(M: Representation, N: Representation) -> int:
    return len(hom_modules(M, N))


# -- sub/quotient machinery ---------------------------------------------------


def _coords_in_rows(rows: Mat, vec: Sequence[int]) -> List[int]:
    x = solve(rows.transpose(), vec)
    if x is None:
        raise AlgebraError("vector not in subspace")
    return x


def sub_rep(M: Representation, rows_by_vertex: Dict[object, Mat]) -> Tuple[Representation, ModuleMap]:
    """Subrepresentation spanned by given row spaces (must be arrow-stable)."""
    A = M.algebra
    p = M.p
    basis_rows = {v: row_space_basis(rows_by_vertex[v]) for v in A.quiver.vertices}
    dims = {v: basis_rows[v].nrows for v in A.quiver.vertices}
    mats = {}
    for arr in A.quiver.arrows:
        v, w = arr.source, arr.target
        Mw = basis_rows[w]
        S = Mat.zero(p, dims[w], dims[v])
        for c in range(dims[v]):
            img = M.mats[arr.name].apply(basis_rows[v].rows[c])
            col = _coords_in_rows(Mw, img) if dims[w] else []
            for r in range(dims[w]):
                S.rows[r][c] = col[r]
        mats[arr.name] = S
    S_rep = Representation(A, dims, mats)
    incl = ModuleMap(S_rep, M, {v: basis_rows[v].transpose() for v in A.quiver.vertices})
    return S_rep, incl


def quot_rep(M: Representation, rows_by_vertex: Dict[object, Mat]) -> Tuple[Representation, ModuleMap]:
    """Quotient by the subrepresentation spanned by given row spaces."""
    A = M.algebra
    p = M.p
    proj_mats = {}
    comp_cols = {}
    for v in A.quiver.vertices:
        comp, Q = quotient_coordinates(rows_by_vertex[v], M.dims[v])
        proj_mats[v] = Q
        comp_cols[v] = comp
    dims = {v: proj_mats[v].nrows for v in A.quiver.vertices}
    mats = {}
    for arr in A.quiver.arrows:
        v, w = arr.source, arr.target
        Qm = Mat.zero(p, dims[w], dims[v])
        for c, j in enumerate(comp_cols[v]):
            e = [0] * M.dims[v]
            e[j] = 1
            col = proj_mats[w].apply(M.mats[arr.name].apply(e))
            for r in range(dims[w]):
                Qm.rows[r][c] = col[r]
        mats[arr.name] = Qm
    Q_rep = Representation(A, dims, mats)
    proj = ModuleMap(M, Q_rep, proj_mats)
    return Q_rep, proj


def radical_rows(M: Representation) -> Dict[object, Mat]:
    A = M.algebra
    p = M.p
    out = {}
    for w in A.quiver.vertices:
        mats = [M.mats[a.name].transpose() for a in A.quiver.arrows if a.target == w]
        out[w] = row_space_basis(stack(p, mats, M.dims[w])) if mats else Mat(p, [], M.dims[w])
    return out


def socle_rows(M: Representation) -> Dict[object, Mat]:
    A = M.algebra
    p = M.p
    out = {}
    for v in A.quiver.vertices:
        outgoing = [a for a in A.quiver.arrows if a.source == v]
        if not outgoing:
            out[v] = Mat.identity(p, M.dims[v])
            continue
        rows = []
        for a in outgoing:
            rows.extend(M.mats[a.name].rows)
        out[v] = kernel_basis(Mat(p, rows, M.dims[v]))
    return out


def module_structure(M: Representation):
    """(radical, inclusion), (top, projection), (socle, inclusion)."""
    rad_rows = radical_rows(M)
    rad, rad_incl = sub_rep(M, rad_rows)
    top, top_proj = quot_rep(M, rad_rows)
    soc, soc_incl = sub_rep(M, socle_rows(M))
    return (rad, rad_incl), (top, top_proj), (soc, soc_incl)


# -- standard sums of projectives/injectives and algebra-entry maps -----------


def standard_proj_sum(A: PathBasisAlgebra, indices: Sequence[object]) -> Representation:
    return direct_sum(A, [proj_rep(A, i) for i in indices])


def standard_inj_sum(A: PathBasisAlgebra, indices: Sequence[object]) -> Representation:
    return direct_sum(A, [inj_rep(A, i) for i in indices])


def proj_block_offsets(A: PathBasisAlgebra, indices: Sequence[object], v) -> List[int]:
    offs = []
    pos = 0
    for i in indices:
        offs.append(pos)
        pos += len(A.basis_by_pair.get((i, v), []))
    return offs


def generator_position(A: PathBasisAlgebra, indices: Sequence[object], r: int) -> int:
    """Position of the unit-path generator of summand r at vertex indices[r]."""
    i = indices[r]
    offs = proj_block_offsets(A, indices, i)
    pair = A.basis_by_pair[(i, i)]
    unit = A.basis_index[Path(i, i, ())]
    return offs[r] + pair.index(unit)


def map_from_entries(
    A: PathBasisAlgebra,
    src_indices: Sequence[object],
    tgt_indices: Sequence[object],
    entries: Sequence[Sequence[Elem]],
) -> ModuleMap:
    """Module map ⊕P_{src} -> ⊕P_{tgt} with entry (r,c) acting by left
    multiplication by entries[r][c] in e_{tgt_r}·A·e_{src_c}."""
    p = A.p
    S = standard_proj_sum(A, src_indices)
    T = standard_proj_sum(A, tgt_indices)
    mats = {}
    for v in A.quiver.vertices:
        M = Mat.zero(p, T.dims[v], S.dims[v])
        soffs = proj_block_offsets(A, src_indices, v)
        toffs = proj_block_offsets(A, tgt_indices, v)
        for c, j in enumerate(src_indices):
            src_pair = A.basis_by_pair.get((j, v), [])
            for r, i in enumerate(tgt_indices):
                ent = entries[r][c]
                if not ent:
                    continue
                tgt_pair = A.basis_by_pair.get((i, v), [])
                tgt_pos = {b: k for k, b in enumerate(tgt_pair)}
                for cc, b in enumerate(src_pair):
                    # image of basis path b under left multiplication
                    prod = A.mul(ent, {b: 1})
                    for k, coeff in prod.items():
                        M.rows[toffs[r] + tgt_pos[k]][soffs[c] + cc] = coeff
        mats[v] = M
    return ModuleMap(S, T, mats)


def entries_from_map(
    A: PathBasisAlgebra,
    src_indices: Sequence[object],
    tgt_indices: Sequence[object],
    f: ModuleMap,
) -> List[List[Elem]]:
    """Inverse of map_from_entries for maps between standard projective sums."""
    entries: List[List[Elem]] = [[{} for _ in src_indices] for _ in tgt_indices]
    for c, j in enumerate(src_indices):
        gpos = generator_position(A, src_indices, c)
        vec = f.mats[j].transpose().rows[gpos] if f.mats[j].nrows else []
        # vec = image of the generator, a vector in ⊕P_tgt at vertex j
        toffs = proj_block_offsets(A, tgt_indices, j)
        for r, i in enumerate(tgt_indices):
            pair = A.basis_by_pair.get((i, j), [])
            ent: Elem = {}
            for k, b in enumerate(pair):
                coeff = vec[toffs[r] + k]
                if coeff:
                    ent[b] = coeff
            entries[r][c] = ent
    return entries


def nu_entry_mats(A: PathBasisAlgebra, ent: Elem, i, j) -> Dict[object, Mat]:
    """Per-vertex matrices of ν(ent): I_j -> I_i for ent in e_i·A·e_j."""
    p = A.p
    out = {}
    for v in A.quiver.vertices:
        src_pair = A.basis_by_pair.get((v, i), [])  # coordinates of (I_i)_v
        tgt_pair = A.basis_by_pair.get((v, j), [])  # coordinates of (I_j)_v
        R = Mat.zero(p, len(tgt_pair), len(src_pair))
        tgt_pos = {b: k for k, b in enumerate(tgt_pair)}
        for c, b in enumerate(src_pair):
            prod = A.mul({b: 1}, ent)  # right multiplication x -> x·ent
            for k, coeff in prod.items():
                R.rows[tgt_pos[k]][c] = coeff
        out[v] = R.transpose()
    return out


def map_from_entries_inj(
    A: PathBasisAlgebra,
    src_indices: Sequence[object],
    tgt_indices: Sequence[object],
    entries: Sequence[Sequence[Elem]],
) -> ModuleMap:
    """ν of an entry matrix: map ⊕I_{src} -> ⊕I_{tgt} where entries[r][c]
    lies in e_{tgt_r}·A·e_{src_c} (same data as the projective-side map)."""
    p = A.p
    S = standard_inj_sum(A, src_indices)
    T = standard_inj_sum(A, tgt_indices)
    mats = {}
    for v in A.quiver.vertices:
        M = Mat.zero(p, T.dims[v], S.dims[v])
        soff = 0
        soffs = []
        for j in src_indices:
            soffs.append(soff)
            soff += len(A.basis_by_pair.get((v, j), []))
        toff = 0
        toffs = []
        for i in tgt_indices:
            toffs.append(toff)
            toff += len(A.basis_by_pair.get((v, i), []))
        for c, j in enumerate(src_indices):
            for r, i in enumerate(tgt_indices):
                ent = entries[r][c]
                if not ent:
                    continue
                blk = nu_entry_mats(A, ent, i, j)[v]
                for rr in range(blk.nrows):
                    for cc in range(blk.ncols):
                        if blk.rows[rr][cc]:
                            M.rows[toffs[r] + rr][soffs[c] + cc] = blk.rows[rr][cc]
        mats[v] = M
    return ModuleMap(S, T, mats)


# -- covers and envelopes ------------------------------------------------------


def projective_cover(M: Representation) -> Tuple[Representation, ModuleMap, List[object]]:
    """(P, cover P -> M, summand indices); kernel of the cover is superfluous."""
    A = M.algebra
    p = M.p
    rad = radical_rows(M)
    indices: List[object] = []
    gens: List[Tuple[object, List[int]]] = []
    for v in A.quiver.vertices:
        comp, _ = quotient_coordinates(rad[v], M.dims[v])
        for j in comp:
            e = [0] * M.dims[v]
            e[j] = 1
            indices.append(v)
            gens.append((v, e))
    P = standard_proj_sum(A, indices)
    mats = {}
    for w in A.quiver.vertices:
        cols: List[List[int]] = []
        for (v, x) in gens:
            for b in A.basis_by_pair.get((v, w), []):
                q = A.basis[b]
                vec = list(x)
                cur = v
                for a in q.arrows:
                    vec = M.mats[a].apply(vec)
                    cur = A.quiver.arrow_by_name[a].target
                cols.append(vec)
        mat = Mat.zero(p, M.dims[w], len(cols))
        for c, col in enumerate(cols):
            for r in range(M.dims[w]):
                mat.rows[r][c] = col[r]
        mats[w] = mat
    cover = ModuleMap(P, M, mats)
    if not cover.is_surjective():
        raise AlgebraError("projective cover construction failed")
    return P, cover, indices


def injective_envelope(M: Representation) -> Tuple[Representation, ModuleMap, List[object]]:
    """(I, embedding M -> I, summand indices) via the opposite algebra."""
    W = dual_rep(M)
    P, cover, indices = projective_cover(W)
    I = standard_inj_sum(M.algebra, indices)
    # dual of the cover: per-vertex transposes, using dual coordinates
    emb = ModuleMap(M, I, {v: cover.mats[v].transpose() for v in M.algebra.quiver.vertices})
    if not emb.is_injective():
        raise AlgebraError("injective envelope construction failed")
    return I, emb, indices


def proj_multiplicities(P: Representation) -> Dict[object, int]:
    """Multiplicity of each P_i in a projective module (via its top)."""
    rad = radical_rows(P)
    out = {}
    for v in P.algebra.quiver.vertices:
        out[v] = P.dims[v] - rad[v].nrows
    return out


def nakayama_module(P: Representation) -> Representation:
    """ν(P) = ⊕ I_i^{mult}, for P projective; raises if P is not projective."""
    A = P.algebra
    mult = proj_multiplicities(P)
    indices = [v for v in A.quiver.vertices for _ in range(mult[v])]
    std = standard_proj_sum(A, indices)
    if std.dim_vector() != P.dim_vector():
        raise AlgebraError("input is not projective")
    return standard_inj_sum(A, indices)


def mat_inverse(M: Mat) -> Mat:
    if M.nrows != M.ncols:
        raise AlgebraError("not square")
    n = M.nrows
    aug = Mat(M.p, [M.rows[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)], 2 * n)
    R, rk, piv = rref(aug)
    if rk < n or piv[:n] != list(range(n)):
        raise AlgebraError("matrix not invertible")
    return Mat(M.p, [R.rows[i][n:] for i in range(n)], n)


def map_inverse(f: ModuleMap) -> ModuleMap:
    return ModuleMap(f.target, f.source, {v: mat_inverse(m) for v, m in f.mats.items()})


def radical_hom(M: Representation, N: Representation) -> Optional[ModuleMap]:
    """The canonical radical morphism M -> N when it is unique up to scalar:
    the nonzero non-invertible map, if the non-invertible maps form a line
    (or the whole space is one line).  Returns None when ambiguous."""
    homs = hom_modules(M, N)
    if len(homs) == 1:
        return homs[0]
    if not homs or len(homs) > 12:
        return None
    import itertools

    p = M.p
    non_inv = []
    for coeffs in itertools.product(range(p), repeat=len(homs)):
        if not any(coeffs):
            continue
        f = None
        for c, h in zip(coeffs, homs):
            if c:
                f = h.scale(c) if f is None else f.add(h.scale(c))
        if not f.is_isomorphism():
            non_inv.append(f)
    if len(non_inv) == p - 1:  # a single line of radical maps
        return non_inv[0]
    return None


def iso_modules(M: Representation, N: Representation, tries: int = 4096) -> Optional[ModuleMap]:
    """An isomorphism M ≅ N, or None (exhaustive for small hom spaces)."""
    if M.dim_vector() != N.dim_vector():
        return None
    homs = hom_modules(M, N)
    if not homs:
        return identity_map(M) if M.total_dim == 0 else None
    p = M.p
    d = len(homs)
    if p ** d <= tries:
        import itertools

        for coeffs in itertools.product(range(p), repeat=d):
            if not any(coeffs):
                continue
            f = None
            for c, h in zip(coeffs, homs):
                if c:
                    f = h.scale(c) if f is None else f.add(h.scale(c))
            if f.is_isomorphism():
                return f
    else:
        import random

        rng = random.Random(0xBEEF)
        for _ in range(tries):
            coeffs = [rng.randrange(p) for _ in range(d)]
            if not any(coeffs):
                continue
            f = None
            for c, h in zip(coeffs, homs):
                if c:
                    f = h.scale(c) if f is None else f.add(h.scale(c))
            if f.is_isomorphism():
                return f
    return None
