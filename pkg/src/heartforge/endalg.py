"""Finite-dimensional F_p-algebras: radicals, idempotents, and the
Krull-Schmidt splitting of minimal complexes of projectives.

The radical is computed with the integer-lift trace functionals that stay
valid in small characteristic; the result is verified at runtime to be a
nilpotent two-sided ideal.  Idempotents are found by factoring minimal
polynomials of scanned elements (Berlekamp over F_p) and lifting the CRT
idempotents, which are strict because they live in a commutative
subalgebra.
"""

from __future__ import annotations

import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, Elem, PathBasisAlgebra, elem_add, elem_scale
from .linalg import Mat, kernel_basis, rank, row_space_basis, rref, solve

Poly = List[int]  # coefficients, low degree first, over F_p


def poly_trim(f: Poly) -> Poly:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_deg(f: Poly) -> int:
    return len(f) - 1


def poly_mul(p: int, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = (out[i + j] + a * b) % p
    return poly_trim(out)


def poly_divmod(p: int, f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    f = f[:]
    g = poly_trim(g[:])
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(poly_trim(f)) >= len(g):
        f = poly_trim(f)
        d = len(f) - len(g)
        c = (f[-1] * inv) % p
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = (f[d + i] - c * b) % p
    return poly_trim(q), poly_trim(f)


def poly_mod(p: int, f: Poly, g: Poly) -> Poly:
    return poly_divmod(p, f, g)[1]


def poly_gcd(p: int, f: Poly, g: Poly) -> Poly:
    f, g = poly_trim(f[:]), poly_trim(g[:])
    while g:
        f, g = g, poly_mod(p, f, g)
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [(c * inv) % p for c in f]
    return f


def poly_powmod(p: int, f: Poly, e: int, mod: Poly) -> Poly:
    out = [1]
    base = poly_mod(p, f, mod)
    while e:
        if e & 1:
            out = poly_mod(p, poly_mul(p, out, base), mod)
        base = poly_mod(p, poly_mul(p, base, base), mod)
        e >>= 1
    return out


def poly_deriv(p: int, f: Poly) -> Poly:
    return poly_trim([(i * c) % p for i, c in enumerate(f)][1:])


def _berlekamp_squarefree(p: int, f: Poly) -> List[Poly]:
    """Irreducible factors of a squarefree monic f over F_p."""
    n = poly_deg(f)
    if n <= 1:
        return [f]
    # Berlekamp matrix: rows are x^{ip} mod f
    rows = []
    for i in range(n):
        xi = poly_powmod(p, [0, 1], i * p, f)
        row = [xi[j] if j < len(xi) else 0 for j in range(n)]
        row[i] = (row[i] - 1) % p
        rows.append(row)
    K = kernel_basis(Mat(p, rows, n).transpose())
    if K.nrows <= 1:
        return [f]
    # any kernel vector beyond the constants splits f
    for vec in K.rows:
        g = poly_trim(list(vec))
        if poly_deg(g) < 1:
            continue
        for c in range(p):
            h = poly_gcd(p, f, poly_trim([(g[0] - c) % p] + g[1:]))
            if 0 < poly_deg(h) < n:
                q, r = poly_divmod(p, f, h)
                assert not r
                return _berlekamp_squarefree(p, h) + _berlekamp_squarefree(p, q)
    return [f]


def poly_factor(p: int, f: Poly) -> List[Tuple[Poly, int]]:
    """Monic irreducible factorization over F_p as [(factor, multiplicity)]."""
    f = poly_trim(f[:])
    if poly_deg(f) < 1:
        return []
    inv = pow(f[-1], p - 2, p)
    f = [(c * inv) % p for c in f]
    out: Dict[Tuple[int, ...], int] = {}

    def add(g: Poly, mult: int):
        key = tuple(g)
        out[key] = out.get(key, 0) + mult

    def work(f: Poly, mult: int):
        if poly_deg(f) < 1:
            return
        d = poly_deriv(p, f)
        if not d:
            # f = g(x)^p over F_p
            g = [f[i] for i in range(0, len(f), p)]
            work(g, mult * p)
            return
        sq = poly_gcd(p, f, d)
        squarefree, _ = poly_divmod(p, f, sq)
        rem = f[:]
        for g in _berlekamp_squarefree(p, squarefree):
            total = 0
            while True:
                qq, rr = poly_divmod(p, rem, g)
                if rr:
                    break
                total += 1
                rem = qq
            add(g, mult * total)
        # remaining factors have multiplicity divisible by p
        work(rem, mult)

    work(f, 1)
    return [(list(k), v) for k, v in sorted(out.items())]


class FiniteDimAlgebra:
    """Associative unital F_p-algebra given by basis and multiplication."""

    def __init__(self, p: int, dim: int, mul: Callable[[List[int], List[int]], List[int]], unit: List[int]):
        self.p = p
        self.dim = dim
        self.mul = mul
        self.unit = list(unit)
        self._left_mats: Dict[Tuple[int, ...], Mat] = {}

    def basis_vec(self, i: int) -> List[int]:
        v = [0] * self.dim
        v[i] = 1
        return v

    def left_mult_matrix(self, x: Sequence[int]) -> Mat:
        key = tuple(x)
        if key in self._left_mats:
            return self._left_mats[key]
        cols = [self.mul(list(x), self.basis_vec(j)) for j in range(self.dim)]
        M = Mat(self.p, [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)], self.dim)
        self._left_mats[key] = M
        return M

    def minimal_polynomial(self, x: Sequence[int]) -> Poly:
        """Minimal polynomial of x acting in the unital subalgebra F_p[x]."""
        p = self.p
        powers = [self.unit[:]]
        cur = self.unit[:]
        while True:
            rows = Mat(p, powers, self.dim)
            cur = self.mul(cur, list(x))
            aug = Mat(p, powers + [cur], self.dim)
            if rank(aug) == rank(rows):
                coeffs = solve(rows.transpose(), cur)
                mu = [(-c) % p for c in coeffs] + [1]
                return poly_trim(mu)
            powers.append(cur[:])
            if len(powers) > self.dim + 1:
                raise AlgebraError("minimal polynomial search overflow")

    def eval_poly(self, f: Poly, x: Sequence[int]) -> List[int]:
        p = self.p
        out = [0] * self.dim
        for c in reversed(f):
            out = self.mul(out, list(x))
            if c:
                out = [(a + c * b) % p for a, b in zip(out, self.unit)]
        return out

    def is_nilpotent(self, x: Sequence[int]) -> bool:
        mu = self.minimal_polynomial(x)
        return all(c == 0 for c in mu[:-1])

    def radical_basis(self) -> List[List[int]]:
        """Jacobson radical via integer-lift trace functionals (char-p safe).

        Stage i cuts with x,y -> (Tr((XY)^{p^i}) mod p^{i+1})/p^i on integer
        lifts of regular-representation matrices; the result is verified to
        be a nilpotent two-sided ideal.
        """
        p = self.p
        n = self.dim
        if n == 0:
            return []
        cur: List[List[int]] = [self.basis_vec(i) for i in range(n)]
        i = 0
        while True:
            q = p ** i
            lifts = []
            for b in cur:
                M = self.left_mult_matrix(b)
                lifts.append([[int(e) for e in row] for row in M.rows])
            rows = []
            for y_lift in lifts:
                row = []
                for x_lift in lifts:
                    prod = _int_matmul(x_lift, y_lift)
                    tr = _int_trace_power(prod, q)
                    if tr % q:
                        raise AlgebraError("radical trace functional not divisible")
                    row.append((tr // q) % p)
                rows.append(row)
            # kernel in coordinates of `cur`
            K = kernel_basis(Mat(p, rows, len(cur)).transpose())
            nxt = []
            for vec in K.rows:
                w = [0] * n
                for c, b in zip(vec, cur):
                    if c:
                        w = [(a + c * bb) % p for a, bb in zip(w, b)]
                nxt.append(w)
            cur = [r for r in row_space_basis(Mat(p, nxt, n)).rows]
            if not cur or q >= n:
                break
            i += 1
        self._verify_radical(cur)
        return cur

    def _verify_radical(self, rad: List[List[int]]) -> None:
        if not rad:
            return
        p = self.p
        n = self.dim
        R = row_space_basis(Mat(p, rad, n))
        # two-sided ideal
        for b in range(self.dim):
            e = self.basis_vec(b)
            for r in R.rows:
                for prod in (self.mul(e, list(r)), self.mul(list(r), e)):
                    if rank(Mat(p, R.rows + [prod], n)) != R.nrows:
                        raise AlgebraError("radical verification failed: not an ideal")
        # nilpotent: powers of the subspace shrink to zero
        cur = R
        for _ in range(self.dim + 1):
            if cur.nrows == 0:
                return
            prods = []
            for r in cur.rows:
                for s in R.rows:
                    prods.append(self.mul(list(r), list(s)))
            cur = row_space_basis(Mat(p, prods, n))
        raise AlgebraError("radical verification failed: not nilpotent")

    def find_nontrivial_idempotent(self, scan_budget: int = 64) -> Optional[List[int]]:
        """A strict idempotent e not in {0, 1}, or None if none found."""
        p = self.p
        if self.dim <= 1:
            return None
        cands: List[List[int]] = [self.basis_vec(i) for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                cands.append([(a + b) % p for a, b in zip(self.basis_vec(i), self.basis_vec(j))])
        rng = random.Random(0xC0FFEE + self.dim)
        for _ in range(scan_budget):
            cands.append([rng.randrange(p) for _ in range(self.dim)])
        for y in cands:
            if not any(y):
                continue
            mu = self.minimal_polynomial(y)
            fac = poly_factor(p, mu)
            if len(fac) < 2:
                continue
            f1, e1 = fac[0]
            g = [1]
            for f2, e2 in fac[1:]:
                for _ in range(e2):
                    g = poly_mul(p, g, f2)
            # 1 = a·f1^{e1} + b·g; idempotent for the f1-primary block is (b·g)(y)
            f1e = [1]
            for _ in range(e1):
                f1e = poly_mul(p, f1e, f1)
            b = _poly_inverse_mod(p, g, f1e)
            if b is None:
                continue
            e = self.eval_poly(poly_mod(p, poly_mul(p, b, g), mu), y)
            if not any(e):
                continue
            if e == self.unit:
                continue
            if self.mul(e, e) != e:
                raise AlgebraError("constructed idempotent not strict")
            return e
        return None


def _poly_inverse_mod(p: int, f: Poly, mod: Poly) -> Optional[Poly]:
    # extended Euclid
    r0, r1 = poly_trim(mod[:]), poly_mod(p, f, mod)
    s0, s1 = [], [1]
    while r1:
        q, r2 = poly_divmod(p, r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, poly_trim([(a - b) % p for a, b in _pad(s0, poly_mul(p, q, s1))])
    if poly_deg(r0) != 0:
        return None
    inv = pow(r0[0], p - 2, p)
    return poly_trim([(c * inv) % p for c in s0])


def _pad(f: Poly, g: Poly) -> List[Tuple[int, int]]:
    n = max(len(f), len(g))
    return [(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]


def _int_matmul(A: List[List[int]], B: List[List[int]]) -> List[List[int]]:
    n = len(A)
    m = len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for k, a in enumerate(Ai):
            if a:
                Bk = B[k]
                row = out[i]
                for j, b in enumerate(Bk):
                    if b:
                        row[j] += a * b
    return out


def _int_trace_power(M: List[List[int]], e: int) -> int:
    n = len(M)
    if n == 0:
        return 0
    P = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = M
    k = e
    while k:
        if k & 1:
            P = _int_matmul(P, base)
        base = _int_matmul(base, base)
        k >>= 1
    return sum(P[i][i] for i in range(n))


# -- chain endomorphism algebras and complex splitting -------------------------


def chain_end_algebra(C) -> Tuple[FiniteDimAlgebra, List]:
    """(E, basis chain maps) for the strict chain endomorphisms of C.

    Элements are coordinate vectors over the chain-map solution basis; the
    product composes entry matrices.
    """
    from .complexes import HomSpace, PPChainMap, _pm_to_entries, compose_entries, pp_identity

    A = C.algebra
    p = A.p
    hs = HomSpace(C, C.to_module_complex())
    sols = hs.solutions
    d = sols.nrows

    basis_entries = []
    for vec in sols.rows:
        f = hs.vec_to_map(vec)
        basis_entries.append(_pm_to_entries(f, C))

    sols_t = sols.transpose()

    def entries_to_vec(comps: Dict[int, list]) -> List[int]:
        # flatten in the same coordinate layout as HomSpace variables
        vec = [0] * hs._nvars
        pos = 0
        for (k, r, dd) in hs.var_layout:
            ents = comps.get(k)
            i = C.term(k)[r]
            flat = []
            if ents is None:
                flat = [0] * dd
            else:
                for s, j in enumerate(C.term(k)):
                    pair = A.basis_by_pair.get((j, i), [])
                    ent = ents[s][r]
                    flat.extend(ent.get(b, 0) for b in pair)
            for t in range(dd):
                vec[pos + t] = flat[t] if t < len(flat) else 0
            pos += dd
        return vec

    def coords(vec: List[int]) -> List[int]:
        x = solve(sols_t, vec)
        if x is None:
            raise AlgebraError("composition left the chain-map space")
        return x

    def mul(xc: List[int], yc: List[int]) -> List[int]:
        # composite "first y then x" per algebra convention f∘g
        out: Dict[int, list] = {}
        for k in C.terms:
            nr = len(C.term(k))
            acc = [[{} for _ in range(nr)] for _ in range(nr)]
            for cf, ents in zip(xc, basis_entries):
                if not cf:
                    continue
                ek = ents.get(k)
                if ek is None:
                    continue
                for rr in range(nr):
                    for cc in range(nr):
                        if ek[rr][cc]:
                            acc[rr][cc] = elem_add(p, acc[rr][cc], elem_scale(p, cf, ek[rr][cc]))
            out[k] = acc
        x_ent = out
        y_ent: Dict[int, list] = {}
        for k in C.terms:
            nr = len(C.term(k))
            acc = [[{} for _ in range(nr)] for _ in range(nr)]
            for cf, ents in zip(yc, basis_entries):
                if not cf:
                    continue
                ek = ents.get(k)
                if ek is None:
                    continue
                for rr in range(nr):
                    for cc in range(nr):
                        if ek[rr][cc]:
                            acc[rr][cc] = elem_add(p, acc[rr][cc], elem_scale(p, cf, ek[rr][cc]))
            y_ent[k] = acc
        comp = {k: compose_entries(A, x_ent[k], y_ent[k]) for k in C.terms}
        return coords(entries_to_vec(comp))

    ident = pp_identity(C)
    unit_vec = coords(entries_to_vec({k: ident.component(k) for k in C.terms}))
    E = FiniteDimAlgebra(p, d, mul, unit_vec)
    return E, (hs, basis_entries)


def _entries_of_coords(hs, basis_entries, coords: Sequence[int], C):
    from .complexes import compose_entries

    A = C.algebra
    p = A.p
    out = {}
    for k in C.terms:
        nr = len(C.term(k))
        acc = [[{} for _ in range(nr)] for _ in range(nr)]
        for cf, ents in zip(coords, basis_entries):
            if not cf:
                continue
            ek = ents.get(k)
            if ek is None:
                continue
            for rr in range(nr):
                for cc in range(nr):
                    if ek[rr][cc]:
                        acc[rr][cc] = elem_add(p, acc[rr][cc], elem_scale(p, cf, ek[rr][cc]))
        out[k] = acc
    return out


def entries_identity(A: PathBasisAlgebra, idx) -> List[List[Elem]]:
    return [
        [A.unit_path(i) if r == c else {} for c, j in enumerate(idx)]
        for r, i in enumerate(idx)
    ]


def entries_inverse(A: PathBasisAlgebra, idx, ents) -> List[List[Elem]]:
    """Inverse of a square entry matrix whose mod-radical reduction is
    invertible (unit of End(⊕P)); geometric series on the radical part."""
    from .complexes import compose_entries

    p = A.p
    n = len(idx)
    # invert the trivial-coefficient part per vertex type
    from .linalg import Mat
    from .reps import mat_inverse

    U0 = [[{} for _ in range(n)] for _ in range(n)]
    for v in A.quiver.vertices:
        pos = [r for r, i in enumerate(idx) if i == v]
        if not pos:
            continue
        M = Mat.zero(p, len(pos), len(pos))
        for a, r in enumerate(pos):
            for b, c in enumerate(pos):
                M.rows[a][b] = A.trivial_coeff(ents[r][c], v)
        Minv = mat_inverse(M)
        for a, r in enumerate(pos):
            for b, c in enumerate(pos):
                if Minv.rows[a][b]:
                    U0[r][c] = elem_scale(p, Minv.rows[a][b], A.unit_path(v))
    # N = U0^{-1}·ents - 1 has radical entries; inverse = (sum (-N)^k)·U0^{-1}
    prod = compose_entries(A, U0, ents)
    I = entries_identity(A, idx)
    N = [
        [elem_add(p, prod[r][c], elem_scale(p, p - 1, I[r][c])) for c in range(n)]
        for r in range(n)
    ]
    if any(not A.is_radical(N[r][c]) for r in range(n) for c in range(n)):
        raise AlgebraError("entry matrix is not a unit")
    acc = I
    power = I
    while True:
        power = compose_entries(A, power, [[elem_scale(p, p - 1, N[r][c]) for c in range(n)] for r in range(n)])
        if all(not power[r][c] for r in range(n) for c in range(n)):
            break
        acc = [[elem_add(p, acc[r][c], power[r][c]) for c in range(n)] for r in range(n)]
    return compose_entries(A, acc, U0)


def split_complex(C, scan_budget: int = 64) -> List:
    """Indecomposable direct summands of a minimal complex of projectives."""
    from .complexes import ProjComplex, compose_entries

    A = C.algebra
    p = A.p
    if C.is_zero():
        return []
    if C.summand_count() == 1:
        return [C]
    E, (hs, basis_entries) = chain_end_algebra(C)
    e = E.find_nontrivial_idempotent(scan_budget)
    if e is None:
        return [C]
    phi = _entries_of_coords(hs, basis_entries, e, C)

    # conjugate phi to a coordinate projection degree by degree
    from .linalg import Mat
    from .reps import mat_inverse

    U: Dict[int, List[List[Elem]]] = {}
    keep: Dict[int, List[int]] = {}
    for k in C.terms:
        idx = C.term(k)
        n = len(idx)
        ph = phi.get(k, [[{} for _ in range(n)] for _ in range(n)])
        # mod-radical reduction, per vertex type
        V = entries_identity(A, idx)
        Vm = [[{} for _ in range(n)] for _ in range(n)]
        for v in A.quiver.vertices:
            pos = [r for r, i in enumerate(idx) if i == v]
            if not pos:
                continue
            M = Mat.zero(p, len(pos), len(pos))
            for a, r in enumerate(pos):
                for b, c in enumerate(pos):
                    M.rows[a][b] = A.trivial_coeff(ph[r][c], v)
            # columns of im(M) then ker(M) give the change of basis
            imb = row_space_basis(M.transpose())
            kerb = kernel_basis(M)
            cols = [list(r) for r in imb.rows] + [list(r) for r in kerb.rows]
            Vv = Mat(p, cols, len(pos)).transpose()
            Vinv = mat_inverse(Vv)
            for a, r in enumerate(pos):
                for b, c in enumerate(pos):
                    V[r][c] = elem_scale(p, Vv.rows[a][b], A.unit_path(v)) if Vv.rows[a][b] else {}
                    Vm[r][c] = elem_scale(p, Vinv.rows[a][b], A.unit_path(v)) if Vinv.rows[a][b] else {}
        # psi = V^{-1}·phi·V is idempotent with diagonal reduction
        psi = compose_entries(A, Vm, compose_entries(A, ph, V))
        ones = set(_diag_ones(idx, psi, A))
        D = [
            [A.unit_path(idx[r]) if (r == c and r in ones) else {} for c in range(n)]
            for r in range(n)
        ]
        # W = psi·D + (1-psi)(1-D) conjugates psi to D exactly
        I = entries_identity(A, idx)
        one_minus_psi = [
            [elem_add(p, I[r][c], elem_scale(p, p - 1, psi[r][c])) for c in range(n)]
            for r in range(n)
        ]
        one_minus_D = [
            [elem_add(p, I[r][c], elem_scale(p, p - 1, D[r][c])) for c in range(n)]
            for r in range(n)
        ]
        W = [
            [
                elem_add(
                    p,
                    compose_entries(A, psi, D)[r][c],
                    compose_entries(A, one_minus_psi, one_minus_D)[r][c],
                )
                for c in range(n)
            ]
            for r in range(n)
        ]
        Uk = compose_entries(A, V, W)
        U[k] = Uk
        keep[k] = _diag_ones(idx, psi, A)

    # conjugated differential d' = U_{k+1}^{-1} · d · U_k splits by coordinates
    terms1: Dict[int, Tuple] = {}
    terms2: Dict[int, Tuple] = {}
    sel1: Dict[int, List[int]] = {}
    sel2: Dict[int, List[int]] = {}
    for k in C.terms:
        idx = C.term(k)
        ones = set(keep[k])
        sel1[k] = [r for r in range(len(idx)) if r in ones]
        sel2[k] = [r for r in range(len(idx)) if r not in ones]
        terms1[k] = tuple(idx[r] for r in sel1[k])
        terms2[k] = tuple(idx[r] for r in sel2[k])
    diffs1: Dict[int, List[List[Elem]]] = {}
    diffs2: Dict[int, List[List[Elem]]] = {}
    for k in C.terms:
        if (k + 1) not in C.terms:
            continue
        Uinv = entries_inverse(A, C.term(k + 1), U[k + 1])
        dprime = compose_entries(A, Uinv, compose_entries(A, C.diff(k), U[k]))
        for r in sel1[k + 1]:
            for c in sel2[k]:
                if dprime[r][c]:
                    raise AlgebraError("idempotent split produced off-diagonal block")
        for r in sel2[k + 1]:
            for c in sel1[k]:
                if dprime[r][c]:
                    raise AlgebraError("idempotent split produced off-diagonal block")
        diffs1[k] = [[dprime[r][c] for c in sel1[k]] for r in sel1[k + 1]]
        diffs2[k] = [[dprime[r][c] for c in sel2[k]] for r in sel2[k + 1]]
    C1 = ProjComplex(A, terms1, diffs1)
    C2 = ProjComplex(A, terms2, diffs2)
    if C1.is_zero() or C2.is_zero():
        raise AlgebraError("idempotent split degenerated")
    return split_complex(C1, scan_budget) + split_complex(C2, scan_budget)


def _diag_ones(idx, psi, A) -> List[int]:
    out = []
    for r, i in enumerate(idx):
        if A.trivial_coeff(psi[r][r], i):
            out.append(r)
    return out
