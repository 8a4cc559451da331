"""The m-extended module category of a quiver algebra.

Objects are kept in normal form: a minimal complex of projectives in
degrees [-m, 0] with no stalk summand in degree -m (the minimal
projective presentation of the object it represents).  The category
object owns the isoclass registry, Hom caches and the Auslander-Reiten
machinery: translations, almost-split triangles and knitting.

Derived Homs out of an object use a "deep carrier": the carrier extended
below degree -m by a minimal resolution of its cycle module, so that the
extension agrees with the carrier in degrees >= -m.  That makes
precomposition with carrier endomorphisms entrywise.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, PathBasisAlgebra
from .complexes import (
    HomSpace,
    ModuleComplex,
    PMChainMap,
    PPChainMap,
    ProjComplex,
    _pm_to_entries,
    cohomology,
    cohomology_dims,
    compose_entries,
    dualize_module_complex,
    mc_cone,
    mc_stalk,
    minimize,
    nakayama_complex,
    pc_cone,
    pc_stalk,
    pc_stupid_ge,
    resolve,
    truncate,
)
from .endalg import chain_end_algebra, split_complex
from .linalg import Mat, kernel_basis, rank
from .reps import (
    ModuleMap,
    Representation,
    entries_from_map,
    inj_rep,
    iso_modules,
    proj_rep,
    projective_cover,
    simple_rep,
    sub_rep,
    zero_rep,
)


class MembershipError(AlgebraError):
    def __init__(self, degree, dims):
        super().__init__(
            f"cohomology in degree {degree} (dims {dims}) outside the extended window"
        )
        self.degree = degree


class DerivedObject:
    """Normal form of an object of m-mod A."""

    def __init__(self, cat: "ExtCategory", carrier: ProjComplex, key: str):
        self.cat = cat
        self.carrier = carrier
        self.key = key
        self._window: Optional[ModuleComplex] = None
        self._deep: Optional[ProjComplex] = None
        self._deep_depth = 1
        self._h: Optional[Dict[int, Tuple[int, ...]]] = None
        self._name: Optional[str] = None
        self._summands = None

    def is_zero(self) -> bool:
        return self.carrier.is_zero()

    @property
    def h_dims(self) -> Dict[int, Tuple[int, ...]]:
        """Cohomology dimension vectors of the represented object."""
        if self._h is None:
            hd = cohomology_dims(self.carrier.to_module_complex())
            hd.pop(-self.cat.m, None)
            self._h = hd
        return self._h

    def window_complex(self) -> ModuleComplex:
        """The finite representative σ^{>=-(m-1)} of the carrier."""
        if self._window is None:
            self._window = truncate(
                self.carrier.to_module_complex(), "canonical_ge", -(self.cat.m - 1)
            )
        return self._window

    def deep(self, depth: int) -> ProjComplex:
        """The carrier extended below -m by resolving its cycle module.

        The result agrees with the carrier in degrees >= -m and is exact
        (a resolution of the represented object) above `depth`.
        """
        C = self.carrier
        A = self.cat.A
        m = self.cat.m
        if C.is_zero():
            return C
        lo = C.lo
        if lo > -m:
            return C  # carrier is already a complete resolution
        if self._deep is not None and self._deep_depth <= depth:
            return self._deep
        Cmod = C.to_module_complex()
        d = Cmod.diff(-m)
        ker_rows = {v: kernel_basis(d.mats[v]) for v in A.quiver.vertices}
        K, incl = sub_rep(Cmod.term(-m), ker_rows)
        terms = {k: C.term(k) for k in C.degrees}
        diffs = {k: C.diff(k) for k in C.degrees if k + 1 in C.terms}
        prev_idx = C.term(-m)
        target = Cmod.term(-m)
        glue = incl
        k = -m - 1
        while K.total_dim > 0 and k >= depth:
            P, cover, indices = projective_cover(K)
            dmap = glue.compose_after(cover)  # P -> previous term
            terms[k] = tuple(indices)
            diffs[k] = entries_from_map(A, indices, prev_idx, dmap)
            ker2 = {v: kernel_basis(dmap.mats[v]) for v in A.quiver.vertices}
            K, incl2 = sub_rep(P, ker2)
            glue = incl2
            prev_idx = tuple(indices)
            k -= 1
        D = ProjComplex(A, terms, diffs)
        self._deep = D
        self._deep_depth = depth
        return D

    def dim_class(self) -> Tuple[int, ...]:
        """K_0 class of the represented object (junk cycles excluded)."""
        n = len(self.cat.A.quiver.vertices)
        out = [0] * n
        for k, dv in self.h_dims.items():
            s = 1 if k % 2 == 0 else -1
            for i, d in enumerate(dv):
                out[i] += s * d
        return tuple(out)

    @property
    def name(self) -> str:
        if self._name is None:
            self._name = self.cat.display_name(self)
        return self._name

    def __repr__(self):
        return f"<{self.name}>"


@dataclass
class ARTriangle:
    start: DerivedObject
    middle: List[Tuple[DerivedObject, int]]
    end: DerivedObject
    delta_coords: Tuple[int, ...]


@dataclass
class ARQuiver:
    vertices: List[str]
    labels: Dict[str, str]
    arrows: Dict[Tuple[str, str], int]
    tau: Dict[str, str]
    projectives: List[str]
    injectives: List[str]
    complete: bool

    def to_dot(self) -> str:
        lines = ["digraph ar_quiver {", "  rankdir=LR;"]
        for k in self.vertices:
            shape = "box" if k in self.projectives else (
                "diamond" if k in self.injectives else "ellipse")
            lines.append(f'  "{k}" [label="{self.labels[k]}", shape={shape}];')
        for (a, b), mult in sorted(self.arrows.items()):
            lab = f' [label="{mult}"]' if mult > 1 else ""
            lines.append(f'  "{a}" -> "{b}"{lab};')
        for b, a in sorted(self.tau.items()):
            lines.append(f'  "{b}" -> "{a}" [style=dashed, constraint=false];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"key": k, "label": self.labels[k],
                 "projective": k in self.projectives,
                 "injective": k in self.injectives}
                for k in self.vertices
            ],
            "arrows": [
                {"from": a, "to": b, "mult": m}
                for (a, b), m in sorted(self.arrows.items())
            ],
            "translation": [
                {"end": b, "start": a} for b, a in sorted(self.tau.items())
            ],
            "complete": self.complete,
        }


class DHom:
    """Hom(X, Y[j]) in the derived category, with a frozen basis."""

    def __init__(self, cat, X, Y, j, space: Optional[HomSpace]):
        self.cat = cat
        self.X = X
        self.Y = Y
        self.j = j
        self.space = space

    @property
    def dim(self) -> int:
        return self.space.dim if self.space is not None else 0

    def rep_vectors(self) -> List[List[int]]:
        return self.space.quotient_reps() if self.space is not None else []

    def rep_maps(self) -> List[PMChainMap]:
        return self.space.basis_maps() if self.space is not None else []

    def coords_of_data(self, data: Dict[int, List[List[int]]]) -> List[int]:
        vec: List[int] = []
        for (k, r, d) in self.space.var_layout:
            row = data.get(k)
            v = row[r] if row and r < len(row) and row[r] else [0] * d
            vec.extend(v[:d] + [0] * (d - len(v)))
        return self.space.coordinates(vec)

    def coords_of(self, f: PMChainMap) -> List[int]:
        return self.coords_of_data(f.data)


class ExtCategory:
    """Computational context for m-mod A."""

    def __init__(self, A: PathBasisAlgebra, m: Optional[int] = None,
                 hom_enum_cap: int = 1 << 16):
        self.A = A
        self.m = A.m if m is None else m
        if self.m < 1:
            raise AlgebraError("m must be >= 1")
        self.hom_enum_cap = hom_enum_cap
        self._iso_registry: Dict[str, List[DerivedObject]] = {}
        self._hom_cache: Dict[Tuple[str, str, int], DHom] = {}
        self._tau_cache: Dict[Tuple[str, bool], DerivedObject] = {}
        self._op_cat: Optional["ExtCategory"] = None
        self.zero = DerivedObject(self, ProjComplex(A, {}, {}), "0")
        self._iso_registry["0"] = [self.zero]

    # -- object registry ------------------------------------------------------

    def _invariant_key(self, C: ProjComplex) -> str:
        hd = cohomology_dims(C.to_module_complex())
        data = [
            (k, sorted(map(str, C.term(k))), list(hd.get(k, ())))
            for k in C.degrees
        ]
        blob = json.dumps(data, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def _register_indec(self, C: ProjComplex) -> DerivedObject:
        from .complexes import iso_test

        inv = self._invariant_key(C)
        bucket = self._iso_registry.setdefault(inv, [])
        for obj in bucket:
            if iso_test(obj.carrier, C, self.hom_enum_cap):
                return obj
        obj = DerivedObject(self, C, f"{inv}.{len(bucket)}")
        obj._summands = [(obj, 1)]
        bucket.append(obj)
        return obj

    def _register_sum(self, counts: Dict[str, int], by_key: Dict[str, DerivedObject]) -> DerivedObject:
        if not counts:
            return self.zero
        if len(counts) == 1:
            (k, mult), = counts.items()
            if mult == 1:
                return by_key[k]
        sum_key = "+".join(
            k if mult == 1 else f"{k}*{mult}" for k, mult in sorted(counts.items())
        )
        if not hasattr(self, "_sum_registry"):
            self._sum_registry: Dict[str, DerivedObject] = {}
        if sum_key in self._sum_registry:
            return self._sum_registry[sum_key]
        C = ProjComplex(self.A, {}, {})
        for k, mult in sorted(counts.items()):
            for _ in range(mult):
                C = C.direct_sum(by_key[k].carrier)
        obj = DerivedObject(self, C, sum_key)
        obj._summands = [(by_key[k], mult) for k, mult in sorted(counts.items())]
        self._sum_registry[sum_key] = obj
        return obj

    def register(self, C: ProjComplex) -> DerivedObject:
        """Canonical instance of the isoclass of a normal-form carrier.

        Objects are identified by their Krull-Schmidt decomposition, so
        isomorphism searches only ever run on indecomposable pieces.
        """
        if C.is_zero():
            return self.zero
        parts = split_complex(C)
        counts: Dict[str, int] = {}
        by_key: Dict[str, DerivedObject] = {}
        for piece in parts:
            o = self._register_indec(piece)
            counts[o.key] = counts.get(o.key, 0) + 1
            by_key[o.key] = o
        return self._register_sum(counts, by_key)

    def normalize(self, x) -> DerivedObject:
        """Normal form of a module, module complex, or complex of projectives."""
        m = self.m
        if isinstance(x, DerivedObject):
            return x
        if isinstance(x, Representation):
            X = mc_stalk(x, 0)
        elif isinstance(x, ProjComplex):
            X = x.to_module_complex()
        elif isinstance(x, ModuleComplex):
            X = x
        else:
            raise TypeError(f"cannot normalize {type(x)!r}")
        hd = cohomology_dims(X)
        for k, dims in sorted(hd.items()):
            if not (-(m - 1) <= k <= 0):
                raise MembershipError(k, dims)
        if not hd:
            return self.zero
        R, _ = resolve(X, -m - 2)
        C = minimize(pc_stupid_ge(R, -m))
        C, _ = self.strip_shifted_projectives(C)
        return self.register(C)

    def strip_shifted_projectives(self, C: ProjComplex) -> Tuple[ProjComplex, Tuple[object, ...]]:
        """Split off stalk summands P[m] at degree -m; returns (rest, indices)."""
        A = self.A
        m = self.m
        stripped: List[object] = []
        while -m in C.terms:
            found = False
            Cmod = C.to_module_complex()
            for i in A.quiver.vertices:
                if i not in C.term(-m):
                    continue
                stalk = pc_stalk(A, (i,), -m)
                hsF = HomSpace(stalk, Cmod)
                hsG = HomSpace(C, stalk.to_module_complex())
                if not hsF.solutions.nrows or not hsG.solutions.nrows:
                    continue
                pair_f = None
                for fv in hsF.solutions.rows:
                    f_ent = _pm_to_entries(hsF.vec_to_map(fv), C)
                    for gv in hsG.solutions.rows:
                        g_ent = _pm_to_entries(hsG.vec_to_map(gv), stalk)
                        comp = compose_entries(
                            A, g_ent.get(-m, [[{}]]), f_ent.get(-m, [[{}]])
                        )
                        if comp and A.trivial_coeff(comp[0][0], i):
                            pair_f = f_ent
                            break
                    if pair_f:
                        break
                if pair_f is None:
                    continue
                C = minimize(pc_cone(PPChainMap(stalk, C, pair_f)))
                stripped.append(i)
                found = True
                break
            if not found:
                break
        return C, tuple(stripped)

    # -- standard objects -------------------------------------------------------

    def projective_object(self, i) -> DerivedObject:
        return self.register(pc_stalk(self.A, (i,), 0))

    def injective_object(self, i) -> DerivedObject:
        return self.normalize(mc_stalk(inj_rep(self.A, i), -(self.m - 1)))

    def projective_objects(self) -> List[DerivedObject]:
        return [self.projective_object(i) for i in self.A.quiver.vertices]

    def injective_objects(self) -> List[DerivedObject]:
        return [self.injective_object(i) for i in self.A.quiver.vertices]

    def regular_object(self) -> DerivedObject:
        return self.register(pc_stalk(self.A, tuple(self.A.quiver.vertices), 0))

    def direct_sum(self, objs: Sequence[DerivedObject]) -> DerivedObject:
        counts: Dict[str, int] = {}
        by_key: Dict[str, DerivedObject] = {}
        for o in objs:
            for s, mult in self.decompose(o):
                counts[s.key] = counts.get(s.key, 0) + mult
                by_key[s.key] = s
        return self._register_sum(counts, by_key)

    # -- derived Hom --------------------------------------------------------------

    def derived_hom(self, X: DerivedObject, Y: DerivedObject, j: int = 0) -> DHom:
        key = (X.key, Y.key, j)
        if key in self._hom_cache:
            return self._hom_cache[key]
        m = self.m
        if X.is_zero() or Y.is_zero() or j <= -m:
            d = DHom(self, X, Y, j, None)
        else:
            MY = Y.window_complex().shift(j)
            D = X.deep(MY.lo - 3)
            d = DHom(self, X, Y, j, HomSpace(D, MY))
        self._hom_cache[key] = d
        return d

    def hom_dim(self, X: DerivedObject, Y: DerivedObject, j: int = 0) -> int:
        return self.derived_hom(X, Y, j).dim

    # -- duality transport --------------------------------------------------------

    def op_category(self) -> "ExtCategory":
        if self._op_cat is None:
            self._op_cat = ExtCategory(self.A.opposite(), self.m, self.hom_enum_cap)
            self._op_cat._op_cat = self
        return self._op_cat

    def op_object(self, X: DerivedObject) -> DerivedObject:
        """The anti-equivalence D(-)[m-1] into m-mod of the opposite algebra."""
        if X.is_zero():
            return self.op_category().zero
        W = dualize_module_complex(X.window_complex()).shift(self.m - 1)
        return self.op_category().normalize(W)

    def from_op(self, W: DerivedObject) -> DerivedObject:
        if W.is_zero():
            return self.zero
        back = dualize_module_complex(W.window_complex()).shift(self.m - 1)
        return self.normalize(back)

    # -- AR translations -------------------------------------------------------------

    def tau(self, Z: DerivedObject) -> DerivedObject:
        key = (Z.key, True)
        if key not in self._tau_cache:
            if Z.is_zero():
                out = self.zero
            else:
                nu = nakayama_complex(Z.carrier).shift(-1)
                tr = truncate(nu, "canonical_le", 0)
                out = self.normalize(tr) if tr.terms else self.zero
            self._tau_cache[key] = out
        return self._tau_cache[key]

    def tau_minus(self, Z: DerivedObject) -> DerivedObject:
        key = (Z.key, False)
        if key not in self._tau_cache:
            opT = self.op_category().tau(self.op_object(Z))
            self._tau_cache[key] = self.from_op(opT)
        return self._tau_cache[key]

    def ar_translate(self, Z: DerivedObject, direction: str = "forward") -> DerivedObject:
        return self.tau(Z) if direction == "forward" else self.tau_minus(Z)

    def minimal_presentations(self, Z: DerivedObject):
        """(p_m(Z), i_m(Z)); the injective side runs through the opposite algebra."""
        i_m = dualize_module_complex(
            self.op_object(Z).carrier.to_module_complex()
        ).shift(self.m - 1)
        return Z.carrier, i_m

    def iyama_translate(self, M: Representation, forward: bool = True) -> Representation:
        m = self.m
        if forward:
            t = self.tau(self.normalize(M))
            return cohomology(t.window_complex(), -(m - 1)) if not t.is_zero() else zero_rep(self.A)
        Z = self.normalize(mc_stalk(M, -(m - 1)))
        t = self.tau_minus(Z)
        return cohomology(t.window_complex(), 0) if not t.is_zero() else zero_rep(self.A)

    # -- classification / decomposition ------------------------------------------------

    def is_projective_object(self, Z: DerivedObject) -> bool:
        return Z.is_zero() or set(Z.carrier.degrees) <= {0}

    def is_injective_object(self, Z: DerivedObject) -> bool:
        if Z.is_zero():
            return True
        inj_keys = {o.key for o in self.injective_objects()}
        return all(s.key in inj_keys for s, _ in self.decompose(Z))

    def classify(self, Z: DerivedObject) -> Dict[str, bool]:
        return {
            "projective": self.is_projective_object(Z),
            "injective": self.is_injective_object(Z),
        }

    def decompose(self, X: DerivedObject) -> List[Tuple[DerivedObject, int]]:
        if X._summands is None:
            # registered objects always carry their decomposition
            X._summands = [] if X.is_zero() else self.register(X.carrier)._summands
        return X._summands

    def is_indecomposable(self, X: DerivedObject) -> bool:
        dec = self.decompose(X)
        return len(dec) == 1 and dec[0][1] == 1

    def summand_count(self, X: DerivedObject) -> int:
        return sum(mult for _, mult in self.decompose(X))

    # -- stable homs ---------------------------------------------------------------------

    def stable_hom(self, X: DerivedObject, Y: DerivedObject, side: str = "projective") -> int:
        """dim of Hom(X, Y) modulo maps factoring through the projectives
        (resp. injectives) of the extended category."""
        if side == "injective":
            oc = self.op_category()
            return oc.stable_hom(self.op_object(Y), self.op_object(X), "projective")
        if side != "projective":
            raise ValueError("side must be 'projective' or 'injective'")
        hom = self.derived_hom(X, Y, 0)
        if hom.dim == 0:
            return 0
        through: List[List[int]] = []
        for i in self.A.quiver.vertices:
            P = self.projective_object(i)
            XP = self.derived_hom(X, P, 0)
            PY = self.derived_hom(P, Y, 0)
            for f in XP.rep_maps():
                for g in PY.rep_maps():
                    comp = compose_through_stalk(f, g)
                    through.append(hom.coords_of(comp))
        if not through:
            return hom.dim
        return hom.dim - rank(Mat(self.A.p, through, hom.dim))

    # -- AR triangles ----------------------------------------------------------------------

    def rad_end_entries(self, Z: DerivedObject) -> List[Dict[int, list]]:
        """Radical of End(Z) as entry-form chain maps on the carrier."""
        E, (hs, basis_entries) = chain_end_algebra(Z.carrier)
        out = []
        for vec in E.radical_basis():
            amb = [0] * hs._nvars
            for c, sol in zip(vec, hs.solutions.rows):
                if c:
                    amb = [(a + c * b) % self.A.p for a, b in zip(amb, sol)]
            out.append(_pm_to_entries(hs.vec_to_map(amb), Z.carrier))
        return out

    def _precompose_coords(self, hom: DHom, delta_vec: List[int],
                           r_entries: Dict[int, list]) -> List[int]:
        """Coordinates of delta∘r, r an endomorphism of the carrier of hom.X."""
        space = hom.space
        D = space.P
        M = space.M
        dm = space.vec_to_map(delta_vec)
        data: Dict[int, List[List[int]]] = {}
        for k in D.degrees:
            ents = r_entries.get(k)
            rows = []
            for c, i in enumerate(D.term(k)):
                tdim = M.term(k).dims[i] if k in M.terms else 0
                acc = [0] * tdim
                if tdim and ents is not None:
                    base = dm.data.get(k)
                    for r2, i2 in enumerate(D.term(k)):
                        ent = ents[r2][c]
                        if not ent:
                            continue
                        gen_img = (
                            base[r2]
                            if base and r2 < len(base) and base[r2]
                            else [0] * M.term(k).dims[i2]
                        )
                        emat = M.term(k).elem_matrix(ent, i2, i)
                        contrib = emat.apply(gen_img)
                        acc = [(a + b) % self.A.p for a, b in zip(acc, contrib)]
                rows.append(acc)
            data[k] = rows
        return hom.coords_of_data(data)

    def ar_triangle(self, Z: DerivedObject, direction: str = "forward") -> ARTriangle:
        """AR triangle ending at Z (forward) or starting at Z (backward)."""
        if direction == "backward":
            W = self.tau_minus(Z)
            if W.is_zero():
                raise AlgebraError("no AR triangle starting at an injective object")
            return self.ar_triangle(W, "forward")
        if self.is_projective_object(Z):
            raise AlgebraError("no AR triangle ending at a projective object")
        if not self.is_indecomposable(Z):
            raise AlgebraError("AR triangle requires an indecomposable end term")
        tZ = self.tau(Z)
        hom = self.derived_hom(Z, tZ, 1)
        if hom.dim == 0:
            raise AlgebraError("Hom(Z, tau(Z)[1]) = 0; AR triangle impossible")
        reps = hom.rep_vectors()
        n = hom.dim
        cons: List[List[int]] = []
        for r_ent in self.rad_end_entries(Z):
            cols = [self._precompose_coords(hom, rv, r_ent) for rv in reps]
            for out_idx in range(n):
                cons.append([cols[j][out_idx] for j in range(n)])
        K = kernel_basis(Mat(self.A.p, cons, n)) if cons else Mat.identity(self.A.p, n)
        if K.nrows == 0:
            raise AlgebraError("no admissible connecting morphism found")
        delta_coords = list(K.rows[0])
        nvars = hom.space._nvars
        delta_vec = [0] * nvars
        for c, rv in zip(delta_coords, reps):
            if c:
                delta_vec = [(a + c * b) % self.A.p for a, b in zip(delta_vec, rv)]
        delta = hom.space.vec_to_map(delta_vec)
        D = hom.space.P
        cone = mc_cone(delta.component_maps(), D.to_module_complex(), hom.space.M)
        coc = cone.shift(-1)
        m = self.m
        if any(cohomology(coc, -m).dim_vector()):
            raise AlgebraError("AR middle term left the window")
        mid = self.normalize(truncate(coc, "canonical_ge", -(m - 1)))
        return ARTriangle(tZ, self.decompose(mid), Z, tuple(delta_coords))

    # -- knitting --------------------------------------------------------------------------

    def knit_ar_quiver(self, limit: int = 256) -> ARQuiver:
        reg: Dict[str, DerivedObject] = {}
        order: List[str] = []

        def add(obj: DerivedObject) -> str:
            if not obj.is_zero() and obj.key not in reg:
                reg[obj.key] = obj
                order.append(obj.key)
            return obj.key

        proj_keys = set()
        for o in self.projective_objects():
            add(o)
            proj_keys.add(o.key)
        inj_keys = set()
        for o in self.injective_objects():
            add(o)
            inj_keys.add(o.key)

        meshes: Dict[str, ARTriangle] = {}
        succ_done: Dict[str, bool] = {}
        truncated = False
        progress = True
        while progress and not truncated:
            progress = False
            for key in list(order):
                obj = reg[key]
                if key not in proj_keys and key not in meshes:
                    tri = self.ar_triangle(obj, "forward")
                    meshes[key] = tri
                    add(tri.start)
                    for s, _ in tri.middle:
                        add(s)
                    progress = True
                if key not in inj_keys and not succ_done.get(key):
                    add(self.tau_minus(obj))
                    succ_done[key] = True
                    progress = True
                if len(order) > limit:
                    truncated = True
                    break

        arrows: Dict[Tuple[str, str], int] = {}
        tau_map: Dict[str, str] = {}
        for end_key, tri in meshes.items():
            tau_map[end_key] = tri.start.key
            for s, mult in tri.middle:
                for a in ((s.key, end_key), (tri.start.key, s.key)):
                    arrows[a] = max(arrows.get(a, 0), mult)
        labels = {k: reg[k].name for k in order}
        seen: Dict[str, int] = {}
        for k in order:
            lab = labels[k]
            if lab in seen:
                seen[lab] += 1
                labels[k] = f"{lab}#{seen[lab]}"
            else:
                seen[lab] = 0
        complete = (not truncated) and all(
            k in meshes for k in order if k not in proj_keys
        ) and all(succ_done.get(k) for k in order if k not in inj_keys)
        return ARQuiver(
            vertices=list(order),
            labels=labels,
            arrows=arrows,
            tau=tau_map,
            projectives=sorted(proj_keys & set(order)),
            injectives=sorted(inj_keys & set(order)),
            complete=complete,
        )

    def objects_by_key(self) -> Dict[str, DerivedObject]:
        out: Dict[str, DerivedObject] = {}
        for bucket in self._iso_registry.values():
            for o in bucket:
                out[o.key] = o
        return out

    def registry_objects(self, quiver: ARQuiver) -> List[DerivedObject]:
        by_key = self.objects_by_key()
        return [by_key[k] for k in quiver.vertices]

    # -- display names -----------------------------------------------------------------------

    def _module_name(self, M: Representation) -> str:
        if M.total_dim == 0:
            return "0"
        parts: List[str] = []
        for piece, mult in decompose_module(M):
            nm = None
            for i in self.A.quiver.vertices:
                if iso_modules(piece, simple_rep(self.A, i)) is not None:
                    nm = f"S{i}"
                    break
                if iso_modules(piece, proj_rep(self.A, i)) is not None:
                    nm = f"P{i}"
                    break
                if iso_modules(piece, inj_rep(self.A, i)) is not None:
                    nm = f"I{i}"
                    break
            if nm is None:
                nm = "M" + "".join(str(d) for d in piece.dim_vector())
            parts.extend([nm] * mult)
        return "+".join(sorted(parts))

    def display_name(self, Z: DerivedObject) -> str:
        if Z.is_zero():
            return "0"
        m = self.m
        W = Z.window_complex()
        if m == 1:
            return self._module_name(W.term(0))
        terms: Dict[int, Representation] = {
            k: W.term(k) for k in range(-(m - 1), 1)
        }
        if m == 2 and (-1 in W.terms) and (0 in W.terms):
            d = W.diff(-1)
            if d.is_injective():
                from .reps import quot_rep

                im_rows = {
                    v: Mat(self.A.p, d.mats[v].transpose().rows, W.term(0).dims[v])
                    for v in self.A.quiver.vertices
                }
                Q, _ = quot_rep(W.term(0), im_rows)
                terms = {-1: zero_rep(self.A), 0: Q}
            elif d.is_surjective():
                ker_rows = {v: kernel_basis(d.mats[v]) for v in self.A.quiver.vertices}
                K, _ = sub_rep(W.term(-1), ker_rows)
                terms = {-1: K, 0: zero_rep(self.A)}
        names = [
            self._module_name(terms.get(k) or zero_rep(self.A))
            for k in range(-(m - 1), 1)
        ]
        return "->".join(names)


def compose_through_stalk(f: PMChainMap, g: PMChainMap) -> PMChainMap:
    """Composite X -> P -> Y where the middle is a stalk projective object:
    f lands in the stalk module complex, g is defined on the stalk complex."""
    comps = {k: g.component_map(k) for k in g.source.terms}
    data: Dict[int, List[List[int]]] = {}
    for k, rows in f.data.items():
        out_rows = []
        for r, vec in enumerate(rows):
            i = f.source.term(k)[r]
            if k in comps and vec:
                out_rows.append(comps[k].mats[i].apply(vec))
            else:
                tdim = g.target.term(k).dims[i] if k in g.target.terms else 0
                out_rows.append([0] * tdim)
        data[k] = out_rows
    return PMChainMap(f.source, g.target, data)


def decompose_module(M: Representation) -> List[Tuple[Representation, int]]:
    """Krull-Schmidt decomposition of a module via End-algebra idempotents."""
    from .endalg import FiniteDimAlgebra
    from .reps import hom_modules

    if M.total_dim == 0:
        return []
    homs = hom_modules(M, M)
    d = len(homs)
    p = M.p
    verts = M.algebra.quiver.vertices

    def to_vec(f: ModuleMap) -> List[int]:
        out: List[int] = []
        for v in verts:
            for row in f.mats[v].rows:
                out.extend(row)
        return out

    basis_vecs = Mat(p, [to_vec(f) for f in homs], len(to_vec(homs[0])))

    from .linalg import solve as lin_solve

    bt = basis_vecs.transpose()

    def mul(x: List[int], y: List[int]) -> List[int]:
        fx = None
        for c, h in zip(x, homs):
            if c:
                fx = h.scale(c) if fx is None else fx.add(h.scale(c))
        fy = None
        for c, h in zip(y, homs):
            if c:
                fy = h.scale(c) if fy is None else fy.add(h.scale(c))
        if fx is None or fy is None:
            return [0] * d
        comp = fx.compose_after(fy)
        coords = lin_solve(bt, to_vec(comp))
        if coords is None:
            raise AlgebraError("module End composition left the span")
        return coords

    from .reps import identity_map

    unit = lin_solve(bt, to_vec(identity_map(M)))
    E = FiniteDimAlgebra(p, d, mul, unit)
    e = E.find_nontrivial_idempotent()
    if e is None:
        return [(M, 1)]
    fe = None
    for c, h in zip(e, homs):
        if c:
            fe = h.scale(c) if fe is None else fe.add(h.scale(c))
    im_rows = {v: Mat(p, fe.mats[v].transpose().rows, M.dims[v]) for v in verts}
    ker_rows = {v: kernel_basis(fe.mats[v]) for v in verts}
    M1, _ = sub_rep(M, im_rows)
    M2, _ = sub_rep(M, ker_rows)
    out: List[Tuple[Representation, int]] = []
    for piece, mult in decompose_module(M1) + decompose_module(M2):
        for idx, (q, qm) in enumerate(out):
            if iso_modules(q, piece) is not None:
                out[idx] = (q, qm + mult)
                break
        else:
            out.append((piece, mult))
    return out
