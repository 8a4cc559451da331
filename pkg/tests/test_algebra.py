import pytest

from heartforge.algebra import (
    AlgebraError,
    NonAdmissibleError,
    Path,
    Quiver,
    build_algebra,
)
from heartforge.linalg import FieldSpec
from heartforge.reps import (
    dual_rep,
    hom_dim,
    hom_modules,
    inj_rep,
    injective_envelope,
    iso_modules,
    module_structure,
    nakayama_module,
    proj_rep,
    projective_cover,
    simple_rep,
    standard_inj_sum,
    standard_proj_sum,
)

from conftest import make_lambda_algebra


def test_a3_dimensions(a3):
    assert a3.dim == 6
    assert a3.nilpotency_bound == 3
    assert proj_rep(a3, 1).dim_vector() == (1, 1, 1)
    assert proj_rep(a3, 2).dim_vector() == (0, 1, 1)
    assert proj_rep(a3, 3).dim_vector() == (0, 0, 1)


def test_lambda_dimensions(lam):
    # Example ex:AR data: P1 = 1/2, P2 = 2/1/2, I1 = 2/1, I2 = 2/1/2
    assert lam.dim == 5
    P1, P2 = proj_rep(lam, 1), proj_rep(lam, 2)
    assert P1.dim_vector() == (1, 1)
    assert P2.dim_vector() == (1, 2)
    I1, I2 = inj_rep(lam, 1), inj_rep(lam, 2)
    assert I1.dim_vector() == (1, 1)
    assert I2.dim_vector() == (1, 2)
    assert iso_modules(I2, P2) is not None  # I2 ≅ P2
    assert iso_modules(I1, P1) is None


def test_lambda_layers(lam):
    P1, P2 = proj_rep(lam, 1), proj_rep(lam, 2)
    (radP2, _), (topP2, _), _ = module_structure(P2)
    assert topP2.dim_vector() == (0, 1)
    assert radP2.dim_vector() == (1, 1)
    assert iso_modules(radP2, P1) is not None  # rad P2 ≅ P1 = 1/2
    (_, _), (topP1, _), (socP1, _) = module_structure(P1)
    assert topP1.dim_vector() == (1, 0)
    assert socP1.dim_vector() == (0, 1)
    I1 = inj_rep(lam, 1)
    _, _, (socI1, _) = module_structure(I1)
    assert socI1.dim_vector() == (1, 0)  # socle I1 = S1


def test_xy3_dimensions(xy3):
    assert xy3.dim == 9
    assert proj_rep(xy3, 1).dim_vector() == (1, 2, 2)
    assert proj_rep(xy3, 2).dim_vector() == (0, 1, 2)
    assert proj_rep(xy3, 3).dim_vector() == (0, 0, 1)


def test_opposite_involution(lam, a3):
    for A in (lam, a3):
        op = A.opposite()
        assert op.opposite() is A
        assert op.dim == A.dim
        assert [a.source for a in op.quiver.arrows] == [a.target for a in A.quiver.arrows]


def test_non_admissible_detected():
    Q = Quiver([1], [("a", 1, 1)])
    with pytest.raises(NonAdmissibleError):
        build_algebra(Q, [], FieldSpec(2), 1, max_len=8)


def test_relation_validation():
    Q = Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    with pytest.raises(AlgebraError):
        build_algebra(Q, [[(1, ("a", "a"))]], FieldSpec(2), 1)  # not composable
    with pytest.raises(AlgebraError):
        build_algebra(Q, [[(1, ("a",))]], FieldSpec(2), 1)  # length < 2


def test_hom_dims_lambda(lam):
    P1, P2 = proj_rep(lam, 1), proj_rep(lam, 2)
    S1, S2 = simple_rep(lam, 1), simple_rep(lam, 2)
    assert hom_dim(P1, P1) == 1  # End(P1) = e1·A·e1 = <e1>
    assert hom_dim(S1, S2) == 0
    assert hom_dim(P2, P1) == 1
    # projectivity: dim Hom(P_i, M) = dim M·e_i
    for i, M in ((1, P2), (2, P2), (1, inj_rep(lam, 1)), (2, inj_rep(lam, 1))):
        assert hom_dim(proj_rep(lam, i), M) == M.dims[i]
    # injectivity via duality: dim Hom(M, I_i) = dim M·e_i
    for i, M in ((1, P2), (2, P2), (1, P1), (2, P1)):
        assert hom_dim(M, inj_rep(lam, i)) == M.dims[i]


def test_projective_cover(lam):
    S1 = simple_rep(lam, 1)
    P, cover, idx = projective_cover(S1)
    assert idx == [1]
    P2 = proj_rep(lam, 2)
    Pc, _, idxc = projective_cover(P2)
    assert idxc == [2]
    I1 = inj_rep(lam, 1)
    _, _, idx_i = projective_cover(I1)
    assert idx_i == [2]  # top I1 = S2
    # kernel of a cover lies in the radical: the cover of the top is iso
    from heartforge.reps import radical_rows
    from heartforge.linalg import rank
    for v in lam.quiver.vertices:
        # rank of cover equals dim, surjectivity asserted in constructor
        assert rank(cover.mats[v]) == S1.dims[v]


def test_injective_envelope(lam):
    S1 = simple_rep(lam, 1)
    I, emb, idx = injective_envelope(S1)
    assert idx == [1]
    I2 = inj_rep(lam, 2)
    _, _, idx2 = injective_envelope(I2)
    assert idx2 == [2]
    P1 = proj_rep(lam, 1)
    _, _, idxp = injective_envelope(P1)
    assert idxp == [2]  # socle P1 = S2


def test_nakayama_module(lam):
    P1 = proj_rep(lam, 1)
    nu = nakayama_module(P1)
    assert iso_modules(nu, inj_rep(lam, 1)) is not None
    A_reg = standard_proj_sum(lam, [1, 2])
    DA = standard_inj_sum(lam, [1, 2])
    assert nakayama_module(A_reg).dim_vector() == DA.dim_vector()
    with pytest.raises(AlgebraError):
        nakayama_module(simple_rep(lam, 1))


def test_nakayama_duality_dims(lam):
    # dim Hom(P, M) = dim Hom(M, νP) for projective P and several modules M
    mods = [
        proj_rep(lam, 1),
        proj_rep(lam, 2),
        simple_rep(lam, 1),
        simple_rep(lam, 2),
        inj_rep(lam, 1),
    ]
    for i in (1, 2):
        P = proj_rep(lam, i)
        nuP = inj_rep(lam, i)
        for M in mods:
            assert hom_dim(P, M) == hom_dim(M, nuP)


def test_hom_maps_are_module_maps(lam):
    P2 = proj_rep(lam, 2)
    I1 = inj_rep(lam, 1)
    for f in hom_modules(P2, I1):
        assert f.is_module_map()


def test_representation_relation_check(lam):
    P2 = proj_rep(lam, 2)
    P2.check_relations()
    dual_rep(P2).check_relations()
