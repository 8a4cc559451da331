import pytest

from heartforge.complexes import iso_test, pc_stalk
from heartforge.extcat import ExtCategory
from heartforge.silting import (
    CensusCaps,
    check_tilting_pair,
    enumerate_silting,
    enumerate_tilting_pairs,
    is_presilting,
    is_silting,
    pair_to_silting,
    silting_to_pair,
    torsion_from_silting,
    verify_bijections,
)
from heartforge.torsion import IsoclassSet, TorsionContext

from test_complexes import elem, lambda_silting_summand


@pytest.fixture(scope="module")
def setup(lam):
    cat = ExtCategory(lam)
    quiver = cat.knit_ar_quiver(limit=64)
    registry = cat.registry_objects(quiver)
    ctx = TorsionContext(cat, registry, complete=True)
    by_name = {o.name: o for o in registry}
    return cat, ctx, by_name


def paper_silting(cat, lam):
    return lambda_silting_summand(lam).direct_sum(pc_stalk(lam, (2,), -2))


def test_regular_is_silting(setup, lam):
    cat, ctx, _ = setup
    A_stalk = pc_stalk(lam, (1, 2), 0)
    assert is_presilting(cat, A_stalk)
    ok, trunc = is_silting(cat, A_stalk)
    assert ok is True and trunc is False


def test_mixed_shift_not_presilting(setup, lam):
    cat, _, _ = setup
    mixed = pc_stalk(lam, (1,), 0).direct_sum(pc_stalk(lam, (1,), -1))
    assert not is_presilting(cat, mixed)


def test_paper_complex_is_silting(setup, lam):
    cat, _, _ = setup
    P = paper_silting(cat, lam)
    assert is_presilting(cat, P)
    ok, trunc = is_silting(cat, P)
    assert ok is True and trunc is False


def test_xy3_presentation_presilting_not_silting(xy3):
    cat = ExtCategory(xy3)
    C = pc_stalk(xy3, (3,), -2)
    C = None
    from heartforge.complexes import ProjComplex

    P = ProjComplex(
        xy3,
        {-2: (3,), -1: (2,), 0: (1,)},
        {-2: [[elem(xy3, "y2")]], -1: [[elem(xy3, "y1")]]},
    )
    assert is_presilting(cat, P)
    ok, trunc = is_silting(cat, P, limit=48)
    # only one summand < |A| = 3: never silting
    assert ok is False


def test_census_lambda(setup, lam):
    cat, ctx, _ = setup
    census, report = enumerate_silting(cat)
    assert report["module_registry_complete"] is True
    assert not report["candidate_cap_hit"]
    # census contains the regular complex and the paper silting complex
    A_stalk = pc_stalk(lam, (1, 2), 0)
    P = paper_silting(cat, lam)
    found_A = any(iso_test(s.carrier, A_stalk) for s in census
                  if sorted(s.carrier.terms) == [0])
    found_P = any(
        sorted(s.carrier.terms) == [-2, -1, 0]
        and sorted(map(len, s.carrier.terms.values())) == sorted(map(len, P.terms.values()))
        and iso_test(s.carrier, P)
        for s in census
    )
    assert found_A and found_P
    # every census member has exactly |A| = 2 summands
    for s in census:
        assert len(s.summand_keys) == 2


def test_torsion_from_silting_paper(setup, lam):
    cat, ctx, by_name = setup
    from heartforge.silting import SiltingComplex

    P = paper_silting(cat, lam)
    S = SiltingComplex(P, True, True, ("a", "b"))
    data = torsion_from_silting(cat, ctx, S, check=True)
    pair = data["pair"]
    T_names = {"I1->P1", "0->S1", "S1->0"}
    F_names = {"0->S2", "0->P1", "0->P2", "P1->0", "P2->P1", "P2->P2", "P2->0"}
    names = {o.key: o.name for o in ctx.registry}
    assert {names[k] for k in pair.T.keys} == T_names
    assert {names[k] for k in pair.F.keys} == F_names
    assert pair.is_s_torsion is True
    assert data["t_proj"] is by_name["I1->P1"]
    assert data["t_inj"] is by_name["I1->P1"]
    # f_inj = (P1 ⊕ I2 -> 0), f_proj = (0 -> P1 ⊕ P2)
    f_inj = data["f_inj"]
    assert {(s.name, m) for s, m in cat.decompose(f_inj)} == {("P1->0", 1), ("P2->0", 1)}
    f_proj = data["f_proj"]
    assert {(s.name, m) for s, m in cat.decompose(f_proj)} == {("0->P1", 1), ("0->P2", 1)}


def test_regular_silting_torsion_trivial(setup, lam):
    cat, ctx, _ = setup
    from heartforge.silting import SiltingComplex

    S = SiltingComplex(pc_stalk(lam, (1, 2), 0), True, True, ("a", "b"))
    data = torsion_from_silting(cat, ctx, S, check=False)
    assert len(data["pair"].T) == len(ctx.registry)
    assert len(data["pair"].F) == 0
    assert data["t_proj"].name in ("P1+P2", "0->P1+P2")


def test_tilting_pair_paper(setup, lam):
    cat, ctx, by_name = setup
    tp = check_tilting_pair(cat, ctx, by_name["I1->P1"], (2,))
    assert tp.positive_rigid is True and tp.pair_rigid is True and tp.tilting is True


def test_rigid_not_positive_rigid(setup, lam):
    # (0->S1) is tau-rigid but not positive tau-rigid [paper]
    cat, ctx, by_name = setup
    X = by_name["0->S1"]
    tX = cat.tau(X)
    assert cat.hom_dim(X, tX, 0) == 0  # rigid
    assert any(cat.hom_dim(X, tX, j) != 0 for j in range(-(cat.m - 1), 0))
    tp = check_tilting_pair(cat, ctx, X, ())
    assert tp.positive_rigid is False and tp.tilting is False


def test_pair_to_silting_roundtrip(setup, lam):
    cat, ctx, by_name = setup
    tp = check_tilting_pair(cat, ctx, by_name["I1->P1"], (2,))
    P = pair_to_silting(cat, tp)
    assert iso_test(P, paper_silting(cat, lam))
    back = silting_to_pair(cat, ctx, P)
    assert back.X is tp.X and back.P == (2,)


def test_regular_pair(setup, lam):
    cat, ctx, _ = setup
    A_obj = cat.regular_object()
    tp = check_tilting_pair(cat, ctx, A_obj, ())
    assert tp.tilting is True
    P = pair_to_silting(cat, tp)
    assert sorted(P.terms) == [0]


def test_enumerate_tilting_pairs_paper_counts(setup, lam):
    cat, ctx, by_name = setup
    pairs = enumerate_tilting_pairs(cat, ctx)
    # |X| + |P| = |A| = 2 for every pair
    for tp in pairs:
        assert sum(m for _, m in cat.decompose(tp.X)) + len(tp.P) == 2
    key_ip = by_name["I1->P1"].key
    with_ip = [tp for tp in pairs
               if any(s.key == key_ip for s, _ in cat.decompose(tp.X))]
    assert len(with_ip) == 2  # [paper ex:taut]
    names = set()
    for tp in with_ip:
        names.add((tuple(sorted(s.name for s, _ in cat.decompose(tp.X))), tp.P))
    assert names == {(("I1->P1", "P2->P1"), ()), (("I1->P1",), (2,))}
    with_p2 = [tp for tp in pairs if tp.P == (2,) or tp.P == (1, 2)]
    # pairs containing (0, P2) as a summand: exactly three [paper ex:taut]
    with_p2 = [tp for tp in pairs if 2 in tp.P]
    assert len(with_p2) == 3
    shapes = {
        (tuple(sorted(s.name for s, _ in cat.decompose(tp.X))), tp.P) for tp in with_p2
    }
    assert shapes == {
        (("I1->P1",), (2,)),
        (("S1->0",), (2,)),
        ((), (1, 2)),
    }


def test_verify_bijections_lambda(setup, lam):
    cat, ctx, _ = setup
    result = verify_bijections(cat, ctx)
    assert result["ok"], result["report"]["mismatches"]
    assert len(result["census"]) == len(result["pairs"])
