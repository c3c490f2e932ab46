"""Group-side constructions: parameters, algebra facts, resolution, End-DGA.

Resolution exactness is certified by independent rank arithmetic on the
multiplication matrices; the expected minimal models are certified by the
identity sweeps from the A-infinity kit.
"""

import numpy as np
import pytest

from ainfbg.ainf import stasheff_defect
from ainfbg.dga import validate_dga
from ainfbg.glin import Bidegree, TruncationExceeded, rank_nullspace
from ainfbg.grp import (
    GroupParams,
    build_end_dga,
    build_group_algebra,
    build_resolution,
    default_gamma,
    expected_loop_model,
    expected_minimal_model,
    multiplicative_order,
    stage_weight,
)

CASES = [
    # (p, n, q) -> (h, default gamma)
    ((3, 1, 2), (2, 2)),
    ((5, 1, 2), (3, 4)),
    ((5, 1, 4), (4, 2)),
    ((7, 1, 2), (4, 6)),
    ((7, 1, 3), (5, 2)),
    ((7, 1, 6), (6, 3)),
    ((3, 2, 2), (5, 8)),
    ((3, 1, 1), (1, 1)),
]


def test_parameter_table():
    for (p, n, q), (h, gamma) in CASES:
        gp = GroupParams(p, n, q)
        assert gp.h == h, (p, n, q)
        assert gp.gamma == gamma, (p, n, q)
        assert gp.hp.h * gp.hp.a - gp.hp.ell * gp.hp.b == 1
        assert gp.internal_scale == q
        assert gp.hp.ell == p ** n


def test_gamma_orders():
    assert multiplicative_order(2, 9) == 6
    assert multiplicative_order(8, 9) == 2
    assert default_gamma(7, 1, 6) == 3  # 2 has order 3 mod 7, 3 is primitive
    with pytest.raises(ValueError):
        multiplicative_order(3, 9)


def test_parameter_validation():
    with pytest.raises(ValueError):
        GroupParams(2, 1, 1)      # p must be odd
    with pytest.raises(ValueError):
        GroupParams(9, 1, 2)      # not prime
    with pytest.raises(ValueError):
        GroupParams(5, 1, 3)      # 3 does not divide 4
    with pytest.raises(ValueError):
        GroupParams(5, 1, 2, gamma=2)  # order 4, need 2


def test_group_algebra_facts():
    for pnq in [(3, 1, 2), (5, 1, 4), (3, 2, 2)]:
        gp = GroupParams(*pnq)
        ga = build_group_algebra(gp)  # nilpotency etc. asserted inside
        m, p = gp.pn, gp.p
        # U has no p-divisible group elements and augmentation zero
        assert all(ga.U[j] == 0 for j in range(0, m, p))
        assert int(ga.U.sum()) % p == 0
        # the action is an algebra automorphism
        rng = np.random.default_rng(11)
        for _ in range(5):
            u = rng.integers(0, p, size=m)
            v = rng.integers(0, p, size=m)
            lhs = ga.act(ga.convolve(u, v))
            rhs = ga.convolve(ga.act(u), ga.act(v))
            assert np.array_equal(lhs, rhs)


def test_resolution_weights_and_exactness():
    for (pnq, _) in CASES:
        gp = GroupParams(*pnq)
        top = 15
        res = build_resolution(gp, top)
        pn, q = gp.pn, gp.q
        assert res.weights[0] == 0
        for i in range(1, top + 1):
            # equivariance: stage weights climb by the differential exponent
            assert res.weights[i] == res.weights[i - 1] + res.exponent(i)
        assert res.characters == [w % q for w in res.weights]
        assert res.weights[2 * q] == q * pn          # the class of x
        assert res.weights[2 * q - 1] == q * gp.h    # the class of t

        d = {i: res.d_matrix(i) for i in range(1, top + 1)}
        assert rank_nullspace(d[1], gp.p)[0] == pn - 1  # cokernel = k
        for i in range(1, top):
            assert not np.any((d[i] @ d[i + 1]) % gp.p)
            rank_i = rank_nullspace(d[i], gp.p)[0]
            rank_next = rank_nullspace(d[i + 1], gp.p)[0]
            assert rank_next == pn - rank_i, f"not exact at stage {i}"


def test_stage_weight_closed_form():
    for pn in (3, 5, 7, 9):
        for j in range(5):
            assert stage_weight(2 * j, pn) == j * pn
            assert stage_weight(2 * j + 1, pn) == j * pn + 1


def test_end_dga_small_exhaustive():
    gp = GroupParams(3, 1, 2)
    dga = build_end_dga(gp, window=(-8, 1), length=14)
    labels = [lab for bd in dga.space.bidegrees()
              for lab in dga.space.labels(bd)]
    assert labels
    for lab in labels:
        i, d, a = map(int, lab.split(":"))
        w = stage_weight(i + d, 3) - stage_weight(i, 3) - a
        assert w >= 0 and w % 2 == 0
        assert dga.space.bidegree_of(lab) == Bidegree(-d, w)
    assert dga.mult(dga.unit, dga.unit) == dga.unit
    rep = validate_dga(dga, triple_sample=4000)
    assert rep.d_squared_checked > 0
    assert rep.leibniz_checked > 0
    assert rep.assoc_checked > 0


def test_end_dga_default_sampled():
    gp = GroupParams(3, 1, 2)
    dga = build_end_dga(gp)
    rep = validate_dga(dga, pair_sample=2500, triple_sample=2500, seed=3)
    assert rep.d_squared_checked == sum(
        1 for bd in dga.space.bidegrees()
        for _ in dga.space.labels(bd)
        if bd.s >= dga.space.window[0] + 2)


def test_end_dga_known_bidegrees():
    gp = GroupParams(3, 1, 2)
    dga = build_end_dga(gp)
    # cocycles representing x and t live at stage-lowering degrees 2q, 2q-1
    assert dga.space.has_label("0:4:0")
    assert dga.space.bidegree_of("0:4:0") == Bidegree(-4, 6)
    assert dga.space.has_label("0:3:0")
    assert dga.space.bidegree_of("0:3:0") == Bidegree(-3, 4)
    # the weight filter keeps only invariant maps
    for bd in dga.space.bidegrees():
        assert bd.w % gp.q == 0 and bd.w >= 0


def test_end_dga_truncation_raises():
    gp = GroupParams(3, 1, 2)
    dga = build_end_dga(gp, window=(-6, 1), length=12)
    lab = next(lab for bd in dga.space.bidegrees() if bd.s == -6
               for lab in dga.space.labels(bd))
    with pytest.raises(TruncationExceeded):
        dga.diff(lab)
    deep = [lab for bd in dga.space.bidegrees() if bd.s <= -4
            for lab in dga.space.labels(bd)]
    with pytest.raises(TruncationExceeded):
        for la in deep:
            for lb in deep:
                dga.products(la, lb)


def test_expected_models_satisfy_identities():
    for pnq in [(3, 1, 2), (5, 1, 2), (3, 1, 1), (7, 1, 3)]:
        gp = GroupParams(*pnq)
        model = expected_minimal_model(gp)
        top = min(gp.default_arity_bound(), 7)
        for arity in range(3, top + 1):
            rep = stasheff_defect(model, arity)
            assert rep.ok(), (pnq, arity, list(rep.nonzero)[:3])


def test_expected_model_family_values():
    gp = GroupParams(3, 1, 2)
    model = expected_minimal_model(gp)
    assert model.op_value(3, ("t", "t", "t")) == {"x^2": 2}      # -x^2
    gp5 = GroupParams(5, 1, 2)
    model5 = expected_minimal_model(gp5)
    assert model5.op_value(5, ("t",) * 5) == {"x^3": 1}          # +x^3
    gp9 = GroupParams(3, 2, 2)
    model9 = expected_minimal_model(gp9)
    assert model9.op_value(9, ("t",) * 9) == {"x^5": 1}          # +x^5


def test_expected_loop_models():
    gp = GroupParams(3, 1, 2)
    loop = expected_loop_model(gp)
    assert loop.ops.keys() == {2}           # exotic ring, no higher ops
    assert loop.op_value(2, ("xi", "xi")) == {"tau^3": 2}        # -tau^3
    assert loop.space.bidegree_of("tau") == Bidegree(2, 4)
    assert loop.space.bidegree_of("xi") == Bidegree(3, 6)
    for arity in range(3, loop.arity_bound + 1):
        assert stasheff_defect(loop, arity).ok()

    gp5 = GroupParams(5, 1, 2)
    loop5 = expected_loop_model(gp5)
    assert loop5.op_value(2, ("xi", "xi")) == {}
    assert loop5.op_value(3, ("xi",) * 3) == {"tau^5": 4}        # -tau^5
    assert loop5.space.bidegree_of("tau") == Bidegree(2, 6)
    assert loop5.space.bidegree_of("xi") == Bidegree(3, 10)
    for arity in range(3, 5):
        assert stasheff_defect(loop5, arity).ok()

    gp7 = GroupParams(7, 1, 3)
    loop7 = expected_loop_model(gp7)
    assert loop7.op_value(5, ("xi",) * 5) == {"tau^7": 1}        # +tau^7


def test_loop_model_rejects_q1():
    with pytest.raises(ValueError):
        expected_loop_model(GroupParams(3, 1, 1))
