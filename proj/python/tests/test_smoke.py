import math

import pytest

import opkit


def test_builtins():
    assert {"comm_nu", "ass_nu", "lie"} <= set(opkit.builtin_operads())


def test_koszul_dual_of_comm():
    dims = opkit.koszul_dual("comm-nu", max_arity=5)
    for n in range(2, 6):
        assert dims[n] == {n - 1: math.factorial(n - 1)}


def test_compose_gives_bell_numbers():
    dims = opkit.compose("comm-nu", "comm-nu", max_arity=5)
    assert [dims[n][0] for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_check_and_double_dual():
    ok, failures = opkit.check_operad("lie", max_arity=4, field="F3")
    assert ok and failures == []
    ok, dims = opkit.double_dual("comm-nu", max_arity=4)
    assert ok
    assert all(d == {0: 1} for d in dims.values())


def test_tower_stage_one():
    stages = opkit.truncation_tower("lie-shifted", max_arity=4, stages=2)
    assert stages[0]["homology"][3] == {0: 1}
    assert stages[1]["homology"][4] == {-1: 6}


def test_primitives_in_characteristic_two():
    dims = opkit.primitive_dims([(1, 1)], 8, field="F2")
    assert [n for n in range(1, 9) if dims[n]] == [1, 2, 4, 8]


def test_milnor_moore():
    assert opkit.milnor_moore("heisenberg", 6)["iso"]
    assert opkit.envelope_dims("heisenberg", 6) == [1, 0, 2, 0, 4, 0, 6]
    assert not opkit.milnor_moore("abelian", 4, field="F2", gens=[(2, 1)])["iso"]
    free = opkit.milnor_moore("free", 10, gens=[(2, 2)])
    lie = [d["lie_dim"] for d in free["degrees"] if d["degree"] % 2 == 0]
    assert lie == [opkit.witt_number(2, n) for n in range(1, 6)] == [2, 1, 2, 3, 6]


def test_norm():
    assert not opkit.norm_is_iso("trivial", 3, field="F3")
    assert opkit.norm_is_iso("regular", 3, field="F3")
    assert opkit.norm_is_iso("trivial", 3)


def test_errors():
    with pytest.raises(ValueError):
        opkit.koszul_dual("nonesuch")
    with pytest.raises(ValueError):
        opkit.primitive_dims([(1, 1)], 4, field="F4")
