import pytest

import domp


def test_example_solves_to_nine():
    inst = domp.example()
    assert (inst.n, inst.p) == (3, 2)
    r = domp.solve(inst)
    assert r["status"] == "Optimal"
    assert r["value"] == 9
    assert domp.ordered_value(inst, r["open"]) == 9


def test_ranks_and_values():
    inst = domp.Instance(2, [[1, 3, 6], [3, 1, 8], [6, 8, 1]], [4, 2, 1])
    assert inst == domp.example()
    assert domp.ranks(inst) == [[1, 4, 6], [5, 2, 8], [7, 9, 3]]
    assert domp.ordered_value(inst, [1, 2]) == 12
    value, sets = domp.oracle(inst)
    assert value == 9
    assert sets == [[1, 3], [2, 3]]


def test_random_instance_matches_oracle(tmp_path):
    inst = domp.generate(9, 3, 5)
    path = tmp_path / "g.domp"
    inst.save(str(path))
    assert domp.load(str(path)) == inst
    best, _ = domp.oracle(inst)
    assert domp.solve(inst)["value"] == best
    g, _, cols = domp.grasp(inst)
    assert g >= best and cols > 0


def test_relaxations_ordered():
    inst = domp.generate(8, 2, 3)
    mp, _ = domp.mp_relaxation(inst)
    woc, nvars = domp.woc_relaxation(inst)
    assert nvars == 8 ** 3 + 8
    assert mp >= woc - 1e-6
    assert domp.oracle(inst)[0] >= mp - 1e-6


def test_bad_input():
    with pytest.raises(ValueError):
        domp.Instance(5, [[1, 2], [3, 4]], [1, 1])
    with pytest.raises(ValueError):
        domp.load("/nonexistent/instance.domp")
