import pytest

from fibpow.fib_core import fib
from fibpow.search import (
    CONVENTIONS,
    KNOWN_CENSUS,
    Solution,
    census_check,
    enumerate_exhaustive,
    enumerate_solutions,
    instance_of,
    kebli_holds,
    load_checkpoint,
)
from oracles import exhaustive_powers

KNOWN_18 = [
    (0, 0, 0, 2), (1, 0, 1, 2), (2, 0, 1, 2), (3, 3, 2, 2), (4, 1, 2, 2), (4, 2, 2, 2),
    (5, 4, 2, 3), (6, 0, 2, 3), (6, 1, 3, 2), (6, 2, 3, 2), (6, 6, 2, 4), (7, 4, 2, 4),
    (9, 3, 6, 2), (11, 10, 12, 2), (12, 0, 12, 2), (16, 7, 10, 3), (17, 4, 40, 2),
    (36, 12, 3864, 2),
]


def tuples(sols):
    return [(s.n, s.m, s.y, s.a) for s in sols]


def test_known_solution_found():
    sols = enumerate_solutions(36)
    assert (36, 12, 3864, 2) in tuples(sols)
    assert fib(36) + fib(12) == 14930496 == 3864**2


@pytest.mark.parametrize("max_n, expected", [(6, (6, 6, 2, 4)), (3, (3, 3, 2, 2))])
def test_double_fibonacci_powers(max_n, expected):
    assert expected in tuples(enumerate_solutions(max_n))


def test_max_n_zero_is_degenerate_only():
    assert tuples(enumerate_solutions(0)) == [(0, 0, 0, 2)]


def test_full_list_to_60():
    assert tuples(enumerate_solutions(60)) == KNOWN_18


def test_matches_independent_oracles():
    got = enumerate_solutions(25)
    assert got == enumerate_exhaustive(25)
    assert tuples(got) == exhaustive_powers(25)
    assert tuples(enumerate_solutions(60)) == exhaustive_powers(60)


def test_every_solution_reverifies():
    for s in enumerate_solutions(80):
        assert s.reverify()
        assert s.value == fib(s.n) + fib(s.m) == s.y**s.a


def test_parallel_matches_serial():
    assert enumerate_solutions(70, workers=3) == enumerate_solutions(70)


def test_checkpoint_resume(tmp_path):
    ck = tmp_path / "ck.txt"
    first = enumerate_solutions(20, checkpoint=ck)
    last, saved = load_checkpoint(ck)
    assert last == 20 and saved == first
    full = enumerate_solutions(40, checkpoint=ck)
    assert full == enumerate_solutions(40)
    assert load_checkpoint(ck)[0] == 40


def test_checkpoint_ignores_unfinished_shard(tmp_path):
    ck = tmp_path / "ck.txt"
    ck.write_text("sol 0 0\nshard 0\nsol 1 0\nshard 1\nsol 2 0\n")  # shard 2 never finished
    last, saved = load_checkpoint(ck)
    assert last == 1 and tuples(saved) == [(0, 0, 0, 2), (1, 0, 1, 2)]
    assert enumerate_solutions(6, checkpoint=ck) == enumerate_solutions(6)


def test_census_convention_grid():
    rep = census_check(60)
    assert len(rep.counts) == len(CONVENTIONS) == 8
    assert rep.matching == ["y01=yes,n=m=yes,count=pairs"]
    assert rep.counts["y01=yes,n=m=yes,count=pairs"] == KNOWN_CENSUS
    assert rep.census_ok and rep.parity_ok and rep.kebli_ok


def test_census_needs_max_n_36():
    with pytest.raises(ValueError):
        census_check(30)


def test_parity_theorem_to_200():
    sols = enumerate_solutions(200)
    assert not [s for s in sols if (s.n - s.m) % 2 == 0 and s.n > 36]
    assert tuples(sols) == KNOWN_18


def test_kebli_slice():
    for s in enumerate_solutions(60):
        assert kebli_holds(s)


def test_instances_of_solutions():
    assert instance_of(Solution(36, 12, 3864, 2, 14930496)).indices == (18, 16, 13, 10, 5)
    assert instance_of(Solution(6, 6, 2, 4, 16)).indices == (3,)
    assert instance_of(Solution(3, 3, 2, 2, 4)).indices == (3,)
    with pytest.raises(ValueError):
        instance_of(Solution(1, 0, 1, 2, 1))


def test_solution_validation():
    with pytest.raises(ValueError):
        Solution(1, 2, 1, 2, 2)
    with pytest.raises(ValueError):
        Solution(2, 1, 2, 1, 2)
