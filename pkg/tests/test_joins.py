import pytest

from bpmnpc.converter import Join
from join_oracle import m_of_n_holds, n_of_n_holds, run


@pytest.mark.parametrize("n", [1, 2, 3])
def test_n_of_n(n):
    r = run(Join.N_OF_N, n)
    assert not r.truncated and r.states <= 1000
    assert n_of_n_holds(r, n)


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (3, 2), (3, 3)])
def test_m_of_n(n, m):
    r = run(Join.M_OF_N, n, m)
    assert not r.truncated and r.states <= 1000
    assert m_of_n_holds(r, n, m)


def test_n_of_n_is_not_m_of_n():
    # the oracle must be able to tell the two joins apart
    assert not m_of_n_holds(run(Join.N_OF_N, 3), 3, 2)
    assert not n_of_n_holds(run(Join.M_OF_N, 3, 2), 3)


def test_choice_join_fires_per_token():
    r = run(Join.CHOICE, 2)
    assert r.enabled_with({1}) and r.enabled_with({2})


def test_every_interleaving_terminates_with_continuation():
    r = run(Join.N_OF_N, 3)
    # three triggers may arrive in any of 3! orders
    assert r.traces >= 6
