import pytest

from mppg.game import validate_game
from mppg.generate import corpus

L, M, R = 0, 1, 2


def g_fig(m_owner="C"):
    """Three vertices: Con (or Dis) in the middle picks a left loop of mean 1/2 or a right loop of mean -1/2."""
    return validate_game(
        {
            "vertices": [(L, 1, "D"), (M, 0, m_owner), (R, 0, "D")],
            "edges": [(M, L, 1), (L, M, 0), (M, R, -1), (R, M, 0)],
        }
    )


def g_loop(p, c, owner="D"):
    return validate_game({"vertices": [(0, p, owner)], "edges": [(0, 0, c)]})


@pytest.fixture
def fig_con():
    return g_fig("C")


@pytest.fixture
def fig_dis():
    return g_fig("D")


@pytest.fixture(scope="session")
def games():
    return list(corpus(500, seed=2024))


@pytest.fixture(scope="session")
def solved(games):
    from mppg.lifting import solve_lifting

    return [(g, solve_lifting(g)) for g in games]
