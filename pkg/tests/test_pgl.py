import numpy as np
import pytest

from loidreau.gf import Field
from loidreau.linalg import gf2_matmul
from loidreau.pgl import (act_on_beta, act_on_solution, pgl_elements, pgl_order, random_gl,
                          stabilizer, stabilizer_relation)
from loidreau.scheme import masking_space_ok

F = Field(16)


@pytest.mark.parametrize("lam,order", [(2, 6), (3, 168), (4, 20160)])
def test_group_orders(lam, order):
    assert pgl_order(lam) == order
    if lam <= 3:
        assert len(pgl_elements(lam)) == order


def _beta(rng, lam):
    while True:
        b = F.random(rng, lam - 1)
        if masking_space_ok(F, b):
            return b


def test_action_is_a_right_action():
    rng = np.random.default_rng(0)
    beta = _beta(rng, 3)
    for _ in range(20):
        A, B = random_gl(3, rng), random_gl(3, rng)
        step = act_on_beta(F, B, act_on_beta(F, A, beta))
        assert np.array_equal(step, act_on_beta(F, gf2_matmul(A, B), beta))


def test_orbit_has_full_size_for_generic_beta():
    rng = np.random.default_rng(1)
    beta = _beta(rng, 3)
    assert stabilizer(F, beta) is None
    imgs = {tuple(act_on_beta(F, A, beta).tolist()) for A in pgl_elements(3)}
    assert len(imgs) == 168


def test_batched_action_matches_scalar():
    rng = np.random.default_rng(2)
    betas = np.stack([_beta(rng, 3) for _ in range(10)])
    A = random_gl(3, rng)
    out, ok = act_on_beta(F, A, betas)
    assert ok.all()
    for i in range(10):
        assert np.array_equal(out[i], act_on_beta(F, A, betas[i]))


def test_stabilizer_detected():
    # β = (ω, ω^2) with ω a primitive cube root of unity in F_16: the
    # cyclic permutation of (1, ω, ω^2) up to scaling fixes it.
    w = F.pow(F.generator, (F.order - 1) // 3)
    beta = np.array([w, F.mul(w, w)], dtype=np.uint64)
    A = stabilizer(F, beta)
    assert A is not None
    assert np.array_equal(act_on_beta(F, A, beta), beta)
    rel = stabilizer_relation(A)
    assert len(rel) == 2


def test_solution_action_keeps_combination_proportional():
    rng = np.random.default_rng(3)
    beta = _beta(rng, 3)
    h = F.random(rng, (3, 6))
    A = random_gl(3, rng)
    h2, b2 = act_on_solution(F, A, h, beta)
    def comb(hh, bb):
        c = np.concatenate([[1], bb]).astype(np.uint64)
        return np.bitwise_xor.reduce(F.mul(c[:, None], hh), axis=0)
    assert np.array_equal(comb(h2, b2), comb(h, beta))
