import numpy as np
import pytest

from borelss.algebra import FiberPresentation, PoincareSeries
from borelss import spectral as sp

ONE = np.array([1], dtype=np.uint8)


def gen_by_label(page, label):
    return next(g for g in page.generators if g.label == label)


def d2_case_i(page):
    return sp.extend_leibniz(page, {gen_by_label(page, "a"): ONE})


# -- starting page -------------------------------------------------------------

def test_e2_real_row4_rank_two_all_columns():
    page = sp.build_e2(FiberPresentation("R", 5))
    for k in range(12):
        assert page.dim(k, 4) == 2


def test_e2_quaternionic_vanishes_off_lattice():
    page = sp.build_e2(FiberPresentation("H", 2))
    for k in range(8):
        for l in range(13):
            if l % 4:
                assert page.dim(k, l) == 0


def test_e2_unit_corner():
    page = sp.build_e2(FiberPresentation("C", 2))
    assert page.dim(0, 0) == 1


def test_e2_generators_are_t_a_b():
    page = sp.build_e2(FiberPresentation("R", 5))
    assert sorted(g.label for g in page.generators) == ["a", "b", "t"]
    assert {g.key for g in page.generators} == {(1, 0, 0), (0, 1, 0), (0, 4, 1)}


# -- differentials via the derivation property -----------------------------------

def test_extend_leibniz_zero_everywhere():
    page = sp.build_e2(FiberPresentation("R", 3))
    d = sp.extend_leibniz(page, {})
    assert d.is_zero


def test_extend_leibniz_case_i_values():
    # transgression of the degree-1 class: d(a^j b) = j t^2 a^{j-1} b
    fiber = FiberPresentation("R", 5)
    page = sp.build_e2(fiber)
    d = d2_case_i(page)
    for j in range(6):
        block = d.block(0, 4 + j)
        basis = fiber.monomials_for_degree(4 + j)
        col = basis.index((j, 1))
        target_basis = fiber.monomials_for_degree(3 + j)
        vec = np.zeros((len(target_basis),), dtype=np.uint8)
        if j % 2:
            vec[target_basis.index((j - 1, 1))] = 1
        got = block[:, col] if block is not None else np.zeros_like(vec)
        assert (got == vec).all(), f"d2 on a^{j} b"


def test_extend_leibniz_even_m_is_not_a_derivation():
    page = sp.build_e2(FiberPresentation("R", 4))
    with pytest.raises(sp.NotADerivation):
        d2_case_i(page)


def test_extend_leibniz_even_m_quaternionic():
    page = sp.advance(sp.build_e2(FiberPresentation("H", 2)), 5)
    ga = gen_by_label(page, "a")
    with pytest.raises(sp.NotADerivation):
        sp.extend_leibniz(page, {ga: ONE})


def test_d_square_nonzero_subbranch():
    # both degree-1 and degree-4 generators transgress at the first page:
    # applying d twice on the product class is nonzero
    page = sp.build_e2(FiberPresentation("R", 5))
    d = sp.extend_leibniz(page, {gen_by_label(page, "a"): ONE,
                                 gen_by_label(page, "b"): ONE})
    with pytest.raises(sp.DSquareNonzero):
        sp.turn_page(page, d)


# -- page turning ------------------------------------------------------------------

def test_turn_zero_differential_keeps_dims():
    page = sp.build_e2(FiberPresentation("R", 3))
    nxt = sp.turn_page(page, sp.zero_differential(page))
    assert nxt.r == 3
    for (k, l), space in page.spaces.items():
        assert nxt.dim(k, l) == space.dim


def test_case_i_third_page_dims():
    page = sp.build_e2(FiberPresentation("R", 5))
    e3 = sp.turn_page(page, d2_case_i(page))
    expected_rows = {0: 1, 2: 1, 4: 2, 6: 1, 8: 1}
    for l in range(10):
        for k in range(8):
            want = expected_rows.get(l, 0) if k <= 1 else 0
            assert e3.dim(k, l) == want, (k, l)


def test_case_ii_sixth_page_dims():
    fiber = FiberPresentation("R", 3)
    page = sp.advance(sp.build_e2(fiber), 5)
    d = sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE})
    e6 = sp.turn_page(page, d)
    for k in range(10):
        for l in range(8):
            want = 1 if (k <= 4 and l <= 3) else 0
            assert e6.dim(k, l) == want, (k, l)


def test_case_ii_d5_formula():
    # d5(a^j b) = t^5 a^j for every j
    fiber = FiberPresentation("R", 3)
    page = sp.advance(sp.build_e2(fiber), 5)
    d = sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE})
    for j in range(4):
        block = d.block(0, 4 + j)
        src = fiber.monomials_for_degree(4 + j)
        dst = fiber.monomials_for_degree(j)
        vec = np.zeros(len(dst), dtype=np.uint8)
        vec[dst.index((j, 0))] = 1
        assert (block[:, src.index((j, 1))] == vec).all()


def test_case_iii_d4_formula_top_class_survives():
    # d4(a^j b) = t^4 a^{j+1} for j < m and zero on the top class
    fiber = FiberPresentation("R", 5)
    page = sp.advance(sp.build_e2(fiber), 4)
    d = sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE})
    assert d.block(0, 9) is None
    e5 = sp.turn_page(page, d)
    for k in range(10):
        assert e5.dim(k, 9) == 1
        assert e5.dim(k, 0) == 1
    for k in range(4, 10):
        for l in range(1, 6):
            assert e5.dim(k, l) == 0


# -- terminality and totals -----------------------------------------------------------

def test_bottom_row_only_is_terminal():
    fiber = FiberPresentation("R", 2)
    page = sp.build_e2(fiber)
    # run the d5 route to its terminal page and drop everything above by hand
    page = sp.advance(page, 5)
    d = sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE})
    e6 = sp.turn_page(page, d)
    assert sp.is_terminal(e6)


def test_case_ii_sixth_page_terminal():
    fiber = FiberPresentation("R", 5)
    page = sp.advance(sp.build_e2(fiber), 5)
    e6 = sp.turn_page(page, sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE}))
    assert sp.is_terminal(e6)


def test_case_iii_page_m_plus_3_not_terminal():
    # the top-row generator can still transgress at r = m+5
    fiber = FiberPresentation("R", 5)
    page = sp.advance(sp.build_e2(fiber), 4)
    e5 = sp.turn_page(page, sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE}))
    mid = sp.advance(e5, fiber.m + 3)
    assert not sp.is_terminal(mid)


def test_tot_series_case_ii_m5():
    fiber = FiberPresentation("R", 5)
    page = sp.advance(sp.build_e2(fiber), 5)
    e6 = sp.turn_page(page, sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE}))
    series, clean = sp.tot_series(e6)
    assert clean
    assert series == PoincareSeries.of((1, 2, 3, 4, 5, 5, 4, 3, 2, 1))


def test_tot_series_verdict_fails_on_collapsed_page():
    page = sp.build_e2(FiberPresentation("R", 3))
    _, clean = sp.tot_series(sp.advance(page, 4))
    assert not clean


# -- structural invariants ---------------------------------------------------------

def _all_run_pages(fiber, route):
    """Pages of one decision route: route = list of (r, gen label, value)."""
    page = sp.build_e2(fiber)
    pages = [page]
    for r, label, value in route:
        page = sp.advance(page, r)
        d = sp.extend_leibniz(page, {gen_by_label(page, label): value})
        page = sp.turn_page(page, d)
        pages.append(page)
    return pages


def test_dim_monotonicity_and_t_linearity_case_v():
    fiber = FiberPresentation("R", 5)
    pages = _all_run_pages(fiber, [(2, "b", ONE)])
    e2, e3 = pages
    for (k, l), space in e3.spaces.items():
        assert space.dim <= e2.dim(k, l)
    # t-linearity: the differential commutes with multiplication by t
    page = sp.advance(sp.build_e2(fiber), 2)
    d = sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE})
    for (k, l), block in d.blocks.items():
        if k + 1 > page.k_window:
            continue
        nxt = d.block(k + 1, l)
        if nxt is None:
            assert not block.any()
        else:
            assert (block == nxt).all()


def test_d_square_zero_and_squares_die_on_all_blocks():
    fiber = FiberPresentation("R", 5)
    page = sp.advance(sp.build_e2(fiber), 2)
    d = sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE})
    for (k, l), m1 in d.blocks.items():
        if k > page.k_window:
            continue
        m2 = d.block(k + 2, l - 1)
        if m2 is not None:
            assert not ((m2 @ m1) % 2).any()
    # char-2 square rule: d kills the square of every class
    for (k, l), space in page.spaces.items():
        if k > page.k_window // 2:
            continue
        for idx in range(space.dim):
            v = space.reps[idx]
            pk, pl, pv = page.rep_product(k, l, v, k, l, v)
            coords = page.express(pk, pl, pv)
            if coords is None or not coords.any():
                continue
            block = d.block(pk, pl)
            if block is None:
                continue
            assert not ((block @ coords) % 2).any(), (k, l, idx)


def test_edge_contract_terminal_page():
    # bottom row only shrinks, left column stays a subspace of the fiber algebra
    fiber = FiberPresentation("R", 5)
    e2 = sp.build_e2(fiber)
    page = sp.advance(e2, 5)
    e6 = sp.turn_page(page, sp.extend_leibniz(page, {gen_by_label(page, "b"): ONE}))
    for k in range(e6.k_window):
        assert e6.dim(k, 0) <= e2.dim(k, 0)
    for l in range(fiber.top + 1):
        space = e6.space(0, l)
        if space is None:
            continue
        mat = np.array(space.reps, dtype=np.uint8) if space.reps else None
        if mat is not None and len(mat):
            from borelss import gf2
            assert gf2.rank(mat) == space.dim


def test_dump_format_lines():
    page = sp.build_e2(FiberPresentation("R", 1))
    dump = page.dump(k_max=1)
    lines = dump.strip().splitlines()
    assert lines[0] == "E 2 0 0 1 1"
    assert "E 2 0 4 1 b" in lines
    assert "E 2 1 5 1 t*a*b" in lines
    keys = [tuple(map(int, ln.split()[2:4])) for ln in lines]
    assert keys == sorted(keys)
