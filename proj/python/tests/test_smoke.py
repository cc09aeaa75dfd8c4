import math

import pytest

import cartanlab

A = [[3, 2, 1], [2, 2, 1], [1, 1, 1]]
B = [[2, 1, 1], [1, 2, 0], [1, 0, 1]]
CAT = [[2, 1], [1, 1]]


def test_char_poly_and_spectrum():
    assert cartanlab.char_poly(A) == [-1, 5, -6, 1]
    roots = cartanlab.real_spectrum(A)
    assert len(roots) == 3
    assert math.prod(roots) == pytest.approx(1.0, abs=1e-9)


def test_validate_and_chambers():
    report = cartanlab.validate([A, B])
    assert report["pass"]
    assert not cartanlab.validate([A, A])["genuine"]
    ch = cartanlab.chambers([A, B])
    assert ch["diagram"]["count"] == 6
    fam = cartanlab.lyapunov_functionals([A, B])
    assert max(abs(s) for s in fam["weighted_sum"]) < 1e-10


def test_exponents_and_entropy():
    ex = cartanlab.qr_oseledec([[float(x) for x in row] for row in A], 10000)
    assert ex[0] == pytest.approx(1.6192, abs=1e-3)
    assert abs(sum(ex)) < 1e-6
    bk = cartanlab.brin_katok_entropy(CAT, samples=20000)
    assert bk["estimate"] == pytest.approx(math.log((3 + math.sqrt(5)) / 2), rel=0.15)
    pe = cartanlab.partition_entropy(2, depth=12, samples=1 << 16)
    assert pe["estimate"] == pytest.approx(math.log(2), rel=0.02)


def test_furstenberg():
    assert len(cartanlab.semigroup_elements(2, 3, 10**6)) == 142
    assert cartanlab.furstenberg_rational_orbit(2, 3, 7) == [1, 2, 3, 4, 5, 6]
    assert cartanlab.density_profile(2, 3, math.sqrt(2) - 1, 10**6) <= 0.1
    with pytest.raises(cartanlab.CartanlabError):
        cartanlab.gap_ratio_profile(2, 4, 1000)


def test_suspension_and_roots():
    assert cartanlab.suspension_check([A, B], grid=4)["pass"]
    assert cartanlab.lie_closure_dim(3, [(1, 2), (2, 1)]) == 3
    assert cartanlab.lie_closure_dim(4, [(i, j) for i in range(1, 5) for j in range(1, 5) if i != j]) == 15
    k = cartanlab.kak([[2.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    assert k["residual"] < 1e-9
    s = cartanlab.averaging_schedule([1.0, 0.0, -1.0])
    assert s["verdict"] == "Haar" and s["verified"]


def test_shear():
    r = cartanlab.shear_probe("atoms", 1.0)
    assert r["proportional"] and r["constant"] == pytest.approx(math.exp(-1))
    assert not cartanlab.shear_probe("atoms", 0.5)["proportional"]


def test_cli_round_trip():
    report, code = cartanlab.run("roots", "closure", "--n", "3", "--roots", "all")
    assert code == 0
    assert report["results"]["dim"] == 8
    again, _ = cartanlab.run("roots", "closure", "--n", "3", "--roots", "all")
    assert again == report
    with pytest.raises(cartanlab.CartanlabError):
        cartanlab.run("nonsense")
