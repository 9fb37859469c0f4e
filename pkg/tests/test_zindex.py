import itertools
import random
from fractions import Fraction

import pytest

from specalc import numkit as nk
from specalc import oracle
from specalc import series as se
from specalc import species as sp
from specalc import zindex as zi
from specalc.errors import CompositionError, DomainError, UnknownAtom, ZeroConstantRequired
from specalc.zindex import CycleIndex


def test_atom_x():
    z = zi.zi_atom("X", 4)
    assert z.fix == {(1,): 1}


def test_atom_sets():
    z = zi.zi_atom("Ep", 4)
    for w in range(1, 5):
        for lam in nk.int_partitions(w):
            assert z.fix_value(lam) == 1
    assert z.fix_value(()) == 0
    assert zi.zi_atom("E", 4).fix_value(()) == 1


def test_atom_permutations():
    z = zi.zi_atom("Sp", 5)
    for w in range(1, 6):
        for lam in nk.int_partitions(w):
            assert z.fix_value(lam) == nk.aut(lam)


def test_atoms_match_oracle_fix():
    atoms = {
        "X": sp.X(),
        "E": sp.E(),
        "Ep": sp.Eplus(),
        "L": sp.L(),
        "Lp": sp.Lplus(),
        "C": sp.C(),
        "S": sp.S(),
        "Sp": sp.Splus(),
    }
    for name, expr in atoms.items():
        z = zi.zi_atom(name, 4)
        for w in range(5):
            for lam in nk.int_partitions(w):
                assert z.fix_value(lam) == oracle.fix_by_type(expr, lam), (name, lam)


def test_atom_ek():
    z = zi.zi_atom("Ek", 5, k=2)
    assert z.fix_value((2,)) == 1
    assert z.fix_value((0, 1)) == 1
    assert z.fix_value((1,)) == 0
    with pytest.raises(DomainError):
        zi.zi_atom("Ek", 5)
    with pytest.raises(UnknownAtom):
        zi.zi_atom("Par", 5)


def test_zi_add_and_zero():
    p = zi.zi_atom("C", 5)
    assert zi.zi_add(p, zi.zi_zero(5)) == p


def test_zi_mul():
    zx = zi.zi_atom("X", 4)
    sq = zi.zi_mul(zx, zx)
    assert sq.fix == {(2,): 2}
    ze = zi.zi_atom("E", 6)
    subsets = zi.zi_mul(ze, ze)
    assert zi.zi_to_egf(subsets, 6).counts() == [2 ** n for n in range(7)]


def test_zi_mul_matches_oracle():
    expr = sp.Prod(sp.Eplus(), sp.C())
    z = zi.zi_mul(zi.zi_atom("Ep", 4), zi.zi_atom("C", 4))
    for w in range(5):
        for lam in nk.int_partitions(w):
            assert z.fix_value(lam) == oracle.fix_by_type(expr, lam), lam


def test_plethysm_partitions():
    par = zi.zi_plethysm(zi.zi_atom("E", 6), zi.zi_atom("Ep", 6))
    assert zi.zi_to_egf(par, 6).counts() == [nk.bell(n) for n in range(7)]
    expr = sp.Subst(sp.E(), sp.Eplus())
    for w in range(5):
        for lam in nk.int_partitions(w):
            assert par.fix_value(lam) == oracle.fix_by_type(expr, lam), lam


def test_plethysm_identities():
    p = zi.zi_atom("C", 6)
    zx = zi.zi_atom("X", 6)
    assert zi.zi_plethysm(p, zx) == p
    assert zi.zi_plethysm(zx, p) == p
    with pytest.raises(CompositionError):
        zi.zi_plethysm(p, zi.zi_atom("E", 6))


def test_zi_hadamard():
    ze = zi.zi_atom("E", 5)
    p = zi.zi_atom("C", 5)
    assert zi.zi_hadamard(ze, p) == p
    sq = zi.zi_hadamard(zi.zi_atom("Sp", 5), zi.zi_atom("Sp", 5))
    assert sq.fix_value((2,)) == 4
    assert zi.zi_hadamard(p, zi.zi_zero(5)) == zi.zi_zero(5)


def test_box_type():
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            assert zi.box_type((m,), (n,)) == (m * n,)
    assert zi.box_type((0, 1), (0, 1)) == (0, 2)       # (2) box (2) = (2,2)
    assert zi.box_type((0, 1), (0, 0, 1)) == (0, 0, 0, 0, 0, 1)  # (2) box (3) = (6)
    assert zi.box_type((), (0, 1)) == ()


def test_box_type_weight_multiplies():
    for wb in range(1, 5):
        for wg in range(1, 5):
            for beta in nk.int_partitions(wb):
                for gamma in nk.int_partitions(wg):
                    assert nk.weight(zi.box_type(beta, gamma)) == wb * wg


def test_zi_aprod_rectangles():
    zr = zi.zi_aprod(zi.zi_atom("Ep", 5), zi.zi_atom("Ep", 5))
    assert zr.fix_value((4,)) == 8
    zx = zi.zi_atom("X", 5)
    p = zi.zi_atom("C", 5)
    assert zi.zi_aprod(zx, p) == p
    with pytest.raises(ZeroConstantRequired):
        zi.zi_aprod(zi.zi_atom("E", 5), p)


def test_zi_aprod_single_coefficient():
    # {(2,2); (2), (2)} = aut(2,2)/(aut(2) aut(2)) = 8/4 = 2
    two = CycleIndex(4, {(0, 1): nk.aut((0, 1))})  # fix = aut makes the monomial coeff 1
    prod = zi.zi_aprod(two, two)
    assert prod.coeff((0, 2)) == 1
    assert prod.fix_value((0, 2)) == 8
    single = CycleIndex(4, {(0, 1): 1})
    assert zi.zi_aprod(single, single).fix_value((0, 2)) == 2


def test_zi_aprod_matches_oracle_fix():
    atoms = {"Ep": sp.Eplus(), "C": sp.C(), "Lp": sp.Lplus(), "Sp": sp.Splus()}
    for (na, ea), (nb, eb) in itertools.product(atoms.items(), repeat=2):
        z = zi.zi_aprod(zi.zi_atom(na, 5), zi.zi_atom(nb, 5))
        expr = sp.AProd(ea, eb)
        for w in range(6):
            for lam in nk.int_partitions(w):
                assert z.fix_value(lam) == oracle.fix_by_type(expr, lam), (na, nb, lam)


def test_zi_point():
    zx = zi.zi_atom("X", 3)
    assert zi.zi_point(zx) == zx
    assert zi.zi_point(zi.zi_atom("E", 3)).fix_value((2,)) == 2
    assert zi.zi_point(zi.zi_zero(3)) == zi.zi_zero(3)


def test_specializations():
    assert zi.zi_to_egf(zi.zi_atom("C", 8), 8) == se.TruncSeries(
        [0] + [Fraction(1, n) for n in range(1, 9)]
    )
    assert zi.zi_to_ogf(zi.zi_atom("E", 8), 8) == se.TruncSeries.geometric(8)
    dd = zi.zi_to_ogf(zi.zi_aprod(zi.zi_atom("Lp", 8), zi.zi_atom("Lp", 8)), 8)
    assert [int(c) for c in dd.coeffs] == [0] + [nk.tau(n) for n in range(1, 9)]
    with pytest.raises(DomainError):
        zi.zi_to_egf(zi.zi_atom("E", 3), 5)


def test_specializations_commute_with_aprod():
    names = ("Ep", "C", "Lp", "Sp")
    for na, nb in itertools.product(names, repeat=2):
        pa, pb = zi.zi_atom(na, 10), zi.zi_atom(nb, 10)
        prod = zi.zi_aprod(pa, pb)
        assert zi.zi_to_egf(prod, 10) == se.aprod_egf(zi.zi_to_egf(pa, 10), zi.zi_to_egf(pb, 10))
        assert zi.zi_to_ogf(prod, 10) == se.aprod_ogf(zi.zi_to_ogf(pa, 10), zi.zi_to_ogf(pb, 10))


def _random_sparse(rng, bound):
    fix = {}
    for _ in range(rng.randint(1, 5)):
        w = rng.randint(1, bound)
        lam = rng.choice(nk.int_partitions(w))
        fix[lam] = Fraction(rng.randint(1, 20), rng.randint(1, 6))
    return CycleIndex(bound, fix)


def test_zi_aprod_commutative_associative():
    rng = random.Random(12)
    for _ in range(25):
        p, q, r = (_random_sparse(rng, 8) for _ in range(3))
        assert zi.zi_aprod(p, q) == zi.zi_aprod(q, p)
        assert zi.zi_aprod(p, zi.zi_aprod(q, r)) == zi.zi_aprod(zi.zi_aprod(p, q), r)


def test_tuple_decomposition_coefficients():
    # grouping the decompositions of a fixed permutation by the cycle types
    # of the two sides reproduces aut(alpha)/(aut(beta) aut(gamma))
    for w in range(1, 6):
        for alpha in nk.int_partitions(w):
            sigma = oracle.perm_of_type(alpha)
            total = 0
            for wb in range(1, w + 1):
                if w % wb:
                    continue
                wg = w // wb
                for beta in nk.int_partitions(wb):
                    for gamma in nk.int_partitions(wg):
                        if zi.box_type(beta, gamma) == alpha:
                            total += Fraction(
                                nk.aut(alpha), nk.aut(beta) * nk.aut(gamma)
                            )
            assert total == len(oracle.tuple_decompositions(sigma)), alpha


def test_rows_order_and_label():
    z = zi.zi_atom("E", 3)
    labels = [zi.partition_label(lam) for lam, _, _ in z.rows()]
    assert labels == ["()", "1^1", "2^1", "1^2", "3^1", "1^1 2^1", "1^3"]
    assert zi.partition_label((2, 1)) == "1^2 2^1"


def test_canf_cycle_index_corollary():
    # plethysm by nonempty sets turns the oracle-derived index of the
    # modified square of E into the Hadamard square of the partition index
    bound = 5
    expr = sp.MAProd(sp.E(), sp.E())
    fix = {}
    for w in range(bound + 1):
        for lam in nk.int_partitions(w):
            v = oracle.fix_by_type(expr, lam)
            if v:
                fix[lam] = v
    z_ee = CycleIndex(bound, fix)
    zep = zi.zi_atom("Ep", bound)
    lhs = zi.zi_plethysm(z_ee, zep)
    par = zi.zi_plethysm(zi.zi_atom("E", bound), zep)
    assert lhs == zi.zi_hadamard(par, par)
