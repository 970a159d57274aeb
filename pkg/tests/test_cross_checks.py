"""Dual-route checks pitting the lattice paths against element enumeration."""

import random
from itertools import product

from packetgroup.cohomology import (FrobModule, ShortExactSequence, connecting,
                                    exactness_failures, h0_h1, h1_class,
                                    image_of_connecting, residue_sharp_sequence)
from packetgroup.datum import validate
from packetgroup.linalg import Mat, Sublattice, quotient_invariants
from packetgroup.oracle import brute_quotient, subgroup_from_generators
from packetgroup.randomgen import random_unimodular, random_valid_datum

from conftest import load_config


def test_residue_sequence_exact_at_every_small_level():
    # exactness needs only gcd(n, e) = 1, not a stabilized level
    rng = random.Random(6161)
    data = [validate(load_config(n)) for n in
            ("swap_q3_n2", "ramified_r1_q7_n3", "s3_ramified_q7_n2")]
    data += [random_valid_datum(rng, ranks=(1, 2)) for _ in range(15)]
    for d in data:
        for m in (1, 2, 3):
            ses = residue_sharp_sequence(d, m)
            assert exactness_failures(ses) == (), (d.q, d.n, d.e, m)
            # the connecting image always lands inside h1 of the left term
            img = image_of_connecting(ses)
            full = h0_h1(ses.left)[1]
            assert full.order % img.order == 0


def test_quotient_invariants_against_coset_enumeration():
    rng = random.Random(7272)
    for _ in range(20):
        k = rng.randint(1, 2)
        diag = [rng.randint(1, 2) for _ in range(k)]
        extra = [rng.randint(2, 3) for _ in range(k)]
        sup_cols = [[diag[i] if i == j else 0 for i in range(k)] for j in range(k)]
        sub_cols = [[diag[i] * extra[i] if i == j else 0 for i in range(k)]
                    for j in range(k)]
        u = random_unimodular(rng, k)
        sup = Sublattice.from_matrix(u @ Mat.from_columns(sup_cols, rows=k))
        sub = Sublattice.from_matrix(u @ Mat.from_columns(sub_cols, rows=k))
        main = quotient_invariants(sup, sub)
        # reduce modulo M with M Z^k inside sub, so the quotient is unchanged
        modulus = 1
        for d, e in zip(diag, extra):
            modulus *= d * e
        amb = subgroup_from_generators(
            modulus, k, [sup.basis.col(j) for j in range(sup.rank)])
        subset = subgroup_from_generators(
            modulus, k, [sub.basis.col(j) for j in range(sub.rank)])
        assert brute_quotient(modulus, amb, subset) == main, (diag, extra)


def enumerate_module(mod):
    """All canonical representatives of Z^k / R (R full rank, triangular)."""
    rel = mod.relations
    bounds = [rel.basis[j, j] for j in range(rel.rank)]
    return [rel.reduce_vector(vec) for vec in product(*[range(b) for b in bounds])]


def brute_connecting_classes(ses, c):
    """Connecting values over every lift of c, by pure enumeration."""
    left, mid, right = ses.left, ses.mid, ses.right
    f, g = ses.inject, ses.project
    target = right.relations.reduce_vector(c)
    values = set()
    for b in enumerate_module(mid):
        if right.relations.reduce_vector(g.apply(b)) != target:
            continue
        w = (mid.phi - Mat.identity(mid.ambient_rank)).apply(b)
        for a in enumerate_module(left):
            diff = tuple(x - y for x, y in zip(w, f.apply(a)))
            if mid.relations.contains_vector(diff):
                values.add(h1_class(left, a))
    return values


def test_connecting_against_lift_enumeration_small():
    ses = ShortExactSequence(
        left=FrobModule(Sublattice.scaled(1, 2), Mat.from_rows([[1]]), 3),
        mid=FrobModule(Sublattice.scaled(1, 4), Mat.from_rows([[3]]), 3),
        right=FrobModule(Sublattice.scaled(1, 2), Mat.from_rows([[1]]), 3),
        inject=Mat.from_rows([[2]]), project=Mat.from_rows([[1]]))
    for c in ((0,), (1,)):
        assert brute_connecting_classes(ses, c) == {connecting(ses, c)}


def test_connecting_against_lift_enumeration_residue():
    d = validate(load_config("swap_q3_n2"))
    ses = residue_sharp_sequence(d, 2)
    assert exactness_failures(ses) == ()
    right = ses.right
    delta = right.phi - Mat.identity(right.ambient_rank)
    fixed = [c for c in enumerate_module(right)
             if right.relations.contains_vector(delta.apply(c))]
    assert fixed
    values = set()
    for c in fixed:
        brute = brute_connecting_classes(ses, c)
        assert brute == {connecting(ses, c)}, c
        values |= brute
    # the connecting map is onto h1 of the left term, so the value set is
    # the whole group of classes
    assert len(values) == h0_h1(ses.left)[1].order
