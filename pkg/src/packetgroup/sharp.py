"""Fixed lattices, annihilator ("sharp") lattices, and induced-form radicals.

For the bilinear form B of a datum and a target sublattice L, the sharp of
L is {y : B(y, c) = 0 mod n for every basis vector c of L}.  It always
contains n Z^r and is antitone in the target, so the chain
n Z^r <= Y^# <= Y^{Gamma#} <= Z^r holds for every valid datum.
"""

from __future__ import annotations

from .datum import CoverDatum
from .linalg import (FinAbGroup, LatticeError, Mat, NotASublattice, Sublattice,
                     kernel_lattice, preimage_mod, quotient_invariants, stack_rows)


def fixed_lattice(d: CoverDatum) -> Sublattice:
    """Vectors fixed by every generator (inertia generators and Frobenius)."""
    ident = Mat.identity(d.rank)
    stacked = stack_rows([a - ident for a in d.generators], cols=d.rank)
    return kernel_lattice(stacked)


def sharp(b: Mat, n: int, target: Sublattice) -> Sublattice:
    """{y : B(y, c) = 0 mod n for all basis columns c of target}.

    The condition row for a column c is c^T B^T, so the whole system is
    target^T B^T; for the symmetric forms produced by a datum this agrees
    with target^T B.
    """
    if b.rows != b.cols:
        raise LatticeError("bilinear form must be square")
    if target.ambient_rank != b.rows:
        raise LatticeError("target ambient rank differs from the form")
    system = target.basis.transpose() @ b.transpose()
    return preimage_mod(system, n)


def y_sharp(d: CoverDatum) -> Sublattice:
    """Annihilator of the full lattice Z^r."""
    return sharp(d.bilinear, d.n, Sublattice.full(d.rank))


def y_gamma_sharp(d: CoverDatum) -> Sublattice:
    """Annihilator of the fixed lattice."""
    return sharp(d.bilinear, d.n, fixed_lattice(d))


def radical_of_induced_form(d: CoverDatum, sub1: Sublattice,
                            sub2: Sublattice) -> FinAbGroup:
    """Left kernel of the induced Z/n pairing on (Z^r/sub1) x (Z^r/sub2).

    The pairing descends to the quotients iff sub1 annihilates the full
    second lattice and sub2 the full first one; that containment is the
    checked precondition.  The left kernel is then the annihilator of the
    full lattice modulo sub1.
    """
    b, n, r = d.bilinear, d.n, d.rank
    left_ann = sharp(b, n, Sublattice.full(r))
    right_ann = sharp(b.transpose(), n, Sublattice.full(r))
    if not left_ann.contains(sub1):
        raise NotASublattice("first lattice does not annihilate the full second factor")
    if not right_ann.contains(sub2):
        raise NotASublattice("second lattice is not annihilated by the full first factor")
    return quotient_invariants(left_ann, sub1)
