"""Cohomology of finite modules with Frobenius (and tame inertia) actions.

A FrobModule is a finite abelian group Z^k/R with a distinguished
automorphism phi; its cohomology over the procyclic group generated by
Frobenius is ker(phi - 1) and coker(phi - 1), computed entirely through
the exact lattice kernel/cokernel primitives.  A TameModule adds an
inertia automorphism sigma of order dividing e with the tame relation
phi sigma phi^-1 = sigma^q, and its cohomology is assembled from the
sigma-invariants (unramified part) and the once-twisted sigma-coinvariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .datum import CoverDatum
from .linalg import (FinAbGroup, LatticeError, Mat, Sublattice, lattice_meet_join,
                     preimage_lattice, preimage_mod, quotient_invariants,
                     restrict_endomorphism, solve_columns, solve_vector, stack_rows)
from .sharp import y_sharp


class ModuleError(ValueError):
    """Invalid module presentation."""


class ExactnessError(ValueError):
    """The given maps do not form a short exact sequence of modules."""


class NotInH0(ValueError):
    """The supplied vector is not Frobenius-fixed in the quotient."""


def _reduce_mat_mod(m: Mat, modulus: int) -> Mat:
    if modulus <= 0:
        raise ModuleError("modulus must be positive")
    return Mat(m.rows, m.cols, tuple(x % modulus for x in m.entries))


def _mat_pow_mod(a: Mat, exponent: int, modulus: int) -> Mat:
    """a**exponent with entries reduced mod `modulus` at every step."""
    result = _reduce_mat_mod(Mat.identity(a.rows), modulus)
    base = _reduce_mat_mod(a, modulus)
    n = exponent
    while n:
        if n & 1:
            result = _reduce_mat_mod(result @ base, modulus)
        base = _reduce_mat_mod(base @ base, modulus)
        n >>= 1
    return result


def _columns_in(m: Mat, lattice: Sublattice) -> bool:
    return all(lattice.contains_vector(m.col(j)) for j in range(m.cols))


@dataclass(frozen=True)
class FrobModule:
    """Finite abelian group Z^k/R with Frobenius endomorphism phi.

    The relation lattice R must have full rank k (the group is finite),
    phi must descend to the quotient and act invertibly there, and the
    group order must be prime to q.  phi is stored reduced modulo the
    group exponent, so equal actions have equal presentations.
    """

    relations: Sublattice
    phi: Mat
    q: int

    def __post_init__(self) -> None:
        r = self.relations
        if r.rank != r.ambient_rank:
            raise ModuleError("relation lattice must have full rank (finite group)")
        k = r.ambient_rank
        if self.phi.rows != k or self.phi.cols != k:
            raise ModuleError("phi shape differs from the presentation rank")
        if self.q < 2:
            raise ModuleError("q must be >= 2")
        exponent = quotient_invariants(Sublattice.full(k), r).exponent if k else 1
        object.__setattr__(self, "phi", _reduce_mat_mod(self.phi, exponent) if exponent > 1
                           else Mat.zeros(k, k))
        if not _columns_in(self.phi @ r.basis, r):
            raise ModuleError("phi does not preserve the relation lattice")
        if gcd(self.order, self.q) != 1:
            raise ModuleError("group order must be prime to q")
        if preimage_lattice(self.phi, r) != r:
            raise ModuleError("phi is not invertible on the module")

    @property
    def ambient_rank(self) -> int:
        return self.relations.ambient_rank

    @property
    def order(self) -> int:
        idx = self.relations.index_in_ambient()
        return idx if idx is not None else 0

    @property
    def exponent(self) -> int:
        return self.group().exponent

    def group(self) -> FinAbGroup:
        if self.ambient_rank == 0:
            return FinAbGroup.trivial()
        return quotient_invariants(Sublattice.full(self.ambient_rank), self.relations)

    def coker_lattice(self, endo: Mat) -> Sublattice:
        """Relations of the cokernel of the endomorphism on the module."""
        k = self.ambient_rank
        cols = [endo.col(j) for j in range(k)] + \
               [self.relations.basis.col(j) for j in range(self.relations.rank)]
        return Sublattice.from_columns(k, cols)


@dataclass(frozen=True)
class TameCohomology:
    """Sizes (#H0, #H1, #H2) plus the two graded pieces of each level."""

    sizes: tuple[int, int, int]
    h0_unr: FinAbGroup
    h1_unr: FinAbGroup
    h0_twist: FinAbGroup
    h1_twist: FinAbGroup


def h0_h1(m: FrobModule) -> tuple[FinAbGroup, FinAbGroup]:
    """(ker(phi-1), coker(phi-1)) as invariant factors; orders agree."""
    k = m.ambient_rank
    delta = m.phi - Mat.identity(k)
    kernel = preimage_lattice(delta, m.relations)
    h0 = quotient_invariants(kernel, m.relations)
    h1 = quotient_invariants(Sublattice.full(k), m.coker_lattice(delta)) if k \
        else FinAbGroup.trivial()
    if h0.order != h1.order:
        raise ModuleError("kernel and cokernel of phi-1 differ in size")
    return h0, h1


def tate_twist(m: FrobModule, k: int) -> FrobModule:
    """Same group, phi multiplied by q**k (inverse taken mod the exponent)."""
    exponent = m.exponent
    if exponent == 1:
        return m
    if k >= 0:
        mult = pow(m.q, k, exponent)
    else:
        mult = pow(pow(m.q, -1, exponent), -k, exponent)
    return FrobModule(m.relations, m.phi.scale(mult), m.q)


@dataclass(frozen=True)
class ShortExactSequence:
    """Maps left -> mid -> right of FrobModules, given on presentations."""

    left: FrobModule
    mid: FrobModule
    right: FrobModule
    inject: Mat
    project: Mat


def exactness_failures(ses: ShortExactSequence) -> tuple[str, ...]:
    """Empty iff the maps form a short exact sequence commuting with phi."""
    a, b, c = ses.left, ses.mid, ses.right
    f, g = ses.inject, ses.project
    problems: list[str] = []
    if (f.rows, f.cols) != (b.ambient_rank, a.ambient_rank):
        return ("injection shape mismatch",)
    if (g.rows, g.cols) != (c.ambient_rank, b.ambient_rank):
        return ("projection shape mismatch",)
    if not _columns_in(f @ a.relations.basis, b.relations):
        problems.append("injection does not respect relations")
    if not _columns_in(g @ b.relations.basis, c.relations):
        problems.append("projection does not respect relations")
    if not _columns_in(b.phi @ f - f @ a.phi, b.relations):
        problems.append("injection does not commute with phi")
    if not _columns_in(c.phi @ g - g @ b.phi, c.relations):
        problems.append("projection does not commute with phi")
    if problems:
        return tuple(problems)
    if preimage_lattice(f, b.relations) != a.relations:
        problems.append("injection has a kernel")
    image_f = Sublattice.from_columns(
        b.ambient_rank,
        [f.col(j) for j in range(f.cols)]
        + [b.relations.basis.col(j) for j in range(b.relations.rank)])
    if image_f != preimage_lattice(g, c.relations):
        problems.append("image of the injection differs from the kernel of the projection")
    image_g = Sublattice.from_columns(
        c.ambient_rank,
        [g.col(j) for j in range(g.cols)]
        + [c.relations.basis.col(j) for j in range(c.relations.rank)])
    if image_g != Sublattice.full(c.ambient_rank):
        problems.append("projection is not surjective")
    return tuple(problems)


def _h1_relations(m: FrobModule) -> Sublattice:
    return m.coker_lattice(m.phi - Mat.identity(m.ambient_rank))


def h1_class(m: FrobModule, vec: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of a vector's class in coker(phi - 1)."""
    return _h1_relations(m).reduce_vector(vec)


def connecting(ses: ShortExactSequence, c: Sequence[int]) -> tuple[int, ...]:
    """Connecting homomorphism: lift, apply phi - 1, pull back.

    `c` is a vector whose class lies in h0(right); the result is the
    canonical representative of its image in h1(left).  The value is
    independent of the chosen lift; in debug mode a second lift is tried.
    """
    problems = exactness_failures(ses)
    if problems:
        raise ExactnessError("; ".join(problems))
    a, b, cc = ses.left, ses.mid, ses.right
    f, g = ses.inject, ses.project
    if len(c) != cc.ambient_rank:
        raise NotInH0("vector length differs from the presentation rank")
    delta_c = (cc.phi - Mat.identity(cc.ambient_rank)).apply(c)
    if not cc.relations.contains_vector(delta_c):
        raise NotInH0("class is not Frobenius-fixed")

    def delta_of_lift(lift: Sequence[int]) -> tuple[int, ...]:
        w = (b.phi - Mat.identity(b.ambient_rank)).apply(lift)
        sol = solve_vector(f.hstack(b.relations.basis), w)
        if sol is None:
            raise ExactnessError("phi - 1 of a lift is not in the image of the injection")
        return h1_class(a, sol[:a.ambient_rank])

    lift_sol = solve_vector(g.hstack(cc.relations.basis), c)
    if lift_sol is None:
        raise ExactnessError("vector cannot be lifted through the projection")
    lift = lift_sol[:b.ambient_rank]
    out = delta_of_lift(lift)
    if __debug__ and b.ambient_rank:
        kernel = preimage_lattice(g, cc.relations)
        other = tuple(x + y for x, y in zip(lift, kernel.basis.col(0)))
        assert delta_of_lift(other) == out, "connecting value depends on the lift"
    return out


def image_of_connecting(ses: ShortExactSequence) -> FinAbGroup:
    """Subgroup of h1(left) generated by the connecting images of h0(right)."""
    a, cc = ses.left, ses.right
    fixed = preimage_lattice(cc.phi - Mat.identity(cc.ambient_rank), cc.relations)
    values = [connecting(ses, fixed.basis.col(j)) for j in range(fixed.rank)]
    denom = _h1_relations(a)
    span = Sublattice.from_columns(
        a.ambient_rank,
        [list(v) for v in values]
        + [denom.basis.col(j) for j in range(denom.rank)])
    return quotient_invariants(span, denom)


def _inertia_fixed_lattice(gens: Sequence[Mat], rank: int, modulus: int) -> Sublattice:
    ident = Mat.identity(rank)
    stacked = stack_rows([g - ident for g in gens], cols=rank)
    return preimage_mod(stacked, modulus)


def residue_sharp_sequence(d: CoverDatum, m: int) -> ShortExactSequence:
    """The finite-level sequence induced by the sharp lattice inclusion.

    The right term is the inertia-fixed part of the level-m points of the
    full lattice.  Because the sharp inclusion is an isogeny with
    n-torsion kernel, its preimage of the level-m points inside the
    n*N-torsion of the sharp lattice surjects onto them; the middle term
    is the inertia-fixed part of that preimage and the left term the
    kernel of the induced map, a copy of the inertia-fixed n-torsion
    quotient.  Taking inertia invariants preserves exactness exactly when
    gcd(n, e) = 1; exactness is not enforced here so that failures can be
    observed on hypothesis-violating data.

    For the connecting map to reach all of h1 of the left term, m should
    be a multiple of the order of the Frobenius matrix (the datum's group
    exponent always works): from that level on, the Frobenius-fixed
    points of the right term are the full stabilized point group.
    """
    n_mod = d.q ** m - 1
    big_mod = d.n * n_mod
    r = d.rank
    sharp_lat = y_sharp(d)
    s = sharp_lat.basis

    # right term: inertia-fixed points of (Z/N)^r with twisted Frobenius
    fixed_c = _inertia_fixed_lattice(list(d.inertia_gens), r, n_mod)
    c_basis = fixed_c.basis
    rel_c = preimage_lattice(c_basis, Sublattice.scaled(r, n_mod))
    frob_c = solve_columns(c_basis, d.frobenius @ c_basis)
    if frob_c is None:
        raise LatticeError("inertia-fixed lattice is not Frobenius stable")
    mod_c = FrobModule(rel_c, frob_c.scale(d.q), d.q)

    # middle term: inside the n*N-torsion of the sharp lattice, the
    # preimage of the level-m part, restricted to inertia-fixed points
    sharp_gens = [restrict_endomorphism(g, sharp_lat) for g in d.inertia_gens]
    sharp_frob = restrict_endomorphism(d.frobenius, sharp_lat)
    isogeny_pre = preimage_lattice(s, Sublattice.scaled(r, d.n))
    fixed_b = _inertia_fixed_lattice(sharp_gens, r, big_mod)
    lat_b, _, _ = lattice_meet_join(isogeny_pre, fixed_b)
    w = lat_b.basis
    rel_b = preimage_lattice(w, Sublattice.scaled(r, big_mod))
    frob_b = solve_columns(w, sharp_frob @ w)
    if frob_b is None:
        raise LatticeError("isogeny preimage is not Frobenius stable")
    mod_b = FrobModule(rel_b, frob_b.scale(d.q), d.q)

    # projection: divide the isogeny by n, then express in the fixed basis
    pushed = s @ w
    if any(x % d.n for x in pushed.entries):
        raise LatticeError("isogeny image is not divisible by n")
    divided = Mat(pushed.rows, pushed.cols,
                  tuple(x // d.n for x in pushed.entries))
    proj = solve_columns(c_basis, divided)
    if proj is None:
        raise LatticeError("projected points are not inertia fixed")

    # left term: kernel of the projection, with the restricted Frobenius
    ker = preimage_lattice(proj, rel_c)
    e_basis = ker.basis
    rel_a = preimage_lattice(e_basis, rel_b)
    frob_a = solve_columns(e_basis, mod_b.phi @ e_basis)
    if frob_a is None:
        raise LatticeError("kernel is not Frobenius stable")
    mod_a = FrobModule(rel_a, frob_a, d.q)
    return ShortExactSequence(mod_a, mod_b, mod_c, inject=e_basis, project=proj)


@dataclass(frozen=True)
class TameModule:
    """Finite module with tame inertia sigma and Frobenius phi.

    sigma**e must be the identity on the module, the tame relation
    phi sigma phi^-1 = sigma**q must hold there, e must be prime to q
    (tameness), and the group order must be prime to q.
    """

    relations: Sublattice
    sigma: Mat
    phi: Mat
    e: int
    q: int

    def __post_init__(self) -> None:
        r = self.relations
        if r.rank != r.ambient_rank:
            raise ModuleError("relation lattice must have full rank (finite group)")
        k = r.ambient_rank
        for name, mat in (("sigma", self.sigma), ("phi", self.phi)):
            if mat.rows != k or mat.cols != k:
                raise ModuleError(f"{name} shape differs from the presentation rank")
        if self.e < 1:
            raise ModuleError("e must be >= 1")
        if self.q < 2:
            raise ModuleError("q must be >= 2")
        if gcd(self.e, self.q) != 1:
            raise ModuleError("e must be prime to q (tameness)")
        exponent = quotient_invariants(Sublattice.full(k), r).exponent if k else 1
        reduce = (lambda mt: _reduce_mat_mod(mt, exponent)) if exponent > 1 \
            else (lambda mt: Mat.zeros(k, k))
        object.__setattr__(self, "sigma", reduce(self.sigma))
        object.__setattr__(self, "phi", reduce(self.phi))
        if gcd(self.order, self.q) != 1:
            raise ModuleError("group order must be prime to q")
        for name, mat in (("sigma", self.sigma), ("phi", self.phi)):
            if not _columns_in(mat @ r.basis, r):
                raise ModuleError(f"{name} does not preserve the relation lattice")
            if preimage_lattice(mat, r) != r:
                raise ModuleError(f"{name} is not invertible on the module")
        if exponent > 1:
            sigma_e = _mat_pow_mod(self.sigma, self.e, exponent)
            if not _columns_in(sigma_e - Mat.identity(k), r):
                raise ModuleError("sigma**e is not the identity on the module")
            sigma_q = _mat_pow_mod(self.sigma, self.q, exponent)
            if not _columns_in(self.phi @ self.sigma - sigma_q @ self.phi, r):
                raise ModuleError("tame relation phi sigma = sigma**q phi fails")

    @property
    def ambient_rank(self) -> int:
        return self.relations.ambient_rank

    @property
    def order(self) -> int:
        idx = self.relations.index_in_ambient()
        return idx if idx is not None else 0

    @property
    def exponent(self) -> int:
        return self.group().exponent

    def group(self) -> FinAbGroup:
        if self.ambient_rank == 0:
            return FinAbGroup.trivial()
        return quotient_invariants(Sublattice.full(self.ambient_rank), self.relations)


def unramified_part(m: TameModule) -> FrobModule:
    """The sigma-fixed submodule with the restricted Frobenius."""
    k = m.ambient_rank
    fixed = preimage_lattice(m.sigma - Mat.identity(k), m.relations)
    basis = fixed.basis
    rel = preimage_lattice(basis, m.relations)
    phi = solve_columns(basis, m.phi @ basis)
    if phi is None:
        raise ModuleError("sigma-fixed submodule is not phi stable")
    return FrobModule(rel, phi, m.q)


def twisted_coinvariants(m: TameModule) -> FrobModule:
    """The sigma-coinvariants with Frobenius divided by q (one negative twist)."""
    k = m.ambient_rank
    delta = m.sigma - Mat.identity(k)
    rel = Sublattice.from_columns(
        k, [delta.col(j) for j in range(k)]
        + [m.relations.basis.col(j) for j in range(m.relations.rank)])
    exponent = quotient_invariants(Sublattice.full(k), rel).exponent if k else 1
    if exponent == 1:
        return FrobModule(rel, Mat.zeros(k, k), m.q)
    mult = pow(m.q, -1, exponent)
    return FrobModule(rel, m.phi.scale(mult), m.q)


def tame_h(m: TameModule) -> TameCohomology:
    """Cohomology sizes over the tame group, with both graded pieces.

    #H0 is the Frobenius-fixed part of the sigma-invariants; #H1 is the
    product of the unramified piece (coker of phi-1 on the invariants)
    and the Frobenius-fixed part of the once-twisted coinvariants; #H2 is
    the cokernel on the twisted coinvariants.
    """
    unr = unramified_part(m)
    h0_unr, h1_unr = h0_h1(unr)
    tw = twisted_coinvariants(m)
    h0_twist, h1_twist = h0_h1(tw)
    sizes = (h0_unr.order, h1_unr.order * h0_twist.order, h1_twist.order)
    return TameCohomology(sizes, h0_unr, h1_unr, h0_twist, h1_twist)


def _inverse_mod_relations(a: Mat, relations: Sublattice) -> Mat:
    """A matrix inducing the inverse of `a` on Z^k/relations."""
    k = a.rows
    sol = solve_columns(a.hstack(relations.basis), Mat.identity(k))
    if sol is None:
        raise ModuleError("endomorphism is not invertible on the module")
    return Mat.from_rows(sol.to_rows()[:k], cols=k)


def dual_module(m: TameModule, n: int) -> TameModule:
    """Characters Hom(M, Z/n) with contragredient actions twisted once.

    Values live in the n-torsion of roots of unity, so inertia acts by the
    plain contragredient and Frobenius by q times the contragredient.
    Requires the exponent of M to divide n.
    """
    k = m.ambient_rank
    if n % m.exponent:
        raise ModuleError("exponent of the module must divide n")
    admissible = preimage_mod(m.relations.basis.transpose(), n)
    w = admissible.basis
    rel = preimage_lattice(w, Sublattice.scaled(k, n)) if k else m.relations
    sigma_inv = _inverse_mod_relations(m.sigma, m.relations)
    phi_inv = _inverse_mod_relations(m.phi, m.relations)
    sigma_dual = solve_columns(w, sigma_inv.transpose() @ w)
    phi_dual = solve_columns(w, (phi_inv.transpose() @ w).scale(m.q))
    if sigma_dual is None or phi_dual is None:
        raise ModuleError("contragredient action does not preserve the dual")
    dual = TameModule(rel, sigma_dual, phi_dual, m.e, m.q)
    if dual.order != m.order:
        raise ModuleError("dual has a different order than the module")
    if k and preimage_mod(w.transpose(), n) != m.relations:
        raise ModuleError("evaluation pairing is degenerate")
    return dual


@dataclass(frozen=True)
class CountingReport:
    """Cohomology sizes of a module and its dual with the three identities."""

    sizes_module: tuple[int, int, int]
    sizes_dual: tuple[int, int, int]
    euler_ok: bool
    duality_ok: bool
    unramified_factorization_ok: bool

    @property
    def ok(self) -> bool:
        return self.euler_ok and self.duality_ok and self.unramified_factorization_ok


def counting_checks(m: TameModule, n: int) -> CountingReport:
    """Verify #H0*#H2 = #H1, #H2(A) = #H0(A'), and the unramified H1 split."""
    if n % m.exponent:
        raise ModuleError("exponent of the module must divide n")
    if gcd(n, m.q) != 1:
        raise ModuleError("n must be prime to q")
    if gcd(n, m.e) != 1:
        raise ModuleError("n must be prime to e")
    dual = dual_module(m, n)
    ta = tame_h(m)
    td = tame_h(dual)
    return CountingReport(
        sizes_module=ta.sizes,
        sizes_dual=td.sizes,
        euler_ok=ta.sizes[0] * ta.sizes[2] == ta.sizes[1],
        duality_ok=ta.sizes[2] == td.sizes[0],
        unramified_factorization_ok=ta.sizes[1] == ta.h1_unr.order * td.h1_unr.order,
    )
