"""Residue branch maps: the canonical map model and its exact-arithmetic semantics.

A map is a modulus M together with one affine-divide rule per residue class:
n with n mod M == r  is sent to  (a_r*n + b_r) / d_r, and the division is
exact for every member of the class.  Residues of negative arguments use
floored semantics, so -1 mod 4 == 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from branchmap.errors import (
    ConfigError,
    CoverageError,
    DegenerateBranchError,
    ExactnessError,
)

MAX_FORCED_HALVINGS = 64


@dataclass(frozen=True)
class BranchRule:
    """One affine-divide rule n -> (multiplier*n + offset) / divisor."""

    multiplier: int
    offset: int
    divisor: int

    def __post_init__(self):
        if self.divisor < 1:
            raise ValueError(f"divisor must be >= 1, got {self.divisor}")


@dataclass(frozen=True)
class RuleSpec:
    """A rule attached to a residue set at its own modulus, pre-canonicalization."""

    residues: tuple[int, ...]
    modulus: int
    multiplier: int
    offset: int
    divisor: int


@dataclass(frozen=True)
class ResidueBranchMap:
    """Canonical residue branch map: exactly one rule per residue class 0..M-1.

    Immutable after construction; safe for unrestricted concurrent reads.
    Build instances through :func:`canonicalize`, which verifies coverage and
    exactness.
    """

    name: str
    modulus: int
    rules: tuple[BranchRule, ...]

    def apply(self, n: int) -> int:
        """One application of the map.  Exact for all integers."""
        rule = self.rules[n % self.modulus]
        q, rem = divmod(rule.multiplier * n + rule.offset, rule.divisor)
        if rem:
            raise ExactnessError(
                f"rule at residue {n % self.modulus} is not exact at n={n}",
                residue=n % self.modulus,
            )
        return q

    def is_odd_symmetric(self) -> bool:
        """True iff apply(-n) == -apply(n) for all n.

        Decided exactly: the rule at residue (-r mod M) must be the
        offset-negated twin of the rule at r.
        """
        m = self.modulus
        for r in range(m):
            mine = self.rules[r]
            twin = self.rules[(-r) % m]
            if (twin.multiplier, twin.offset, twin.divisor) != (
                mine.multiplier,
                -mine.offset,
                mine.divisor,
            ):
                return False
        return True


@dataclass(frozen=True)
class AcceleratedBranch:
    """One rule application fused with the halvings it forces on its output.

    ``residue``/``modulus`` give the input class (the rule's full domain when
    that reduces to a single class at a divisor of the map modulus).  The net
    multiplier is multiplier/(divisor * 2**forced_halvings) as an exact
    rational, and weights over a whole decomposition sum to exactly 1.
    """

    residue: int
    modulus: int
    rule: BranchRule
    forced_halvings: int
    net_multiplier: Fraction
    weight: Fraction


def _v2(n: int) -> int:
    """2-adic valuation; n must be nonzero."""
    return (n & -n).bit_length() - 1


def canonicalize(name: str, specs: list[RuleSpec] | tuple[RuleSpec, ...]) -> ResidueBranchMap:
    """Expand residue-set rules at mixed moduli into a single-modulus map.

    The canonical modulus is the lcm of all rule moduli.  Raises
    CoverageError if any residue class ends up with zero or two rules,
    ExactnessError if a rule does not divide exactly on some class, and
    DegenerateBranchError for zero multipliers.
    """
    if not specs:
        raise CoverageError("map has no rules")
    m_all = lcm(*(s.modulus for s in specs))
    assigned: dict[int, BranchRule] = {}
    for spec in specs:
        if spec.modulus < 1:
            raise ValueError(f"rule modulus must be >= 1, got {spec.modulus}")
        if spec.multiplier == 0:
            raise DegenerateBranchError(
                f"rule on residues {spec.residues} mod {spec.modulus} has multiplier 0"
            )
        # (2n)/4 and (n)/2 are the same function; store the reduced form so
        # equal rules compare equal wherever they are grouped
        g = gcd(spec.multiplier, gcd(spec.offset, spec.divisor))
        rule = BranchRule(spec.multiplier // g, spec.offset // g, spec.divisor // g)
        for res in spec.residues:
            if not 0 <= res < spec.modulus:
                raise CoverageError(
                    f"residue {res} out of range for modulus {spec.modulus}", residue=res
                )
            for r in range(res, m_all, spec.modulus):
                if r in assigned:
                    raise CoverageError(f"residue {r} mod {m_all} has two rules", residue=r)
                assigned[r] = rule
    missing = [r for r in range(m_all) if r not in assigned]
    if missing:
        raise CoverageError(f"residue {missing[0]} mod {m_all} has no rule", residue=missing[0])

    rules = tuple(assigned[r] for r in range(m_all))
    for r, rule in enumerate(rules):
        # d | a*r+b and d | a*M is necessary and sufficient for exact
        # division on the whole class r mod M.
        if (rule.multiplier * r + rule.offset) % rule.divisor:
            raise ExactnessError(
                f"(({rule.multiplier}*n + {rule.offset}) / {rule.divisor}) is not exact "
                f"on residue {r} mod {m_all}",
                residue=r,
            )
        if (rule.multiplier * m_all) % rule.divisor:
            raise ExactnessError(
                f"divisor {rule.divisor} does not divide multiplier*modulus on residue "
                f"{r} mod {m_all}",
                residue=r,
            )
    return ResidueBranchMap(name=name, modulus=m_all, rules=rules)


def _rule_groups(bmap: ResidueBranchMap) -> list[tuple[BranchRule, list[int]]]:
    """Residue classes grouped by their rule, in order of first appearance."""
    groups: dict[BranchRule, list[int]] = {}
    for r, rule in enumerate(bmap.rules):
        groups.setdefault(rule, []).append(r)
    return list(groups.items())


def _reduce_class_set(residues: list[int], modulus: int) -> tuple[int, int] | None:
    """Try to express a residue set mod M as a single class at a divisor modulus.

    A set of M/m distinct classes congruent to one another mod m is exactly
    one class mod m, so the only candidate is m = M / len(residues).
    """
    count = len(residues)
    if modulus % count:
        return None
    m = modulus // count
    base = residues[0] % m
    if all(r % m == base for r in residues):
        return base, m
    return None


def _group_forced_halvings(rule: BranchRule, residues: list[int], modulus: int) -> int:
    """Guaranteed 2-adic valuation of the rule's output over its whole domain.

    Computed from the valuations of (a*r+b)/d per class and of a*M/d: the
    output at n = r + M*t is u_r + v*t, whose guaranteed valuation is
    min(v2(u_r), v2(v)).
    """
    a, b, d = rule.multiplier, rule.offset, rule.divisor
    v = a * modulus // d
    k = _v2(v) if v else MAX_FORCED_HALVINGS + 1
    for r in residues:
        u = (a * r + b) // d
        if u:
            k = min(k, _v2(u))
    if k > MAX_FORCED_HALVINGS:
        raise ConfigError(
            f"rule {(a, b, d)} forces more than {MAX_FORCED_HALVINGS} halvings"
        )
    return k


def accelerated_decomposition(bmap: ResidueBranchMap) -> list[AcceleratedBranch]:
    """Split the map into accelerated branches with exact weights and multipliers.

    Residue classes sharing a rule are treated as one domain: the forced
    halvings are what the rule guarantees over that whole domain, so
    re-expressing a map at a refined modulus never changes the decomposition's
    weighted drift.  A domain that reduces to a single class at a divisor
    modulus is emitted as one branch; otherwise one branch per class, all
    carrying the domain-level halving count.
    """
    m_all = bmap.modulus
    branches: list[AcceleratedBranch] = []
    for rule, residues in _rule_groups(bmap):
        if rule.multiplier == 0:
            raise DegenerateBranchError(
                f"branch {(rule.multiplier, rule.offset, rule.divisor)} has zero multiplier"
            )
        k = _group_forced_halvings(rule, residues, m_all)
        net = Fraction(rule.multiplier, rule.divisor * (1 << k))
        reduced = _reduce_class_set(residues, m_all)
        if reduced is not None:
            res, mod = reduced
            branches.append(
                AcceleratedBranch(res, mod, rule, k, net, Fraction(1, mod))
            )
        else:
            for r in residues:
                branches.append(
                    AcceleratedBranch(r, m_all, rule, k, net, Fraction(1, m_all))
                )
    assert sum(b.weight for b in branches) == 1
    return branches


def preset_3x1() -> ResidueBranchMap:
    return canonicalize(
        "3x1",
        [
            RuleSpec((1,), 2, 3, 1, 1),
            RuleSpec((0,), 2, 1, 0, 2),
        ],
    )


def preset_7xpm1() -> ResidueBranchMap:
    return canonicalize(
        "7xpm1",
        [
            RuleSpec((1,), 4, 7, 1, 1),
            RuleSpec((3,), 4, 7, -1, 1),
            RuleSpec((0,), 2, 1, 0, 2),
        ],
    )


PRESETS = {
    "3x1": preset_3x1,
    "7xpm1": preset_7xpm1,
}
