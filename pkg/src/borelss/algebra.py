"""Finite graded-commutative algebras over GF(2) by generators and relations.

Monomials are exponent tuples aligned with the generator list; a
polynomial is a frozenset of monomials (every coefficient is 1 in
characteristic 2, which removes coefficient bookkeeping entirely).
Relations must be homogeneous for the weighted grading, and rewriting
is completed by S-pair reduction under a fixed monomial order: graded
first, then lexicographic with later-declared generators greater.
Because homogeneous rewriting preserves degree, confluence below the
degree cap only ever needs S-pairs whose lcm stays below the cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

Monomial = tuple[int, ...]
Poly = frozenset


class CapTooLow(Exception):
    """degree_cap is below a relation degree, so completion cannot even start."""


class NotFiniteDimensional(Exception):
    """A generator power never reduces to zero within the degree cap."""


# ---------------------------------------------------------------------------
# monomial arithmetic

def mono_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(u, v))


def mono_divides(u: Monomial, v: Monomial) -> bool:
    return all(a <= b for a, b in zip(u, v))


def mono_div(v: Monomial, u: Monomial) -> Monomial:
    """Exponent difference v / u (caller guarantees divisibility)."""
    return tuple(a - b for a, b in zip(v, u))


def mono_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(u, v))


def poly_add(p: Poly, q: Poly) -> Poly:
    return p ^ q


def poly_mul(p: Poly, q: Poly) -> Poly:
    acc = set()
    for u in p:
        for v in q:
            acc ^= {mono_mul(u, v)}
    return frozenset(acc)


@dataclass(frozen=True)
class PoincareSeries:
    """Per-degree dimensions of a graded space, trailing zeros trimmed."""

    coeffs: tuple[int, ...]

    @classmethod
    def of(cls, coeffs) -> "PoincareSeries":
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        if any(c < 0 for c in cs):
            raise ValueError("negative dimension")
        return cls(tuple(cs))

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    @property
    def is_symmetric(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


class AlgebraPresentation:
    """GF(2) algebra given by weighted-degree generators and homogeneous relations."""

    def __init__(self, generators, relations, degree_cap: int):
        self.gen_names = tuple(name for name, _ in generators)
        self.gen_degrees = tuple(int(d) for _, d in generators)
        if len(set(self.gen_names)) != len(self.gen_names):
            raise ValueError("generator names must be distinct")
        if any(d < 1 for d in self.gen_degrees):
            raise ValueError("generator degrees must be >= 1")
        self.degree_cap = int(degree_cap)
        rels = []
        for rel in relations:
            p = frozenset(tuple(mon) for mon in rel)
            if not p:
                continue
            degs = {self.mono_degree(mon) for mon in p}
            if len(degs) != 1:
                raise ValueError(f"relation {self.poly_str(p)} is not homogeneous")
            rels.append(p)
        self.relations = tuple(rels)
        self._rules: dict[Monomial, Poly] | None = None
        self._basis_cache: dict[int, list[Monomial]] = {}

    # -- degrees and the monomial order -----------------------------------

    @property
    def ngens(self) -> int:
        return len(self.gen_names)

    def mono_degree(self, mon: Monomial) -> int:
        return sum(e * d for e, d in zip(mon, self.gen_degrees))

    def order_key(self, mon: Monomial):
        # graded, then lex with later-declared generators greater
        return (self.mono_degree(mon), mon[::-1])

    def leading(self, p: Poly) -> Monomial:
        return max(p, key=self.order_key)

    # -- rewriting ---------------------------------------------------------

    def _as_rule(self, p: Poly) -> tuple[Monomial, Poly]:
        lt = self.leading(p)
        return lt, p ^ {lt}

    def normal_form(self, p: Poly, rules: dict[Monomial, Poly] | None = None) -> Poly:
        if rules is None:
            rules = self.completed_rules()
        work = set(p)
        done: set[Monomial] = set()
        while work:
            mon = max(work, key=self.order_key)
            work.discard(mon)
            hit = None
            for lt, tail in rules.items():
                if mono_divides(lt, mon):
                    hit = (lt, tail)
                    break
            if hit is None:
                done.add(mon)
                continue
            lt, tail = hit
            q = mono_div(mon, lt)
            for t in tail:
                nt = mono_mul(t, q)
                if nt in done:
                    done.discard(nt)
                elif nt in work:
                    work.discard(nt)
                else:
                    work.add(nt)
        return frozenset(done)

    def complete_rewrite_system(self) -> dict[Monomial, Poly]:
        """S-pair completion, confluent for all degrees up to degree_cap."""
        for rel in self.relations:
            if self.mono_degree(self.leading(rel)) > self.degree_cap:
                raise CapTooLow(
                    f"relation of degree {self.mono_degree(self.leading(rel))} "
                    f"exceeds degree_cap={self.degree_cap}")
        rules: dict[Monomial, Poly] = {}
        for rel in self.relations:
            reduced = self.normal_form(rel, rules)
            if reduced:
                lt, tail = self._as_rule(reduced)
                rules[lt] = tail
        pairs = list(combinations(sorted(rules, key=self.order_key), 2))
        while pairs:
            f, g = pairs.pop()
            lcm = mono_lcm(f, g)
            if self.mono_degree(lcm) > self.degree_cap:
                continue
            if mono_mul(f, g) == lcm:  # coprime leading monomials
                continue
            sf = poly_mul(frozenset({mono_div(lcm, f)}), rules[f])
            sg = poly_mul(frozenset({mono_div(lcm, g)}), rules[g])
            s = self.normal_form(sf ^ sg, rules)
            if not s:
                continue
            lt, tail = self._as_rule(s)
            pairs.extend((lt, other) for other in rules)
            rules[lt] = tail
        return rules

    def completed_rules(self) -> dict[Monomial, Poly]:
        if self._rules is None:
            self._rules = self.complete_rewrite_system()
        return self._rules

    # -- bases and series ----------------------------------------------------

    def _raw_monomials(self, d: int) -> list[Monomial]:
        out: list[Monomial] = []

        def rec(i, left, acc):
            if i == self.ngens:
                if left == 0:
                    out.append(tuple(acc))
                return
            dg = self.gen_degrees[i]
            for e in range(left // dg + 1):
                rec(i + 1, left - e * dg, acc + [e])

        rec(0, d, [])
        return sorted(out, key=self.order_key)

    def monomial_basis(self, d: int) -> list[Monomial]:
        """Normal-form monomials of total degree d."""
        if d > self.degree_cap:
            raise ValueError(f"degree {d} above degree_cap {self.degree_cap}")
        if d not in self._basis_cache:
            rules = self.completed_rules()
            self._basis_cache[d] = [
                mon for mon in self._raw_monomials(d)
                if not any(mono_divides(lt, mon) for lt in rules)
            ]
        return self._basis_cache[d]

    def _certify_finite(self) -> None:
        # quotient is finite-dimensional iff every generator is nilpotent; the
        # decisive power can sit one generator-degree above the cap, so run
        # the certificate in a twin completed slightly further
        twin = AlgebraPresentation(
            list(zip(self.gen_names, self.gen_degrees)), self.relations,
            self.degree_cap + max(self.gen_degrees))
        for i, (name, dg) in enumerate(zip(self.gen_names, self.gen_degrees)):
            e = 1
            while (e - 1) * dg <= self.degree_cap:
                mon = tuple(e if j == i else 0 for j in range(self.ngens))
                if not twin.normal_form(frozenset({mon})):
                    break
                e += 1
            else:
                raise NotFiniteDimensional(
                    f"generator {name} has no vanishing power below the degree cap")

    def poincare_series(self) -> PoincareSeries:
        self._certify_finite()
        return PoincareSeries.of(
            len(self.monomial_basis(d)) for d in range(self.degree_cap + 1))

    def multiply(self, u: Poly, v: Poly) -> Poly:
        """Product reduced to normal form."""
        return self.normal_form(poly_mul(u, v))

    # -- text format ---------------------------------------------------------

    def mono_str(self, mon: Monomial) -> str:
        parts = []
        for name, e in zip(self.gen_names, mon):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def poly_str(self, p: Poly) -> str:
        if not p:
            return "0"
        return "+".join(self.mono_str(m) for m in sorted(p, key=self.order_key, reverse=True))

    def to_text(self) -> str:
        lines = [f"gen {n} {d}" for n, d in zip(self.gen_names, self.gen_degrees)]
        lines += [f"rel {self.poly_str(r)}" for r in self.relations]
        return "\n".join(lines) + "\n"


_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


def parse_presentation(text: str, degree_cap: int | None = None) -> AlgebraPresentation:
    """Parse the `gen`/`rel` text format (whitespace-insensitive relations)."""
    gens: list[tuple[str, int]] = []
    rel_specs: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gen "):
            _, name, deg = line.split()
            gens.append((name, int(deg)))
        elif line.startswith("rel "):
            rel_specs.append(line[4:])
        else:
            raise ValueError(f"unrecognized line: {raw!r}")
    names = [n for n, _ in gens]
    degs = [d for _, d in gens]
    rels = [parse_poly(spec, names) for spec in rel_specs]
    if degree_cap is None:
        rel_degs = [sum(e * d for e, d in zip(mon, degs)) for r in rels for mon in r]
        degree_cap = max(rel_degs, default=0) + 6
    return AlgebraPresentation(gens, rels, degree_cap)


def parse_poly(spec: str, gen_names: list[str]) -> Poly:
    """Parse `x^2*y+y^3`-style polynomials over the given generators."""
    spec = spec.replace(" ", "").replace("\t", "")
    if not spec or spec == "0":
        return frozenset()
    idx = {n: i for i, n in enumerate(gen_names)}
    monos: set[Monomial] = set()
    for term in spec.split("+"):
        exps = [0] * len(gen_names)
        if term != "1":
            for factor in term.split("*"):
                if factor == "1":
                    continue
                mt = _FACTOR_RE.match(factor)
                if not mt or mt.group(1) not in idx:
                    raise ValueError(f"bad factor {factor!r} in {spec!r}")
                exps[idx[mt.group(1)]] += int(mt.group(2) or 1)
        monos ^= {tuple(exps)}
    return frozenset(monos)


# ---------------------------------------------------------------------------
# the fiber algebra

_LAMBDA = {"R": 1, "C": 2, "H": 4}


@dataclass(frozen=True)
class FiberPresentation:
    """Truncated two-generator algebra on a (degree lambda) and b (degree n).

    a^(m+1) = 0 and b^2 = 0; lambda is 1, 2 or 4 according to the field tag.
    """

    field_tag: str
    m: int
    n: int = 4

    def __post_init__(self):
        if self.field_tag not in _LAMBDA:
            raise ValueError(f"field_tag must be one of R, C, H, not {self.field_tag!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def lam(self) -> int:
        return _LAMBDA[self.field_tag]

    @property
    def top(self) -> int:
        """Largest degree with a nonzero component (the dimension of the space)."""
        return self.lam * self.m + self.n

    @property
    def degree_cap(self) -> int:
        return self.top + 6

    def algebra(self) -> AlgebraPresentation:
        m = self.m
        a_rel = frozenset({(m + 1, 0)})
        b_rel = frozenset({(0, 2)})
        return AlgebraPresentation(
            [("a", self.lam), ("b", self.n)], [a_rel, b_rel], self.degree_cap)

    def monomials_for_degree(self, l: int) -> list[tuple[int, int]]:
        """Fiber monomials (i, j) with lambda*i + n*j = l, i <= m, j <= 1."""
        return _fiber_monomials(self.lam, self.m, self.n, l)

    def dims(self) -> PoincareSeries:
        return PoincareSeries.of(
            len(self.monomials_for_degree(l)) for l in range(self.top + 1))


@lru_cache(maxsize=None)
def _fiber_monomials(lam: int, m: int, n: int, l: int) -> list[tuple[int, int]]:
    # pure a-powers first, matching the (a-power, a-power times b) convention
    out = []
    for j in (0, 1):
        r = l - n * j
        if r >= 0 and r % lam == 0 and r // lam <= m:
            out.append((r // lam, j))
    return sorted(out, key=lambda mono: (mono[1], mono[0]))


def series_product(factors: list[tuple[int, int]]) -> PoincareSeries:
    """Series of a tensor product of truncated one-generator algebras.

    Each factor (deg, e) contributes 1 + t^deg + ... + t^(deg*(e-1)).
    """
    coeffs = [1]
    for deg, e in factors:
        out = [0] * (len(coeffs) + deg * (e - 1))
        for i, c in enumerate(coeffs):
            for p in range(e):
                out[i + deg * p] += c
        coeffs = out
    return PoincareSeries.of(coeffs)
