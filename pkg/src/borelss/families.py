"""Parametric presentation families for the orbit-space theorems.

Each theorem ships as a catalog fixture in an extended form of the
gen/rel text format: exponents may be brace-wrapped integer expressions
in m, and a bare non-generator factor inside a term is a GF(2)
coefficient slot.  Instantiating a family at a concrete m drops slots
whose monomial tastes bad there: a negative exponent, a collision with
an earlier term's monomial, or an explicit proviso.  That realizes the
small-m side conditions of the theorems mechanically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .algebra import AlgebraPresentation

THEOREM_FOR_FIELD = {"R": "rp", "C": "cp", "H": "hp"}
_LAM_FOR_THEOREM = {"rp": 1, "cp": 2, "hp": 4}
_SPHERE_DIM = 4


class ConstraintViolation(Exception):
    """Parameters or m violate the family's side conditions."""


_EXPR_OK = re.compile(r"^[0-9m+\-*/() ]+$")


def eval_exponent(expr: str, m: int) -> int:
    if not _EXPR_OK.match(expr):
        raise ValueError(f"bad exponent expression {expr!r}")
    val = eval(expr, {"__builtins__": {}}, {"m": Fraction(m)})  # noqa: S307
    val = Fraction(val)
    if val.denominator != 1:
        raise ConstraintViolation(f"exponent {expr!r} is not an integer at m={m}")
    return int(val)


@dataclass(frozen=True)
class TermTemplate:
    slot: str | None                       # coefficient slot name, if any
    factors: tuple[tuple[str, str], ...]   # (generator, exponent expression)

    def monomial(self, gen_names: tuple[str, ...], m: int) -> tuple[int, ...] | None:
        """Exponent tuple at this m, or None when an exponent goes negative."""
        exps = [0] * len(gen_names)
        for name, expr in self.factors:
            e = eval_exponent(expr, m)
            if e < 0:
                return None
            exps[gen_names.index(name)] += e
        return tuple(exps)


@dataclass(frozen=True)
class RelationTemplate:
    terms: tuple[TermTemplate, ...]


@dataclass(frozen=True)
class IdealFamily:
    theorem: str
    family_id: str
    case_id: str
    gens: tuple[tuple[str, int], ...]
    relations: tuple[RelationTemplate, ...]
    requires: tuple[str, ...]
    forces: tuple[tuple[str, str], ...]

    @property
    def full_id(self) -> str:
        return f"thm-{self.theorem}/{self.family_id}"

    @property
    def gen_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.gens)

    @property
    def slots(self) -> tuple[str, ...]:
        seen: list[str] = []
        for rel in self.relations:
            for term in rel.terms:
                if term.slot and term.slot not in seen:
                    seen.append(term.slot)
        return tuple(seen)

    def admissible_at(self, m: int) -> bool:
        if m < 1:
            return False
        for cond in self.requires:
            if cond == "m odd":
                if m % 2 == 0:
                    return False
            else:
                mt = re.match(r"^m >= (\d+)$", cond)
                if not mt:
                    raise ValueError(f"bad requires clause {cond!r}")
                if m < int(mt.group(1)):
                    return False
        return True

    def forced_zero_slots(self, m: int) -> set[str]:
        """Slots that must vanish at this m: explicit provisos, negative
        exponents, and collisions with an earlier term's monomial."""
        forced: set[str] = set()
        for slot, cond in self.forces:
            mt = re.match(r"^m (==|<=) (\d+)$", cond)
            if not mt:
                raise ValueError(f"bad force clause {cond!r}")
            op, bound = mt.group(1), int(mt.group(2))
            if (op == "==" and m == bound) or (op == "<=" and m <= bound):
                forced.add(slot)
        names = self.gen_names
        for rel in self.relations:
            seen: set[tuple[int, ...]] = set()
            for term in rel.terms:
                mono = term.monomial(names, m)
                if mono is None:
                    if term.slot is None:
                        raise ConstraintViolation(
                            f"{self.full_id}: slotless term with negative exponent at m={m}")
                    forced.add(term.slot)
                    continue
                if mono in seen:
                    if term.slot is None:
                        raise ConstraintViolation(
                            f"{self.full_id}: duplicate slotless monomial at m={m}")
                    forced.add(term.slot)
                    continue
                seen.add(mono)
        return forced

    def degree_cap(self, m: int) -> int:
        lam = _LAM_FOR_THEOREM.get(self.theorem)
        if lam is not None:
            return lam * m + _SPHERE_DIM + 6
        # ad-hoc catalog: cover the relations with the usual slack
        degs = dict(self.gens)
        names = self.gen_names
        top = 0
        for rel in self.relations:
            mono = rel.terms[0].monomial(names, m)
            if mono is not None:
                top = max(top, sum(e * degs[n] for n, e in zip(names, mono)))
        return top + 6

    def instantiate(self, m: int, params: dict[str, int] | None = None) -> AlgebraPresentation:
        """Concrete presentation at m; rejects forced or unknown parameters."""
        if not self.admissible_at(m):
            raise ConstraintViolation(f"{self.full_id} is not defined at m={m}")
        params = dict(params or {})
        unknown = set(params) - set(self.slots)
        if unknown:
            raise ConstraintViolation(f"unknown parameters {sorted(unknown)}")
        forced = self.forced_zero_slots(m)
        for slot in forced:
            if params.get(slot):
                raise ConstraintViolation(
                    f"{self.full_id}: parameter {slot} is forced to zero at m={m}")
        names = self.gen_names
        relations = []
        for rel in self.relations:
            monos: set[tuple[int, ...]] = set()
            for term in rel.terms:
                if term.slot:
                    if term.slot in forced or not params.get(term.slot, 0):
                        continue
                mono = term.monomial(names, m)
                monos ^= {mono}
            relations.append(frozenset(monos))
        return AlgebraPresentation(self.gens, relations, self.degree_cap(m))

    def param_vectors(self, m: int) -> list[dict[str, int]]:
        """Every admissible parameter assignment at this m, forced slots zero."""
        forced = self.forced_zero_slots(m)
        free = [s for s in self.slots if s not in forced]
        out = []
        for bits in range(1 << len(free)):
            vec = {s: (bits >> i) & 1 for i, s in enumerate(free)}
            for s in forced:
                vec[s] = 0
            out.append(vec)
        return out


_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(?:(\d+)|\{([^}]*)\}))?$")


def _split_outside_braces(spec: str, seps: str) -> list[str]:
    """Split on separator characters at brace depth zero, dropping empties,
    so {m+1} or {2*m+5} exponents stay intact."""
    out, depth, cur = [], 0, []
    for ch in spec:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch in seps and depth == 0:
            if cur:
                out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def _parse_term(spec: str, gen_names: set[str]) -> TermTemplate:
    factors = []
    slot = None
    for raw in _split_outside_braces(spec, "* \t"):
        mt = _FACTOR_RE.match(raw)
        if not mt:
            raise ValueError(f"bad factor {raw!r}")
        name, int_exp, expr = mt.group(1), mt.group(2), mt.group(3)
        if name not in gen_names:
            if int_exp or expr or slot is not None:
                raise ValueError(f"bad coefficient slot {raw!r}")
            slot = name
            continue
        factors.append((name, expr if expr is not None else (int_exp or "1")))
    return TermTemplate(slot, tuple(factors))


def parse_catalog(text: str) -> list[IdealFamily]:
    theorem = None
    families: list[IdealFamily] = []
    cur: dict | None = None

    def flush():
        if cur is not None:
            families.append(IdealFamily(
                theorem, cur["id"], cur["case"], tuple(cur["gens"]),
                tuple(cur["rels"]), tuple(cur["requires"]), tuple(cur["forces"])))

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "theorem":
            theorem = rest
        elif head == "family":
            flush()
            cur = {"id": rest, "case": None, "gens": [], "rels": [],
                   "requires": [], "forces": []}
        elif head == "case":
            cur["case"] = rest
        elif head == "requires":
            cur["requires"].append(rest)
        elif head == "gen":
            name, deg = rest.split()
            cur["gens"].append((name, int(deg)))
        elif head == "rel":
            gen_names = {n for n, _ in cur["gens"]}
            terms = tuple(_parse_term(t, gen_names)
                          for t in _split_outside_braces(rest, "+"))
            cur["rels"].append(RelationTemplate(terms))
        elif head == "force":
            mt = re.match(r"^(\w+) 0 when (.+)$", rest)
            if not mt:
                raise ValueError(f"bad force line {line!r}")
            cur["forces"].append((mt.group(1), mt.group(2).strip()))
        else:
            raise ValueError(f"unrecognized catalog line {line!r}")
    flush()
    return families


@lru_cache(maxsize=None)
def catalog(theorem: str) -> tuple[IdealFamily, ...]:
    text = resources.files("borelss.data").joinpath(f"thm_{theorem}.txt").read_text()
    return tuple(parse_catalog(text))


def catalog_for_field(field_tag: str) -> tuple[IdealFamily, ...]:
    return catalog(THEOREM_FOR_FIELD[field_tag])


def families_for_case(field_tag: str, merged_case: str) -> list[IdealFamily]:
    return [f for f in catalog_for_field(field_tag) if f.case_id == merged_case]
