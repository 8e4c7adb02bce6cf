"""Terminal-symbol counts of words generated by a context-free grammar.

Grammar text format, one item per line::

    start: S
    track: a b
    S -> a S b S
    S -> b T

Symbols are separated by whitespace.  Nonterminals are the symbols that occur
on a left side; every other right-side symbol is a terminal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import ResourceLimitError, UnsupportedGrammarError
from ..lattice import LatticeDistribution
from .empirical import empirical_model

MAX_LENGTH = 40

EXAMPLE_GRAMMAR = """\
start: S
track: a b
S -> a S b S
S -> b T
T -> b S
T -> c T
T -> a
"""


@dataclass(frozen=True)
class GrammarSpec:
    nonterminals: tuple[str, ...]
    terminals: tuple[str, ...]
    start: str
    rules: tuple[tuple[str, tuple[str, ...]], ...]
    tracked: tuple[str, ...]

    def __post_init__(self):
        nts, ts = set(self.nonterminals), set(self.terminals)
        if nts & ts:
            raise ValueError(f"symbols declared both ways: {sorted(nts & ts)}")
        if self.start not in nts:
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        for lhs, rhs in self.rules:
            if lhs not in nts:
                raise ValueError(f"rule left side {lhs!r} is not a nonterminal")
            bad = [s for s in rhs if s not in nts and s not in ts]
            if bad:
                raise ValueError(f"undeclared symbols {bad} in rule for {lhs}")
        if len(set(self.tracked)) != len(self.tracked):
            raise ValueError("tracked terminals must be distinct")
        if not self.tracked:
            raise ValueError("at least one terminal must be tracked")
        for a in self.tracked:
            if a not in ts:
                raise ValueError(f"tracked symbol {a!r} is not a terminal")

    @property
    def dimension(self) -> int:
        return len(self.tracked)

    @classmethod
    def parse(cls, text: str) -> "GrammarSpec":
        start, tracked, rules = None, None, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("start:"):
                start = line[len("start:"):].strip()
            elif line.startswith("track:"):
                tracked = tuple(line[len("track:"):].split())
            elif "->" in line:
                lhs, rhs = line.split("->", 1)
                lhs = lhs.strip()
                if not lhs or len(lhs.split()) != 1:
                    raise ValueError(f"line {lineno}: left side must be one symbol")
                rules.append((lhs, tuple(rhs.split())))
            else:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        if not rules:
            raise ValueError("grammar has no rules")
        nts = tuple(dict.fromkeys(lhs for lhs, _ in rules))
        ts = tuple(dict.fromkeys(s for _, rhs in rules for s in rhs if s not in nts))
        if start is None:
            start = nts[0]
        if tracked is None:
            tracked = ts
        return cls(nts, ts, start, tuple(rules), tracked)

    def serialize(self) -> str:
        lines = [f"start: {self.start}", "track: " + " ".join(self.tracked)]
        lines += [f"{lhs} -> " + " ".join(rhs) for lhs, rhs in self.rules]
        return "\n".join(lines) + "\n"


def example_grammar() -> GrammarSpec:
    return GrammarSpec.parse(EXAMPLE_GRAMMAR)


def _check_supported(g: GrammarSpec) -> None:
    nts = set(g.nonterminals)
    for lhs, rhs in g.rules:
        if not rhs:
            raise UnsupportedGrammarError(f"empty production for {lhs}")
        if len(rhs) == 1 and rhs[0] in nts:
            raise UnsupportedGrammarError(f"unit production {lhs} -> {rhs[0]} does not increase length")


class _Packed:
    """Multivariate integer polynomials packed into one Python integer.

    The monomial ``x^c`` (``c`` a count vector with entries ``<= n``) owns the
    bit field at slot ``sum_l c_l (n+1)^l``; every field is ``width`` bits, wide
    enough that no coefficient can overflow into its neighbour.
    """

    def __init__(self, k: int, n: int, width: int):
        self.k, self.base, self.width = k, n + 1, width

    def monomial_shift(self, counts) -> int:
        slot = sum(c * self.base**l for l, c in enumerate(counts))
        return slot * self.width

    def unpack(self, value: int) -> dict[tuple[int, ...], int]:
        out = {}
        nbytes = self.width // 8
        raw = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "little")
        for slot in range(0, (len(raw) + nbytes - 1) // nbytes):
            c = int.from_bytes(raw[slot * nbytes:(slot + 1) * nbytes], "little")
            if c:
                key, s = [], slot
                for _ in range(self.k):
                    s, r = divmod(s, self.base)
                    key.append(r)
                out[tuple(key)] = c
        return out


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _length_totals(g: GrammarSpec, n: int) -> dict[str, list[int]]:
    """Number of derivation trees of each length, per nonterminal."""
    nts = set(g.nonterminals)
    tot = {a: [0] * (n + 1) for a in g.nonterminals}
    for length in range(1, n + 1):
        for lhs, rhs in g.rules:
            inner = [s for s in rhs if s in nts]
            rest = length - (len(rhs) - len(inner))
            if rest < len(inner):
                continue
            acc = 0
            for split in _compositions(rest, len(inner)):
                prod = 1
                for sym, ell in zip(inner, split):
                    prod *= tot[sym][ell]
                    if not prod:
                        break
                acc += prod
            tot[lhs][length] += acc
    return tot


def grammar_counts(g: GrammarSpec, n: int) -> dict[tuple[int, ...], int]:
    """Derivation trees of words of length ``n``, keyed by the tracked-symbol count vector.

    Equals word counts when the grammar is unambiguous.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_LENGTH:
        raise ResourceLimitError(f"word length {n} exceeds the supported maximum {MAX_LENGTH}")
    _check_supported(g)
    return dict(_grammar_table(g, n)[g.start][n])


def _grammar_table(g: GrammarSpec, n: int):
    nts = set(g.nonterminals)
    totals = _length_totals(g, n)
    biggest = max(max(v) for v in totals.values())
    arity = max(sum(s in nts for s in rhs) for _, rhs in g.rules)
    # a partial product of arity factors is bounded by biggest**arity; round up to whole bytes
    width = 8 * ((max(1, biggest.bit_length()) * max(1, arity) + 8 + 7) // 8)
    pk = _Packed(g.dimension, n, width)
    index = {a: i for i, a in enumerate(g.tracked)}
    packed = {a: [0] * (n + 1) for a in g.nonterminals}
    rule_data = []
    for lhs, rhs in g.rules:
        counts = [0] * g.dimension
        for s in rhs:
            if s in index:
                counts[index[s]] += 1
        inner = [s for s in rhs if s in nts]
        rule_data.append((lhs, inner, len(rhs) - len(inner), pk.monomial_shift(counts)))
    for length in range(1, n + 1):
        for lhs, inner, n_terminal, shift in rule_data:
            rest = length - n_terminal
            if rest < len(inner):
                continue
            acc = 0
            for split in _compositions(rest, len(inner)):
                prod = 1
                for sym, ell in zip(inner, split):
                    prod *= packed[sym][ell]
                    if not prod:
                        break
                acc += prod
            packed[lhs][length] += acc << shift
    return {a: [pk.unpack(v) if v else {} for v in packed[a]] for a in g.nonterminals}


def enumerate_derivations(g: GrammarSpec, n: int) -> list[str]:
    """Brute force: the word of every leftmost derivation of length ``n`` (one entry per tree).

    Exponential; intended as an oracle for small ``n``.
    """
    _check_supported(g)
    nts = set(g.nonterminals)
    by_lhs = {a: [rhs for lhs, rhs in g.rules if lhs == a] for a in g.nonterminals}
    out = []
    # every symbol of a sentential form yields at least one terminal, so prune on length
    stack = [(g.start,)]
    while stack:
        form = stack.pop()
        if len(form) > n:
            continue
        pos = next((i for i, s in enumerate(form) if s in nts), None)
        if pos is None:
            if len(form) == n:
                out.append("".join(form))
            continue
        for rhs in by_lhs[form[pos]]:
            stack.append(form[:pos] + rhs + form[pos + 1:])
    return sorted(out)


def check_unambiguous(g: GrammarSpec, max_n: int = 12) -> bool:
    """True if no word of length ``<= max_n`` has two derivation trees."""
    for n in range(1, max_n + 1):
        words = enumerate_derivations(g, n)
        if len(words) != len(set(words)):
            return False
    return True


def grammar_law(g: GrammarSpec, n: int) -> LatticeDistribution:
    counts = grammar_counts(g, n)
    if not counts:
        raise ValueError(f"the grammar generates no words of length {n}")
    return LatticeDistribution.from_counts(counts)


@lru_cache(maxsize=64)
def _cached_law(text: str, n: int) -> LatticeDistribution:
    return grammar_law(GrammarSpec.parse(text), n)


def grammar_model(g: GrammarSpec | None = None, n1: int = 20, n2: int = 40):
    """Quasi-power data for the grammar, estimated from the exact laws at ``n1`` and ``n2``."""
    g = g or example_grammar()
    text = g.serialize()
    return empirical_model(lambda n: _cached_law(text, int(n)), n1, n2, name="grammar",
                           metadata={"grammar": text, "count_semantics": "derivation trees"})

