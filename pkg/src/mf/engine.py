"""Salient properties, source lexeme generation, relatedness filtering,
and clustering of sources into weighted conceptual metaphors.

A tuple's weight relative to a lexeme filling slot i is its frequency
divided by the summed frequency of every tuple matching the pattern that
blanks slot i. A candidate source lexeme accumulates the weights of the
seed's tuples whose patterns it also fills; which patterns those are is
kept as per-source evidence, because pattern sharing is what a conceptual
metaphor transfers.

All rankings break ties by (weight desc, raw frequency desc, lexicographic
asc) so results are identical across runs and schedules.
"""

from dataclasses import dataclass, field

from .store import PatternKey, Proposition, Store
from .taxonomy import Taxonomy, map_noun
from .topics import TopicMatrix


@dataclass(frozen=True)
class WeightedTuple:
    prop: Proposition
    position: int
    weight: float
    frequency: int


@dataclass
class WeightedSource:
    lexeme: str
    weight: float
    evidence: dict[PatternKey, float] = field(default_factory=dict)
    evidence_freq: int = 0

    @property
    def patterns(self) -> set[PatternKey]:
        return set(self.evidence)


@dataclass
class SourceConcept:
    node: str
    members: tuple[WeightedSource, ...]
    shared_patterns: frozenset[PatternKey]
    weight: float


@dataclass
class ConceptualMetaphor:
    target: frozenset[str]
    source: SourceConcept
    properties: frozenset[PatternKey]
    weight: float


def tuple_weight(lexeme: str, prop: Proposition, position: int, store: Store) -> float:
    """Frequency of the tuple over the total of its blanked-slot pattern."""
    freq = store.freq(prop)
    if freq == 0:
        raise ValueError(f"tuple not in store: {prop.text}")
    if not 0 <= position < len(prop.slots) or prop.slots[position] != lexeme:
        raise ValueError(
            f"lexeme {lexeme!r} does not fill slot {position} of {prop.text}")
    return freq / store.pattern_total(prop.pattern(position))


def salient_properties(lexeme: str, store: Store,
                       top_n: int | None) -> list[WeightedTuple]:
    """Rank every tuple containing the lexeme by its relative weight.

    top_n=None returns the full ranking.
    """
    if top_n is not None and top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    scored = [
        WeightedTuple(prop, i, tuple_weight(lexeme, prop, i, store), store.freq(prop))
        for prop, i in store.tuples_containing(lexeme)
    ]
    scored.sort(key=lambda wt: (-wt.weight, -wt.frequency,
                                wt.prop.label, wt.prop.slots, wt.position))
    return scored if top_n is None else scored[:top_n]


def generate_sources(lexeme: str, store: Store,
                     s_freq_weighted: bool = False) -> list[WeightedSource]:
    """Weight candidate source lexemes by the seed-tuple weights they share.

    A lexeme s is a candidate when some tuple puts s in the same blanked
    position of a pattern that one of the seed's tuples fills; it then
    collects that seed tuple's weight. The s_freq_weighted variant further
    multiplies each contribution by s's own relative weight in the shared
    pattern (experimental; off by default).
    """
    acc: dict[str, WeightedSource] = {}
    # fixed accumulation order keeps float sums bit-identical across runs
    for prop, i in sorted(store.tuples_containing(lexeme)):
        wt = tuple_weight(lexeme, prop, i, store)
        key = prop.pattern(i)
        total = store.pattern_total(key)
        for other in sorted(store.tuples_matching(key)):
            s = other.slots[i]
            if s == lexeme:
                continue
            contribution = wt
            if s_freq_weighted:
                contribution *= store.freq(other) / total
            ws = acc.get(s)
            if ws is None:
                ws = acc[s] = WeightedSource(s, 0.0)
            ws.weight += contribution
            ws.evidence[key] = ws.evidence.get(key, 0.0) + contribution
            ws.evidence_freq += store.freq(other)
    ranked = sorted(acc.values(),
                    key=lambda ws: (-ws.weight, -ws.evidence_freq, ws.lexeme))
    return ranked


def filter_sources(sources: list[WeightedSource], target: str,
                   tm: TopicMatrix | None, threshold: float) -> list[WeightedSource]:
    """Drop sources whose topic relatedness to the target exceeds the
    threshold; out-of-vocabulary sources always survive. Order preserved."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    if tm is None or tm.is_oov(target):
        return list(sources)
    return [s for s in sources
            if tm.is_oov(s.lexeme) or tm.relatedness(target, s.lexeme) <= threshold]


def cluster_sources(sources: list[WeightedSource], tax: Taxonomy,
                    k: int) -> list[SourceConcept]:
    """Group sources under taxonomy classes they are hyponyms of.

    A class qualifies when its members' target-shared patterns union to k
    or more; for identical member sets only the most specific qualifying
    nodes are kept. Concept weight is the sum of member weights.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    member_map: dict[str, list[WeightedSource]] = {}
    for src in sources:
        nodes: set[str] = set()
        for cls in map_noun(src.lexeme, tax):
            nodes |= {n for n in tax.ancestors(cls, reflexive=True)
                      if tax.kind(n) == "class"}
        for node in nodes:
            member_map.setdefault(node, []).append(src)

    qualifying: dict[str, tuple[WeightedSource, ...]] = {}
    for node, members in member_map.items():
        patterns = set()
        for m in members:
            patterns |= set(m.evidence)
        if len(patterns) >= k:
            qualifying[node] = tuple(members)

    # identical member sets: keep only nodes with no qualifying descendant
    by_members: dict[frozenset, list[str]] = {}
    for node, members in qualifying.items():
        by_members.setdefault(frozenset(m.lexeme for m in members), []).append(node)
    kept: set[str] = set()
    for nodes in by_members.values():
        for node in nodes:
            dominated = any(other != node and node in tax.ancestors(other, reflexive=False)
                            for other in nodes)
            if not dominated:
                kept.add(node)

    concepts = []
    for node in kept:
        members = qualifying[node]
        patterns = frozenset(p for m in members for p in m.evidence)
        weight = sum(m.weight for m in members)
        concepts.append(SourceConcept(node, members, patterns, weight))
    concepts.sort(key=lambda c: (-c.weight, c.node))
    return concepts


def build_cms(target_lexemes: set[str], concepts: list[SourceConcept],
              top_m: int) -> list[ConceptualMetaphor]:
    """One conceptual metaphor per source concept, best top_m kept."""
    if top_m < 1:
        raise ValueError(f"top_m must be >= 1, got {top_m}")
    cms = [ConceptualMetaphor(frozenset(target_lexemes), c,
                              frozenset(c.shared_patterns), c.weight)
           for c in concepts if c.shared_patterns]
    cms.sort(key=lambda cm: (-cm.weight, cm.source.node))
    return cms[:top_m]
