"""Rewriting noun slots to taxonomy classes and merging identical tuples.

Ambiguous nouns fan out to every candidate class. By default each copy
carries the full original frequency (mass="copy"); mass="split" instead
divides the frequency across copies as evenly as integers allow, largest
remainders going to the lexicographically first rewrites, and drops
zero-frequency copies.
"""

import itertools

from .labels import noun_positions
from .store import Proposition, Store
from .taxonomy import Taxonomy, map_noun


def generalize_store(store: Store, tax: Taxonomy, mass: str = "copy") -> Store:
    """Return a new frozen store with noun slots rewritten to class ids.

    Nouns with no taxonomy candidates keep their original lexeme; identical
    rewritten tuples are merged with summed frequencies.
    """
    if mass not in ("copy", "split"):
        raise ValueError(f"mass must be 'copy' or 'split', got {mass!r}")
    mapping_cache: dict[str, tuple[str, ...]] = {}

    def options(lexeme: str) -> tuple[str, ...]:
        got = mapping_cache.get(lexeme)
        if got is None:
            classes = sorted(map_noun(lexeme, tax))
            got = tuple(classes) if classes else (lexeme,)
            mapping_cache[lexeme] = got
        return got

    out = Store()
    for prop, freq in store:
        nouns = noun_positions(prop.label)
        slot_options = [options(s) if i in nouns else (s,)
                        for i, s in enumerate(prop.slots)]
        rewrites = sorted(itertools.product(*slot_options))
        if mass == "copy":
            for slots in rewrites:
                out.add(Proposition(prop.label, slots), freq)
        else:
            share, extra = divmod(freq, len(rewrites))
            for j, slots in enumerate(rewrites):
                f = share + (1 if j < extra else 0)
                if f > 0:
                    out.add(Proposition(prop.label, slots), f)
    return out.freeze()
