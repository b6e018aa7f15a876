"""Command-line pipeline: extract, generalize, properties, sources, cms,
find-lms, eval-gold.

Each stage reads its predecessor's artifact from the work directory and
writes its own, so re-running a stage on unchanged inputs is byte-identical:

    store.tsv -> store.gen.tsv -> properties.<t>.tsv / sources.<t>.tsv
              -> cms.<t>.json -> lms.<t>.jsonl        gold_report.txt
"""

import argparse
import json
import sys
from pathlib import Path

from . import engine, generalize, gold as gold_mod
from .config import PipelineConfig, load_config
from .conllu import iter_sentences
from .errors import MFError
from .extraction import DEFAULT_RULES, extract_propositions, load_rules
from .lm import expand_domain, find_lms, load_expansion_table, sample_hits
from .store import Store, merge_stores
from .taxonomy import load_taxonomy
from .topics import load_topic_matrix

SUBCOMMANDS = ("extract", "generalize", "properties", "sources", "cms",
               "find-lms", "eval-gold")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _need(path: str | None, what: str) -> Path:
    if not path:
        raise MFError(f"no {what} configured (set it in the config file or pass the flag)")
    p = Path(path)
    if not p.exists():
        raise MFError(f"{what} not found: {p}")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mf",
        description="Build proposition stores and generate conceptual metaphors.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument("--workdir", help="artifact directory (default: out)")
        p.add_argument("--threshold", type=float, help="relatedness cutoff")
        p.add_argument("--k", type=int, help="minimum shared patterns per concept")
        p.add_argument("--top-sources", type=int, dest="top_sources")
        p.add_argument("--top-cms", type=int, dest="top_cms")
        p.add_argument("--seed", type=int, help="sampling seed")
        p.add_argument("--min-freq", type=int, dest="min_freq")
        p.add_argument("--per-pair", type=int, dest="per_pair")
        p.add_argument("--no-generalize", action="store_true",
                       help="use the raw store for downstream stages")
        return p

    p = common(sub.add_parser("extract", help="corpus -> proposition store"))
    p.add_argument("--corpus", nargs="+", help="CoNLL-U file(s); shards are merged")
    p.add_argument("--rules", help="JSON extraction-rule file")

    p = common(sub.add_parser("generalize", help="store + taxonomy -> generalized store"))
    p.add_argument("--taxonomy")

    for name, help_text in (("properties", "ranked tuples containing a lexeme"),
                            ("sources", "ranked candidate source lexemes"),
                            ("cms", "clustered conceptual metaphors")):
        p = common(sub.add_parser(name, help=help_text))
        p.add_argument("--target", action="append", help="seed lexeme (repeatable)")
        if name != "properties":
            p.add_argument("--topic-matrix", dest="topic_matrix")
        if name == "cms":
            p.add_argument("--taxonomy")

    p = common(sub.add_parser("find-lms", help="retrieve dependency-linked candidates"))
    p.add_argument("--target", action="append")
    p.add_argument("--corpus", nargs="+")
    p.add_argument("--expansion-table", dest="expansion_table")
    p.add_argument("--sidecar", help="TSV sentence_id <TAB> text override")

    p = common(sub.add_parser("eval-gold", help="score gold domain mappings"))
    p.add_argument("--gold")
    p.add_argument("--expansion-table", dest="expansion_table")
    p.add_argument("--topic-matrix", dest="topic_matrix")

    return parser


def _configure(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if args.config:
        cfg = load_config(_need(args.config, "config file"), cfg)
    for key in ("workdir", "threshold", "k", "top_sources", "top_cms", "seed",
                "min_freq", "per_pair"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    for key in ("rules", "taxonomy", "topic_matrix", "expansion_table",
                "gold", "sidecar"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    corpus = getattr(args, "corpus", None)
    if corpus:
        cfg.corpus = corpus[0] if len(corpus) == 1 else None
        cfg._corpus_shards = list(corpus)  # CLI may pass several shards
    targets = getattr(args, "target", None)
    if targets:
        cfg.targets = tuple(targets)
    if getattr(args, "no_generalize", False):
        cfg.generalize = False
    return cfg.validate()


def _corpus_paths(cfg: PipelineConfig) -> list[Path]:
    shards = getattr(cfg, "_corpus_shards", None)
    if shards:
        return [_need(s, "corpus") for s in shards]
    return [_need(cfg.corpus, "corpus")]


def _workdir(cfg: PipelineConfig) -> Path:
    wd = Path(cfg.workdir)
    wd.mkdir(parents=True, exist_ok=True)
    return wd


def _active_store(cfg: PipelineConfig) -> Store:
    wd = _workdir(cfg)
    name = "store.gen.tsv" if cfg.generalize else "store.tsv"
    return Store.load(_need(str(wd / name), f"store artifact {name}"))


def _targets(cfg: PipelineConfig) -> tuple[str, ...]:
    if not cfg.targets:
        raise MFError("no target lexemes (set targets= in the config or pass --target)")
    return cfg.targets


def _load_tm(cfg: PipelineConfig):
    if not cfg.topic_matrix:
        return None
    tm = load_topic_matrix(_need(cfg.topic_matrix, "topic matrix"))
    if tm.topics != cfg.topics:
        _warn(f"topic matrix has {tm.topics} topics, config expects {cfg.topics}")
    return tm


def _load_table(cfg: PipelineConfig):
    return load_expansion_table(_need(cfg.expansion_table, "expansion table")) \
        if cfg.expansion_table else None


def _ranked_sources(cfg: PipelineConfig, store: Store, target: str, tm):
    ranked = engine.generate_sources(target, store)
    ranked = engine.filter_sources(ranked, target, tm, cfg.threshold)
    return ranked[:cfg.top_sources]


def cmd_extract(cfg: PipelineConfig) -> int:
    rules = load_rules(_need(cfg.rules, "rule file")) if cfg.rules else DEFAULT_RULES
    shards = []
    for path in _corpus_paths(cfg):
        shard = Store()
        for sentence in iter_sentences(path):
            shard.update(extract_propositions(sentence, rules))
        shards.append(shard)
    store = merge_stores(shards)
    store.freeze(min_freq=cfg.min_freq)
    out = _workdir(cfg) / "store.tsv"
    store.save(out)
    print(f"{out}: {len(store)} tuples, total frequency {store.total()}")
    return 0


def cmd_generalize(cfg: PipelineConfig) -> int:
    wd = _workdir(cfg)
    store = Store.load(_need(str(wd / "store.tsv"), "store artifact store.tsv"))
    tax = load_taxonomy(_need(cfg.taxonomy, "taxonomy"))
    result = generalize.generalize_store(store, tax)
    out = wd / "store.gen.tsv"
    result.save(out)
    print(f"{out}: {len(result)} tuples, total frequency {result.total()}")
    return 0


def cmd_properties(cfg: PipelineConfig) -> int:
    store = _active_store(cfg)
    wd = _workdir(cfg)
    for target in _targets(cfg):
        out = wd / f"properties.{target}.tsv"
        if not store.tuples_containing(target):
            _warn(f"lexeme {target!r} not found in the store")
            out.write_text("", encoding="utf-8")
            print(f"{out}: 0 tuples")
            continue
        ranked = engine.salient_properties(target, store, top_n=None)
        with open(out, "w", encoding="utf-8") as fh:
            for wt in ranked:
                fh.write(f"{wt.weight!r}\t{wt.frequency}\t{wt.position}\t"
                         f"{wt.prop.text}\n")
        print(f"{out}: {len(ranked)} tuples")
    return 0


def cmd_sources(cfg: PipelineConfig) -> int:
    store = _active_store(cfg)
    tm = _load_tm(cfg)
    wd = _workdir(cfg)
    for target in _targets(cfg):
        ranked = _ranked_sources(cfg, store, target, tm)
        if not ranked:
            _warn(f"no sources generated for {target!r}")
        out = wd / f"sources.{target}.tsv"
        with open(out, "w", encoding="utf-8") as fh:
            for src in ranked:
                patterns = "|".join(sorted(p.text for p in src.evidence))
                fh.write(f"{src.lexeme}\t{src.weight!r}\t{len(src.evidence)}\t"
                         f"{patterns}\n")
        print(f"{out}: {len(ranked)} sources")
    return 0


def cmd_cms(cfg: PipelineConfig) -> int:
    store = _active_store(cfg)
    tm = _load_tm(cfg)
    tax = load_taxonomy(_need(cfg.taxonomy, "taxonomy"))
    wd = _workdir(cfg)
    for target in _targets(cfg):
        ranked = _ranked_sources(cfg, store, target, tm)
        concepts = engine.cluster_sources(ranked, tax, cfg.k)
        cms = engine.build_cms({target}, concepts, cfg.top_cms)
        records = [{
            "target": sorted(cm.target),
            "source_node": cm.source.node,
            "members": [{"lexeme": m.lexeme, "weight": m.weight}
                        for m in sorted(cm.source.members,
                                        key=lambda m: (-m.weight, m.lexeme))],
            "patterns": sorted(p.text for p in cm.properties),
            "weight": cm.weight,
        } for cm in cms]
        out = wd / f"cms.{target}.json"
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(records, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"{out}: {len(records)} conceptual metaphors")
    return 0


def _load_sidecar(cfg: PipelineConfig) -> dict[str, str]:
    if not cfg.sidecar:
        return {}
    texts = {}
    for line in _need(cfg.sidecar, "sidecar").read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        sid, _, text = line.partition("\t")
        texts[sid] = text
    return texts


def cmd_find_lms(cfg: PipelineConfig) -> int:
    store = _active_store(cfg)
    table = _load_table(cfg)
    wd = _workdir(cfg)
    paths = _corpus_paths(cfg)
    sidecar = _load_sidecar(cfg)
    for target in _targets(cfg):
        cm_path = _need(str(wd / f"cms.{target}.json"), f"cms.{target}.json")
        with open(cm_path, encoding="utf-8") as fh:
            records = json.load(fh)
        specs = []
        for rec in records:
            targets = expand_domain(set(rec["target"]), table, store,
                                    cfg.top_patterns)
            sources = expand_domain({m["lexeme"] for m in rec["members"]},
                                    table, store, cfg.top_patterns)
            specs.append((targets, sources, ",".join(sorted(rec["target"])),
                          rec["source_node"]))
        hits = []
        texts = {}
        for path in paths:
            for sentence in iter_sentences(path):
                for targets, sources, t_dom, s_dom in specs:
                    for hit in find_lms([sentence], targets, sources,
                                        target_domain=t_dom, source_domain=s_dom):
                        hits.append(hit)
                        texts[sentence.id] = sentence.text
        sampled = sample_hits(hits, cfg.per_pair, cfg.seed) if hits else []
        out = wd / f"lms.{target}.jsonl"
        with open(out, "w", encoding="utf-8") as fh:
            for hit in sampled:
                record = {
                    "sentence_id": hit.sentence_id,
                    "target": hit.matched_target,
                    "source": hit.matched_source,
                    "deprel": hit.deprel,
                    "direction": hit.direction,
                    "target_domain": hit.target_domain,
                    "source_domain": hit.source_domain,
                    "text": sidecar.get(hit.sentence_id, texts.get(hit.sentence_id, "")),
                }
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        print(f"{out}: {len(sampled)} hits sampled from {len(hits)}")
    return 0


def cmd_eval_gold(cfg: PipelineConfig) -> int:
    store = _active_store(cfg)
    table = _load_table(cfg)
    tm = _load_tm(cfg)
    mappings = gold_mod.load_gold(_need(cfg.gold, "gold file"))
    report = gold_mod.eval_gold(
        mappings, store, table, tm,
        threshold=cfg.threshold, top_sources=cfg.top_sources,
        top_patterns=cfg.top_patterns, warn=_warn)
    out = _workdir(cfg) / "gold_report.txt"
    text = report.render()
    out.write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


_HANDLERS = {
    "extract": cmd_extract,
    "generalize": cmd_generalize,
    "properties": cmd_properties,
    "sources": cmd_sources,
    "cms": cmd_cms,
    "find-lms": cmd_find_lms,
    "eval-gold": cmd_eval_gold,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _configure(args)
        return _HANDLERS[args.subcommand](cfg)
    except MFError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
