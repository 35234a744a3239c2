"""Command-line entry point: ``clonesearch {build,annotate-dump,search,eval}``."""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from .annotate import AUTOMATIC, BASELINE, MANUAL, AnnotationError, AnnotationStrategy, keyword_counts
from .dataset import ManifestError, TraceError
from .evaluation import (
    EvalError,
    check_pairs,
    eval_nlq,
    eval_recall,
    load_pairs,
    load_queries,
    write_nlq_csv,
    write_recall_csv,
)
from .index import IndexBuildError, IndexFormatError, load_index, save_index
from .lexnorm import default_stopwords, read_stopwords
from .pipeline import annotate_corpus, build_corpus_index, identifier_queries, load_corpus
from .search import CODE, DEFAULT_TOP_K, EVAL_TOP_K, TEXT, prepare_query, search, write_results

log = logging.getLogger("clonesearch")

ERRORS = (ManifestError, TraceError, AnnotationError, IndexBuildError, IndexFormatError, EvalError, OSError)


class UsageError(Exception):
    pass


def _stopwords(args):
    return read_stopwords(args.stopwords) if args.stopwords else default_stopwords()


def _strategy(args) -> AnnotationStrategy:
    if args.strategy == MANUAL and not args.annotations:
        raise UsageError("--strategy manual requires --annotations")
    if args.k is not None and args.strategy != "auto":
        raise UsageError("--k is only accepted with --strategy auto")
    return AnnotationStrategy.parse(args.strategy, args.k)


@contextmanager
def _output(path):
    """Yield a text stream; a file target is only replaced once fully written."""
    if path is None or path == "-":
        yield sys.stdout
        return
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            yield f
        tmp.replace(path)
    finally:
        if tmp.exists():
            tmp.unlink()


def cmd_build(args) -> int:
    strategy = _strategy(args)
    corpus = load_corpus(args.manifest, args.sources, args.annotations, workers=args.workers)
    index = build_corpus_index(corpus, strategy, _stopwords(args))
    save_index(index, args.index)
    print(f"J={index.J} vocabulary={len(index.vocabulary)} excluded={len(index.excluded)}")
    return 0


def cmd_annotate_dump(args) -> int:
    strategy = _strategy(args)
    corpus = load_corpus(args.manifest, args.sources, args.annotations, workers=args.workers)
    annotations = annotate_corpus(corpus, strategy, _stopwords(args))
    by_class = corpus.idents_by_class()
    with _output(args.out) as out:
        for class_id, ann in sorted(annotations.items()):
            out.write(f"{class_id}\t{' '.join(ann.words)}\n")
            if strategy.kind == AUTOMATIC and args.counts:
                table = keyword_counts(by_class.get(class_id, ()))
                out.write("#\t" + " ".join(f"{t}:{n}" for t, n in table) + "\n")
    return 0


def cmd_search(args) -> int:
    index = load_index(args.index)
    if args.query_file:
        raw = Path(args.query_file).read_text(encoding="utf-8", errors="replace")
    elif args.query is not None:
        raw = args.query
    else:
        raise UsageError("give a query string or --query-file")
    query = prepare_query(raw, args.mode, _stopwords(args))
    top = args.top or (DEFAULT_TOP_K if args.mode == TEXT else EVAL_TOP_K)
    results = search(index, query, top)
    if results.flag:
        log.warning("%s (query terms: %s)", results.flag, " ".join(query.terms) or "<none>")
    with _output(args.out) as out:
        write_results(results, out)
    return 0


def cmd_eval(args) -> int:
    if bool(args.pairs) == bool(args.queries):
        raise UsageError("give exactly one of --pairs (recall) or --queries (natural-language)")
    index = load_index(args.index)
    if args.pairs:
        pairs = load_pairs(args.pairs)
        check_pairs(index, pairs)
        queries = None
        if args.manifest and args.sources:
            corpus = load_corpus(args.manifest, args.sources, workers=args.workers)
            if [r.doc_id for r in corpus.refs] != sorted(index.refs):
                raise UsageError("manifest does not match the index")
            queries = identifier_queries(corpus, index)
        elif index.strategy.kind != BASELINE:
            raise UsageError("recall on an annotated index needs --manifest and --sources "
                             "to issue identifier-only queries")
        report = eval_recall(index, pairs, args.top or EVAL_TOP_K, queries)
        with _output(args.out) as out:
            write_recall_csv(report, out)
    else:
        cases = load_queries(args.queries)
        report = eval_nlq(index, cases, _stopwords(args))
        with _output(args.out) as out:
            write_nlq_csv(report, out)
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clonesearch", description="Clone method search over annotated TF-IDF documents.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def dataset_flags(sp, required=True):
        sp.add_argument("--manifest", required=required)
        sp.add_argument("--sources", required=required, help="root directory of the referenced source files")
        sp.add_argument("--workers", type=int, default=None, help="processes for normalization")

    def strategy_flags(sp):
        sp.add_argument("--annotations", help="class_id<TAB>description file")
        sp.add_argument("--strategy", choices=[BASELINE, MANUAL, "auto"], default=BASELINE)
        sp.add_argument("--k", type=int, default=None, help="keywords per class for --strategy auto (default 10)")

    b = sub.add_parser("build", help="build an index file")
    dataset_flags(b)
    strategy_flags(b)
    b.add_argument("--stopwords")
    b.add_argument("--index", required=True)
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("annotate-dump", help="print per-class annotation words")
    dataset_flags(a)
    strategy_flags(a)
    a.add_argument("--stopwords")
    a.add_argument("--counts", action="store_true", help="also print the keyword count table (auto only)")
    a.add_argument("--out")
    a.set_defaults(func=cmd_annotate_dump)

    s = sub.add_parser("search", help="rank indexed methods for a query")
    s.add_argument("query", nargs="?")
    s.add_argument("--query-file")
    s.add_argument("--index", required=True)
    s.add_argument("--mode", choices=[CODE, TEXT], default=TEXT)
    s.add_argument("--top", type=int, default=None)
    s.add_argument("--stopwords")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("eval", help="recall (--pairs) or MRR/P@k (--queries) report")
    e.add_argument("--index", required=True)
    e.add_argument("--pairs")
    e.add_argument("--queries")
    dataset_flags(e, required=False)
    e.add_argument("--top", type=int, default=None, help="results per code query (default 900)")
    e.add_argument("--stopwords")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "top", None) is not None and args.top < 1:
        parser.error("--top must be >= 1")
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except ERRORS as e:
        print(f"clonesearch {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
