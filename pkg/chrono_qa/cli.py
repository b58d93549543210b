"""
Command line interface:

    chrono-qa detect --question "when did neymar join psg?"
    chrono-qa decompose --question "where did neymar play before he joined barcelona?"
    chrono-qa answer --question "which teams did neymar play for before joining psg?"
    chrono-qa eval --benchmark chrono_qa/data/toy.bench [--output DIR --project NAME]

Results go to stdout, one item per line or as JSON with ``--json``; logging
and progress go to stderr. Exit codes: 0 success, 1 usage or configuration
error, 2 data error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from .config import PipelineConfig
from .constants import (DEFAULT_BENCHMARK_PATH, EXIT_CONFIG, EXIT_DATA,
                        EXIT_OK)
from .errors import ChronoQAError, ConfigurationError, DataError
from .evaluation import report_to_json, save_report
from .files import evaluate_benchmark
from .pipeline import Pipeline

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kb", dest="kb_path",
                        help="knowledge base file (default: bundled toy KB)")
    parser.add_argument("--embeddings", dest="embeddings_path",
                        help="word vectors, one 'token v1 ... vd' per line")
    parser.add_argument("--reference-date", dest="reference_date",
                        help="YYYY-MM-DD date relative expressions refer to")
    parser.add_argument("--backend",
                        help="'builtin' or 'cmd:<command line>'")
    parser.add_argument("--signals", dest="signals_path",
                        help="signal dictionary file")
    parser.add_argument("--ordinals", dest="ordinals_path",
                        help="ordinal dictionary file")
    parser.add_argument("--lexicon", dest="lexicon_path",
                        help="part-of-speech lexicon file")
    parser.add_argument("--relations", dest="relations_path",
                        help="relation word table for predicate matching")
    parser.add_argument("--json", action="store_true",
                        help="print structured JSON output")
    parser.add_argument("--verbose", action="store_true",
                        help="log debug messages to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chrono-qa",
                     description="Temporal question answering over a "
                                 "knowledge base.")
    subparsers = parser.add_subparsers(dest="command", required=True,
                                       parser_class=_Parser)
    for name, text in (("detect", "decide whether a question is temporal"),
                       ("decompose", "split a question into sub-questions"),
                       ("answer", "answer a question")):
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--question", required=True)
        _add_common(sub)
    sub = subparsers.add_parser("eval", help="evaluate on a benchmark file")
    sub.add_argument("--benchmark", default=str(DEFAULT_BENCHMARK_PATH),
                     help="benchmark file (default: bundled toy benchmark)")
    sub.add_argument("--workers", type=int,
                     help="questions answered concurrently")
    sub.add_argument("--output", help="directory for CSV reports")
    sub.add_argument("--project", default="chrono_qa",
                     help="name prefix of the CSV reports")
    _add_common(sub)
    return parser


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def _run_detect(pipeline: Pipeline, args: argparse.Namespace) -> int:
    result = pipeline.detect(args.question)
    if args.json:
        print(_dump(result.to_json()))
        return EXIT_OK
    cues = ",".join(c.value for c in result.sorted_cues()) or "-"
    print(f"temporal={str(result.is_temporal).lower()} cues={cues}")
    return EXIT_OK


def _run_decompose(pipeline: Pipeline, args: argparse.Namespace) -> int:
    result = pipeline.decompose(args.question)
    if args.json:
        print(_dump(result.to_json()))
        return EXIT_OK
    print(f"case={result.case_used.value} "
          f"relation={result.relation or '-'} "
          f"ordinal={result.ordinal or '-'}")
    for subquestion in result.nontemporal_subquestions:
        print(f"nontemporal: {subquestion}")
    if result.temporal_subquestion is not None:
        print(f"temporal: {result.temporal_subquestion}")
    for spec in result.explicit_constraints:
        print(f"constraint: {spec.relation} {spec.constraint_interval}")
    return EXIT_OK


def _run_answer(pipeline: Pipeline, args: argparse.Namespace) -> int:
    trace = pipeline.trace(args.question)
    if args.json:
        print(_dump(trace.to_json()))
        return EXIT_OK
    for answer in trace.answers:
        scopes = " ".join(str(s) for s in answer.time_scopes)
        print(f"{answer.key}\t{scopes}" if scopes else answer.key)
    for diagnostic in trace.answers.diagnostics:
        print(f"diagnostic: {diagnostic}", file=sys.stderr)
    return EXIT_OK


def _run_eval(config: PipelineConfig, args: argparse.Namespace) -> int:
    progress = not args.json and sys.stderr.isatty()
    predictions, report = evaluate_benchmark(config, args.benchmark,
                                             args.workers, progress=progress)
    if args.output:
        save_report(report, args.output, args.project)
    if args.json:
        print(_dump(report_to_json(report, predictions)))
    else:
        print(report.to_text())
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line interface and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        config = PipelineConfig.from_namespace(args).validate()
        if args.command == "eval":
            return _run_eval(config, args)
        with Pipeline.from_config(config) as pipeline:
            runner = {"detect": _run_detect,
                      "decompose": _run_decompose,
                      "answer": _run_answer}[args.command]
            return runner(pipeline, args)
    except ConfigurationError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ChronoQAError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
