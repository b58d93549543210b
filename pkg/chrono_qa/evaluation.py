"""
Benchmark evaluation. Predictions are compared with gold answer sets per
question (precision, recall, F1), averaged per question category, and the
aggregate is the mean of the category means. Tables are pandas DataFrames.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import (Dict, FrozenSet, Iterable, List, Mapping, Optional,
                    Sequence, Tuple, Union)

import pandas as pd
from tqdm.auto import tqdm

from .constants import CATEGORY_ORDER
from .errors import DataError, EvaluationError
from .model import AnswerSet, TimePoint, answer_key
from .utils import read_records

logger = logging.getLogger(__name__)

METRICS = ["precision", "recall", "f1"]


class Category(str, Enum):
    EXPLICIT = "EXPLICIT"
    IMPLICIT = "IMPLICIT"
    TEMPORAL_ANSWER = "TEMPORAL_ANSWER"
    ORDINAL = "ORDINAL"


@dataclass(frozen=True)
class BenchmarkItem:
    item_id: str
    question: str
    gold_answers: FrozenSet[str]
    category: Category

    def __post_init__(self):
        if not self.gold_answers:
            raise ValueError(f"benchmark item {self.item_id} has no gold "
                             f"answers")


def _gold_key(value: str) -> str:
    """Gold values that look like dates are compared by their ISO form."""
    value = value.strip()
    if value[:4].isdigit():
        try:
            return answer_key(TimePoint.parse(value))
        except ValueError:
            pass
    return value


def load_benchmark(path: Union[str, Path]) -> List[BenchmarkItem]:
    """Read a benchmark file with ``question<TAB>gold|gold<TAB>category``
    lines. Items are identified as ``q<line number>``.

    Raises:
        DataError: Listing every malformed line.
    """
    items = []
    issues = []
    for line_number, fields in read_records(path):
        if len(fields) != 3:
            issues.append((line_number, f"expected 3 fields, got "
                                        f"{len(fields)}"))
            continue
        question, gold, category = (f.strip() for f in fields)
        gold_answers = frozenset(_gold_key(g) for g in gold.split("|")
                                 if g.strip())
        if not question or not gold_answers:
            issues.append((line_number, "question and gold answers must not "
                                        "be empty"))
            continue
        try:
            parsed = Category(category.upper().replace(" ", "_"))
        except ValueError:
            issues.append((line_number, f"unknown category {category!r}"))
            continue
        items.append(BenchmarkItem(f"q{line_number}", question, gold_answers,
                                   parsed))
    if issues:
        raise DataError(str(path), issues)
    return items


def score_answers(predicted: Iterable[str],
                  gold: Iterable[str]) -> Tuple[float, float, float]:
    """Precision, recall and F1 of one predicted answer set. An empty
    prediction scores 0 throughout."""
    predicted, gold = set(predicted), set(gold)
    hits = len(predicted & gold)
    precision = hits / len(predicted) if predicted else 0.0
    recall = hits / len(gold) if gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) \
        if precision + recall > 0 else 0.0
    return precision, recall, f1


@dataclass
class EvalReport:
    per_question: pd.DataFrame
    per_category: pd.DataFrame
    aggregate: Dict[str, float] = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"{'category':<16} {'n':>3} {'precision':>9} {'recall':>9} "
                 f"{'f1':>9}"]
        for category, row in self.per_category.iterrows():
            lines.append(f"{category:<16} {int(row['n']):>3} "
                         f"{row['precision']:>9.4f} {row['recall']:>9.4f} "
                         f"{row['f1']:>9.4f}")
        lines.append(f"{'aggregate':<16} {len(self.per_question):>3} "
                     f"{self.aggregate['precision']:>9.4f} "
                     f"{self.aggregate['recall']:>9.4f} "
                     f"{self.aggregate['f1']:>9.4f}")
        return "\n".join(lines)


def _keys(prediction: Union[AnswerSet, Iterable[str]]) -> List[str]:
    if isinstance(prediction, AnswerSet):
        return prediction.keys()
    return [str(p) for p in prediction]


def evaluate(predictions: Mapping[str, Union[AnswerSet, Iterable[str]]],
             gold: Sequence[BenchmarkItem]) -> EvalReport:
    """Score predictions against benchmark items.

    Args:
        predictions (dict): Item id to predicted answer set or answer keys.
        gold (list): Benchmark items.

    Returns:
        EvalReport: Per-question scores, per-category means over the
            categories present and their mean as aggregate.

    Raises:
        EvaluationError: If prediction ids and item ids differ.
    """
    item_ids = [item.item_id for item in gold]
    missing = sorted(set(item_ids) - set(predictions))
    extra = sorted(set(predictions) - set(item_ids))
    if missing or extra:
        raise EvaluationError(f"predictions do not match benchmark items "
                              f"(missing: {missing}, unexpected: {extra})")

    rows = []
    for item in gold:
        predicted = sorted(set(_keys(predictions[item.item_id])))
        precision, recall, f1 = score_answers(predicted, item.gold_answers)
        rows.append({"id": item.item_id,
                     "question": item.question,
                     "category": item.category.value,
                     "predicted": "|".join(predicted),
                     "gold": "|".join(sorted(item.gold_answers)),
                     "precision": precision,
                     "recall": recall,
                     "f1": f1})
    per_question = pd.DataFrame(rows, columns=["id", "question", "category",
                                               "predicted", "gold"] + METRICS)

    grouped = per_question.groupby("category")
    per_category = grouped[METRICS].mean()
    per_category["n"] = grouped.size()
    present = [c for c in CATEGORY_ORDER if c in per_category.index]
    per_category = per_category.reindex(present)[["n"] + METRICS]
    per_category.index.name = "category"

    aggregate = {m: float(per_category[m].mean()) if present else 0.0
                 for m in METRICS}
    return EvalReport(per_question, per_category, aggregate)


def report_to_json(report: EvalReport,
                   predictions: Optional[Mapping[str, AnswerSet]] = None
                   ) -> Dict:
    """Plain, deterministic JSON structure of a report. Diagnostics of the
    predictions are included when given."""
    questions = []
    for row in report.per_question.to_dict(orient="records"):
        entry = {"id": row["id"],
                 "question": row["question"],
                 "category": row["category"],
                 "predicted": row["predicted"].split("|")
                 if row["predicted"] else [],
                 "gold": row["gold"].split("|"),
                 "precision": row["precision"],
                 "recall": row["recall"],
                 "f1": row["f1"]}
        if predictions is not None and \
                isinstance(predictions.get(row["id"]), AnswerSet):
            entry["diagnostics"] = list(predictions[row["id"]].diagnostics)
        questions.append(entry)
    categories = {category: {"n": int(row["n"]),
                             **{m: float(row[m]) for m in METRICS}}
                  for category, row in report.per_category.iterrows()}
    return {"questions": questions,
            "categories": categories,
            "aggregate": dict(report.aggregate)}


def run_benchmark(answer, items: Sequence[BenchmarkItem], workers: int = 1,
                  progress: bool = True) -> Dict[str, AnswerSet]:
    """Answer all benchmark questions with ``answer(question) -> AnswerSet``.

    Questions are answered by up to ``workers`` threads; the result maps item
    ids to answer sets in benchmark order. A question whose answering raises
    gets an empty answer set with the error as diagnostic.
    """
    def run(item: BenchmarkItem) -> AnswerSet:
        try:
            return answer(item.question)
        except Exception as e:
            logger.exception("Question %s failed", item.item_id)
            return AnswerSet().with_diagnostics(f"error: {e}")

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        results = list(tqdm(executor.map(run, items), total=len(items),
                            desc="Answering", disable=not progress))
    return {item.item_id: result for item, result in zip(items, results)}


def save_report(report: EvalReport,
                output_path: Union[str, Path],
                project_name: str) -> List[str]:
    """Save the per-question and per-category tables as CSV files named
    ``<project>_questions.csv`` and ``<project>_categories.csv``."""
    logger.info("Saving reports to %s", output_path)
    os.makedirs(output_path, exist_ok=True)
    paths = []
    for suffix, df, index in (("questions", report.per_question, False),
                              ("categories", report.per_category, True)):
        path = f"{output_path}/{project_name}_{suffix}.csv"
        df.to_csv(path, index=index)
        logger.info("  %s", path)
        paths.append(path)
    return paths
