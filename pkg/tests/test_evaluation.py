import json

import pandas as pd
import pytest

from chrono_qa.config import PipelineConfig
from chrono_qa.constants import DEFAULT_BENCHMARK_PATH
from chrono_qa.errors import DataError, EvaluationError
from chrono_qa.evaluation import (BenchmarkItem, Category, evaluate,
                                  load_benchmark, report_to_json,
                                  run_benchmark, save_report, score_answers)
from chrono_qa.files import benchmark_to_csv, evaluate_benchmark
from chrono_qa.model import Answer, AnswerSet, TimePoint


def item(item_id, gold, category):
    return BenchmarkItem(item_id, f"question {item_id}?", frozenset(gold),
                         Category(category))


ITEMS = [
    item("q1", {"a"}, "EXPLICIT"),
    item("q2", {"a", "b"}, "EXPLICIT"),
    item("q3", {"a"}, "IMPLICIT"),
    item("q4", {"a", "b"}, "IMPLICIT"),
    item("q5", {"x"}, "ORDINAL"),
    item("q6", {"2013-06-03"}, "TEMPORAL_ANSWER"),
]

PREDICTIONS = {
    "q1": ["a"],
    "q2": ["a", "c"],
    "q3": [],
    "q4": ["a"],
    "q5": ["x", "y", "z"],
    "q6": AnswerSet((Answer(TimePoint(2013, 6, 3)),)),
}


@pytest.mark.parametrize("predicted, gold, expected", [
    ({"a"}, {"a"}, (1.0, 1.0, 1.0)),
    ({"a", "c"}, {"a", "b"}, (0.5, 0.5, 0.5)),
    (set(), {"a"}, (0.0, 0.0, 0.0)),
    ({"a"}, {"a", "b"}, (1.0, 0.5, 2 / 3)),
    ({"x", "y", "z"}, {"x"}, (1 / 3, 1.0, 0.5)),
    ({"y"}, {"x"}, (0.0, 0.0, 0.0)),
])
def test_score_answers(predicted, gold, expected):
    assert score_answers(predicted, gold) == pytest.approx(expected)


def test_category_and_aggregate_scores():
    report = evaluate(PREDICTIONS, ITEMS)
    assert list(report.per_category.index) == [
        "EXPLICIT", "IMPLICIT", "TEMPORAL_ANSWER", "ORDINAL"]
    assert list(report.per_category["n"]) == [2, 2, 1, 1]
    assert report.per_category.loc["IMPLICIT", "f1"] == \
        pytest.approx(1 / 3, abs=1e-9)
    precision = (0.75 + 0.5 + 1.0 + 1 / 3) / 4
    recall = (0.75 + 0.25 + 1.0 + 1.0) / 4
    f1 = (0.75 + 1 / 3 + 1.0 + 0.5) / 4
    assert report.aggregate["precision"] == pytest.approx(precision, abs=1e-9)
    assert report.aggregate["recall"] == pytest.approx(recall, abs=1e-9)
    assert report.aggregate["f1"] == pytest.approx(f1, abs=1e-9)


def test_aggregate_over_present_categories_only():
    items = [item("q1", {"a"}, "EXPLICIT"), item("q2", {"a"}, "ORDINAL")]
    report = evaluate({"q1": ["a"], "q2": []}, items)
    assert list(report.per_category.index) == ["EXPLICIT", "ORDINAL"]
    assert report.aggregate["f1"] == pytest.approx(0.5)


def test_mismatched_ids():
    with pytest.raises(EvaluationError):
        evaluate({"q1": ["a"]}, ITEMS)
    predictions = dict(PREDICTIONS, q7=["a"])
    with pytest.raises(EvaluationError):
        evaluate(predictions, ITEMS)


def test_report_to_json():
    report = evaluate(PREDICTIONS, ITEMS)
    data = report_to_json(report, {"q6": AnswerSet().with_diagnostics("x"),
                                   **{k: AnswerSet() for k in
                                      ("q1", "q2", "q3", "q4", "q5")}})
    assert json.loads(json.dumps(data, sort_keys=True)) == data
    assert data["questions"][1]["predicted"] == ["a", "c"]
    assert data["questions"][2]["predicted"] == []
    assert data["questions"][5]["diagnostics"] == ["x"]
    assert data["categories"]["ORDINAL"] == {"n": 1,
                                             "precision": pytest.approx(1 / 3),
                                             "recall": 1.0, "f1": 0.5}


def test_load_benchmark():
    items = load_benchmark(DEFAULT_BENCHMARK_PATH)
    assert len(items) == 17
    assert items[0].item_id == "q3"
    assert items[0].category is Category.EXPLICIT
    assert {i.category for i in items} == set(Category)
    dates = [i for i in items if i.category is Category.TEMPORAL_ANSWER]
    assert dates[2].gold_answers == {"2010-06-11", "2010-07-11"}


def test_malformed_benchmark(tmp_path):
    path = tmp_path / "bad.bench"
    path.write_text("who?\tneymar\n"
                    "who?\tneymar\tSOMETIMES\n"
                    "who?\t\tEXPLICIT\n"
                    "who?\tneymar\texplicit\n", encoding="utf-8")
    with pytest.raises(DataError) as info:
        load_benchmark(path)
    assert [line for line, _ in info.value.issues] == [1, 2, 3]


def test_run_benchmark_isolates_failures():
    def answer(question):
        if question == "question q2?":
            raise RuntimeError("boom")
        return AnswerSet((Answer("a"),))

    predictions = run_benchmark(answer, ITEMS[:3], workers=2, progress=False)
    assert list(predictions) == ["q1", "q2", "q3"]
    assert predictions["q1"].keys() == ["a"]
    assert predictions["q2"].keys() == []
    assert predictions["q2"].diagnostics == ("error: boom",)


def test_toy_benchmark_scores_perfectly():
    _, report = evaluate_benchmark(PipelineConfig(), DEFAULT_BENCHMARK_PATH,
                                   progress=False)
    assert report.aggregate == {"precision": 1.0, "recall": 1.0, "f1": 1.0}


def test_parallel_evaluation_is_deterministic():
    config = PipelineConfig()
    serial, first = evaluate_benchmark(config, DEFAULT_BENCHMARK_PATH,
                                       workers=1, progress=False)
    parallel, second = evaluate_benchmark(config, DEFAULT_BENCHMARK_PATH,
                                          workers=4, progress=False)
    assert {k: v.keys() for k, v in serial.items()} == \
        {k: v.keys() for k, v in parallel.items()}
    assert report_to_json(first) == report_to_json(second)


def test_save_report(tmp_path):
    report = evaluate(PREDICTIONS, ITEMS)
    paths = save_report(report, tmp_path / "out", "toy")
    assert [p.split("/")[-1] for p in paths] == ["toy_questions.csv",
                                                  "toy_categories.csv"]
    questions = pd.read_csv(paths[0])
    assert list(questions["id"]) == ["q1", "q2", "q3", "q4", "q5", "q6"]
    categories = pd.read_csv(paths[1], index_col="category")
    assert categories.loc["EXPLICIT", "f1"] == pytest.approx(0.75)


def test_benchmark_to_csv(tmp_path):
    report = benchmark_to_csv(PipelineConfig(), DEFAULT_BENCHMARK_PATH,
                              tmp_path, "toy")
    assert report.aggregate["f1"] == 1.0
    assert (tmp_path / "toy_categories.csv").is_file()
