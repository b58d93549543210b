from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from .config import PipelineConfig
from .evaluation import (EvalReport, evaluate, load_benchmark, run_benchmark,
                         save_report)
from .model import AnswerSet
from .pipeline import Pipeline


def evaluate_benchmark(config: PipelineConfig,
                       benchmark_path: Union[str, Path],
                       workers: Optional[int] = None,
                       progress: bool = True
                       ) -> Tuple[Dict[str, AnswerSet], EvalReport]:
    """Answer all questions of a benchmark file with a pipeline built from
    ``config`` and score them. Backends that take one query at a time are
    run with a single worker."""
    items = load_benchmark(benchmark_path)
    with Pipeline.from_config(config) as pipeline:
        workers = workers or config.workers
        if pipeline.backend.single_flight:
            workers = 1
        predictions = run_benchmark(pipeline.answer, items, workers=workers,
                                    progress=progress)
    return predictions, evaluate(predictions, items)


def benchmark_to_csv(config: PipelineConfig,
                     benchmark_path: Union[str, Path],
                     output_path: Union[str, Path],
                     project_name: str,
                     workers: Optional[int] = None
                     ) -> EvalReport:
    """From a benchmark file, evaluate the pipeline and save the per-question
    and per-category tables as CSV files to the output folder. The
    project_name parameter is used to name the output files."""
    _, report = evaluate_benchmark(config, benchmark_path, workers)
    save_report(report, output_path, project_name)
    return report
