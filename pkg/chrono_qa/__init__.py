from .model import (TimePoint, Interval, TemporalRelation, Ordinal,
                    AnnotatedQuestion, Answer, AnswerSet)
from .kb import KBStore, load_kb, parse_kb, dump_kb
from .timex import TimexTagger, build_event_dictionary, normalize
from .detector import (detect, load_signal_dictionary,
                       load_ordinal_dictionary)
from .decomposer import decompose, find_pivot, select_case
from .reasoner import (ConstraintSpec, cast_results_to_interval, satisfies,
                       filter_candidates, apply_ordinal, intersect,
                       allen_relation)
from .scopes import retrieve_time_scope
from .backend import answer_subquestion, BuiltinBackend, ExternalBackend
from .config import PipelineConfig
from .pipeline import Pipeline, answer_question
from .evaluation import load_benchmark, evaluate, report_to_json, save_report
from .files import benchmark_to_csv, evaluate_benchmark
from .spacy_annotator import SpacyAnnotator
