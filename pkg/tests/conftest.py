import pytest

from chrono_qa.config import PipelineConfig
from chrono_qa.constants import DEFAULT_KB_PATH
from chrono_qa.detector import load_ordinal_dictionary, load_signal_dictionary
from chrono_qa.kb import load_kb
from chrono_qa.model import TimePoint
from chrono_qa.pipeline import Pipeline
from chrono_qa.spacy_annotator import SpacyAnnotator, build_rule_pipeline
from chrono_qa.timex import TimexTagger, build_event_dictionary

REFERENCE = TimePoint(2018, 1, 15)


@pytest.fixture(scope="session")
def store():
    return load_kb(DEFAULT_KB_PATH)


@pytest.fixture(scope="session")
def signals():
    return load_signal_dictionary()


@pytest.fixture(scope="session")
def ordinals():
    return load_ordinal_dictionary()


@pytest.fixture(scope="session")
def events(store):
    return build_event_dictionary(store)


@pytest.fixture(scope="session")
def nlp():
    return build_rule_pipeline()


@pytest.fixture(scope="session")
def tagger(events, nlp):
    return TimexTagger(REFERENCE, events, nlp=nlp)


@pytest.fixture(scope="session")
def annotator(store, tagger, signals, ordinals, nlp):
    return SpacyAnnotator(store, tagger, signals, ordinals, nlp=nlp)


@pytest.fixture(scope="session")
def pipeline():
    with Pipeline.from_config(PipelineConfig()) as pipeline:
        yield pipeline
