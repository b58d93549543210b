# constants shared across the pipeline stages

from pathlib import Path

# Directory holding the bundled dictionaries and the toy knowledge base
DATA_DIR = Path(__file__).parent / "data"

DEFAULT_KB_PATH = DATA_DIR / "toy.kb"
DEFAULT_BENCHMARK_PATH = DATA_DIR / "toy.bench"
DEFAULT_SIGNALS_PATH = DATA_DIR / "signals.tsv"
DEFAULT_ORDINALS_PATH = DATA_DIR / "ordinals.tsv"
DEFAULT_LEXICON_PATH = DATA_DIR / "pos_lexicon.tsv"
DEFAULT_RELATIONS_PATH = DATA_DIR / "relation_words.tsv"

# Relative expressions are resolved against this date unless configured
DEFAULT_REFERENCE_DATE = "2018-01-15"

# Question words opening a question (wh*)
WH_WORDS = ("who", "whom", "whose", "what", "which", "where", "when", "why",
            "how")

# Wh-pronouns that make a following signal word non-temporal ("after whom")
WH_PRONOUNS = ("who", "whom", "whose", "what", "which")

# Question-initial patterns marking a temporal answer type
TEMPORAL_ANSWER_PATTERNS = ("when", "what date", "what year", "in what year",
                            "which year", "what century", "which century",
                            "what time", "since when", "how long ago")

# Third-person pronouns replaced by the question's subject entity
SUBJECT_PRONOUNS = ("he", "she")

# Signals only counted when followed by a TIMEX or event span
ANCHORED_SIGNALS = ("in",)

# Event entities carry this type in the KB
EVENT_TYPE = "time.event"

# Tokens dropped from predicate names
PREDICATE_STOP_TOKENS = frozenset({"on", "of", "the", "date", "in", "at", "a",
                                   "an", "is", "has", "from", "to"})

# Name-based role inference for temporal predicates declared with role `-`
BEGIN_ROLE_TOKENS = frozenset({"joined", "start", "started", "begin", "began",
                               "from", "since"})
END_ROLE_TOKENS = frozenset({"left", "end", "ended", "to", "until"})

# Minimum stem length for prefix matches between question and predicate words
PREFIX_MATCH_MIN = 4

# Benchmark categories in report order
CATEGORY_ORDER = ("EXPLICIT", "IMPLICIT", "TEMPORAL_ANSWER", "ORDINAL")

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
