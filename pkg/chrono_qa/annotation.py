"""
Annotation of questions is implemented by passing an annotator object to the
pipeline. Annotators turn question text into an `AnnotatedQuestion` carrying
tokens with part-of-speech tags, linked KB entities, temporal expressions,
signal words and ordinals. The Annotator class defines the interface, so
annotators backed by other NLP toolkits can replace the bundled spaCy one.
"""

from typing import Protocol, runtime_checkable

from .model import AnnotatedQuestion


@runtime_checkable
class Annotator(Protocol):
    """Protocol defining the interface for annotators. Annotators feature an
    `annotate` method returning all annotation layers of one question.
    Implementations must be safe to call from several threads."""

    def annotate(self, text: str) -> AnnotatedQuestion:
        """Tokenize, tag and link a question. Spans within one annotation
        layer must not overlap."""
        ...
