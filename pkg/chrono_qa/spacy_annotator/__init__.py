from .spacy_annotator import SpacyAnnotator, build_rule_pipeline
