"""Subject tags for tabular datasets from word embeddings and a type ontology."""

from ._tabtag import (
    EmbeddingModel,
    ModelFormat,
    OntologyFormat,
    TabtagError,
    Tagger,
    TypeOntology,
    default_grid,
    extract_text,
    is_textual,
    load_model,
    load_ontology,
    match_rate,
    similarity,
    tokenize_cell,
)

__all__ = [
    "EmbeddingModel",
    "ModelFormat",
    "OntologyFormat",
    "TabtagError",
    "Tagger",
    "TypeOntology",
    "default_grid",
    "extract_text",
    "is_textual",
    "load_model",
    "load_ontology",
    "match_rate",
    "similarity",
    "tokenize_cell",
]
