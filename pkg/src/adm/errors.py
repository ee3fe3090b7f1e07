"""Exception types shared across the package.

Every error raised by a pipeline stage derives from AdmError so the CLI can
map failures to exit codes: ConfigError -> 2, everything else -> 1.
"""


class AdmError(Exception):
    """Base class for all package errors."""


class ConfigError(AdmError):
    """Invalid or incomplete configuration; names the offending field."""


# corpus ingest

class CorpusRejected(AdmError):
    """More than half of the input lines were malformed."""


class EmptyCorpus(AdmError):
    """No valid records were found in the input."""


# embedding provider

class MissingEmbedding(AdmError):
    def __init__(self, doc_id: str):
        super().__init__(f"no embedding row for document id {doc_id!r}")
        self.doc_id = doc_id


class DimensionMismatch(AdmError):
    """Embedding rows do not share a single dimension."""


class InvalidValue(AdmError):
    """Non-finite or out-of-range value in an imported file."""


# topic engine

class BatchTooSmall(AdmError):
    """A training batch has fewer rows than the target dimension."""


class DimError(AdmError):
    """Vector dimension does not match the fitted model."""


class TooFewSamples(AdmError):
    """Fewer samples than requested clusters."""


class EmptyTopic(AdmError):
    def __init__(self, topic_id: int):
        super().__init__(f"topic {topic_id} has no documents")
        self.topic_id = topic_id


class CoherenceUndefined(AdmError):
    def __init__(self, topic_id: int):
        super().__init__(f"topic {topic_id} has fewer than 2 scored terms")
        self.topic_id = topic_id


class CutError(AdmError):
    """Requested flat-cluster count is outside [2, n_leaves]."""


class MapError(AdmError):
    """Too few centroids for a 2-D layout."""


# keyword engine

class UnknownTopic(AdmError):
    def __init__(self, topic_id: int):
        super().__init__(f"topic {topic_id} not present in the assignment")
        self.topic_id = topic_id


# affect engine

class MissingLabel(AdmError):
    def __init__(self, doc_id: str):
        super().__init__(f"no label for document id {doc_id!r}")
        self.doc_id = doc_id


class InvalidLabel(AdmError):
    """Unrecognized sentiment label string."""


class UndefinedScore(AdmError):
    """Sentiment score requested for zero labeled documents."""


# statistics

class PairError(AdmError):
    """Paired samples have different lengths."""


class DegenerateTest(AdmError):
    """All paired differences are zero."""


class UndefinedCorrelation(AdmError):
    """At least one input sequence is constant."""


class InvalidP(AdmError):
    """A p-value outside [0, 1] was supplied."""


# reporting

class EmptyResults(AdmError):
    """Report rendering requested with no topics present."""
