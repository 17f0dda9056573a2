"""Exception types shared across the toolkit."""


class RadioplanError(Exception):
    """Base class for all toolkit errors."""


# --- geodata ---------------------------------------------------------------

class ParseError(RadioplanError):
    """Input file is syntactically malformed."""


class SchemaError(RadioplanError):
    """Input file parses but violates the documented layout (missing layer,
    missing required property, wrong type)."""


class GeometryError(RadioplanError):
    """A geometric feature is invalid (self-intersecting footprint, too few
    vertices, zero area)."""


class NonConvergence(RadioplanError):
    """An iterative method hit its iteration cap before reaching tolerance."""


class NoTerrainData(RadioplanError):
    """A hilly map was queried for elevation but carries no contour lines."""


# --- dataset ---------------------------------------------------------------

class RangeError(RadioplanError):
    """A measurement value is outside the physically reportable range."""


class InsufficientData(RadioplanError):
    """Too few samples to perform the requested operation."""


# --- svm -------------------------------------------------------------------

class SingleClassData(RadioplanError):
    """Classifier training data contains only one class label."""


class DegenerateFeature(RadioplanError):
    """A feature has zero variance on the training set; scaling is undefined."""


class VersionMismatch(RadioplanError):
    """A model container was written by an unsupported format version."""


class ChecksumError(RadioplanError):
    """A model container is corrupt: unreadable or its checksum does not match."""


class TerrainClassMismatch(RadioplanError):
    """A model trained for one terrain class was applied to a map of the other."""


# --- tuning ----------------------------------------------------------------

class FoldDegeneracy(RadioplanError):
    """A cross-validation fold lacks one of the classes."""


class NonTermination(RadioplanError):
    """Bound relaxation exceeded its safety cap; the evaluate function is
    pathological."""


# --- planner ---------------------------------------------------------------

class EmptySubset(RadioplanError):
    """A metric's qualifying subset is empty; the metric is undefined."""


class LeakageError(RadioplanError):
    """A blind-prediction run would evaluate on an area present in the model's
    training data."""


class BindError(RadioplanError):
    """The HTTP service could not bind its address."""
