"""Exception hierarchy for the flow2img pipeline."""


class Flow2ImgError(Exception):
    """Base class for all flow2img errors."""


class UnknownDatasetError(Flow2ImgError):
    """No builtin schema or label scheme for the requested dataset id."""


class SchemaParseError(Flow2ImgError):
    """Schema or manifest document is not well-formed."""


class SchemaValidationError(Flow2ImgError):
    """Schema document parsed but violates an invariant."""


class ArityError(Flow2ImgError):
    """CSV row or header does not match the schema's column count."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class RowValueError(Flow2ImgError):
    """A cell could not be parsed as the declared feature type."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class IoError(Flow2ImgError):
    """File could not be read or written."""


class ConfigError(Flow2ImgError):
    """Invalid user-supplied parameter."""


class UnknownLabelError(Flow2ImgError):
    """Raw label neither maps to a class nor is marked dropped."""


class SplitHygieneError(Flow2ImgError):
    """Statistics were about to be fitted on a non-training split."""


class DegenerateFeatureError(Flow2ImgError):
    """A feature has no usable values to fit statistics from."""


class SchemaMismatchError(Flow2ImgError):
    """Record, statistics, and schema disagree on feature counts."""


class CapacityError(Flow2ImgError):
    """Continuous payload does not fit the trajectory's byte capacity."""


class OverlapError(Flow2ImgError):
    """Categorical byte region would collide with the trajectory."""


class DecodeRangeError(Flow2ImgError):
    """Decoded categorical index exceeds the fitted vocabulary."""


class StrayByteError(Flow2ImgError):
    """Nonzero byte found in a region the layout requires to be zero."""


class FormatError(Flow2ImgError):
    """Image file has the wrong dimensions or color type."""


class RefuseOverwriteError(Flow2ImgError):
    """Output directory is non-empty and --force was not given."""
