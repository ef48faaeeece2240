"""Exception hierarchy shared by all pipeline stages.

The three bases map onto CLI exit codes: ConfigError -> 2, DataError -> 3,
NumericError -> 4.
"""


class CparmError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(CparmError):
    """Invalid configuration or arguments, detected before any work runs."""


class DataError(CparmError):
    """Input data violates a contract (malformed file, bad labels, ...)."""


class NumericError(CparmError):
    """A numeric procedure failed at runtime (divergence, overflow, ...)."""


# --- dataset ---------------------------------------------------------------

class MalformedCsvError(DataError):
    def __init__(self, row_index: int, detail: str = ""):
        self.row_index = row_index
        msg = f"malformed CSV at data row {row_index}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class UnknownLabelColumnError(DataError):
    def __init__(self, column: str, header: list[str]):
        self.column = column
        super().__init__(f"label column {column!r} not in header {header}")


class UnmappableLabelError(DataError):
    def __init__(self, row_index: int, token: str):
        self.row_index = row_index
        self.token = token
        super().__init__(f"label token {token!r} at data row {row_index} is not mappable to 0/1")


class EmptyDatasetError(DataError):
    pass


class TooFewRecordsError(DataError):
    pass


class InvalidSpecError(ConfigError):
    pass


class SchemaMismatchError(DataError):
    pass


# --- central points ---------------------------------------------------------

class TooManyPartitionsError(DataError):
    def __init__(self, p: int, n_records: int):
        super().__init__(f"cannot split {n_records} records into {p} partitions")


# --- rule mining -------------------------------------------------------------

class LengthMismatchError(DataError):
    pass


class EmptyTransactionsError(DataError):
    pass


class AntecedentAbsentError(DataError):
    def __init__(self, item):
        self.item = item
        super().__init__(f"antecedent {item} appears in no transaction")


class NoFeaturesSelectedError(DataError):
    """The rule miner produced no passing rules, so no features can be fed downstream."""


# --- engines ------------------------------------------------------------------

class UnknownFeatureError(ConfigError):
    def __init__(self, name: str):
        super().__init__(f"feature {name!r} not present in the dataset schema")


class SingleClassTrainingError(DataError):
    def __init__(self):
        super().__init__("training data contains only one class; need both 0 and 1")


class DivergedLossError(NumericError):
    pass


class TooFewRowsError(DataError):
    pass


class UnfittedModelError(NumericError):
    pass


class EmptyInputError(DataError):
    pass


class StageError(CparmError):
    """Wraps a failure so the CLI can report which pipeline stage died."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
