"""Exception hierarchy. ``exit_code`` is what the CLI returns for each family."""


class GeocohortError(Exception):
    exit_code = 4


class ConfigInvalid(GeocohortError):
    exit_code = 2


class MissingInput(GeocohortError):
    exit_code = 3


class DataError(GeocohortError):
    exit_code = 4


class MalformedRecord(DataError):
    pass


class MalformedGazetteerRow(DataError):
    pass


class MissingPretags(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class TooFewRows(DataError):
    pass


class SingleClass(DataError):
    pass


class AuthorMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass


class MissingPopulation(DataError):
    pass


class MissingState(DataError):
    pass


class EmptySeries(DataError):
    pass


class RankDeficient(DataError):
    pass


class InvalidLabel(DataError):
    pass
