"""Exception hierarchy shared by all pipeline stages."""


class PPGWaveError(ValueError):
    """Base class for every error raised by ppgwave."""


class InvalidInputError(PPGWaveError):
    pass


class SupportRangeError(PPGWaveError):
    """Requested interval lies outside the sampled support of a series."""


class InsufficientEventsError(PPGWaveError):
    """Too few beats, crossings or cycles to carry out an operation."""


class EmptyResultError(PPGWaveError):
    pass


class UndeterminableError(PPGWaveError):
    """A quantity is undefined for the given (degenerate) waveform."""


class InvalidOrderError(PPGWaveError):
    pass


class RankDeficientError(PPGWaveError):
    pass


class InvalidSpecError(PPGWaveError):
    pass
