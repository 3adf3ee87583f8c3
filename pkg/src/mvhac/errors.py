"""Exception hierarchy shared by all stages."""


class MvhacError(ValueError):
    """Base class for every validation or domain error raised by the package."""
