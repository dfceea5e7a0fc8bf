class InputError(ValueError):
    """Bad user input: unsorted values, out-of-range arguments, parse errors."""


class CorruptFileError(Exception):
    """A structure file failed its checksum or could not be parsed."""


class HashConstructionError(RuntimeError):
    """Randomized hash construction ran out of attempts."""
