"""Shared exception types.

Exit-code mapping used by the CLI: usage problems exit 2, resource limits
exit 3, internal soundness failures exit 4. Verdict-style negatives (a failed
verification, an oracle "none") are return values, not exceptions.
"""


class StructuralError(Exception):
    """An input value violates a structural precondition (bad graph, wrong group)."""


class UnsupportedError(Exception):
    """The operation is defined but not supported for this input (e.g. f < 4)."""


class ResourceError(Exception):
    """A configured cap or resource bound was exceeded."""


class SoundnessError(Exception):
    """A proof-backed runtime assertion failed; indicates an implementation bug."""


class UsageError(Exception):
    """Malformed user input (CLI arguments, JSON files)."""
