"""Shared exception types."""


class CapabilityError(RuntimeError):
    """A computation was refused because it exceeds a configured bound.

    The message always names the bound that was hit, so callers (and the
    CLI's exit-code logic) can distinguish "too big" from "wrong".
    """
