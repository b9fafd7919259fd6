"""Exception hierarchy shared by every mmassoc module."""

from collections.abc import Sequence


class MMAssocError(Exception):
    """Base class for all mmassoc errors."""


class InfeasibleInstanceError(MMAssocError):
    """A client has no AP with a positive rate."""

    def __init__(self, client: int, detail: str = "") -> None:
        self.client = client
        message = f"client {client} out of coverage: no AP offers a positive rate"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class InfeasibleLinkError(MMAssocError):
    """An operation needed a positive rate on a link that has none."""

    def __init__(self, client: int, ap: int) -> None:
        self.client = client
        self.ap = ap
        super().__init__(f"link client {client} -> AP {ap} is infeasible (rate 0)")


class DegenerateAllocationError(MMAssocError):
    """Some client ended up with zero (or negative) throughput."""

    def __init__(self, clients: Sequence[int]) -> None:
        self.clients = list(clients)
        super().__init__(
            f"degenerate allocation: non-positive throughput for clients {self.clients}"
        )


class SearchSpaceTooLargeError(MMAssocError):
    """The exhaustive oracle would enumerate more candidates than allowed."""

    def __init__(self, cardinality: int, limit: int) -> None:
        self.cardinality = cardinality
        self.limit = limit
        super().__init__(
            f"search space too large: {cardinality} candidate associations (limit {limit})"
        )


class ConfigError(MMAssocError):
    """Invalid experiment configuration, optionally anchored to a file line."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None) -> None:
        self.source = source
        self.line = line
        prefix = ""
        if source is not None:
            prefix = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(f"{prefix}{message}")


class ComparisonError(MMAssocError):
    """A label requested for comparison is missing from the results."""

    def __init__(self, label: str, available: Sequence[str]) -> None:
        self.label = label
        super().__init__(f"policy '{label}' not found in results (available: {sorted(available)})")


class PolicyError(MMAssocError):
    """Unknown policy name, or a policy asked to run in a traffic mode it does not support."""
