"""Exception hierarchy.

Input errors (bad files, malformed arguments) and domain errors (a valid
input the algorithms cannot handle) are kept apart so the command line can
map them to distinct exit codes.
"""


class FastNcutError(Exception):
    pass


class InputError(FastNcutError):
    pass


class DomainError(FastNcutError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class InvalidIndex(InputError):
    pass


class AsymmetricInput(InputError):
    pass


class LengthMismatch(InputError):
    pass


class IsolatedNode(DomainError):
    def __init__(self, node):
        self.node = int(node)
        super().__init__(f"node {self.node} has no incident edges (degree 0)")


class ZeroSigma(DomainError):
    def __init__(self, node):
        self.node = int(node)
        super().__init__(
            f"node {self.node} has zero local bandwidth (duplicate points); "
            "deduplicate the features or raise k_sigma"
        )


class KTooLarge(DomainError):
    pass


class EmptyCluster(DomainError):
    def __init__(self, cluster):
        self.cluster = int(cluster)
        super().__init__(f"cluster {self.cluster} is empty")


class AllZeroRow(DomainError):
    def __init__(self, node):
        self.node = int(node)
        super().__init__(f"node {self.node} has no positive similarity to any other node")


class TargetTooLarge(DomainError):
    def __init__(self, c, available):
        self.c = int(c)
        self.available = int(available)
        super().__init__(
            f"cannot produce {self.c} clusters: the first-neighbor partition "
            f"only has {self.available}"
        )


class TooFewCandidates(DomainError):
    pass


class InstanceTooLarge(DomainError):
    pass


class ConsistencyError(FastNcutError):
    """Maintained solver aggregates drifted from a from-scratch recomputation."""
