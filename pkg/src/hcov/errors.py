"""Exception types shared across the package."""


class HcError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class GraphError(HcError):
    pass


class MorphismError(HcError):
    pass


class GroupError(HcError):
    pass


class ActionError(HcError):
    pass


class CoverError(HcError):
    pass


class CatalogError(HcError):
    pass
