"""Exception types shared across the library."""


class BaseMismatchError(ValueError):
    """Two presheaves or maps live over different base posets or objects."""


class EmptyComponentError(ValueError):
    """A family has an initial component, violating the non-emptiness assumption."""


class ClosureError(ValueError):
    """A span class is missing elements required by its closure conditions."""


class IncompatibleFamilyError(ValueError):
    """A family of component maps does not factor through the coskeleton."""


class ConditionGFailure(ValueError):
    """A self-dual simplicial family fails the filling condition needed for
    its fundamental groupoid construction."""


class UndeterminedError(RuntimeError):
    """A bounded word-equality search exhausted its budget, so the verdict
    propagates as undetermined rather than true or false."""
