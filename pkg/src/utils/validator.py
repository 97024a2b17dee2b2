"""Validated attributes for parameter dataclasses."""

from typing import Any, Optional, Tuple, Type, Union

TypeSpec = Union[type, Tuple[type, ...]]


class SimpleValidator:
    """
    Descriptor checking type, literal values and numeric bounds on assignment.

    Declared as a dataclass field default, it lets the generated __init__
    fall back to `default` and validates every later assignment.

    Parameters
    ----------
    _type : Union[type, Tuple[type, ...]], optional
        Legal type(s), by default object. `bool` passes only when listed
        explicitly, so an int field refuses True.
    literal : Tuple[Any, ...], optional
        Legal values, by default any.
    ge, gt, le, lt : Optional[float], optional
        Inclusive and strict bounds, by default none.
    optional : bool, optional
        Whether None is accepted, by default False.
    default : Any, optional
        Default value; without one, reading an unset attribute raises.

    """

    def __init__(
        self,
        _type: TypeSpec = object,
        /,
        literal: Tuple[Any, ...] = (),
        ge: Optional[float] = None,
        gt: Optional[float] = None,
        le: Optional[float] = None,
        lt: Optional[float] = None,
        optional: bool = False,
        default: Any = ...,
    ) -> None:
        self.types: Tuple[type, ...] = _type if isinstance(_type, tuple) else (_type,)
        self.literal = tuple(literal)
        pairs = ((">=", ge), (">", gt), ("<=", le), ("<", lt))
        self.bounds = [(op, b) for op, b in pairs if b is not None]
        self.optional = optional
        self.default = default
        self.name = "<unnamed>"

    def __set_name__(self, _: type, name: str) -> None:
        self.name = name

    def __set__(self, instance: object, value: Any) -> None:
        if isinstance(value, self.__class__):
            return
        self.check(value)
        instance.__dict__[self.name] = value

    def __get__(self, instance: object, owner: Type) -> Any:
        if instance is None:
            return self
        if self.name not in instance.__dict__:
            if self.default is ...:
                raise AttributeError(
                    f"{owner.__name__!r} object has no attribute {self.name!r}"
                )
            instance.__dict__[self.name] = self.default
        return instance.__dict__[self.name]

    def __delete__(self, instance: object) -> None:
        del instance.__dict__[self.name]

    def check(self, value: Any) -> None:
        """
        Validates a value without assigning it.

        Raises
        ------
        TypeError
            Raised when the value has an illegal type.
        ValueError
            Raised when the value is not a legal literal or is out of bounds.

        """
        if value is None and self.optional:
            return
        if not isinstance(value, self.types) or (
            isinstance(value, bool) and bool not in self.types
        ):
            raise TypeError(
                f"invalid type for {self.name!r}: expected {type_names(self.types)}; "
                f"got {value.__class__.__name__!r} instead"
            )
        if self.literal and value not in self.literal:
            raise ValueError(
                f"invalid value for {self.name!r}: expected one of "
                f"{', '.join(map(repr, self.literal))}; got {value!r} instead"
            )
        for op, bound in self.bounds:
            if not _compare(value, op, bound):
                raise ValueError(
                    f"invalid value for {self.name!r}: expected {op} {bound}; got {value!r}"
                )


def _compare(value: Any, op: str, bound: float) -> bool:
    if op == ">=":
        return value >= bound
    if op == ">":
        return value > bound
    if op == "<=":
        return value <= bound
    return value < bound


def type_names(types: Tuple[type, ...]) -> str:
    """'int', 'int' or 'float', 'a', 'b', or 'c'."""
    names = [repr(t.__name__) for t in types]
    if len(names) <= 2:
        return " or ".join(names)
    return ", ".join(names[:-1]) + f", or {names[-1]}"
