from __future__ import annotations

import inspect
from abc import ABC, abstractmethod

from requests.structures import CaseInsensitiveDict

from src.domain.holed_domain import HoledDomain


def as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


class GeometryFamily(ABC):
    """
    A named family of holed domains: every concrete family expands its (possibly list-valued) parameters into the
    cartesian product of the geometries it describes, in a fixed order
    """

    # name - class mapping, used when families are instantiated from the config
    str_alias_cls: dict[str, type[GeometryFamily]] = CaseInsensitiveDict()

    def __init_subclass__(cls, **kwargs):

        if not inspect.isabstract(cls):
            cls.str_alias_cls[cls.__name__] = cls

        super().__init_subclass__(**kwargs)

    @abstractmethod
    def domains(self) -> list[HoledDomain]:
        raise NotImplementedError

    @classmethod
    def from_config(cls, family_section: dict) -> GeometryFamily:
        family_section = dict(family_section)
        family_name = family_section.pop("family", None)

        if family_name is None:
            raise KeyError("Geometry family entries should specify the 'family' key!")

        family_cls = cls.family_exists(family_name, return_bool=False)
        return family_cls(**family_section)

    @classmethod
    def family_exists(cls, family_cls_name: str, return_bool: bool = True) -> bool | type[GeometryFamily]:
        try:
            family_cls = cls.str_alias_cls[family_cls_name]
        except KeyError:
            raise KeyError(f"Geometry family {family_cls_name} does not exist!") from None

        return family_cls if not return_bool else True

    @classmethod
    def all_families_available(cls, return_str: bool = False) -> list[type[GeometryFamily] | str]:
        return list(cls.str_alias_cls.keys()) if return_str else list(cls.str_alias_cls.values())

    def __str__(self):
        return self.__class__.__name__
