from __future__ import annotations

import inspect
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

from requests.structures import CaseInsensitiveDict

from src.potential.boundary_data import NeumannData

if TYPE_CHECKING:
    from src.domain.holed_domain import HoledDomain


class NeumannFamily(ABC):
    """
    A named recipe building compatible Neumann data for any holed domain, so that the same family of data can be
    swept over many geometries
    """

    # name - class mapping, used when families are instantiated from the config
    str_alias_cls: dict[str, type[NeumannFamily]] = CaseInsensitiveDict()

    def __init_subclass__(cls, **kwargs):

        if not inspect.isabstract(cls):
            cls.str_alias_cls[cls.__name__] = cls

        super().__init_subclass__(**kwargs)

    @abstractmethod
    def build(self, domain: HoledDomain, n_samples: int) -> NeumannData:
        raise NotImplementedError

    @abstractmethod
    def to_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_config(cls, family_section: dict) -> NeumannFamily:
        family_section = dict(family_section)
        family_name = family_section.pop("family", None)

        if family_name is None:
            raise KeyError("Neumann family entries should specify the 'family' key!")

        family_cls = cls.family_exists(family_name, return_bool=False)
        return family_cls(**family_section)

    @classmethod
    def family_exists(cls, family_cls_name: str, return_bool: bool = True) -> bool | type[NeumannFamily]:
        try:
            family_cls = cls.str_alias_cls[family_cls_name]
        except KeyError:
            raise KeyError(f"Neumann family {family_cls_name} does not exist!") from None

        return family_cls if not return_bool else True

    @classmethod
    def all_families_available(cls, return_str: bool = False) -> list[type[NeumannFamily] | str]:
        return list(cls.str_alias_cls.keys()) if return_str else list(cls.str_alias_cls.values())

    def __str__(self):
        params = ", ".join(f"{key}={val}" for key, val in self.to_dict().items())
        return f"{self.__class__.__name__}({params})"

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.to_dict().items()))))
