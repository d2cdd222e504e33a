from __future__ import annotations

import inspect
from abc import abstractmethod, ABC
from dataclasses import dataclass

from requests.structures import CaseInsensitiveDict

from src.evaluate.regularity_metrics import DatumNorms, SampledField, EXHAUSTIVE_PAIRS


@dataclass(frozen=True)
class BoundContext:
    # everything the right-hand sides of the regularity estimates depend on
    d: float
    r0: float
    alpha: float
    B: float
    datum: DatumNorms


class RegularityEstimate(ABC):
    """
    One of the four a priori estimates for the Neumann problem on E: a measured norm of a derivative of u over E
    and the right-hand side bounding it, with the absolute constant set to 1 so that their ratio is the empirical
    constant of the estimate
    """

    # name - class mapping, used for when estimates should be initialized from strings
    str_alias_cls: dict[str, type[RegularityEstimate]] = CaseInsensitiveDict()

    # position of the estimate in sweep records (bound1..bound4, ratio1..ratio4)
    index: int
    # column of the measured norm in sweep records
    column: str
    derivative_order: int

    # automatically called on subclass definition, will populate the str_alias_cls dict
    def __init_subclass__(cls, **kwargs):

        if not inspect.isabstract(cls):
            cls.str_alias_cls[cls.__name__] = cls

        super().__init_subclass__(**kwargs)

    @abstractmethod
    def measure(self, samples: SampledField, alpha: float, max_pairs: int = EXHAUSTIVE_PAIRS) -> float:
        raise NotImplementedError

    @abstractmethod
    def bound(self, ctx: BoundContext) -> float:
        raise NotImplementedError

    @staticmethod
    def safe_div(num: float, den: float) -> float:

        # a vanishing bound only happens for vanishing data, where the measured norm vanishes too
        return float(num / den) if den != 0 else 0.0

    def ratio(self, measured: float, ctx: BoundContext) -> float:
        return self.safe_div(measured, self.bound(ctx))

    @classmethod
    def from_string(cls, estimate_str: str) -> RegularityEstimate:
        estimate_cls = cls.estimate_exists(estimate_str, return_bool=False)
        return estimate_cls()

    @classmethod
    def all_estimates_available(cls, return_str: bool = False) -> list[type[RegularityEstimate] | str]:
        # sweep record order
        estimates = sorted(cls.str_alias_cls.values(), key=lambda estimate_cls: estimate_cls.index)
        return [estimate_cls.__name__ for estimate_cls in estimates] if return_str else estimates

    @classmethod
    def estimate_exists(cls, estimate_cls_name: str, return_bool: bool = True) -> bool | type[RegularityEstimate]:
        try:
            estimate_cls = cls.str_alias_cls[estimate_cls_name]
        except KeyError:
            raise KeyError(f"Estimate {estimate_cls_name} does not exist!") from None

        # if we arrive at the return clause, estimate_cls exists that's why we return True directly
        return estimate_cls if not return_bool else True

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self).__name__)

    def __repr__(self):
        return str(self)

    def __str__(self):
        return self.__class__.__name__
