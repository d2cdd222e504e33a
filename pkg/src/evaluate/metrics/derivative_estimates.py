from src.evaluate.abstract_metric import RegularityEstimate, BoundContext
from src.evaluate.regularity_metrics import SampledField, sup_norm, holder_seminorm_region, EXHAUSTIVE_PAIRS


class SupEstimate(RegularityEstimate):

    def measure(self, samples: SampledField, alpha: float, max_pairs: int = EXHAUSTIVE_PAIRS) -> float:
        return sup_norm(samples, self.derivative_order)


class HolderEstimate(RegularityEstimate):

    def measure(self, samples: SampledField, alpha: float, max_pairs: int = EXHAUSTIVE_PAIRS) -> float:
        return holder_seminorm_region(samples, alpha, self.derivative_order, max_pairs)


class DuSup(SupEstimate):
    """
    ||Du||_inf <= (1 + B d^-4 r0) ||g||_inf + r0^alpha [g]_alpha
    """
    index = 1
    column = "Du_sup"
    derivative_order = 1

    def bound(self, ctx: BoundContext) -> float:
        g = ctx.datum
        return (1 + ctx.B * ctx.d ** -4 * ctx.r0) * g.g_sup + ctx.r0 ** ctx.alpha * g.g_hold


class DuHold(HolderEstimate):
    """
    [Du]_alpha <= (d^-alpha + B d^-5 r0^(2 - alpha)) ||g||_inf + [g]_alpha
    """
    index = 2
    column = "Du_hold"
    derivative_order = 1

    def bound(self, ctx: BoundContext) -> float:
        g = ctx.datum
        return (ctx.d ** -ctx.alpha + ctx.B * ctx.d ** -5 * ctx.r0 ** (2 - ctx.alpha)) * g.g_sup + g.g_hold


class D2uSup(SupEstimate):
    """
    ||D^2 u||_inf <= (d^-1 + B d^-5 r0) ||g||_inf + d^(alpha - 1) [g]_alpha + ||g'||_inf + r0^alpha [g']_alpha
    """
    index = 3
    column = "D2u_sup"
    derivative_order = 2

    def bound(self, ctx: BoundContext) -> float:
        g = ctx.datum
        return ((1 / ctx.d + ctx.B * ctx.d ** -5 * ctx.r0) * g.g_sup + ctx.d ** (ctx.alpha - 1) * g.g_hold +
                g.gp_sup + ctx.r0 ** ctx.alpha * g.gp_hold)


class D2uHold(HolderEstimate):
    """
    [D^2 u]_alpha <= (d^(-1 - alpha) + B d^-6 r0^(2 - alpha)) ||g||_inf + d^-1 [g]_alpha + d^-alpha ||g'||_inf
                     + [g']_alpha
    """
    index = 4
    column = "D2u_hold"
    derivative_order = 2

    def bound(self, ctx: BoundContext) -> float:
        g = ctx.datum
        return ((ctx.d ** (-1 - ctx.alpha) + ctx.B * ctx.d ** -6 * ctx.r0 ** (2 - ctx.alpha)) * g.g_sup +
                g.g_hold / ctx.d + ctx.d ** -ctx.alpha * g.gp_sup + g.gp_hold)
