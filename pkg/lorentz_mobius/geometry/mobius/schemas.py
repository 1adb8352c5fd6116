from dataclasses import dataclass

from geometry.forms.schemas import FormBundle


@dataclass(frozen=True)
class PushforwardReport:
    rho: float
    alpha: float
    alpha_bar: float
    predicted: FormBundle
    observed: FormBundle
    max_rel_err: float
    # +1 when the observed bar coefficients match the prediction, -1 when they match its negative
    orientation: int = 1
