#!/usr/bin/env python3


def gamma_schedule(epoch: int, total_epochs: int, eta: float = 0.2) -> float:
    r"""
    Discount factor of the curriculum,

    .. math::
        \gamma_e = \frac{1}{1 + (E - e)^\eta},

    which grows with the epoch :math:`e` and reaches exactly 1 at :math:`e = E`.
    """
    if not 0 <= epoch <= total_epochs:
        raise ValueError(f"epoch must lie in [0, {total_epochs}], got {epoch}")
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    return 1.0 / (1.0 + (total_epochs - epoch) ** eta)


def epsilon_schedule(step: int, total_steps: int, start: float = 1.0, end: float = 0.0) -> float:
    """Linear decay of the exploration rate from :attr:`start` at step 0 to :attr:`end` at :attr:`total_steps`."""
    if not 0 <= step <= total_steps:
        raise ValueError(f"step must lie in [0, {total_steps}], got {step}")
    if step == total_steps:
        return end
    return start + (end - start) * step / total_steps
