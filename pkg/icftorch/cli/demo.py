#!/usr/bin/env python3

from dataclasses import dataclass
from typing import Mapping, Optional, TextIO

import torch

from .. import settings
from ..agent.policy import select_action
from ..models import QNetwork, SupportState

QUIT_WORDS = ("q", "quit", "exit")


@dataclass
class DemoResult:
    steps: int
    precision: int
    state: SupportState


def _title(titles: Mapping[int, str], item: int) -> str:
    return titles.get(item, f"item {item}")


def demo_session(
    qnet: QNetwork,
    titles: Mapping[int, str],
    input: TextIO,
    output: TextIO,
    horizon: int = 40,
    generator: Optional[torch.Generator] = None,
) -> DemoResult:
    """
    Lets a person play the cold-start user: the greedy policy of :attr:`qnet` recommends an item, the person
    answers with a rating from 1 to ``max_rating`` (or ``quit``), and the rating extends the support state.
    Invalid answers are asked again without changing the state. The running precision is printed after each rating.
    """
    state = SupportState.empty(qnet.max_rating)
    remaining = set(range(qnet.num_items))
    threshold = settings.satisfaction_threshold.value()
    precision = 0
    prompt = f"Your rating (1-{qnet.max_rating}, or 'quit'): "
    while len(state) < horizon and remaining:
        with torch.no_grad():
            item = select_action(qnet(state), remaining, 0.0, generator)
        output.write(f"[{len(state) + 1}] We recommend: {_title(titles, item)}\n")
        rating = None
        while rating is None:
            output.write(prompt)
            output.flush()
            line = input.readline()
            answer = line.strip().lower()
            if not line or answer in QUIT_WORDS:
                output.write(f"Goodbye. Steps: {len(state)}, precision: {precision}\n")
                return DemoResult(len(state), precision, state)
            if answer.isdigit() and 1 <= int(answer) <= qnet.max_rating:
                rating = int(answer)
            else:
                output.write(f"Please enter a whole number from 1 to {qnet.max_rating}.\n")
        state = state.append(item, rating)
        remaining.discard(item)
        precision += int(rating >= threshold)
        output.write(f"precision: {precision}\n")
    output.write(f"Session over. Steps: {len(state)}, precision: {precision}\n")
    return DemoResult(len(state), precision, state)
