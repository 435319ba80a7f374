#!/usr/bin/env python3

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, TextIO, Tuple, Union

import pandas as pd

from .ratings import RatingLog

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TopicCatalog:
    """Maps dense item ids to their topic (genre) sets. Items without an entry have no topic."""

    topics: Mapping[int, FrozenSet[str]] = field(default_factory=dict)

    def __getitem__(self, item_id: int) -> FrozenSet[str]:
        return self.topics.get(item_id, frozenset())

    @property
    def universe(self) -> FrozenSet[str]:
        return frozenset().union(*self.topics.values()) if self.topics else frozenset()

    @classmethod
    def from_pairs(cls, pairs) -> TopicCatalog:
        topics: Dict[int, set] = {}
        for item, topic in pairs:
            topics.setdefault(int(item), set()).add(str(topic))
        return cls({item: frozenset(ts) for item, ts in topics.items()})


def _as_stream(source: Union[TextIO, str]) -> TextIO:
    return io.StringIO(source) if isinstance(source, str) else source


def _dense_item_map(log: RatingLog) -> Dict[int, int]:
    return {int(original): dense for dense, original in enumerate(log.item_index)}


def load_topics(source: Union[TextIO, str], log: RatingLog) -> TopicCatalog:
    """
    Reads an ``item,topic`` CSV (one row per pair, with header) keyed by original item ids.
    Items absent from :attr:`log` are ignored.
    """
    frame = pd.read_csv(_as_stream(source), dtype={"item": "int64", "topic": "string"})
    if list(frame.columns[:2]) != ["item", "topic"]:
        raise ValueError(f"topic file must have header 'item,topic', got {list(frame.columns)}")
    dense = _dense_item_map(log)
    frame["dense"] = frame["item"].map(dense)
    missing = int(frame["dense"].isna().sum())
    if missing:
        _logger.debug(f"Ignoring {missing} topic rows of items absent from the rating log")
    frame = frame.dropna(subset=["dense"])
    return TopicCatalog.from_pairs(zip(frame["dense"].astype(int), frame["topic"]))


def load_movielens_items(source: Union[TextIO, str], log: RatingLog) -> Tuple[TopicCatalog, Dict[int, str]]:
    """
    Reads a MovieLens ``movies.dat`` file (``MovieID::Title::Genre|Genre``).

    :return: The genre catalog and the title of every item, both keyed by dense item id.
    """
    frame = pd.read_csv(
        _as_stream(source),
        sep="::",
        engine="python",
        names=["item", "title", "genres"],
        dtype={"item": "int64", "title": "string", "genres": "string"},
    )
    dense = _dense_item_map(log)
    frame["dense"] = frame["item"].map(dense)
    frame = frame.dropna(subset=["dense"])
    titles = {int(d): str(t) for d, t in zip(frame["dense"], frame["title"])}
    pairs = [
        (int(d), genre)
        for d, genres in zip(frame["dense"], frame["genres"].fillna(""))
        for genre in str(genres).split("|")
        if genre
    ]
    return TopicCatalog.from_pairs(pairs), titles
