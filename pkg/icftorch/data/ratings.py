#!/usr/bin/env python3

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from ..utils.errors import RatingParseError

_logger = logging.getLogger(__name__)

FORMATS = ("movielens_dat", "csv", "netflix", "whitespace")


class RatingRecord(NamedTuple):
    """One logged rating, with dense user and item indices."""

    user_id: int
    item_id: int
    rating: int
    timestamp: Optional[int] = None


@dataclass(frozen=True, eq=False)
class RatingLog:
    """
    An immutable rating log.

    :ivar frame: One row per (user, item) pair with integer columns ``user``, ``item``, ``rating`` and a nullable
        ``timestamp``. Users and items are dense indices ``0..n_users-1`` / ``0..n_items-1``.
    :ivar user_index: ``user_index[u]`` is the original id of dense user ``u``.
    :ivar item_index: ``item_index[i]`` is the original id of dense item ``i``.
    :ivar max_rating: Largest admissible rating (R_max).
    """

    frame: pd.DataFrame
    user_index: np.ndarray
    item_index: np.ndarray
    max_rating: int = 5
    _per_user: Dict[int, Dict[int, int]] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        per_user: Dict[int, Dict[int, int]] = {u: {} for u in range(len(self.user_index))}
        for user, item, rating in zip(
            self.frame["user"].to_numpy(), self.frame["item"].to_numpy(), self.frame["rating"].to_numpy()
        ):
            per_user[int(user)][int(item)] = int(rating)
        object.__setattr__(self, "_per_user", per_user)

    @property
    def n_users(self) -> int:
        return len(self.user_index)

    @property
    def n_items(self) -> int:
        return len(self.item_index)

    @property
    def has_timestamps(self) -> bool:
        return bool(self.frame["timestamp"].notna().any())

    @property
    def per_user(self) -> Dict[int, Dict[int, int]]:
        """``per_user[u][i]`` is the rating user ``u`` gave item ``i``."""
        return self._per_user

    @property
    def records(self) -> List[RatingRecord]:
        return list(self.iter_records())

    def iter_records(self) -> Iterator[RatingRecord]:
        for row in self.frame.itertuples(index=False):
            timestamp = None if pd.isna(row.timestamp) else int(row.timestamp)
            yield RatingRecord(int(row.user), int(row.item), int(row.rating), timestamp)

    def __len__(self) -> int:
        return len(self.frame)

    def user_ratings(self, user_id: int) -> Dict[int, int]:
        try:
            return self._per_user[user_id]
        except KeyError:
            raise KeyError(f"Unknown user {user_id}") from None

    def satisfied_counts(self, threshold: int = 4, users: Optional[Iterable[int]] = None) -> Dict[int, int]:
        """Number of items each user rated at least :attr:`threshold`."""
        users = range(self.n_users) if users is None else users
        return {u: sum(r >= threshold for r in self.user_ratings(u).values()) for u in users}

    def item_counts(self, users: Optional[Iterable[int]] = None) -> np.ndarray:
        """Number of ratings per item, restricted to :attr:`users` when given."""
        frame = self.frame if users is None else self.frame[self.frame["user"].isin(list(users))]
        return np.bincount(frame["item"].to_numpy(), minlength=self.n_items)

    def restrict(self, users: Iterable[int]) -> pd.DataFrame:
        """Rows of the log that belong to :attr:`users`."""
        return self.frame[self.frame["user"].isin(list(users))]

    def equals(self, other: RatingLog) -> bool:
        return (
            self.max_rating == other.max_rating
            and np.array_equal(self.user_index, other.user_index)
            and np.array_equal(self.item_index, other.item_index)
            and self.frame.reset_index(drop=True).equals(other.frame.reset_index(drop=True))
        )

    @classmethod
    def from_raw(
        cls, raw: pd.DataFrame, max_rating: int = 5, line_numbers: Optional[Sequence[int]] = None
    ) -> RatingLog:
        """
        Builds a log from raw (original-id) columns ``user``, ``item``, ``rating`` and optional ``timestamp``.

        Ratings are validated against ``[1, max_rating]``. Duplicate (user, item) pairs keep the most recent
        rating (by timestamp, then by position). Dense ids are assigned in order of first appearance.
        """
        raw = raw.reset_index(drop=True)
        if "timestamp" not in raw.columns:
            raw = raw.assign(timestamp=pd.NA)
        ratings = raw["rating"].to_numpy(dtype=np.int64)
        bad = np.flatnonzero((ratings < 1) | (ratings > max_rating))
        if len(bad):
            where = "" if line_numbers is None else f"line {line_numbers[bad[0]]}: "
            raise ValueError(f"{where}rating {ratings[bad[0]]} outside [1, {max_rating}]")

        user_codes, user_index = pd.factorize(raw["user"].to_numpy(dtype=np.int64))
        item_codes, item_index = pd.factorize(raw["item"].to_numpy(dtype=np.int64))
        frame = pd.DataFrame(
            {
                "user": user_codes.astype(np.int64),
                "item": item_codes.astype(np.int64),
                "rating": ratings,
                "timestamp": raw["timestamp"].astype("Int64"),
            }
        )
        # pairs keep the position of their first appearance and the value of their latest rating
        frame["pair"] = frame.groupby(["user", "item"], sort=False).ngroup()
        if frame["timestamp"].notna().any():
            frame = frame.sort_values("timestamp", kind="stable", na_position="first")
        n_raw = len(frame)
        frame = frame.drop_duplicates("pair", keep="last").sort_values("pair").drop(columns="pair")
        if len(frame) < n_raw:
            _logger.info(f"Dropped {n_raw - len(frame)} duplicate (user, item) ratings, keeping the latest")
        return cls(
            frame=frame.reset_index(drop=True),
            user_index=np.asarray(user_index),
            item_index=np.asarray(item_index),
            max_rating=max_rating,
        )


def _to_int_column(raw: pd.DataFrame, column: str, line_numbers: Sequence[int], optional: bool = False) -> pd.Series:
    values = pd.to_numeric(raw[column], errors="coerce")
    invalid = values.isna() & (raw[column].notna() if optional else True)
    non_integral = values.notna() & (values != values.round())
    problems = np.flatnonzero((invalid | non_integral).to_numpy())
    if len(problems):
        row = problems[0]
        raise RatingParseError(f"{column} field {raw[column].iloc[row]!r} is not an integer", line_numbers[row])
    return values.astype("Int64")


def _read_delimited(
    stream: TextIO, sep: str, names: List[str], first_line: int, min_fields: Optional[int] = None
) -> pd.DataFrame:
    min_fields = len(names) - 1 if min_fields is None else min_fields
    lines = [line.rstrip("\r\n") for line in stream]
    numbered = [(first_line + k, line) for k, line in enumerate(lines) if line.strip()]
    rows = []
    for line_number, line in numbered:
        fields = line.split() if sep == "whitespace" else line.split(sep)
        if not min_fields <= len(fields) <= len(names):
            expected = f"{len(names)}" if min_fields == len(names) else f"{min_fields} to {len(names)}"
            raise RatingParseError(f"expected {expected} fields, got {len(fields)}: {line!r}", line_number)
        rows.append([f.strip() or None for f in fields] + [None] * (len(names) - len(fields)))
    raw = pd.DataFrame(rows, columns=names, dtype=object)
    line_numbers = [n for n, _ in numbered]
    for column in names:
        raw[column] = _to_int_column(raw, column, line_numbers, optional=(column == "timestamp"))
    raw.attrs["line_numbers"] = line_numbers
    return raw


def _read_netflix(stream: TextIO) -> pd.DataFrame:
    rows = []
    line_numbers = []
    movie = None
    for line_number, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        if line.endswith(":"):
            try:
                movie = int(line[:-1])
            except ValueError:
                raise RatingParseError(f"bad movie header {line!r}", line_number) from None
            continue
        if movie is None:
            raise RatingParseError("rating line before any 'MovieID:' header", line_number)
        fields = line.split(",")
        if len(fields) != 3:
            raise RatingParseError(f"expected 'CustomerID,Rating,Date', got {line!r}", line_number)
        try:
            user, rating = int(fields[0]), int(fields[1])
            timestamp = int(pd.Timestamp(fields[2]).timestamp())
        except ValueError:
            raise RatingParseError(f"malformed rating line {line!r}", line_number) from None
        rows.append((user, movie, rating, timestamp))
        line_numbers.append(line_number)
    raw = pd.DataFrame(rows, columns=["user", "item", "rating", "timestamp"])
    raw.attrs["line_numbers"] = line_numbers
    return raw


def parse_ratings(
    lines: Union[TextIO, Iterable[str], str], format: str = "movielens_dat", max_rating: int = 5
) -> RatingLog:
    """
    Parses a rating log.

    Supported formats:

    - ``movielens_dat``: ``UserID::MovieID::Rating::Timestamp`` (MovieLens 1M).
    - ``csv``: header ``user,item,rating[,timestamp]``.
    - ``whitespace``: headerless ``user item rating [timestamp]``.
    - ``netflix``: ``MovieID:`` blocks followed by ``CustomerID,Rating,YYYY-MM-DD`` lines.

    :param lines: A text stream, an iterable of lines, or the whole text.
    :param format: One of the formats above.
    :param max_rating: R_max. Ratings outside ``[1, max_rating]`` raise :class:`ValueError`.
    :raises RatingParseError: on a malformed line, naming its line number.
    """
    if isinstance(lines, str):
        lines = io.StringIO(lines)
    elif not hasattr(lines, "read"):
        lines = io.StringIO("".join(line if line.endswith("\n") else line + "\n" for line in lines))

    if format == "movielens_dat":
        raw = _read_delimited(lines, "::", ["user", "item", "rating", "timestamp"], first_line=1, min_fields=4)
    elif format == "whitespace":
        raw = _read_delimited(lines, "whitespace", ["user", "item", "rating", "timestamp"], first_line=1)
    elif format == "csv":
        header = lines.readline()
        columns = [c.strip() for c in header.strip().split(",")]
        if columns[:3] != ["user", "item", "rating"] or columns[3:] not in ([], ["timestamp"]):
            raise RatingParseError(f"csv header must be 'user,item,rating[,timestamp]', got {header.strip()!r}", 1)
        raw = _read_delimited(lines, ",", ["user", "item", "rating", "timestamp"], first_line=2)
    elif format == "netflix":
        raw = _read_netflix(lines)
    else:
        raise ValueError(f"Unknown rating format {format!r}; expected one of {FORMATS}")

    if not len(raw):
        _logger.warning("Parsed an empty rating log")
    log = RatingLog.from_raw(raw, max_rating=max_rating, line_numbers=raw.attrs.get("line_numbers"))
    _logger.info(f"Parsed {len(log)} ratings from {log.n_users} users on {log.n_items} items ({format})")
    return log


def serialize_ratings(log: RatingLog, format: str = "movielens_dat") -> str:
    """
    Writes :attr:`log` back with its original ids, such that :func:`parse_ratings` reproduces it.
    """
    users = log.user_index[log.frame["user"].to_numpy()]
    items = log.item_index[log.frame["item"].to_numpy()]
    ratings = log.frame["rating"].to_numpy()
    timestamps = log.frame["timestamp"].tolist()
    out = []
    if format in ("movielens_dat", "whitespace", "csv"):
        sep = {"movielens_dat": "::", "whitespace": " ", "csv": ","}[format]
        if format == "csv":
            out.append("user,item,rating,timestamp" if log.has_timestamps else "user,item,rating")
        for user, item, rating, timestamp in zip(users, items, ratings, timestamps):
            fields = [str(user), str(item), str(rating)]
            if not pd.isna(timestamp):
                fields.append(str(timestamp))
            elif format == "movielens_dat" or (format == "csv" and log.has_timestamps):
                fields.append("")
            out.append(sep.join(fields))
    elif format == "netflix":
        # netflix lines are grouped by movie, which reorders first appearances of users
        for item in pd.unique(items):
            out.append(f"{item}:")
            block = items == item
            stamps = np.asarray(timestamps, dtype=object)[block]
            for user, rating, timestamp in zip(users[block], ratings[block], stamps):
                day = pd.Timestamp(int(timestamp), unit="s").strftime("%Y-%m-%d")
                out.append(f"{user},{rating},{day}")
    else:
        raise ValueError(f"Unknown rating format {format!r}; expected one of {FORMATS}")
    return "\n".join(out) + "\n"
