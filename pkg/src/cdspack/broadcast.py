"""Round-synchronous store-and-forward broadcast over a CDS-packing backbone,
and the inverse direction: extracting a packing certificate from any valid
schedule log.

Model: in each round every node may send one message, heard by all its
neighbors; a node may only send messages it originated or already received.
Each message is assigned to one packing entry with probability proportional
to the entry weight.  A node shared by several entries time-shares its send
slots by largest-remainder stride scheduling, so entry tau gets an x_tau
fraction of the node's rounds; idle slots are charged to the scheduled entry.
Within an entry, members flood greedily (oldest message some neighbor still
lacks, ties by message id).  Sources send their own messages first.

The extraction direction is exact: with per-message sender sets S(sigma),
per-node send counts N_sigma(v), and horizon T, grouping messages by
identical sender set tau and weighting x_tau = min over v in tau of
sum(N_sigma(v))/T yields a packing of size at least (messages)/T.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Graph, is_cds
from .packing import CdsPacking
from .verifier import verify_packing


class SimulationError(RuntimeError):
    pass


class ScheduleError(ValueError):
    """Raised for logs violating the store-and-forward round model."""


@dataclass
class ScheduleLog:
    n: int
    T: int
    sends: list[tuple[int, int, int]]          # (round, node, message id)
    sources: dict[int, int] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["round", "node", "message"])
        for row in sorted(self.sends):
            writer.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, n: int) -> "ScheduleLog":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != ["round", "node", "message"]:
            raise ScheduleError("expected header 'round,node,message'")
        sends = []
        for row in reader:
            if not row:
                continue
            if len(row) != 3:
                raise ScheduleError(f"bad row {row!r}")
            sends.append((int(row[0]), int(row[1]), int(row[2])))
        T = max((r for r, _, _ in sends), default=0)
        return cls(n=n, T=T, sends=sends, sources={})


@dataclass
class ThroughputReport:
    messages: int
    rounds: int
    throughput: float
    completion_rounds: list[int]
    entry_of_message: list[int]
    b_bits: int | None = None

    def to_json(self) -> str:
        doc = {
            "messages": self.messages,
            "rounds": self.rounds,
            "throughput": self.throughput,
            "completion_rounds": self.completion_rounds,
            "entry_of_message": self.entry_of_message,
            "b_bits": self.b_bits,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def simulate_broadcast(g: Graph, packing: CdsPacking, messages, rng,
                       b_bits: int | None = None) -> tuple[ScheduleLog, ThroughputReport]:
    """Run concurrent broadcasts until every node holds every message.

    ``messages`` is a list of (id, source) pairs with unique ids.
    """
    report = verify_packing(g, packing)
    if not report.passed or not packing.entries:
        raise ValueError("packing is not valid for this graph")
    msgs = [(int(mid), int(src)) for mid, src in messages]
    if len({mid for mid, _ in msgs}) != len(msgs):
        raise ValueError("message ids must be unique")
    for _, src in msgs:
        if not 0 <= src < g.n:
            raise ValueError(f"source {src} out of range")
    p = len(msgs)
    if p == 0:
        return (ScheduleLog(g.n, 0, [], {}),
                ThroughputReport(0, 0, 0.0, [], [], b_bits))

    n_entries = len(packing.entries)
    weights = np.array([float(w) for _, w in packing.entries])
    assigned = rng.choice(n_entries, size=p, p=weights / weights.sum())
    member = np.zeros((n_entries, g.n), bool)
    for e, (nodes, _) in enumerate(packing.entries):
        member[e, np.asarray(nodes, dtype=np.int64)] = True
    entries_of_node = [np.flatnonzero(member[:, v]) for v in range(g.n)]

    received = np.zeros((p, g.n), bool)
    arrival = np.full((p, g.n), -1, np.int64)
    remaining = np.full(p, g.n - 1, np.int64)
    completion = np.zeros(p, np.int64)
    for j, (_, src) in enumerate(msgs):
        received[j, src] = True
        arrival[j, src] = 0
        if g.n == 1:
            remaining[j] = 0
    origin_queue: list[list[int]] = [[] for _ in range(g.n)]
    for j in sorted(range(p), key=lambda j: msgs[j][0]):
        origin_queue[msgs[j][1]].append(j)
    deficit = np.zeros((g.n, n_entries), float)
    n_sends = np.zeros((p, g.n), np.int64)
    sends: list[tuple[int, int, int]] = []

    min_w = float(weights.min())
    max_rounds = 1000 + int(20 * (p + g.n) / max(min_w, 1e-9))
    rnd = 0
    while remaining.any():
        rnd += 1
        if rnd > max_rounds:
            raise SimulationError("simulation did not complete; invalid backbone?")
        round_sends: list[tuple[int, int]] = []   # (node, message index)
        for v in range(g.n):
            ents = entries_of_node[v]
            if ents.shape[0]:
                deficit[v, ents] += weights[ents]
            if origin_queue[v]:
                round_sends.append((v, origin_queue[v].pop(0)))
                continue
            if not ents.shape[0]:
                continue
            order = np.lexsort((ents, -deficit[v, ents]))
            chosen = int(ents[order[0]])
            deficit[v, chosen] -= 1.0
            best = None
            for j in range(p):
                if assigned[j] == chosen and received[j, v] and remaining[j] > 0:
                    neigh = g.neighbors(v)
                    if not received[j, neigh].all():
                        key = (int(arrival[j, v]), msgs[j][0])
                        if best is None or key < best[0]:
                            best = (key, j)
            if best is not None:
                round_sends.append((v, best[1]))
        for v, j in round_sends:
            n_sends[j, v] += 1
            sends.append((rnd, v, msgs[j][0]))
            for u in g.neighbors(v):
                if not received[j, u]:
                    received[j, u] = True
                    arrival[j, u] = rnd
                    remaining[j] -= 1
                    if remaining[j] == 0:
                        completion[j] = rnd
    T = rnd
    log = ScheduleLog(g.n, T, sends, {mid: src for mid, src in msgs})
    report = ThroughputReport(
        messages=p, rounds=T, throughput=p / T,
        completion_rounds=completion.tolist(),
        entry_of_message=[int(e) for e in assigned], b_bits=b_bits)
    return log, report


def extract_packing(log: ScheduleLog, g: Graph) -> CdsPacking:
    """Replay a schedule log and turn it into a CDS packing certificate.

    Validates the store-and-forward rules, one send per node per round, full
    delivery, and that every forwarding set is a CDS (error names the first
    offending message).  Weights are exact rationals; the resulting size is
    at least messages/T.
    """
    if log.T == 0 or not log.sends:
        return CdsPacking(g.n, [])
    by_round: dict[int, list[tuple[int, int]]] = {}
    mids = sorted({mid for _, _, mid in log.sends})
    midx = {mid: j for j, mid in enumerate(mids)}
    for r, v, mid in log.sends:
        if not 0 <= v < g.n:
            raise ScheduleError(f"node {v} out of range")
        if r < 1:
            raise ScheduleError("rounds are 1-based")
        by_round.setdefault(r, []).append((v, mid))
    p = len(mids)
    have = np.zeros((p, g.n), bool)
    started = np.zeros(p, bool)
    n_sends = np.zeros((p, g.n), np.int64)
    senders: list[set[int]] = [set() for _ in range(p)]
    for r in sorted(by_round):
        batch = by_round[r]
        nodes_this_round = [v for v, _ in batch]
        if len(set(nodes_this_round)) != len(nodes_this_round):
            raise ScheduleError(f"round {r}: a node sent twice")
        for v, mid in batch:
            j = midx[mid]
            if started[j]:
                if not have[j, v]:
                    raise ScheduleError(
                        f"round {r}: node {v} sent message {mid} before receiving it")
            else:
                # First send of the message: the sender is its source.
                firsts = [w for w, m2 in batch if m2 == mid]
                if len(firsts) > 1:
                    raise ScheduleError(
                        f"round {r}: message {mid} first sent by several nodes")
                started[j] = True
                have[j, v] = True
                if log.sources and log.sources.get(mid, v) != v:
                    raise ScheduleError(f"message {mid}: sender/source mismatch")
        for v, mid in batch:
            j = midx[mid]
            n_sends[j, v] += 1
            senders[j].add(v)
            have[j, g.neighbors(v)] = True
            have[j, v] = True
    for j, mid in enumerate(mids):
        if not have[j].all():
            raise ScheduleError(f"message {mid} was not delivered to all nodes")
        if not is_cds(g, np.array(sorted(senders[j]), dtype=np.int64)):
            raise ScheduleError(
                f"message {mid}: forwarding set is not a connected dominating set")
    groups: dict[tuple[int, ...], list[int]] = {}
    for j in range(p):
        groups.setdefault(tuple(sorted(senders[j])), []).append(j)
    entries = []
    for tau in sorted(groups):
        js = groups[tau]
        counts = n_sends[js, :].sum(axis=0)
        min_count = int(min(counts[v] for v in tau))
        entries.append((np.array(tau, dtype=np.int64), Fraction(min_count, log.T)))
    packing = CdsPacking(g.n, entries)
    sums = packing.weight_sums()
    if sums.max() > 1.0 + 1e-12:
        raise ScheduleError("extracted weights exceed the per-node budget")
    return packing
