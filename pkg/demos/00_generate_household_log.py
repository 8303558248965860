"""Regenerate data/household.csv, the bundled synthetic smart-home log.

Thirty days of a two-person household. Each day: a wake-up block (kettle and
toast in either order, then eating), one or more wash cycles before drying,
and an evening leave-or-relax choice. Random phone calls are sprinkled in as
a chaotic activity. Fixed seed, so the file is reproducible byte for byte.
"""

import csv
import random
from datetime import datetime, timezone
from pathlib import Path

OUT = Path(__file__).parent.parent / "data" / "household.csv"


def generate(seed=20240601):
    rng = random.Random(seed)
    traces = []
    base = 1_700_000_000_000  # ms epoch
    for day in range(30):
        t = base + day * 86_400_000 + rng.randint(0, 3_600_000)
        events = []

        def emit(act, who, lo=60_000, hi=600_000):
            nonlocal t
            t += rng.randint(lo, hi)
            events.append((act, t, who))

        who = rng.choice(["alex", "jo"])
        emit("wake", who)
        pair = ["kettle", "toast"]
        rng.shuffle(pair)
        emit(pair[0], who)
        emit(pair[1], who)
        emit("eat", who)
        for _ in range(rng.randint(1, 3)):
            emit("wash", rng.choice(["alex", "jo"]))
        emit("dry", rng.choice(["alex", "jo"]))
        for _ in range(rng.randint(0, 2)):
            pos = rng.randint(0, len(events))
            ts = events[min(pos, len(events) - 1)][1] + rng.randint(1, 30_000)
            events.insert(pos, ("phone", ts, rng.choice(["alex", "jo"])))
        emit(rng.choice(["leave", "relax"]), who)
        events.sort(key=lambda e: e[1])
        traces.append((f"day-{day + 1:02d}", events))
    return traces


def main():
    rows = generate()
    OUT.parent.mkdir(exist_ok=True)
    with OUT.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["case", "activity", "timestamp", "resource"])
        for cid, events in rows:
            for act, ts, who in events:
                iso = (
                    datetime.fromtimestamp(ts / 1000, tz=timezone.utc)
                    .isoformat(timespec="milliseconds")
                    .replace("+00:00", "Z")
                )
                w.writerow([cid, act, iso, who])
    print(f"wrote {OUT} ({len(rows)} traces, {sum(len(e) for _, e in rows)} events)")


if __name__ == "__main__":
    main()
