"""Alignment-based instance counting: the heart of the whole engine.

A pattern occurrence is a landmark: strictly increasing positions whose labels
spell a word of the pattern's language. Counting uses an alignment on the
backloop-transformed net where model moves on labeled transitions are
forbidden, so only complete executions count, and the backloop firings
delimit the occurrences. The result is the largest non-overlapping set of
occurrences, with ties resolved toward fewer, longer instances.
"""

from lpmforge import EventLog, extract_instances, parse_tree, replay_profile
from lpmforge.align import INSTANCE_COUNTING, align
from lpmforge.petri import to_instance_counter, to_petri_net

pattern = parse_tree("seq(a,and(b,c))")
trace = list("aacbaacbbc")
log = EventLog.from_labels([trace])

gamma = extract_instances(pattern, log)
print("trace:   ", " ".join(trace))
for inst, mult in gamma.instances:
    marks = ["."] * len(trace)
    for i in inst.landmarks:
        marks[i - 1] = "^"
    print("instance:", " ".join(marks), inst.landmarks)
print("support:", gamma.support())

# the alignment behind it
net = to_instance_counter(to_petri_net(pattern))
alignment = align(net, tuple(trace), INSTANCE_COUNTING)
print("\nalignment:", alignment.counts(net))

# replay determinism: how many transitions were enabled at each firing
profile = replay_profile(pattern, log)
print("enabled counts:", profile.enabled_counts)
print(f"determinism: {profile.firings}/{profile.enabled_total} = {profile.determinism:.3f}")

# loops absorb repetitions into one instance
runs = EventLog.from_labels([["a", "a", "a"]])
print("\nloop(a) on aaa:", [i.landmarks for i, _ in extract_instances(parse_tree("loop(a)"), runs).instances])
