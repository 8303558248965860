"""Process-tree patterns, their bounded languages, and the Petri net view.

A pattern is an operator tree: seq (then), xor (either), and (both, any
order), loop (one or more times). Its language is enumerated up to a length
bound; the equivalent workflow net drives the alignment machinery.
"""

from lpmforge import (
    bounded_language,
    net_bounded_language,
    parse_tree,
    start_activities,
    to_petri_net,
)

pattern = parse_tree("seq(xor(a,d),and(b,c))")
print("pattern:", pattern)
print("activities:", sorted(pattern.activities()))
print("start activities:", sorted(start_activities(pattern)))
print("language (n=3):")
for word in sorted(bounded_language(pattern, 3)):
    print("  ", " -> ".join(word))

net = to_petri_net(pattern)
print("\nnet transitions:", [(t.id, t.label or "tau") for t in net.sorted_transitions()])
print("net language equals tree language:", net_bounded_language(net, 6) == bounded_language(pattern, 6))

looped = parse_tree("seq(a,loop(seq(b,a)))")
print("\none-or-more loop:", looped)
for word in sorted(bounded_language(looped, 5)):
    print("  ", " -> ".join(word))
