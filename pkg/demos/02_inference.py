"""Posterior queries against the bundled model.

Walks through the questions a medic console actually asks: what do we
believe with no evidence, how does one observation move the hidden
criticals, and how fast is the all-nodes query that backs the live view.
"""

import time

from chiron.inference import (
    eliminate_posterior,
    enumerate_posterior,
    map_state,
    posterior_all,
)
from chiron.triage import default_network

spec = default_network()


def show(post):
    node = spec.node(post.node)
    pairs = ", ".join(
        f"{label}={p:.4f}" for label, p in zip(node.states, post.distribution)
    )
    star = node.states[map_state(post)]
    print(f"  {post.node:<20} {pairs}   MAP: {star}")


print("no evidence (priors propagated through the graph):")
for post in posterior_all(spec, {}):
    show(post)

# One observation: a visible head wound. Eyes-closed probability jumps to
# the 0.70 anchor and both verbal and motor degrade through the graph.
wound = spec.node("HeadTrauma").state_index("Wound")
print("\nafter observing HeadTrauma=Wound:")
for post in posterior_all(spec, {"HeadTrauma": wound}):
    show(post)

# Diagnostic direction: observing the hidden node pulls its causes up.
present = spec.node("SevereHemorrhage").state_index("Present")
print("\nafter observing SevereHemorrhage=Present:")
show(eliminate_posterior(spec, {"SevereHemorrhage": present}, "LowerExtTrauma"))
show(eliminate_posterior(spec, {"SevereHemorrhage": present}, "UpperExtTrauma"))

# Two independent engines, one answer. Enumeration is the trusted slow
# path; elimination is what production uses.
amp = spec.node("LowerExtTrauma").state_index("Amputation")
slow = enumerate_posterior(spec, {"LowerExtTrauma": amp}, "SevereHemorrhage")
fast = eliminate_posterior(spec, {"LowerExtTrauma": amp}, "SevereHemorrhage")
gap = max(abs(a - b) for a, b in zip(slow.distribution, fast.distribution))
print(f"\nP(SevereHemorrhage=Present | LowerExtTrauma=Amputation) = {fast.distribution[0]:.8f}")
print(f"enumeration vs elimination, largest gap: {gap:.2e}")

calls = 2000
started = time.perf_counter()
for _ in range(calls):
    posterior_all(spec, {"HeadTrauma": wound})
per_call_ms = (time.perf_counter() - started) / calls * 1000
print(f"\nposterior_all: {per_call_ms:.3f} ms per call over {calls} calls")
