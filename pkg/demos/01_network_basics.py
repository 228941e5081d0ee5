"""Tour of the network container: load the bundled model, inspect its
structure, round-trip the canonical file form, and see what the validator
reports for a deliberately broken copy."""

import json

from chiron.network import (
    build_network,
    parse_network,
    serialize_network,
    validate_network,
)
from chiron.triage import default_network

spec = default_network()
print(f"model: {spec.name} {spec.version}")
print(f"nodes: {len(spec.nodes)}")
for node in spec.nodes:
    parents = ", ".join(node.parents) if node.parents else "(root)"
    print(f"  {node.name:<20} states={len(node.states)}  parents: {parents}")

# Every CPT row is a distribution over the node's states, one row per
# combination of parent states, last parent varying fastest.
hemorrhage = spec.node("SevereHemorrhage")
print(f"\nSevereHemorrhage CPT: {hemorrhage.cpt.rows.shape[0]} rows")
print(f"  first row  {hemorrhage.cpt.rows[0]}")
print(f"  last row   {hemorrhage.cpt.rows[-1]}")

# The canonical serialization is stable: parse(serialize(x)) == x, byte for
# byte, which is what makes model files diffable and cache keys honest.
text = serialize_network(spec)
again = serialize_network(parse_network(text))
print(f"\ncanonical form round-trips byte-identically: {text == again}")
print("first lines of the file form:")
for line in text.splitlines()[:6]:
    print(f"  {line}")

# The validator returns every violation, prefixed by its kind, instead of
# stopping at the first problem.
raw = json.loads(text)
raw["nodes"][0]["cpt"][0] = [0.9, 0.3]
raw["nodes"][1]["parents"] = ["NoSuchNode"]
violations = validate_network(build_network(json.dumps(raw)))
print(f"\nbroken copy produces {len(violations)} violations:")
for violation in violations:
    print(f"  {violation}")
