"""Evidence fusion for one casualty, message by message.

Simulates the stream a perception stack would publish: observations arrive
out of order, disagree with each other, and never cover all nine vitals.
The ledger resolves conflicts by timestamp and the assessment fills the
gaps by inference, labeling every line with its provenance.
"""

from chiron.fusion import Evidence, EvidenceLedger, assess, assess_whatif, ingest
from chiron.triage import default_network

spec = default_network()
ledger = EvidenceLedger(network=spec, casualty_id="cas-07")

arrivals = [
    Evidence("cas-07", "LowerExtTrauma", "Amputation", "vision-limb", 12_000),
    Evidence("cas-07", "OcularAlertness", "Closed", "vision-face", 15_500),
    # an older, contradictory limb reading arrives late and must lose
    Evidence("cas-07", "LowerExtTrauma", "Wound", "vision-limb", 9_000),
    Evidence("cas-07", "VerbalAlertness", "Absent", "audio", 18_250),
]

for e in arrivals:
    ledger = ingest(ledger, e)
    winner = ledger.accepted[e.vital]
    note = "accepted" if winner is e else f"kept {winner.state}@{winner.timestamp_ms}"
    print(f"t={e.timestamp_ms:>6}  {e.vital}={e.state:<12} {note}")

report = assess(ledger, spec, now=ledger.last_timestamp())
print(f"\nassessment at t={report.report_timestamp_ms} (model {report.model_version}):")
for entry in report.vitals:
    p = max(entry.distribution)
    print(f"  {entry.vital:<20} {entry.state:<12} {entry.provenance:<9} p={p:.3f}")

# What-if: would a torso wound change the respiratory call? The overlay is
# evaluated against a copy; the real ledger is untouched.
overlay = [Evidence("cas-07", "TorsoTrauma", "Wound", "whatif", 18_251)]
hypo = assess_whatif(ledger, overlay, spec, now=18_251)
real = assess(ledger, spec, now=18_251)
print("\nwhat-if TorsoTrauma=Wound:")
print(f"  RespiratoryDistress now : {real.entry('RespiratoryDistress').state}"
      f"  p={max(real.entry('RespiratoryDistress').distribution):.3f}")
print(f"  RespiratoryDistress hypo: {hypo.entry('RespiratoryDistress').state}"
      f"  p={max(hypo.entry('RespiratoryDistress').distribution):.3f}")
print(f"  ledger untouched: {assess(ledger, spec, now=18_251) == real}")
