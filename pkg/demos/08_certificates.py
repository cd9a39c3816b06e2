"""Self-contained certificate documents: emit, serialize, re-verify, tamper.

A document embeds the space, basis, and witnesses, so anyone can re-check it
without the construction code; the verifier re-derives every check from the
document alone and catches any tampering.
"""

import json

from lipcert import certdoc
from lipcert.construct import evaluation_embedding, four_point_basis
from lipcert.metric import PointedMetricSpace

eq4 = PointedMetricSpace.from_matrix([[int(i != j) for j in range(4)] for i in range(4)])
_, _, cert = four_point_basis(eq4)
doc = certdoc.l1_document(cert)
print("document kinds supported:", ", ".join(certdoc.CERTIFICATE_KINDS))
print("emitted l1-isometry certificate,", len(certdoc.dumps(doc)), "bytes")

report = certdoc.verify_document(doc)
print("verification:", "ok" if report.ok else "FAILED", "-", report.recomputed)

# Round-trip through JSON text: still verifies.
again = json.loads(certdoc.dumps(doc))
assert certdoc.verify_document(again).ok

# Tamper with a witness pair: the verifier names the failing check.
tampered = json.loads(certdoc.dumps(doc))
tampered["checks"]["signs"]["witnesses"][0]["pair"] = [2, 0]
report = certdoc.verify_document(tampered)
print("tampered document:")
for failure in report.failures:
    print("  -", failure)

# The evaluation embedding of l1^2 over its dual ball, as a document.
emb = evaluation_embedding("l1", 2)
doc2 = certdoc.l1_document(emb.certificate, config={"target": "l1", "d": 2})
print("eval-embed certificate verdict:", certdoc.verify_document(doc2).recomputed)
