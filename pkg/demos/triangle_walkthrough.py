"""Walk the Triangle class through every stage of the pipeline.

    python demos/triangle_walkthrough.py [out_dir]
"""

import sys
import tempfile
from pathlib import Path

from vdm_oracle import (
    Context, bundled_spec_text, expected_result, map_class, parse_class, pretty_print,
    render_outcome, split_inputs, transpile, write_units,
)

cls = parse_class(bundled_spec_text("triangle"))
print(pretty_print(cls))
print()

ctx = Context(cls)
for text in ["2,3,4", "2,2,3", "4,4,4", "1,1,5", "'A',2,3", "M+1,M-1,M", ""]:
    verdict = render_outcome(expected_result(ctx, "classify", split_inputs(text)))
    print(f"classify [{text}] -> {verdict}")
print()

model = map_class(cls)
print(f"target model {model.name}")
for kind, name, access, arity in model.members():
    print(f"  {access:9} {kind:8} {name}/{arity}")
print()

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="oracle-"))
for path in write_units(transpile(model, "Triangle"), out):
    print("wrote", path)
