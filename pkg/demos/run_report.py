"""Drive the command-line harness in process and inspect its JSON report."""

import json

from qseries.cli import RunConfig, _emit, cmd_suite

cfg = RunConfig(samples=5, seed=1, only=("JTP", "QMEHLER", "LAMBERT"))
report = cmd_suite(cfg)
text = _emit(report, None)
body = json.loads(text)

print("summary:", body["summary"])
print("first result record:")
print(json.dumps(body["results"][0], indent=2))

# identical configs reproduce the report byte for byte
again = _emit(cmd_suite(cfg), None)
print("byte-identical rerun:", text == again)
