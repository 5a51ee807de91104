"""Stand-in for the Lean compiler used to record fixture transcripts.

It does not elaborate anything. Comments of the form
    -- fixture-diagnostic: <message>
become an error on the following line, "-- fixture-guard-fail" fails the first #guard,
and every uncommented `sorry` produces the usual warning.
"""
import re
import sys

path = sys.argv[1]
lines = open(path, encoding="utf-8").read().split("\n")
out = []
failed = False

for i, line in enumerate(lines, start=1):
    m = re.search(r"--\s*fixture-diagnostic:\s*(.*)$", line)
    if m:
        col = len(lines[i]) - len(lines[i].lstrip()) if i < len(lines) else 0
        out.append(f"{path}:{i + 1}:{col}: error: {m.group(1)}")
        failed = True

if any("fixture-guard-fail" in l for l in lines):
    for i, line in enumerate(lines, start=1):
        if line.startswith("#guard"):
            expr = line[len("#guard "):]
            out.append(f"{path}:{i}:0: error: Expression\n  {expr}\ndid not evaluate to `true`")
            failed = True
            break

decl = None
for i, line in enumerate(lines, start=1):
    code = line.split("--", 1)[0]
    if re.match(r"(theorem|def|lemma)\s", code):
        decl = i
    if re.search(r"\bsorry\b", code) and decl is not None:
        out.append(f"{path}:{decl}:0: warning: declaration uses 'sorry'")
        decl = None

if out:
    print("\n".join(out))
sys.exit(1 if failed else 0)
