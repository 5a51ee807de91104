"""Writes labeled_transcripts.jsonl: compiler output in Lean's message format with the error
classes a reader assigns to each. Labels were decided by hand from the message text."""
import json

F = "Candidate.lean"
R = []


def add(name, source, output, labels, exit_code=None):
    if exit_code is None:
        exit_code = 1 if ": error:" in output else 0
    R.append({"name": name, "source": source, "exit_code": exit_code, "output": output, "labels": sorted(labels)})


SRC = "def f (n : Nat) : Nat :=\n  n + 1\n"

add("syntax-unexpected-token", "def f (n : Nat) : Nat :=\n  n + at\n",
    f"{F}:2:6: error: unexpected token 'at'; expected term\n", ["Syntax"])
add("syntax-end-of-input", "def f (n : Nat) : Nat\n",
    f"{F}:2:0: error: unexpected end of input; expected ':=', 'where' or '|'\n", ["Syntax"])
add("syntax-unexpected-identifier", "def f (n : Nat) : Nat := n\nthis is prose\n",
    f"{F}:2:0: error: unexpected identifier; expected command\n", ["Syntax"])
add("syntax-close-paren", "def f (n : Nat) : Nat := (n + )\n",
    f"{F}:1:30: error: unexpected token ')'; expected term\n", ["Syntax"])
add("type-mismatch", "def isPalindrome (s : String) : Bool :=\n  s.length\n",
    f"{F}:2:2: error: type mismatch\n  s.length\nhas type\n  Nat : Type\nbut is expected to have type\n  Bool : Type\n",
    ["Type"])
add("type-application-mismatch", "def g (xs : List Int) : Int :=\n  List.sum (xs.map Int.toNat)\n",
    f"{F}:2:2: error: application type mismatch\n  List.sum (List.map Int.toNat xs)\nargument\n  List.map Int.toNat xs\n"
    "has type\n  List Nat : Type\nbut is expected to have type\n  List Int : Type\n", ["Type"])
add("type-failed-to-synthesize", "def h (a : Nat) (b : Int) : Nat :=\n  a + b\n",
    f"{F}:2:2: error: failed to synthesize\n  HAdd Nat Int Nat\nAdditional diagnostic information may be available "
    "using the `set_option diagnostics true` command.\n", ["Type"])
add("type-expected-type", "def k : Nat := fun x => x\n",
    f"{F}:1:15: error: type mismatch\n  fun x => ?m.5 x\nhas type\n  (x : ?m.3) → ?m.6 x : Sort (imax ?u.2 ?u.4)\n"
    "but is expected to have type\n  Nat : Type\n", ["Type"])
add("termination-structural", "def loop (n : Nat) : Nat :=\n  loop (n + 1)\n",
    f"{F}:1:4: error: fail to show termination for\n  loop\nwith errors\nfailed to infer structural recursion:\n"
    "Cannot use parameter n:\n  failed to eliminate recursive application\n    loop (n + 1)\n", ["Termination"])
add("termination-wf", "def digitSum (n : Nat) : Nat :=\n  if n < 10 then n else n % 10 + digitSum (n / 10)\n",
    f"{F}:2:34: error: failed to prove termination, possible solutions:\n"
    "  - Use `have`-expressions to prove the remaining goals\n"
    "  - Use `termination_by` to specify a different well-founded relation\n"
    "  - Use `decreasing_by` to specify your own tactic for discharging this kind of goal\nn : Nat\n⊢ n / 10 < n\n",
    ["Termination"])
add("termination-structural-cannot", "def ack : Nat → Nat → Nat\n  | 0, n => n + 1\n  | m + 1, n => ack m (ack (m + 1) n)\n",
    f"{F}:1:4: error: structural recursion cannot be used\n", ["Termination"])
add("unknown-identifier", "def s (xs : List Nat) : Nat :=\n  List.sumBy xs id\n",
    f"{F}:2:2: error: unknown identifier 'List.sumBy'\n", ["UnknownIdentifier"])
add("unknown-constant", "theorem t : Nat.fooBar 0 = 0 := rfl\n",
    f"{F}:1:12: error: unknown constant 'Nat.fooBar'\n", ["UnknownIdentifier"])
add("unknown-local-helper", "def main' (n : Nat) : Nat :=\n  helper n\n",
    f"{F}:2:2: error: unknown identifier 'helper'\n", ["UnknownIdentifier"])
add("sorry-warning", "def f (n : Nat) : Nat :=\n  sorry\n",
    f"{F}:1:4: warning: declaration uses 'sorry'\n", ["SorryPresent"])
add("sorry-in-theorem", SRC + "\ntheorem f_pos (n : Nat) : f n > 0 := by\n  sorry\n",
    f"{F}:4:8: warning: declaration uses 'sorry'\n", ["SorryPresent"])
add("sorry-source-only", "def f (n : Nat) : Nat :=\n  sorry\n\ndef g : Nat := (\n",
    f"{F}:5:0: error: unexpected end of input; expected term\n", ["Syntax", "SorryPresent"])
add("sorry-in-comment-only", "-- TODO: remove sorry later\ndef f (n : Nat) : Nat := n /- sorry -/\n",
    "", [])
add("type-and-sorry", "def f (n : Nat) : Bool :=\n  n\n\ntheorem t : True := by\n  sorry\n",
    f"{F}:2:2: error: type mismatch\n  n\nhas type\n  Nat : Type\nbut is expected to have type\n  Bool : Type\n"
    f"{F}:4:8: warning: declaration uses 'sorry'\n", ["Type", "SorryPresent"])
add("unknown-and-syntax", "def f (n : Nat) : Nat :=\n  frob n\n\ndef g := )\n",
    f"{F}:2:2: error: unknown identifier 'frob'\n{F}:4:9: error: unexpected token ')'; expected term\n",
    ["UnknownIdentifier", "Syntax"])
add("termination-and-type", "def loop (n : Nat) : Bool :=\n  loop (n + 1)\n\ndef h : Nat := true\n",
    f"{F}:1:4: error: fail to show termination for\n  loop\nwith errors\nfailed to infer structural recursion\n"
    f"{F}:4:15: error: type mismatch\n  true\nhas type\n  Bool : Type\nbut is expected to have type\n  Nat : Type\n",
    ["Termination", "Type"])
add("unused-variable-warning", "def f (n : Nat) (m : Nat) : Nat := n\n",
    f"{F}:1:17: warning: unused variable `m`\nnote: this linter can be disabled with `set_option linter.unusedVariables false`\n",
    [])
add("info-message-ignored", SRC + "#eval f 1\n", f"{F}:3:0: info: 2\n", [])
add("kernel-error-other", "def f : Nat := by exact?\n",
    f"{F}:1:0: error: (kernel) declaration has metavariables 'f'\n", ["Other"])
add("clean", SRC, "", [])

with open("labeled_transcripts.jsonl", "w", encoding="utf-8") as f:
    for r in R:
        f.write(json.dumps(r, ensure_ascii=False) + "\n")
print(len(R), "transcripts")
