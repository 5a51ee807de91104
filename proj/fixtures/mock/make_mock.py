"""Builds the scripted completions used by the end-to-end and mini-run fixtures.

Run from the repository root: python3 fixtures/mock/make_mock.py
"""
import json
import os

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
problems = [json.loads(l) for l in open(os.path.join(ROOT, "corpus.jsonl"))]


def read(rel):
    with open(os.path.join(ROOT, rel), encoding="utf-8") as f:
        return f.read().rstrip("\n")


def zero(ret):
    if ret.startswith("List") or ret.startswith("Array"):
        return "[]"
    return {"Bool": "False", "String": '""'}.get(ret, "0")


def py_signature(p):
    hints = {"Int": "int", "Nat": "int", "Bool": "bool", "String": "str"}

    def hint(t):
        t = t.strip()
        if t.startswith("(") and t.endswith(")"):
            t = t[1:-1]
        if t.startswith("List ") or t.startswith("Array "):
            return "list[" + hint(t.split(" ", 1)[1]) + "]"
        return hints[t]

    params = ", ".join(f"{q['name']}: {hint(q['type'])}" for q in p["params"])
    return f"def {p['function_name']}({params}) -> {hint(p['return_type'])}:"


def post_clause(ret):
    if ret.startswith("List"):
        return "@deal.post(lambda result: isinstance(result, list))"
    if ret == "Bool":
        return "@deal.post(lambda result: isinstance(result, bool))"
    return "@deal.post(lambda result: result >= 0)"


def python_variant(p, kind):
    ref = read(f"python/{p['id']}.py")
    if kind == "good":
        body = ref
    elif kind == "wrong":
        body = py_signature(p) + "\n    return " + zero(p["return_type"])
    elif kind == "contract":
        body = "import deal\n\n\n" + post_clause(p["return_type"]) + "\n" + ref
    elif kind == "noblock":
        return "I would iterate over the input and accumulate the answer."
    else:
        raise ValueError(kind)
    return "Reasoning about the task step by step.\n\n<python>\n" + body + "\n</python>\n"


LEAN_DIAGNOSTICS = {
    "type": "type mismatch: this term has type Nat but is expected to have type Int",
    "unknown": "unknown identifier 'List.sumBy'",
    "termination": "fail to show termination for the recursive definition",
    "syntax": "unexpected token 'at'; expected term",
}


def lean_variant(p, kind):
    good = read(f"lean_solutions/{p['id']}.lean")
    if kind == "good":
        body = good
    elif kind in LEAN_DIAGNOSTICS:
        body = f"-- fixture-diagnostic: {LEAN_DIAGNOSTICS[kind]}\n" + good
    elif kind == "guardfail":
        body = "-- fixture-guard-fail\n" + good
    elif kind == "sorry":
        head = good.split(":=", 1)[0]
        body = head + ":=\n  sorry"
    elif kind == "noblock":
        return "The function folds over the input and returns the accumulated value."
    else:
        raise ValueError(kind)
    return "Translating the reasoning into Lean4.\n\n```lean\n" + body + "\n```\n"


# (model, strategy) -> list of (round or None, per-sample kinds or a single kind)
PLAN = {
    ("model-alpha", "Code/Direct"): [(1, ["good", "type", "good", "good", "unknown"]), (None, "good")],
    ("model-alpha", "Code/HaskellFunctional"): [(1, ["termination", "good", "sorry", "good", "noblock"]),
                                                (2, "type"), (None, "good")],
    ("model-alpha", "Spec/Direct"): [(1, ["good", "wrong", "good", "noblock", "good"]), (None, "good")],
    ("model-alpha", "Spec/DesignByContract"): [(1, ["wrong", "contract", "wrong", "contract", "contract"]),
                                               (2, "wrong"), (None, "contract")],
    ("model-beta", "Code/Direct"): [(1, ["type", "type", "good", "unknown", "guardfail"]), (2, "syntax"),
                                    (None, "good")],
    ("model-beta", "Code/HaskellFunctional"): [(1, ["sorry", "sorry", "sorry", "good", "type"]), (None, "sorry")],
    ("model-beta", "Spec/Direct"): [(1, ["wrong", "wrong", "good", "wrong", "noblock"]), (None, "wrong")],
    ("model-beta", "Spec/DesignByContract"): [(1, ["contract", "wrong", "contract", "wrong", "contract"]),
                                              (None, "contract")],
}

# Problems where model-beta never recovers on Code/Direct.
HARD_FOR_BETA = {"dp-002", "trees-002"}

entries = []
for p in problems:
    for (model, strategy), plan in PLAN.items():
        make = python_variant if strategy.startswith("Spec/") else lean_variant
        for rnd, kinds in plan:
            if model == "model-beta" and strategy == "Code/Direct" and p["id"] in HARD_FOR_BETA and rnd is None:
                kinds = "type"
            e = {"key": p["id"], "model": model, "strategy": strategy}
            if rnd is not None:
                e["round"] = rnd
            if isinstance(kinds, list):
                e["texts"] = [make(p, k) for k in kinds]
            else:
                e["text"] = make(p, kinds)
            entries.append(e)

with open(os.path.join(ROOT, "mock", "e2e.jsonl"), "w", encoding="utf-8") as f:
    for e in entries:
        f.write(json.dumps(e, ensure_ascii=False) + "\n")
print(len(entries), "entries")
