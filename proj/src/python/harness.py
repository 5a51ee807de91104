import ast
import inspect
import json
import os
import random
import signal
import sys
import textwrap
import traceback

WORKDIR = os.path.realpath(os.getcwd())


def _inside(path):
    try:
        p = os.path.realpath(os.path.join(WORKDIR, os.fsdecode(path)))
    except (TypeError, ValueError):
        return False
    return p == WORKDIR or p.startswith(WORKDIR + os.sep)


def _audit(event, args):
    if event == "open":
        path, mode, flags = args
        if isinstance(path, int):
            return
        writing = False
        if isinstance(mode, str):
            writing = any(c in mode for c in "wax+")
        elif isinstance(flags, int):
            writing = bool(flags & (os.O_WRONLY | os.O_RDWR | os.O_CREAT | os.O_APPEND | os.O_TRUNC))
        if writing and not _inside(path):
            raise PermissionError("sandbox: write outside working directory: %s" % (path,))
    elif event in ("os.remove", "os.unlink", "os.rmdir", "os.mkdir", "os.rename", "os.replace", "os.chmod",
                   "os.symlink", "os.link", "os.truncate", "shutil.rmtree", "shutil.copyfile", "shutil.move"):
        for a in args:
            if isinstance(a, (str, bytes, os.PathLike)) and not _inside(a):
                raise PermissionError("sandbox: %s outside working directory" % event)
    elif event in ("subprocess.Popen", "os.system", "os.exec", "os.posix_spawn", "os.spawn", "os.fork",
                   "os.forkpty", "pty.spawn", "socket.connect", "socket.bind"):
        raise PermissionError("sandbox: %s is not allowed" % event)


class CallTimeout(BaseException):
    pass


def bounded(budget, f, *args):
    """Runs f(*args), raising CallTimeout after `budget` seconds."""
    def on_alarm(signum, frame):
        raise CallTimeout("call exceeded %.1fs" % budget)

    previous = signal.signal(signal.SIGALRM, on_alarm)
    signal.setitimer(signal.ITIMER_REAL, budget)
    try:
        return f(*args)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


def emit(record):
    sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    sys.stdout.flush()


def normalize(v):
    if isinstance(v, (list, tuple)):
        return [normalize(x) for x in v]
    return v


def same(a, b):
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return False


def sort_key(v):
    return json.dumps(v, sort_keys=True)


def literal_text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(literal_text(x) for x in v) + "]"
    return "<%s %r>" % (type(v).__name__, v)


def zero_of(t):
    return {"Int": 0, "Nat": 0, "Bool": False, "String": ""}.get(t["kind"], [])


def alt_of(t):
    k = t["kind"]
    if k in ("Int", "Nat"):
        return 1
    if k == "Bool":
        return True
    if k == "String":
        return "a"
    return [zero_of(t["elem"])]


def gen_value(rng, t):
    # small values most of the time so edge cases (0, negatives, duplicates) come up often
    k = t["kind"]
    if k == "Int":
        return rng.randint(-10, 10) if rng.random() < 0.75 else rng.randint(-10**6, 10**6)
    if k == "Nat":
        return rng.randint(0, 10) if rng.random() < 0.75 else rng.randint(0, 10**6)
    if k == "Bool":
        return rng.random() < 0.5
    if k == "String":
        return "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(rng.randint(0, 12)))
    items = [gen_value(rng, t["elem"]) for _ in range(rng.randint(0, 8))]
    if rng.random() < 0.3 and all(isinstance(x, (int, str)) for x in items):
        items.sort()  # sortedness preconditions are common
    return items


def load(job):
    sys.path.insert(0, WORKDIR)
    import deal  # the shim in the working directory
    namespace = {"__name__": "candidate", "__file__": os.path.join(WORKDIR, "candidate.py")}
    with open("candidate.py", encoding="utf-8") as fh:
        source = fh.read()
    code = compile(source, "candidate.py", "exec")
    sys.modules["candidate"] = type(sys)("candidate")
    exec(code, namespace)
    sys.modules["candidate"].__dict__.update(namespace)
    fn = namespace.get(job["function"])
    if not callable(fn):
        raise NameError("function %r is not defined" % job["function"])
    return deal, fn, namespace, source


def classify_exc(deal, exc):
    if isinstance(exc, deal.PreContractError):
        return "pre"
    if isinstance(exc, (deal.PostContractError, deal.RaisesContractError)):
        return "post"
    if isinstance(exc, (deal.InvContractError, AssertionError)):
        return "inv"
    return "fault"


def run_tests(job, deal, fn):
    for i, test in enumerate(job["tests"]):
        try:
            got = normalize(fn(*[normalize(x) for x in test["inputs"]]))
        except Exception as exc:
            emit({"kind": "test", "index": i, "status": "error",
                  "error": "%s: %s" % (type(exc).__name__, exc)})
            continue
        want = test["expected"]
        a, b = got, want
        if test.get("unordered") and isinstance(a, list) and isinstance(b, list):
            a, b = sorted(a, key=sort_key), sorted(b, key=sort_key)
        emit({"kind": "test", "index": i, "status": "pass" if same(a, b) else "fail",
              "observed": literal_text(got)})


def run_contracts(job, deal, fn):
    rng = random.Random(job["seed"])
    for i in range(job["trials"]):
        args = [gen_value(rng, t) for t in job["params"]]
        try:
            bounded(job["call_budget"], fn, *args)
            outcome, detail = "ok", ""
        except CallTimeout as exc:
            outcome, detail = "fault", str(exc)
        except Exception as exc:
            outcome, detail = classify_exc(deal, exc), "%s: %s" % (type(exc).__name__, exc)
        emit({"kind": "trial", "index": i, "outcome": outcome, "detail": detail})


FLIP = {ast.Lt: ast.GtE, ast.GtE: ast.Lt, ast.LtE: ast.Gt, ast.Gt: ast.LtE, ast.Eq: ast.NotEq,
        ast.NotEq: ast.Eq, ast.In: ast.NotIn, ast.NotIn: ast.In, ast.Is: ast.IsNot, ast.IsNot: ast.Is}


class _Flipper(ast.NodeTransformer):
    def __init__(self, target):
        self.target = target
        self.seen = 0

    def visit_Assert(self, node):
        return node

    def visit_Lambda(self, node):
        return node

    def visit_Compare(self, node):
        self.generic_visit(node)
        if self.seen == self.target:
            node.ops = [FLIP[type(node.ops[0])]()] + node.ops[1:]
        self.seen += 1
        return node


def comparison_mutants(raw, namespace):
    try:
        src = textwrap.dedent(inspect.getsource(raw))
        tree = ast.parse(src)
    except (OSError, TypeError, SyntaxError):
        return []
    fdef = next((n for n in tree.body if isinstance(n, (ast.FunctionDef, ast.AsyncFunctionDef))), None)
    if fdef is None:
        return []
    fdef.decorator_list = []
    counter = _Flipper(-1)
    counter.visit(ast.parse(ast.unparse(fdef)))
    out = []
    for k in range(counter.seen):
        mutated = _Flipper(k).visit(ast.parse(ast.unparse(fdef)))
        ast.fix_missing_locations(mutated)
        scope = dict(namespace)
        exec(compile(mutated, "<mutant>", "exec"), scope)
        out.append(("flip_comparison_%d" % (k + 1), scope[fdef.name]))
    return out


def shift(v, up):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return v + 1 if up else v - 1
    if isinstance(v, (list, str)):
        if up:
            return v[1:] + v[:1]
        return v[:-1]
    return v


def negate(v):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return -v if v else 1
    if isinstance(v, (list, str)):
        return v[::-1]
    return v


def perturb(v, rng):
    if isinstance(v, bool):
        return not v
    if isinstance(v, int):
        return v + rng.randint(2, 9)
    if isinstance(v, list):
        out = list(v)
        rng.shuffle(out)
        return out if out != v or len(v) < 2 else out[1:] + out[:1]
    if isinstance(v, str):
        return v + rng.choice("abcdefghijklmnopqrstuvwxyz")
    return v


def build_mutants(job, raw, namespace):
    ret = job["return_type"]
    zero, alt = zero_of(ret), alt_of(ret)
    pool = [
        ("const_default", lambda *a, **k: zero),
        ("const_alternate", lambda *a, **k: alt),
        ("off_by_one_up", lambda *a, **k: shift(normalize(raw(*a, **k)), True)),
        ("off_by_one_down", lambda *a, **k: shift(normalize(raw(*a, **k)), False)),
    ]
    pool.extend(comparison_mutants(raw, namespace))
    # output-level fallbacks keep the pool full when the body has few comparisons
    rng = random.Random(job["seed"] ^ 0x5EED)
    pool.append(("negate_output", lambda *a, **k: negate(normalize(raw(*a, **k)))))
    pool.append(("perturb_output", lambda *a, **k: perturb(normalize(raw(*a, **k)), rng)))
    return pool[: job["mutants"]]


def run_vacuity(job, deal, fn, namespace):
    rng = random.Random(job["seed"])
    inputs = [[normalize(x) for x in t["inputs"]] for t in job["tests"]]
    inputs += [[gen_value(rng, t) for t in job["params"]] for _ in range(job["trials"])]
    contracts = deal.contracts_of(fn)
    raw = deal.raw_function(fn)

    admitted = []
    for args in inputs:
        try:
            bounded(job["call_budget"], deal.check_call, contracts, raw, args)
            admitted.append(args)
        except CallTimeout:
            continue
        except Exception as exc:
            kind = classify_exc(deal, exc)
            if kind == "pre":
                continue
            if kind in ("post", "inv"):
                emit({"kind": "reference", "inconsistent": True,
                      "detail": "reference violates its own contract on %s: %s" % (literal_text(args), exc)})
                return
            admitted.append(args)  # plain faults are not contract verdicts
    emit({"kind": "reference", "inconsistent": False, "admitted": len(admitted)})

    mutants = build_mutants(job, raw, namespace)
    if not mutants:
        emit({"kind": "mutant_error", "error": "no mutant could be constructed"})
        return
    for name, mutant in mutants:
        rejected, by = False, ""
        for args in admitted:
            try:
                bounded(job["call_budget"], deal.check_call, contracts, mutant, args)
            except CallTimeout:
                continue
            except Exception as exc:
                kind = classify_exc(deal, exc)
                if kind in ("post", "inv"):
                    rejected, by = True, kind
                    break
        emit({"kind": "mutant", "name": name, "rejected": rejected, "by": by})


def main():
    with open("job.json", encoding="utf-8") as fh:
        job = json.load(fh)
    sys.addaudithook(_audit)
    try:
        deal, fn, namespace, _ = load(job)
    except BaseException as exc:
        emit({"kind": "load_error", "error": "".join(traceback.format_exception_only(type(exc), exc)).strip()})
        return
    mode = job["mode"]
    if mode == "tests":
        run_tests(job, deal, fn)
    elif mode == "contracts":
        run_contracts(job, deal, fn)
    else:
        run_vacuity(job, deal, fn, namespace)
    emit({"kind": "done"})


if __name__ == "__main__":
    main()
