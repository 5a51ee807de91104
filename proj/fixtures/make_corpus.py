"""Writes corpus.jsonl from the table below. Expected values are written by hand."""
import json

P = []

def add(pid, title, statement, fn, params, ret, tests, category, difficulty):
    P.append({
        "id": pid, "title": title, "statement": statement, "function_name": fn,
        "params": [{"name": n, "type": t} for n, t in params], "return_type": ret,
        "tests": tests, "category": category, "difficulty": difficulty,
    })

def t(inputs, expected, unordered=False):
    d = {"inputs": inputs, "expected": expected}
    if unordered:
        d["unordered"] = True
    return d

add("arrays-001", "Running sum",
    "Return the list whose i-th element is the sum of the first i+1 elements of xs.",
    "runningSum", [("xs", "List Int")], "List Int",
    [t(["[1,2,3,4]"], "[1,3,6,10]"), t(["[]"], "[]"), t(["[5]"], "[5]"), t(["[3,-1,-2,7]"], "[3,2,0,7]")],
    "arrays", "easy")
add("arrays-002", "Count above threshold",
    "Count how many elements of xs are strictly greater than t.",
    "countGreater", [("xs", "List Int"), ("t", "Int")], "Nat",
    [t(["[1,5,3,8]", "3"], "2"), t(["[]", "0"], "0"), t(["[-2,-1,0]", "-2"], "2"), t(["[4,4,4]", "4"], "0")],
    "arrays", "easy")
add("strings-001", "Palindrome check",
    "Decide whether s reads the same forwards and backwards.",
    "isPalindrome", [("s", "String")], "Bool",
    [t(['"racecar"'], "true"), t(['""'], "true"), t(['"ab"'], "false"), t(['"abba"'], "true")],
    "strings", "easy")
add("strings-002", "Vowel count",
    "Count the characters of s that are lowercase vowels (a, e, i, o, u).",
    "countVowels", [("s", "String")], "Nat",
    [t(['"hello"'], "2"), t(['""'], "0"), t(['"rhythm"'], "0"), t(['"aeiou"'], "5")],
    "strings", "easy")
add("graphs-001", "Reachable nodes",
    "Nodes are 0..n-1 and each edge [u, v] points from u to v. Return every node reachable from start, start included.",
    "reachable", [("n", "Nat"), ("edges", "List (List Nat)"), ("start", "Nat")], "List Nat",
    [t(["4", "[[0,1],[1,2]]", "0"], "[0,1,2]", True), t(["3", "[]", "2"], "[2]", True),
     t(["4", "[[0,1],[2,3],[3,0]]", "2"], "[0,1,2,3]", True), t(["3", "[[1,0]]", "0"], "[0]", True)],
    "graphs", "medium")
add("graphs-002", "Out-degrees",
    "Nodes are 0..n-1 and each edge [u, v] points from u to v. Return the out-degree of every node in order.",
    "outDegrees", [("n", "Nat"), ("edges", "List (List Nat)")], "List Nat",
    [t(["3", "[[0,1],[0,2],[1,2]]"], "[2,1,0]"), t(["2", "[]"], "[0,0]"), t(["1", "[[0,0]]"], "[1]"),
     t(["4", "[[3,0],[3,1],[3,2]]"], "[0,0,0,3]")],
    "graphs", "easy")
add("dp-001", "Climbing stairs",
    "Count the distinct ways to climb n steps taking 1 or 2 steps at a time.",
    "climbStairs", [("n", "Nat")], "Nat",
    [t(["0"], "1"), t(["1"], "1"), t(["5"], "8"), t(["10"], "89")],
    "dynamic-programming", "easy")
add("dp-002", "Maximum non-adjacent sum",
    "Return the largest sum of elements of xs such that no two chosen elements are adjacent.",
    "maxNonAdjacent", [("xs", "List Nat")], "Nat",
    [t(["[2,7,9,3,1]"], "12"), t(["[]"], "0"), t(["[5]"], "5"), t(["[5,1,1,5]"], "10")],
    "dynamic-programming", "medium")
add("numerical-001", "Greatest common divisor",
    "Return the greatest common divisor of a and b, with gcd(0, 0) = 0.",
    "gcd", [("a", "Nat"), ("b", "Nat")], "Nat",
    [t(["12", "18"], "6"), t(["0", "7"], "7"), t(["17", "5"], "1"), t(["0", "0"], "0")],
    "numerical", "easy")
add("numerical-002", "Digit sum",
    "Return the sum of the decimal digits of n.",
    "digitSum", [("n", "Nat")], "Nat",
    [t(["0"], "0"), t(["9"], "9"), t(["1234"], "10"), t(["1000001"], "2")],
    "numerical", "easy")
add("trees-001", "Complete tree height",
    "A complete binary tree has n nodes. Return its height counted in levels (0 for the empty tree).",
    "treeHeight", [("n", "Nat")], "Nat",
    [t(["0"], "0"), t(["1"], "1"), t(["3"], "2"), t(["4"], "3")],
    "trees", "easy")
add("trees-002", "Node depth",
    "parents[i] is the parent of node i, or -1 for the root. Return the number of edges from node to the root.",
    "nodeDepth", [("parents", "List Int"), ("node", "Nat")], "Nat",
    [t(["[-1,0,0,1]", "3"], "2"), t(["[-1]", "0"], "0"), t(["[1,-1,1,2]", "3"], "2"), t(["[2,0,-1]", "1"], "2")],
    "trees", "medium")

with open("corpus.jsonl", "w") as f:
    for p in P:
        f.write(json.dumps(p, ensure_ascii=False) + "\n")
