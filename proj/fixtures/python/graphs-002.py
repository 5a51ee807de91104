def outDegrees(n: int, edges: list[list[int]]) -> list[int]:
    deg = [0] * n
    for u, _ in edges:
        deg[u] += 1
    return deg
