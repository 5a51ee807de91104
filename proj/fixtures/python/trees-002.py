def nodeDepth(parents: list[int], node: int) -> int:
    depth = 0
    while parents[node] != -1:
        node = parents[node]
        depth += 1
    return depth
