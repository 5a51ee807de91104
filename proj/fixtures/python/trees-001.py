def treeHeight(n: int) -> int:
    return n.bit_length()
