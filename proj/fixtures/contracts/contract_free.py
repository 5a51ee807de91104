from typing import List

def dafny_style_solution(data: List[int]) -> List[int]:
    return sorted(abs(x) for x in data)
