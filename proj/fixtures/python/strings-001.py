def isPalindrome(s: str) -> bool:
    return s == s[::-1]
