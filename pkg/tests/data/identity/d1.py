def derive(n):
    if n <= 1:
        return 1
    return n * derive(n - 1) % 7
