def compute(alpha):
    if alpha is None:
        return 0
    out = len(alpha)
    record(out)
    return out
