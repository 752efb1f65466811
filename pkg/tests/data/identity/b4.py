def solve(omega):
    if omega is None:
        return 0
    out = len(omega)
    record(out)
    return out
