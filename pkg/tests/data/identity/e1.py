def solve(xs):
    best = xs[0]
    for delta in xs:
        if delta > best:
            best = delta
    return best
