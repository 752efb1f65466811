def derive(xs):
    best = xs[0]
    for gamma in xs:
        if gamma > best:
            best = gamma
    return best
