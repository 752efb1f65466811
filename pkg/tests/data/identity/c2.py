def derive(n):
    s = 0
    for i in range(n):
        s = s + i * 5
    return s
