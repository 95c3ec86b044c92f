"""Reference placement generator used to freeze expected positions in
test_topology.cpp. Independent of the C++ code: SplitMix64 written from
its published definition, doubles as (next >> 11) * 2**-53."""
import sys

MASK = (1 << 64) - 1


def splitmix64(seed):
    state = seed & MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def placements(n, width, height, seed):
    gen = splitmix64(seed)
    out = []
    for _ in range(n):
        x = (next(gen) >> 11) * 2.0**-53 * width
        y = (next(gen) >> 11) * 2.0**-53 * height
        out.append((x, y))
    return out


if __name__ == "__main__":
    n, w, h, seed = (int(a) for a in sys.argv[1:5]) if len(sys.argv) == 5 else (5, 100, 100, 3)
    for i, (x, y) in enumerate(placements(n, w, h, seed)):
        print(f"{i} {x!r} {y!r}")
