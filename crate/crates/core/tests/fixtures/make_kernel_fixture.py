# Builds the kernel-point scan fixture on y^2 = x^3 + 17 with independent
# points P = (-2,3), Q = (2,5) and Gamma generated by (Q, Q).
# Coordinates come from PARI; the manifest of expected HITs from integer
# linear algebra on coefficients with respect to (P, Q).
import itertools
import cypari2

pari = cypari2.Pari()
E = pari.ellinit([0, 0, 0, 0, 17])
P, Q = [-2, 3], [2, 5]
assert pari.elltors(E)[0] == 1

POINTS = [
    ((1, 0), (2, 0)),
    ((0, 1), (0, 1)),
    ((1, 1), (-1, 0)),
    ((2, 1), (1, 0)),
    ((1, -1), (1, 1)),
    ((0, 2), (0, 1)),
    ((3, 0), (0, 0)),
    ((1, 2), (-2, -1)),
]
GAMMA = ((0, 1), (0, 1))
BOX = 1
M_CAP = 2


def comb(k, m):
    R = pari.elladd(E, pari.ellmul(E, P, k), pari.ellmul(E, Q, m))
    if len(R) == 1:
        return "O"
    return f"{R[0]},{R[1]}"


def gauss_reduced(u, v):
    h = max(abs(u), abs(v))
    return h > 0 and h <= M_CAP and (u == h or v == h)


with open("kernel_points.txt", "w") as f:
    f.write("# y^2 = x^3 + 17, coordinates of ([k]P+[m]Q, [l]P+[n]Q)\n")
    for (a, b) in POINTS:
        f.write(f"{comb(*a)}; {comb(*b)}\n")

rows = []
for i, ((k, m), (l, n)) in enumerate(POINTS):
    for u, v in itertools.product(range(-M_CAP, M_CAP + 1), repeat=2):
        if not gauss_reduced(u, v):
            continue
        gp, gq = GAMMA[0][0] * u + GAMMA[1][0] * v, GAMMA[0][1] * u + GAMMA[1][1] * v
        for b in range(-BOX, BOX + 1):
            if u * k + v * l - b * gp == 0 and u * m + v * n - b * gq == 0:
                rows.append((i, f"[1x2] {u} {v}", b))
                break

with open("kernel_manifest.txt", "w") as f:
    f.write("# point_id phi witness\n")
    for i, phi, b in rows:
        f.write(f"{i}\t{phi}\t{b}\n")
