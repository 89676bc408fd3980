"""Independent Dilithium (round-3 byte conventions) used to freeze test vectors.

Deliberately simple: hashlib for SHAKE, numpy schoolbook convolution for
ring products (no NTT), Python integers everywhere else. Prints digests of
keys and deterministic signatures for fixed seeds/messages.

    python3 reference_dilithium.py
"""
import hashlib
import numpy as np

Q, N, D = 8380417, 256, 13
PARAMS = {
    2: dict(k=4, l=4, eta=2, tau=39, beta=78, g1=1 << 17, g2=(Q - 1) // 88, omega=80),
    3: dict(k=6, l=5, eta=4, tau=49, beta=196, g1=1 << 19, g2=(Q - 1) // 32, omega=55),
    5: dict(k=8, l=7, eta=2, tau=60, beta=120, g1=1 << 19, g2=(Q - 1) // 32, omega=75),
}


def shake(fn, data, n):
    return fn(data).digest(n)


class Stream:
    def __init__(self, fn, data):
        self.fn, self.data, self.buf, self.pos = fn, data, b"", 0

    def byte(self):
        if self.pos >= len(self.buf):
            self.buf = shake(self.fn, self.data, max(1024, 2 * len(self.buf)))
        self.pos += 1
        return self.buf[self.pos - 1]


ZETA = 1753  # primitive 512th root of unity mod q


def _brv8(i):
    return int(format(i, "08b")[::-1], 2)


# NTT-domain slot i holds the evaluation at ZETA^(2*brv8(i)+1); the matrix
# below interpolates those 256 values back to coefficients directly.
_ROOTS = [pow(ZETA, 2 * _brv8(i) + 1, Q) for i in range(N)]
_N_INV = pow(N, Q - 2, Q)
_INTERP = np.array(
    [[pow(r, (2 * N - j) % (2 * N), Q) * _N_INV % Q for r in _ROOTS] for j in range(N)],
    dtype=np.int64,
)


def from_evaluations(values):
    v = np.array(values, dtype=np.int64) % Q
    out = np.zeros(N, dtype=np.int64)
    # chunk so partial sums stay below 2^63
    for lo in range(0, N, 64):
        out = (out + _INTERP[:, lo:lo + 64] @ v[lo:lo + 64]) % Q
    return [int(x) for x in out]


def mul(a, b):
    full = np.convolve(np.array(a, dtype=np.int64) % Q, np.array(b, dtype=np.int64) % Q)
    full = np.concatenate([full, np.zeros(2 * N - len(full), dtype=np.int64)])
    return [int(x) % Q for x in (full[:N] - full[N:]) % Q]


def add(a, b):
    return [(x + y) % Q for x, y in zip(a, b)]


def sub(a, b):
    return [(x - y) % Q for x, y in zip(a, b)]


def centered(x):
    x %= Q
    return x - Q if x > (Q - 1) // 2 else x


def bits_pack(values, width):
    acc, nbits = 0, 0
    for i, v in enumerate(values):
        assert 0 <= v < (1 << width)
        acc |= v << (i * width)
    return acc.to_bytes(len(values) * width // 8, "little")


def bits_unpack(data, width, count):
    acc = int.from_bytes(data, "little")
    return [(acc >> (i * width)) & ((1 << width) - 1) for i in range(count)]


def expand_a(rho, p):
    a = []
    for i in range(p["k"]):
        row = []
        for j in range(p["l"]):
            s = Stream(hashlib.shake_128, rho + bytes([j, i]))
            coeffs = []
            while len(coeffs) < N:
                t = s.byte() | s.byte() << 8 | (s.byte() & 0x7F) << 16
                if t < Q:
                    coeffs.append(t)
            row.append(from_evaluations(coeffs))
        a.append(row)
    return a


def eta_poly(seed, nonce, eta):
    s = Stream(hashlib.shake_256, seed + nonce.to_bytes(2, "little"))
    out = []
    while len(out) < N:
        b = s.byte()
        for t in (b & 15, b >> 4):
            if len(out) == N:
                break
            if eta == 2 and t < 15:
                out.append(2 - t % 5)
            elif eta == 4 and t < 9:
                out.append(4 - t)
    return out


def mask_poly(seed, nonce, p):
    width = 18 if p["g1"] == 1 << 17 else 20
    data = shake(hashlib.shake_256, seed + nonce.to_bytes(2, "little"), N * width // 8)
    return [p["g1"] - v for v in bits_unpack(data, width, N)]


def sample_in_ball(seed, tau):
    s = Stream(hashlib.shake_256, seed)
    signs = int.from_bytes(bytes(s.byte() for _ in range(8)), "little")
    c = [0] * N
    for i in range(N - tau, N):
        while True:
            j = s.byte()
            if j <= i:
                break
        c[i] = c[j]
        c[j] = 1 - 2 * (signs & 1)
        signs >>= 1
    return c


def power2round(r):
    r0 = r % (1 << D)
    if r0 > 1 << (D - 1):
        r0 -= 1 << D
    return (r - r0) >> D, r0


def decompose(r, alpha):
    r %= Q
    r0 = r % alpha
    if r0 > alpha // 2:
        r0 -= alpha
    if r - r0 == Q - 1:
        return 0, r0 - 1
    return (r - r0) // alpha, r0


def use_hint(h, r, alpha):
    m = (Q - 1) // alpha
    r1, r0 = decompose(r, alpha)
    if not h:
        return r1
    return (r1 + 1) % m if r0 > 0 else (r1 - 1) % m


def w1_bytes(w1, p):
    width = 6 if p["g2"] == (Q - 1) // 88 else 4
    return b"".join(bits_pack(poly, width) for poly in w1)


def keygen(level, zeta):
    p = PARAMS[level]
    seeds = shake(hashlib.shake_256, zeta, 128)
    rho, rho_p, key = seeds[:32], seeds[32:96], seeds[96:]
    a = expand_a(rho, p)
    s1 = [eta_poly(rho_p, i, p["eta"]) for i in range(p["l"])]
    s2 = [eta_poly(rho_p, p["l"] + i, p["eta"]) for i in range(p["k"])]
    t = []
    for i in range(p["k"]):
        acc = [x % Q for x in s2[i]]
        for j in range(p["l"]):
            acc = add(acc, mul(a[i][j], s1[j]))
        t.append(acc)
    t1 = [[power2round(x)[0] for x in poly] for poly in t]
    t0 = [[power2round(x)[1] for x in poly] for poly in t]
    pk = rho + b"".join(bits_pack(poly, 10) for poly in t1)
    tr = shake(hashlib.shake_256, pk, 32)
    ew = 3 if p["eta"] == 2 else 4
    sk = rho + key + tr
    sk += b"".join(bits_pack([p["eta"] - x for x in poly], ew) for poly in s1 + s2)
    sk += b"".join(bits_pack([(1 << 12) - x for x in poly], 13) for poly in t0)
    return pk, sk, dict(a=a, s1=s1, s2=s2, t0=t0, t1=t1, key=key, tr=tr)


def sign(level, internals, msg):
    p = PARAMS[level]
    a, s1, s2, t0 = internals["a"], internals["s1"], internals["s2"], internals["t0"]
    alpha = 2 * p["g2"]
    mu = shake(hashlib.shake_256, internals["tr"] + msg, 64)
    rho_p = shake(hashlib.shake_256, internals["key"] + mu, 64)
    kappa, iterations = 0, 0
    while True:
        iterations += 1
        y = [mask_poly(rho_p, kappa + i, p) for i in range(p["l"])]
        kappa += p["l"]
        w = []
        for i in range(p["k"]):
            acc = [0] * N
            for j in range(p["l"]):
                acc = add(acc, mul(a[i][j], y[j]))
            w.append(acc)
        w1 = [[decompose(x, alpha)[0] for x in poly] for poly in w]
        c_tilde = shake(hashlib.shake_256, mu + w1_bytes(w1, p), 32)
        c = sample_in_ball(c_tilde, p["tau"])
        z = [[centered(y[j][i] + mul(c, s1[j])[i]) for i in range(N)] for j in range(p["l"])]
        if max(abs(x) for poly in z for x in poly) >= p["g1"] - p["beta"]:
            continue
        cs2 = [mul(c, s) for s in s2]
        r = [sub(w[i], cs2[i]) for i in range(p["k"])]
        if max(abs(decompose(x, alpha)[1]) for poly in r for x in poly) >= p["g2"] - p["beta"]:
            continue
        ct0 = [mul(c, t) for t in t0]
        if max(abs(centered(x)) for poly in ct0 for x in poly) >= p["g2"]:
            continue
        # MakeHint(-ct0, w - cs2 + ct0): does adding -ct0 move the high bits?
        h = []
        for i in range(p["k"]):
            rr = add(r[i], ct0[i])
            h.append([decompose(rr[j], alpha)[0] != decompose(r[i][j], alpha)[0] for j in range(N)])
        if sum(map(sum, h)) > p["omega"]:
            continue
        zw = 18 if p["g1"] == 1 << 17 else 20
        sig = c_tilde + b"".join(bits_pack([p["g1"] - x for x in poly], zw) for poly in z)
        hint = bytearray(p["omega"] + p["k"])
        cnt = 0
        for i in range(p["k"]):
            for j in range(N):
                if h[i][j]:
                    hint[cnt] = j
                    cnt += 1
            hint[p["omega"] + i] = cnt
        return sig + bytes(hint), iterations


def verify(level, pk, msg, sig):
    p = PARAMS[level]
    alpha = 2 * p["g2"]
    rho = pk[:32]
    t1 = [bits_unpack(pk[32 + 320 * i: 32 + 320 * (i + 1)], 10, N) for i in range(p["k"])]
    zw = 18 if p["g1"] == 1 << 17 else 20
    c_tilde = sig[:32]
    zb = N * zw // 8
    z = [[p["g1"] - v for v in bits_unpack(sig[32 + zb * j: 32 + zb * (j + 1)], zw, N)] for j in range(p["l"])]
    hint = sig[32 + zb * p["l"]:]
    h, prev = [], 0
    for i in range(p["k"]):
        row = [False] * N
        for idx in range(prev, hint[p["omega"] + i]):
            row[hint[idx]] = True
        prev = hint[p["omega"] + i]
        h.append(row)
    if max(abs(x) for poly in z for x in poly) >= p["g1"] - p["beta"]:
        return False
    a = expand_a(rho, p)
    mu = shake(hashlib.shake_256, shake(hashlib.shake_256, pk, 32) + msg, 64)
    c = sample_in_ball(c_tilde, p["tau"])
    w1 = []
    for i in range(p["k"]):
        acc = [0] * N
        for j in range(p["l"]):
            acc = add(acc, mul(a[i][j], z[j]))
        acc = sub(acc, mul(c, [x << D for x in t1[i]]))
        w1.append([use_hint(h[i][j], acc[j], alpha) for j in range(N)])
    return shake(hashlib.shake_256, mu + w1_bytes(w1, p), 32) == c_tilde


def digest(data):
    return hashlib.shake_256(data).hexdigest(32)


if __name__ == "__main__":
    for level in (2, 3, 5):
        for seed_byte, msg in ((0x00, b""), (0x2A, b"sparse challenge multiplication")):
            zeta = bytes([seed_byte] * 32)
            pk, sk, internals = keygen(level, zeta)
            sig, iterations = sign(level, internals, msg)
            assert verify(level, pk, msg, sig)
            print(f"level={level} seed={seed_byte:#04x} msg={msg!r}")
            print(f"  pk  {len(pk)} {digest(pk)}")
            print(f"  sk  {len(sk)} {digest(sk)}")
            print(f"  sig {len(sig)} {digest(sig)} iterations={iterations}")
