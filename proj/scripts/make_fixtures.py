#!/usr/bin/env python3
"""Generate the netlist fixtures, the nominal characterization table and the
sample image shipped under fixtures/.

Run from the repository root:  python3 scripts/make_fixtures.py
"""
import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


# ---------------------------------------------------------------- netlists

def fig1_xor2():
    """Two cascaded XOR gates: Y1 = A ^ B, Y2 = Y1 ^ C."""
    return {
        "inputs": ["A", "B", "C"],
        "outputs": ["Y2"],
        "gates": [
            {"id": "F1", "type": "XOR2", "in": ["A", "B"], "out": "Y1"},
            {"id": "F2", "type": "XOR2", "in": ["Y1", "C"], "out": "Y2"},
        ],
        "words": [],
    }


def ripple_adder(nbits):
    """Ripple-carry adder, one textbook full adder per bit (2 XOR, 2 AND, 1 OR).

    Inputs a0..aN-1, b0..bN-1, cin; outputs s0..sN-1 and cout; word "sum" is
    the (N+1)-bit unsigned result including the carry.
    """
    gates = []
    carry = "cin"
    for i in range(nbits):
        a, b, x, s = f"a{i}", f"b{i}", f"x{i}", f"s{i}"
        g, h = f"g{i}", f"h{i}"
        cnext = "cout" if i == nbits - 1 else f"c{i + 1}"
        gates += [
            {"id": f"x{i}", "type": "XOR2", "in": [a, b], "out": x},
            {"id": f"s{i}", "type": "XOR2", "in": [x, carry], "out": s},
            {"id": f"g{i}", "type": "AND2", "in": [a, b], "out": g},
            {"id": f"h{i}", "type": "AND2", "in": [x, carry], "out": h},
            {"id": f"c{i}", "type": "OR2", "in": [g, h], "out": cnext},
        ]
        carry = cnext
    return {
        "inputs": [f"a{i}" for i in range(nbits)]
        + [f"b{i}" for i in range(nbits)]
        + ["cin"],
        "outputs": [f"s{i}" for i in range(nbits)] + ["cout"],
        "gates": gates,
        "words": [
            {
                "name": "sum",
                "bits": [f"s{i}" for i in range(nbits)] + ["cout"],
                "signed": False,
            }
        ],
    }


def dft2():
    """Gate-level 2-point DFT stage: sum = a + b (9-bit unsigned) and
    diff = a - b (9-bit two's complement), 8-bit inputs.

    The subtractor is a + ~b + 1; the carry-in of 1 and the zero-extended
    ninth bit are folded into per-bit logic so the netlist has no constant
    nets.
    """
    gates = []
    # adder half: half adder at bit 0, full adders above
    gates += [
        {"id": "ss0", "type": "XOR2", "in": ["a0", "b0"], "out": "ss0"},
        {"id": "sc1", "type": "AND2", "in": ["a0", "b0"], "out": "sc1"},
    ]
    for i in range(1, 8):
        c = f"sc{i}"
        cnext = f"sc{i + 1}"
        gates += [
            {"id": f"sx{i}", "type": "XOR2", "in": [f"a{i}", f"b{i}"], "out": f"sx{i}"},
            {"id": f"ss{i}", "type": "XOR2", "in": [f"sx{i}", c], "out": f"ss{i}"},
            {"id": f"sg{i}", "type": "AND2", "in": [f"a{i}", f"b{i}"], "out": f"sg{i}"},
            {"id": f"sh{i}", "type": "AND2", "in": [f"sx{i}", c], "out": f"sh{i}"},
            {"id": f"sc{i}", "type": "OR2", "in": [f"sg{i}", f"sh{i}"], "out": cnext},
        ]
    # subtractor half: bit0 has cin=1 folded in (s0 = a0^b0, c1 = a0 | ~b0),
    # bit8 is the zero-extended sign bit (d8 = ~c8)
    gates += [
        {"id": "dn0", "type": "NOT", "in": ["b0"], "out": "dn0"},
        {"id": "ds0", "type": "XOR2", "in": ["a0", "b0"], "out": "ds0"},
        {"id": "dc0", "type": "OR2", "in": ["a0", "dn0"], "out": "dc1"},
    ]
    for i in range(1, 8):
        c = f"dc{i}"
        cnext = f"dc{i + 1}"
        gates += [
            {"id": f"dn{i}", "type": "NOT", "in": [f"b{i}"], "out": f"dn{i}"},
            {"id": f"dx{i}", "type": "XOR2", "in": [f"a{i}", f"dn{i}"], "out": f"dx{i}"},
            {"id": f"ds{i}", "type": "XOR2", "in": [f"dx{i}", c], "out": f"ds{i}"},
            {"id": f"dg{i}", "type": "AND2", "in": [f"a{i}", f"dn{i}"], "out": f"dg{i}"},
            {"id": f"dh{i}", "type": "AND2", "in": [f"dx{i}", c], "out": f"dh{i}"},
            {"id": f"dc{i}", "type": "OR2", "in": [f"dg{i}", f"dh{i}"], "out": cnext},
        ]
    gates += [{"id": "ds8", "type": "NOT", "in": ["dc8"], "out": "ds8"}]
    return {
        "inputs": [f"a{i}" for i in range(8)] + [f"b{i}" for i in range(8)],
        "outputs": [f"ss{i}" for i in range(8)]
        + ["sc8"]
        + [f"ds{i}" for i in range(9)],
        "gates": gates,
        "words": [
            {
                "name": "sum",
                "bits": [f"ss{i}" for i in range(8)] + ["sc8"],
                "signed": False,
            },
            {"name": "diff", "bits": [f"ds{i}" for i in range(9)], "signed": True},
        ],
    }


# quick functional check of the generated netlists before committing them
def _eval_netlist(nl, assign):
    val = dict(assign)
    ops = {
        "NOT": lambda v: 1 - v[0],
        "AND2": lambda v: v[0] & v[1],
        "OR2": lambda v: v[0] | v[1],
        "NAND2": lambda v: 1 - (v[0] & v[1]),
        "NOR2": lambda v: 1 - (v[0] | v[1]),
        "XOR2": lambda v: v[0] ^ v[1],
        "XNOR2": lambda v: 1 - (v[0] ^ v[1]),
    }
    pending = list(nl["gates"])
    while pending:
        rest = []
        for g in pending:
            if all(i in val for i in g["in"]):
                val[g["out"]] = ops[g["type"]]([val[i] for i in g["in"]])
            else:
                rest.append(g)
        assert len(rest) < len(pending), "netlist not acyclic / missing driver"
        pending = rest
    return val


def _word(nl, name, val):
    w = next(w for w in nl["words"] if w["name"] == name)
    v = sum(val[b] << i for i, b in enumerate(w["bits"]))
    if w["signed"] and val[w["bits"][-1]]:
        v -= 1 << len(w["bits"])
    return v


def check():
    nl = ripple_adder(8)
    for a, b, cin in [(200, 100, 0), (255, 255, 1), (0, 0, 0), (170, 85, 1)]:
        assign = {f"a{i}": (a >> i) & 1 for i in range(8)}
        assign.update({f"b{i}": (b >> i) & 1 for i in range(8)})
        assign["cin"] = cin
        val = _eval_netlist(nl, assign)
        assert _word(nl, "sum", val) == a + b + cin, (a, b, cin)

    nl = dft2()
    for a, b in [(5, 3), (0, 0), (255, 255), (0, 255), (255, 0), (137, 201)]:
        assign = {f"a{i}": (a >> i) & 1 for i in range(8)}
        assign.update({f"b{i}": (b >> i) & 1 for i in range(8)})
        val = _eval_netlist(nl, assign)
        assert _word(nl, "sum", val) == a + b, (a, b)
        assert _word(nl, "diff", val) == a - b, (a, b)


# ---------------------------------------------------------------- charlib

GATE_EVAL = {
    "NOT": lambda v: 1 - v[0],
    "AND2": lambda v: v[0] & v[1],
    "OR2": lambda v: v[0] | v[1],
    "NAND2": lambda v: 1 - (v[0] & v[1]),
    "NOR2": lambda v: 1 - (v[0] | v[1]),
    "XOR2": lambda v: v[0] ^ v[1],
    "XNOR2": lambda v: 1 - (v[0] ^ v[1]),
}

# nominal (mu_ps, sigma_ps) at 1.0 V per gate and input transition, for every
# transition that changes the output value
NOMINAL = {
    ("NOT", "1", "0"): (6.5, 1.20),
    ("NOT", "0", "1"): (6.0, 1.10),
    ("NAND2", "01", "11"): (9.5, 1.80),
    ("NAND2", "10", "11"): (9.8, 1.90),
    ("NAND2", "11", "01"): (10.5, 2.00),
    ("NAND2", "11", "10"): (10.8, 2.10),
    ("NAND2", "00", "11"): (8.9, 1.70),
    ("NAND2", "11", "00"): (9.9, 2.00),
    ("NOR2", "00", "01"): (10.2, 2.00),
    ("NOR2", "00", "10"): (10.5, 2.00),
    ("NOR2", "01", "00"): (11.5, 2.20),
    ("NOR2", "10", "00"): (11.8, 2.30),
    ("NOR2", "00", "11"): (9.6, 1.90),
    ("NOR2", "11", "00"): (12.4, 2.40),
    ("AND2", "01", "11"): (14.2, 2.60),
    ("AND2", "10", "11"): (14.6, 2.70),
    ("AND2", "11", "01"): (15.1, 2.80),
    ("AND2", "11", "10"): (15.4, 2.90),
    ("AND2", "00", "11"): (13.3, 2.50),
    ("AND2", "11", "00"): (14.4, 2.70),
    ("OR2", "00", "01"): (15.0, 2.80),
    ("OR2", "00", "10"): (15.4, 2.90),
    ("OR2", "01", "00"): (16.2, 3.00),
    ("OR2", "10", "00"): (16.6, 3.10),
    ("OR2", "00", "11"): (14.1, 2.60),
    ("OR2", "11", "00"): (17.0, 3.20),
    ("XOR2", "00", "01"): (13.6, 2.50),
    ("XOR2", "00", "10"): (14.0, 2.60),
    ("XOR2", "01", "00"): (13.8, 2.60),
    ("XOR2", "10", "00"): (14.2, 2.60),
    ("XOR2", "01", "11"): (14.6, 2.70),
    ("XOR2", "10", "11"): (14.9, 2.80),
    ("XOR2", "11", "01"): (14.4, 2.70),
    ("XOR2", "11", "10"): (14.7, 2.70),
    ("XNOR2", "00", "01"): (14.1, 2.60),
    ("XNOR2", "00", "10"): (14.5, 2.70),
    ("XNOR2", "01", "00"): (14.3, 2.60),
    ("XNOR2", "10", "00"): (14.7, 2.70),
    ("XNOR2", "01", "11"): (15.1, 2.80),
    ("XNOR2", "10", "11"): (15.4, 2.90),
    ("XNOR2", "11", "01"): (14.9, 2.80),
    ("XNOR2", "11", "10"): (15.2, 2.80),
}


def check_charlib_complete():
    for gate, fn in GATE_EVAL.items():
        n = 1 if gate == "NOT" else 2
        for p in range(1 << n):
            for q in range(1 << n):
                pv = [(p >> (n - 1 - i)) & 1 for i in range(n)]
                qv = [(q >> (n - 1 - i)) & 1 for i in range(n)]
                if fn(pv) != fn(qv):
                    key = (gate, "".join(map(str, pv)), "".join(map(str, qv)))
                    assert key in NOMINAL, f"missing nominal entry {key}"


def write_charlib(path):
    with open(path, "w") as f:
        f.write("gate,prev,next,vdd,mu_ps,sigma_ps\n")
        for (gate, prev, nxt), (mu, sigma) in sorted(NOMINAL.items()):
            f.write(f"{gate},{prev},{nxt},1.00,{mu},{sigma}\n")


# ---------------------------------------------------------------- image

def sample_image(path, w=128, h=128):
    """Deterministic gradient-plus-shapes test picture (8-bit PGM, binary)."""
    px = bytearray(w * h)
    for y in range(h):
        for x in range(w):
            v = (x * 255) // (w - 1)          # horizontal ramp
            if (x - 44) ** 2 + (y - 44) ** 2 <= 28 * 28:
                v = 230                        # bright disc
            if 72 <= x < 112 and 72 <= y < 112:
                v = 25                         # dark square
            if abs((x + y) % 32) < 3:
                v = min(255, v + 60)           # diagonal stripes
            px[y * w + x] = v
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode())
        f.write(bytes(px))


def main():
    os.makedirs(OUT, exist_ok=True)
    check()
    check_charlib_complete()
    for name, nl in [
        ("fig1_xor2", fig1_xor2()),
        ("adder2", ripple_adder(2)),
        ("adder4", ripple_adder(4)),
        ("adder8", ripple_adder(8)),
        ("dft2", dft2()),
    ]:
        with open(os.path.join(OUT, name + ".json"), "w") as f:
            json.dump(nl, f, indent=1)
            f.write("\n")
    write_charlib(os.path.join(OUT, "charlib_nominal_1v.csv"))
    sample_image(os.path.join(OUT, "sample_128.pgm"))
    print("fixtures written to", os.path.abspath(OUT))


if __name__ == "__main__":
    main()
