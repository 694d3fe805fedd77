#!/usr/bin/env python3
"""Regenerate the bundled reference expansion tables (src/dstau/data).

Each table lists the known printed terms of a topological tau expansion,
either in t-form (one table) or as genus parts F_g in q-form.  Terms are
written here in a compact human-checkable syntax:

    "-1/36 q2_0^3 q3_0"   ->  coeff -1/36, monomial q_{2,0}^3 q_{3,0}
    "1/8 t1^3 t3"         ->  coeff 1/8,  monomial t_1^3 t_3

Run from the repository root:  python tools/make_reference_tables.py
"""

import hashlib
import json
import os
import re

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "dstau", "data")

_TERM = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)\s+(.*)$")


def parse_terms(spec: str):
    out = []
    for chunk in spec.replace("\n", " ").split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _TERM.match(chunk)
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        coeff, monos = m.groups()
        vars = {}
        for factor in monos.split():
            if "^" in factor:
                name, power = factor.split("^")
                power = int(power)
            else:
                name, power = factor, 1
            if name.startswith("q"):
                alpha, k = name[1:].split("_")
                key = f"q_{alpha}_{k}"
            elif name.startswith("t"):
                body = name[1:]
                key = f"t_{body}"
            else:
                raise ValueError(f"bad variable {factor!r}")
            vars[key] = vars.get(key, 0) + power
        out.append((coeff, vars))
    return out


def table(algebra, form, max_lambda, strata):
    """strata: {eps: {lambda: termspec}} (for q-form, eps = 2g-2)."""
    entries = []
    for eps, by_lam in sorted(strata.items()):
        for lam, spec in sorted(by_lam.items()):
            for coeff, vars in parse_terms(spec):
                entries.append(
                    {"eps": eps, "lambda": lam, "vars": vars, "coeff": coeff}
                )
    entries.sort(key=lambda e: (e["lambda"], e["eps"], sorted(e["vars"].items())))
    blob = json.dumps(entries, sort_keys=True).encode()
    return {
        "algebra": algebra,
        "form": form,
        "max_lambda": max_lambda,
        "sha256": hashlib.sha256(blob).hexdigest(),
        "entries": entries,
    }


# ---------------------------------------------------------------------------
# A1, unrescaled t-form through lambda^24 (minus counts as part of the next +)

A1_T = {
    -2: {
        6: "1/12 t1^3",
        12: "1/8 t1^3 t3",
        18: "5/64 t1^4 t5 + 3/16 t1^3 t3^2",
        24: "45/128 t1^4 t3 t5 + 7/128 t1^5 t7 + 9/32 t1^3 t3^3",
    },
    0: {
        6: "1/16 t3",
        12: "3/64 t3^2 + 5/32 t1 t5",
        18: "3/64 t3^3 + 35/128 t1^2 t7 + 15/32 t1 t3 t5",
        24: "105/256 t1^3 t9 + 75/128 t1^2 t5^2 + 315/256 t1^2 t3 t7 "
            "+ 135/128 t3^2 t1 t5 + 27/512 t3^4",
    },
    2: {
        18: "105/1024 t9",
        24: "1155/2048 t1 t11 + 1015/2048 t5 t7 + 945/2048 t3 t9",
    },
}

# ---------------------------------------------------------------------------
# A1 rescaled genus parts through lambda^5 (q_k means q_{1,k})

A1_Q = {
    -2: {
        1: "1/6 q1_0^3",
        2: "1/6 q1_0^3 q1_1",
        3: "1/24 q1_0^4 q1_2 + 1/6 q1_0^3 q1_1^2",
        4: "1/8 q1_0^4 q1_1 q1_2 + 1/120 q1_0^5 q1_3 + 1/6 q1_0^3 q1_1^3",
        5: "1/30 q1_3 q1_0^5 q1_1 + 1/4 q1_0^4 q1_1^2 q1_2 + 1/40 q1_0^5 q1_2^2 "
           "+ 1/6 q1_0^3 q1_1^4 + 1/720 q1_0^6 q1_4",
    },
    0: {
        1: "1/24 q1_1",
        2: "1/48 q1_1^2 + 1/24 q1_0 q1_2",
        3: "1/72 q1_1^3 + 1/48 q1_0^2 q1_3 + 1/12 q1_0 q1_1 q1_2",
        4: "1/144 q1_0^3 q1_4 + 1/24 q1_0^2 q1_2^2 + 1/16 q1_0^2 q1_1 q1_3 "
           "+ 1/8 q1_1^2 q1_0 q1_2 + 1/96 q1_1^4",
        5: "1/120 q1_1^5 + 1/576 q1_0^4 q1_5 + 1/8 q1_3 q1_1^2 q1_0^2 "
           "+ 1/36 q1_0^3 q1_4 q1_1 + 7/144 q1_3 q1_0^3 q1_2 "
           "+ 1/6 q1_0^2 q1_2^2 q1_1 + 1/6 q1_0 q1_1^3 q1_2",
    },
    2: {
        3: "1/1152 q1_4",
        4: "1/1152 q1_0 q1_5 + 29/5760 q1_2 q1_3 + 1/384 q1_1 q1_4",
        5: "29/5760 q1_0 q1_3^2 + 7/1440 q1_2^3 + 11/1440 q1_2 q1_0 q1_4 "
           "+ 1/288 q1_0 q1_1 q1_5 + 29/1440 q1_3 q1_1 q1_2 "
           "+ 1/2304 q1_0^2 q1_6 + 1/192 q1_4 q1_1^2",
    },
    4: {
        5: "1/82944 q1_7",
    },
}

# ---------------------------------------------------------------------------
# A2 genus parts through lambda^5

A2_Q = {
    -2: {
        1: "1/2 q1_0^2 q2_0",
        2: "1/2 q1_1 q2_0 q1_0^2 + -1/72 q2_0^4 + 1/6 q2_1 q1_0^3",
        3: "-1/18 q2_0^3 q1_0 q2_1 + 1/6 q2_0 q1_2 q1_0^3 + 1/2 q1_1^2 q1_0^2 q2_0 "
           "+ 1/3 q2_1 q1_1 q1_0^3 + -1/36 q2_0^4 q1_1 + 1/24 q1_0^4 q2_2",
        4: "1/2 q1_0^3 q2_1 q1_1^2 + 1/2 q1_0^2 q1_1^3 q2_0 + -1/36 q2_0^4 q1_2 q1_0 "
           "+ -1/12 q2_0^2 q2_1^2 q1_0^2 + 1/8 q1_0^4 q2_2 q1_1 + 1/8 q1_0^4 q1_2 q2_1 "
           "+ 1/24 q2_0 q1_3 q1_0^4 + -1/36 q2_0^3 q2_2 q1_0^2 "
           "+ -1/6 q2_0^3 q2_1 q1_0 q1_1 + 1/2 q2_0 q1_2 q1_1 q1_0^3 "
           "+ 1/120 q1_0^5 q2_3 + -1/24 q2_0^4 q1_1^2",
        5: "1/2 q1_0^2 q1_1^4 q2_0 + 2/3 q1_0^3 q2_1 q1_1^3 + 1/30 q1_0^5 q1_3 q2_1 "
           "+ 1/20 q1_0^5 q1_2 q2_2 + -1/18 q2_0 q2_1^3 q1_0^3 + 1/8 q2_0 q1_2^2 q1_0^4 "
           "+ -1/72 q2_0^4 q1_3 q1_0^2 + 1/4 q1_0^4 q2_2 q1_1^2 "
           "+ -1/108 q2_0^3 q2_3 q1_0^3 + 1/120 q2_0 q1_4 q1_0^5 "
           "+ 1/30 q1_0^5 q2_3 q1_1 + -1/3 q2_0^3 q1_0 q2_1 q1_1^2 "
           "+ -1/9 q2_0^4 q1_0 q1_2 q1_1 + -1/9 q2_0^3 q2_2 q1_1 q1_0^2 "
           "+ -5/36 q2_0^3 q1_2 q2_1 q1_0^2 + -1/12 q2_0^2 q2_2 q2_1 q1_0^3 "
           "+ 1/6 q2_0 q1_3 q1_1 q1_0^4 + -1/3 q2_0^2 q1_1 q1_0^2 q2_1^2 "
           "+ 1/1 q2_0 q1_2 q1_1^2 q1_0^3 + 1/2 q1_0^4 q1_2 q1_1 q2_1 "
           "+ 1/720 q1_0^6 q2_4 + 1/360 q2_0^5 q2_1^2 + -1/18 q2_0^4 q1_1^3 "
           "+ 1/1620 q2_0^6 q2_2",
    },
    0: {
        1: "1/12 q1_1",
        2: "1/24 q1_1^2 + 1/12 q1_2 q1_0",
        3: "1/6 q1_0 q1_2 q1_1 + 1/36 q1_1^3 + -1/72 q2_0^2 q2_2 + -1/72 q2_0 q2_1^2 "
           "+ 1/24 q1_0^2 q1_3",
        4: "1/4 q1_2 q1_1^2 q1_0 + 1/8 q1_0^2 q1_3 q1_1 + -1/24 q2_0 q1_1 q2_1^2 "
           "+ -1/24 q2_0^2 q2_2 q1_1 + -1/24 q2_0^2 q1_2 q2_1 + -1/72 q2_0^2 q2_3 q1_0 "
           "+ -1/18 q2_1 q2_0 q2_2 q1_0 + 1/48 q1_1^4 + -1/108 q2_0^3 q1_3 "
           "+ -1/72 q2_1^3 q1_0 + 1/12 q1_0^2 q1_2^2 + 1/72 q1_4 q1_0^3",
        5: "-1/36 q2_2^2 q2_0 q1_0^2 + 7/72 q1_3 q1_2 q1_0^3 + 1/18 q1_4 q1_0^3 q1_1 "
           "+ -1/18 q2_1^3 q1_1 q1_0 + 1/3 q1_2 q1_1^3 q1_0 + -1/12 q2_0 q1_1^2 q2_1^2 "
           "+ -1/12 q2_0^2 q2_2 q1_1^2 + -1/27 q2_0^3 q1_3 q1_1 "
           "+ -1/144 q2_0^2 q2_4 q1_0^2 + -1/108 q2_0^3 q1_0 q1_4 "
           "+ 1/3 q1_0^2 q1_2^2 q1_1 + -7/144 q1_0^2 q2_2 q2_1^2 "
           "+ 1/4 q1_0^2 q1_3 q1_1^2 + -1/18 q2_0^2 q1_0 q2_3 q1_1 "
           "+ -5/72 q2_0^2 q1_0 q1_3 q2_1 + -1/12 q2_0^2 q1_0 q1_2 q2_2 "
           "+ -1/6 q2_0^2 q1_2 q1_1 q2_1 + -1/24 q2_3 q2_1 q1_0^2 q2_0 "
           "+ -1/8 q1_2 q2_1^2 q2_0 q1_0 + -2/9 q2_2 q1_1 q1_0 q2_1 q2_0 "
           "+ 1/60 q1_1^5 + 1/288 q1_0^4 q1_5 + -5/216 q2_0^3 q1_2^2",
    },
    2: {
        4: "-17/8640 q2_2^2 + -1/864 q2_0 q2_4 + -11/4320 q2_3 q2_1",
        5: "-1/108 q2_0 q2_3 q1_2 + -19/1080 q1_2 q2_2 q2_1 + -1/270 q2_4 q1_0 q2_1 "
           "+ -11/1080 q2_3 q2_1 q1_1 + -23/2160 q2_0 q1_3 q2_2 "
           "+ -7/1080 q2_3 q2_2 q1_0 + -1/864 q2_5 q1_0 q2_0 + -1/216 q2_0 q2_4 q1_1 "
           "+ -13/2160 q2_0 q1_4 q2_1 + -17/2160 q2_2^2 q1_1 + -29/4320 q1_3 q2_1^2 "
           "+ -1/864 q2_0^2 q1_5",
    },
    4: {
        5: "-1/31104 q2_6",
    },
}

# ---------------------------------------------------------------------------
# A3 genus parts through lambda^4

A3_Q = {
    -2: {
        1: "1/2 q1_0^2 q3_0 + 1/2 q1_0 q2_0^2",
        2: "1/6 q1_0^3 q3_1 + -1/16 q2_0^2 q3_0^2 + 1/2 q1_1 q1_0^2 q3_0 "
           "+ 1/2 q1_1 q1_0 q2_0^2 + 1/2 q1_0^2 q2_0 q2_1",
        3: "1/6 q1_0^3 q2_1^2 + -1/96 q2_0^4 q3_1 + 1/24 q1_0^4 q3_2 "
           "+ -1/8 q1_0 q2_0^2 q3_0 q3_1 + 1/960 q3_0^5 + -1/12 q2_1 q2_0^3 q3_0 "
           "+ -1/8 q3_0^2 q2_0^2 q1_1 + 1/6 q1_0^3 q2_0 q2_2 + 1/6 q1_0^3 q3_0 q1_2 "
           "+ 1/3 q1_0^3 q1_1 q3_1 + 1/4 q1_0^2 q2_0^2 q1_2 + 1/2 q1_0 q2_0^2 q1_1^2 "
           "+ 1/2 q1_0^2 q3_0 q1_1^2 + -1/8 q1_0 q2_0 q3_0^2 q2_1 "
           "+ 1/1 q1_0^2 q2_0 q1_1 q2_1",
        4: "1/120 q1_0^5 q3_3 + 1/320 q1_1 q3_0^5 + -1/240 q2_0^5 q2_2 "
           "+ -1/32 q2_0^4 q2_1^2 + -3/8 q2_0 q1_0 q3_0^2 q1_1 q2_1 "
           "+ -1/4 q2_0 q1_0^2 q3_0 q2_1 q3_1 + -3/8 q2_0^2 q1_0 q3_0 q1_1 q3_1 "
           "+ -1/4 q2_0^2 q1_0 q3_0 q2_1^2 + 1/2 q1_0^3 q3_0 q1_1 q1_2 "
           "+ 3/4 q1_0^2 q2_0^2 q1_1 q1_2 + -1/8 q2_0^2 q1_0 q3_0^2 q1_2 "
           "+ -1/8 q2_0^3 q1_0 q2_1 q3_1 + -1/12 q2_0^3 q1_0 q3_0 q2_2 "
           "+ -1/16 q2_0 q1_0^2 q3_0^2 q2_2 + 3/2 q2_0 q1_0^2 q1_1^2 q2_1 "
           "+ -1/4 q2_0^3 q3_0 q1_1 q2_1 + -1/16 q2_0^2 q1_0^2 q3_0 q3_2 "
           "+ 1/2 q1_0^3 q2_0 q1_1 q2_2 + 1/2 q1_0^3 q2_0 q2_1 q1_2 "
           "+ 1/2 q1_0^2 q3_0 q1_1^3 + -1/16 q1_0^2 q2_0^2 q3_1^2 "
           "+ 1/8 q1_0^4 q1_1 q3_2 + 1/2 q2_0^2 q1_0 q1_1^3 + -1/96 q2_0^4 q1_0 q3_2 "
           "+ 1/24 q2_0 q1_0^4 q2_3 + 1/192 q3_0^4 q1_0 q3_1 + 1/128 q2_0 q3_0^4 q2_1 "
           "+ 1/2 q1_0^3 q1_1^2 q3_1 + 1/2 q1_0^3 q1_1 q2_1^2 + 1/8 q1_0^4 q3_1 q1_2 "
           "+ 1/8 q1_0^4 q2_1 q2_2 + 1/12 q2_0^2 q1_0^3 q1_3 + -1/32 q2_0^4 q1_1 q3_1 "
           "+ -1/32 q2_0^4 q3_0 q1_2 + 1/96 q2_0^2 q3_0^3 q3_1 "
           "+ -1/16 q1_0^2 q3_0^2 q2_1^2 + -3/16 q2_0^2 q3_0^2 q1_1^2 "
           "+ 1/24 q1_0^4 q3_0 q1_3",
    },
    0: {
        1: "1/8 q1_1",
        2: "-1/96 q3_0 q3_1 + 1/8 q1_0 q1_2 + 1/16 q1_1^2",
        3: "-1/96 q1_0 q3_1^2 + 1/16 q1_0^2 q1_3 + -1/96 q3_0^2 q1_2 "
           "+ -1/48 q3_0 q2_1^2 + -1/64 q2_0^2 q3_2 + 1/24 q1_1^3 "
           "+ -1/48 q3_0 q1_1 q3_1 + -1/24 q2_0 q3_0 q2_2 + -1/96 q1_0 q3_0 q3_2 "
           "+ 1/4 q1_0 q1_1 q1_2 + -1/24 q2_0 q2_1 q3_1",
        4: "1/384 q3_0^3 q3_2 + 1/256 q3_0^2 q3_1^2 + -1/32 q2_0 q2_1^3 "
           "+ -1/96 q2_0^3 q2_3 + 1/8 q1_0^2 q1_2^2 + 1/48 q1_0^3 q1_4 "
           "+ -1/32 q1_1 q1_0 q3_0 q3_2 + -1/12 q2_1 q1_0 q3_0 q2_2 "
           "+ -1/24 q3_0 q1_0 q3_1 q1_2 + -1/8 q2_0 q1_1 q2_1 q3_1 "
           "+ -1/24 q2_0 q1_0 q3_0 q2_3 + -7/96 q2_0 q1_0 q2_1 q3_2 "
           "+ -1/12 q2_0 q1_0 q3_1 q2_2 + -1/8 q2_0 q3_0 q1_1 q2_2 "
           "+ -1/8 q2_0 q3_0 q2_1 q1_2 + -1/96 q3_0^2 q1_0 q1_3 "
           "+ -1/16 q2_1^2 q3_0 q1_1 + 3/8 q1_1^2 q1_0 q1_2 "
           "+ -1/32 q1_1 q1_0 q3_1^2 + -1/32 q1_1 q3_0^2 q1_2 "
           "+ -1/32 q1_1^2 q3_0 q3_1 + -1/16 q2_1^2 q1_0 q3_1 "
           "+ -7/192 q2_0^2 q3_0 q1_3 + 3/16 q1_0^2 q1_1 q1_3 "
           "+ -1/64 q1_0^2 q3_1 q3_2 + -1/192 q1_0^2 q3_0 q3_3 "
           "+ -1/64 q2_0^2 q1_0 q3_3 + -3/64 q2_0^2 q1_1 q3_2 "
           "+ -7/96 q2_0^2 q2_1 q2_2 + -5/96 q2_0^2 q3_1 q1_2 + 1/32 q1_1^4",
    },
    2: {
        3: "-3/2560 q3_3",
        4: "-11/1920 q2_2^2 + -9/2560 q1_1 q3_3 + -41/7680 q3_1 q1_3 "
           "+ -1/320 q2_0 q2_4 + -7/960 q2_1 q2_3 + -3/2560 q1_0 q3_4 "
           "+ -49/7680 q1_2 q3_2 + -19/7680 q3_0 q1_4",
    },
}

# ---------------------------------------------------------------------------
# D4 genus parts through lambda^4

D4_Q = {
    -2: {
        1: "1/2 q1_0 q2_0^2 + 1/2 q1_0^2 q3_0 + 1/2 q1_0 q4_0^2",
        2: "1/2 q1_0^2 q2_0 q2_1 + 1/2 q1_0^2 q3_0 q1_1 + 1/2 q1_0 q2_0^2 q1_1 "
           "+ 1/2 q1_0^2 q4_0 q4_1 + 1/2 q4_0^2 q1_0 q1_1 + 1/12 q4_0^2 q2_0 q3_0 "
           "+ 1/6 q1_0^3 q3_1 + -1/36 q2_0^3 q3_0",
        3: "1/12 q3_0 q2_1 q1_0 q4_0^2 + 1/12 q2_0 q3_1 q1_0 q4_0^2 "
           "+ 1/6 q4_0^2 q2_0 q3_0 q1_1 + -1/12 q3_0 q2_1 q1_0 q2_0^2 "
           "+ 1/1 q1_0^2 q2_0 q2_1 q1_1 + 1/1 q1_1 q1_0^2 q4_0 q4_1 "
           "+ -1/48 q2_0^4 q2_1 + 1/6 q4_1^2 q1_0^3 + 1/24 q1_0^4 q3_2 "
           "+ 1/144 q2_1 q4_0^4 + 1/216 q4_0^2 q3_0^3 + 1/6 q1_0^3 q2_1^2 "
           "+ 1/216 q2_0^2 q3_0^3 + 1/6 q4_0 q4_2 q1_0^3 + 1/2 q4_0^2 q1_0 q1_1^2 "
           "+ 1/4 q1_0^2 q1_2 q4_0^2 + 1/24 q4_0^2 q2_0^2 q2_1 "
           "+ 1/18 q4_0^3 q4_1 q2_0 + 1/6 q2_0 q2_2 q1_0^3 + 1/2 q1_0^2 q3_0 q1_1^2 "
           "+ -1/18 q2_0^3 q3_0 q1_1 + 1/3 q1_0^3 q3_1 q1_1 + 1/2 q2_0^2 q1_0 q1_1^2 "
           "+ -1/36 q2_0^3 q3_1 q1_0 + 1/6 q1_0^3 q1_2 q3_0 + 1/4 q1_0^2 q1_2 q2_0^2 "
           "+ 1/6 q2_0 q4_0 q3_0 q1_0 q4_1",
        4: "1/72 q1_0 q3_0^2 q3_1 q4_0^2 + 1/12 q1_0 q2_0 q2_1^2 q4_0^2 "
           "+ 1/24 q1_0^2 q2_0 q3_2 q4_0^2 + 1/2 q4_0 q4_1 q1_0^3 q1_2 "
           "+ 3/2 q4_0 q4_1 q1_0^2 q1_1^2 + 1/108 q4_0 q4_1 q1_0 q3_0^3 "
           "+ 1/72 q4_0 q4_1 q2_0^2 q3_0^2 + 1/2 q4_0 q4_2 q1_0^3 q1_1 "
           "+ 1/12 q4_1^2 q1_0^2 q2_0 q3_0 + 1/12 q4_0^3 q4_1 q1_0 q2_1 "
           "+ 1/6 q4_0^3 q4_1 q2_0 q1_1 + 1/24 q1_0^2 q3_0 q2_2 q4_0^2 "
           "+ 3/4 q1_0^2 q1_1 q1_2 q4_0^2 + 1/12 q1_0^2 q2_1 q3_1 q4_0^2 "
           "+ 1/18 q1_0 q4_0^3 q4_2 q2_0 + 1/2 q1_1 q1_0^3 q2_0 q2_2 "
           "+ 1/2 q1_1 q1_0^3 q3_0 q1_2 + 1/2 q2_0 q1_0^3 q2_1 q1_2 "
           "+ -1/24 q3_0 q1_0^2 q2_0^2 q2_2 + 3/4 q1_1 q1_0^2 q2_0^2 q1_2 "
           "+ -1/12 q2_0^2 q1_0^2 q2_1 q3_1 + -1/12 q3_0 q1_0^2 q2_0 q2_1^2 "
           "+ 3/2 q1_1^2 q1_0^2 q2_0 q2_1 + -1/18 q3_0 q1_0 q2_0^3 q1_2 "
           "+ -1/12 q1_1 q1_0 q2_0^3 q3_1 + 1/72 q3_0^2 q1_0 q2_0^2 q3_1 "
           "+ 1/108 q3_0^3 q1_0 q2_0 q2_1 + 1/144 q2_0^2 q3_0 q3_1 q4_0^2 "
           "+ 1/8 q2_0^2 q1_1 q2_1 q4_0^2 + 1/72 q2_0 q3_0^2 q2_1 q4_0^2 "
           "+ 1/4 q2_0 q3_0 q1_1^2 q4_0^2 + 1/24 q1_0 q2_0^2 q2_2 q4_0^2 "
           "+ 1/6 q1_0 q4_0^2 q4_1^2 q2_0 + -1/144 q2_0^5 q1_2 + 1/120 q1_0^5 q3_3 "
           "+ 1/48 q4_0^4 q1_1 q2_1 + 1/288 q4_0^4 q3_0 q3_1 + -1/16 q1_1 q2_0^4 q2_1 "
           "+ -1/48 q2_0^4 q1_0 q2_2 + -1/12 q2_0^3 q1_0 q2_1^2 "
           "+ 1/24 q1_0^4 q3_0 q1_3 + 1/72 q1_1 q2_0^2 q3_0^3 "
           "+ -1/12 q1_1^2 q2_0^3 q3_0 + 1/72 q3_0^2 q2_0^3 q2_1 "
           "+ 1/72 q2_0^3 q1_2 q4_0^2 + 1/72 q3_0^3 q1_1 q4_0^2 "
           "+ 1/12 q1_0^3 q1_3 q4_0^2 + 1/2 q1_0 q1_1^3 q4_0^2 "
           "+ 1/24 q1_0^4 q2_3 q2_0 + 1/12 q2_0^2 q1_3 q1_0^3 "
           "+ 1/72 q4_0^3 q4_1 q3_0^2 + 1/2 q4_1^2 q1_0^3 q1_1 "
           "+ 1/2 q1_1^3 q1_0^2 q3_0 + 1/8 q1_0^4 q2_1 q2_2 + 1/8 q1_0^4 q3_1 q1_2 "
           "+ 1/2 q1_1^2 q1_0^3 q3_1 + 1/2 q1_1 q1_0^3 q2_1^2 "
           "+ -1/72 q2_0^3 q1_0^2 q3_2 + 1/2 q1_1^3 q1_0 q2_0^2 "
           "+ 1/288 q3_0 q2_0^4 q3_1 + 1/24 q1_0^4 q4_0 q4_3 + 1/8 q1_0^4 q4_1 q4_2 "
           "+ 1/8 q1_1 q1_0^4 q3_2 + 1/144 q4_0^4 q1_0 q2_2 + 1/48 q4_0^4 q2_0 q1_2 "
           "+ 1/12 q4_0 q4_2 q1_0^2 q2_0 q3_0 + 1/6 q4_0 q4_1 q1_0^2 q3_0 q2_1 "
           "+ -1/4 q1_1 q1_0 q2_0^2 q3_0 q2_1 + 1/6 q1_0 q2_0 q3_0 q1_2 q4_0^2 "
           "+ 1/4 q1_0 q2_0 q1_1 q3_1 q4_0^2 + 1/4 q1_0 q3_0 q1_1 q2_1 q4_0^2 "
           "+ 1/12 q4_0 q4_1 q1_0 q2_0^2 q2_1 + 1/6 q4_0 q4_1 q1_0^2 q2_0 q3_1 "
           "+ 1/2 q4_0 q4_1 q1_0 q2_0 q3_0 q1_1",
    },
    0: {
        1: "1/6 q1_1",
        2: "1/6 q1_0 q1_2 + 1/12 q1_1^2",
        3: "-1/72 q2_0 q2_1^2 + 1/12 q1_0^2 q1_3 + 1/72 q4_1^2 q2_0 "
           "+ 1/432 q3_0^2 q3_1 + -1/72 q2_0^2 q2_2 + 1/72 q2_2 q4_0^2 "
           "+ 1/18 q1_1^3 + 1/36 q2_1 q4_0 q4_1 + 1/36 q4_0 q4_2 q2_0 "
           "+ 1/3 q1_0 q1_2 q1_1",
        4: "1/24 q1_1^4 + 1/36 q1_0 q4_0 q4_3 q2_0 + 1/18 q1_0 q4_1 q4_2 q2_0 "
           "+ 1/72 q3_0 q2_0 q2_1 q3_1 + 1/72 q4_0 q4_1 q3_0 q3_1 "
           "+ 1/18 q4_0 q4_1 q1_0 q2_2 + 1/12 q4_0 q4_1 q2_0 q1_2 "
           "+ 1/12 q4_0 q4_1 q1_1 q2_1 + 1/18 q4_0 q4_2 q1_0 q2_1 "
           "+ 1/12 q4_0 q4_2 q2_0 q1_1 + -1/18 q2_0 q1_0 q2_1 q2_2 "
           "+ 1/216 q3_0 q2_0^2 q3_2 + -1/72 q2_0^2 q1_0 q2_3 "
           "+ 1/24 q1_1 q2_2 q4_0^2 + 1/24 q2_1 q1_2 q4_0^2 + 1/72 q1_0 q2_3 q4_0^2 "
           "+ 1/144 q4_0 q4_2 q3_0^2 + 1/24 q4_1^2 q1_0 q2_1 + 1/24 q4_1^2 q2_0 q1_1 "
           "+ 1/2 q1_1^2 q1_0 q1_2 + 1/4 q1_1 q1_0^2 q1_3 + 1/216 q3_0 q3_2 q4_0^2 "
           "+ 1/36 q2_0 q1_3 q4_0^2 + -1/24 q1_1 q2_0 q2_1^2 + -1/24 q2_0^2 q2_1 q1_2 "
           "+ -1/24 q1_1 q2_0^2 q2_2 + 1/144 q3_0^2 q2_0 q2_2 "
           "+ 1/144 q1_1 q3_0^2 q3_1 + 1/432 q3_0^2 q1_0 q3_2 "
           "+ 1/216 q3_0 q1_0 q3_1^2 + 1/288 q4_1^2 q3_0^2 + -1/108 q2_0^3 q1_3 "
           "+ 1/6 q1_0^2 q1_2^2 + -1/72 q1_0 q2_1^3 + 1/432 q3_1^2 q4_0^2 "
           "+ 1/288 q3_0^2 q2_1^2 + 1/432 q3_0^3 q1_2 + 1/36 q1_4 q1_0^3 "
           "+ 1/432 q2_0^2 q3_1^2",
    },
    2: {
        4: "1/1620 q3_0 q3_3 + 7/6480 q3_1 q3_2",
    },
}

# ---------------------------------------------------------------------------
# B3 genus parts through lambda^4

B3_Q = {
    -2: {
        1: "1/2 q1_0 q2_0^2 + 1/2 q1_0^2 q3_0",
        2: "-1/36 q2_0^3 q3_0 + 1/6 q1_0^3 q3_1 + 1/2 q1_0^2 q2_0 q2_1 "
           "+ 1/2 q1_0^2 q3_0 q1_1 + 1/2 q1_0 q2_0^2 q1_1",
        3: "1/24 q1_0^4 q3_2 + 1/6 q1_0^3 q2_1^2 + 1/216 q2_0^2 q3_0^3 "
           "+ -1/48 q2_0^4 q2_1 + 1/1 q1_0^2 q2_0 q1_1 q2_1 "
           "+ -1/12 q1_0 q2_0^2 q3_0 q2_1 + -1/36 q1_0 q2_0^3 q3_1 "
           "+ 1/2 q1_0 q2_0^2 q1_1^2 + -1/18 q2_0^3 q3_0 q1_1 "
           "+ 1/6 q1_0^3 q2_0 q2_2 + 1/6 q1_0^3 q3_0 q1_2 + 1/3 q1_0^3 q1_1 q3_1 "
           "+ 1/4 q1_0^2 q2_0^2 q1_2 + 1/2 q1_0^2 q3_0 q1_1^2",
        4: "-1/12 q1_1^2 q2_0^3 q3_0 + 1/288 q3_0 q2_0^4 q3_1 "
           "+ 1/72 q3_0^2 q2_0^3 q2_1 + -1/16 q1_1 q2_0^4 q2_1 "
           "+ 1/72 q1_1 q2_0^2 q3_0^3 + 1/12 q1_0^3 q2_0^2 q1_3 "
           "+ -1/72 q1_0^2 q2_0^3 q3_2 + 1/24 q1_0^4 q3_0 q1_3 "
           "+ 1/2 q1_0^2 q3_0 q1_1^3 + -1/48 q1_0 q2_0^4 q2_2 "
           "+ -1/12 q1_0 q2_0^3 q2_1^2 + 1/2 q1_0 q2_0^2 q1_1^3 "
           "+ 1/2 q1_0^3 q1_1^2 q3_1 + 1/2 q1_0^3 q1_1 q2_1^2 "
           "+ 1/8 q1_0^4 q1_1 q3_2 + 1/8 q1_0^4 q2_1 q2_2 + 1/8 q1_0^4 q3_1 q1_2 "
           "+ 1/24 q1_0^4 q2_0 q2_3 + -1/18 q1_0 q3_0 q2_0^3 q1_2 "
           "+ 1/72 q1_0 q3_0^2 q2_0^2 q3_1 + 1/108 q1_0 q3_0^3 q2_0 q2_1 "
           "+ 3/2 q1_0^2 q2_0 q1_1^2 q2_1 + 3/4 q1_0^2 q2_0^2 q1_1 q1_2 "
           "+ -1/12 q1_0^2 q2_0^2 q2_1 q3_1 + 1/2 q1_0^3 q3_0 q1_1 q1_2 "
           "+ -1/24 q1_0^2 q3_0 q2_0^2 q2_2 + -1/12 q1_0^2 q3_0 q2_0 q2_1^2 "
           "+ 1/2 q1_0^3 q2_0 q1_1 q2_2 + 1/2 q1_0^3 q2_0 q2_1 q1_2 "
           "+ -1/12 q1_0 q2_0^3 q1_1 q3_1 + 1/120 q1_0^5 q3_3 "
           "+ -1/144 q2_0^5 q1_2 + -1/4 q1_0 q3_0 q2_0^2 q1_1 q2_1",
    },
    0: {
        1: "1/6 q1_1",
        2: "1/6 q1_0 q1_2 + 1/12 q1_1^2",
        3: "1/12 q1_0^2 q1_3 + -1/72 q2_0 q2_1^2 + -1/72 q2_0^2 q2_2 "
           "+ 1/432 q3_0^2 q3_1 + 1/18 q1_1^3 + 1/3 q1_0 q1_1 q1_2",
        4: "-1/108 q2_0^3 q1_3 + 1/432 q2_0^2 q3_1^2 + 1/432 q3_0^3 q1_2 "
           "+ -1/72 q1_0 q2_1^3 + 1/288 q3_0^2 q2_1^2 + 1/6 q1_0^2 q1_2^2 "
           "+ 1/36 q1_0^3 q1_4 + -1/18 q1_0 q2_0 q2_1 q2_2 "
           "+ 1/72 q3_0 q2_0 q2_1 q3_1 + 1/24 q1_1^4 + -1/24 q1_1 q2_0 q2_1^2 "
           "+ 1/216 q3_0 q2_0^2 q3_2 + 1/144 q3_0^2 q2_0 q2_2 "
           "+ -1/24 q1_1 q2_0^2 q2_2 + 1/144 q3_0^2 q1_1 q3_1 "
           "+ -1/24 q2_0^2 q2_1 q1_2 + -1/72 q1_0 q2_0^2 q2_3 "
           "+ 1/4 q1_0^2 q1_1 q1_3 + 1/2 q1_0 q1_1^2 q1_2 + 1/432 q1_0 q3_0^2 q3_2 "
           "+ 1/216 q1_0 q3_0 q3_1^2",
    },
    2: {
        4: "7/6480 q3_1 q3_2 + 1/1620 q3_0 q3_3",
    },
}

# ---------------------------------------------------------------------------
# C2 genus parts through lambda^4.  The printed table carries two stray
# family-3 labels (q_{3,1}, q_{3,2}); C2 has only two families, and the
# A3 reduction fixes them to q_{2,1} and q_{2,2}.

C2_Q = {
    -2: {
        1: "1/2 q1_0^2 q2_0",
        2: "1/6 q1_0^3 q2_1 + 1/2 q1_0^2 q1_1 q2_0",
        3: "1/24 q2_2 q1_0^4 + 1/3 q1_1 q1_0^3 q2_1 + 1/2 q1_1^2 q2_0 q1_0^2 "
           "+ 1/960 q2_0^5 + 1/6 q1_2 q1_0^3 q2_0",
        4: "1/2 q1_1 q1_0^3 q1_2 q2_0 + 1/320 q2_0^5 q1_1 + 1/120 q2_3 q1_0^5 "
           "+ 1/8 q2_2 q1_1 q1_0^4 + 1/8 q1_2 q2_1 q1_0^4 + 1/24 q1_3 q2_0 q1_0^4 "
           "+ 1/192 q2_0^4 q1_0 q2_1 + 1/2 q2_1 q1_1^2 q1_0^3 "
           "+ 1/2 q1_1^3 q2_0 q1_0^2",
    },
    0: {
        1: "1/8 q1_1",
        2: "1/16 q1_1^2 + 1/8 q1_0 q1_2 + -1/96 q2_1 q2_0",
        3: "1/4 q1_2 q1_1 q1_0 + -1/48 q1_1 q2_0 q2_1 + -1/96 q2_2 q2_0 q1_0 "
           "+ 1/24 q1_1^3 + -1/96 q2_1^2 q1_0 + -1/96 q1_2 q2_0^2 "
           "+ 1/16 q1_3 q1_0^2",
        4: "-1/32 q1_2 q1_1 q2_0^2 + -1/96 q1_3 q2_0^2 q1_0 "
           "+ -1/32 q1_1^2 q2_0 q2_1 + -1/32 q2_1^2 q1_1 q1_0 "
           "+ 3/16 q1_3 q1_1 q1_0^2 + -1/64 q2_2 q2_1 q1_0^2 "
           "+ -1/192 q2_3 q2_0 q1_0^2 + 3/8 q1_1^2 q1_0 q1_2 + 1/32 q1_1^4 "
           "+ -1/24 q1_2 q2_1 q1_0 q2_0 + -1/32 q2_2 q1_1 q2_0 q1_0 "
           "+ 1/8 q1_2^2 q1_0^2 + 1/48 q1_4 q1_0^3 + 1/384 q2_2 q2_0^3 "
           "+ 1/256 q2_1^2 q2_0^2",
    },
    2: {
        3: "-3/2560 q2_3",
        4: "-9/2560 q2_3 q1_1 + -41/7680 q1_3 q2_1 + -49/7680 q2_2 q1_2 "
           "+ -3/2560 q2_4 q1_0 + -19/7680 q1_4 q2_0",
    },
}


def main():
    os.makedirs(OUT, exist_ok=True)
    tables = [
        table("A1", "t", 24, A1_T),
        table("A1", "q", 5, A1_Q),
        table("A2", "q", 5, A2_Q),
        table("A3", "q", 4, A3_Q),
        table("B3", "q", 4, B3_Q),
        table("C2", "q", 4, C2_Q),
        table("D4", "q", 4, D4_Q),
    ]
    for tb in tables:
        name = f"{tb['algebra'].lower()}_{tb['form']}.json"
        path = os.path.join(OUT, name)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(tb, fh, indent=1)
        print(f"wrote {path}: {len(tb['entries'])} terms")


if __name__ == "__main__":
    main()
