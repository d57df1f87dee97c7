# Copyright 2026 The CPS V2V Simulator Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Closed-form car-following accelerations written out term by term.
Independent of the C++ implementation."""
import math

DEFAULTS = dict(v0=30.0, T=1.0, s0=2.0, delta=4.0, a=1.0, b=1.5, c=0.99)


def desired_gap(v, vl, p=DEFAULTS):
    return p["s0"] + max(0.0, v * p["T"] + v * (v - vl) / (2.0 * math.sqrt(p["a"] * p["b"])))


def accel_free(v, p=DEFAULTS):
    a, b, v0, d = p["a"], p["b"], p["v0"], p["delta"]
    if v <= v0:
        return a * (1.0 - (v / v0) ** d)
    return -b * (1.0 - (v / v0) ** (a * d / b))


def accel_iidm(s, v, vl, p=DEFAULTS):
    a = p["a"]
    z = desired_gap(v, vl, p) / s
    af = accel_free(v, p)
    if v <= p["v0"]:
        if z >= 1.0:
            return a * (1.0 - z * z)
        return af * (1.0 - z ** (2.0 * a / af))
    if z >= 1.0:
        return af + a * (1.0 - z * z)
    return af


def accel_cah(s, v, vl, al, p=DEFAULTS):
    at = min(al, p["a"])
    den = vl * vl - 2.0 * s * at
    # den == 0 only for a stopped lead with zero acceleration: 0/0, and the
    # second branch is its limit.
    if vl * (v - vl) <= -2.0 * s * at and den > 0.0:
        return v * v * at / den
    ind = 1.0 if v - vl >= 0.0 else 0.0
    return at - (v - vl) ** 2 * ind / (2.0 * s)


def accel_acc(s, v, vl, al, p=DEFAULTS):
    ai = accel_iidm(s, v, vl, p)
    ac = accel_cah(s, v, vl, al, p)
    if ai >= ac:
        return ai
    c, b = p["c"], p["b"]
    return (1.0 - c) * ai + c * (ac + b * math.tanh((ai - ac) / b))


# (name, function, args) for every frozen case.
def cases():
    out = [
        ("desired_gap_20_15", desired_gap(20.0, 15.0)),
        ("free_1p2_v0", accel_free(1.2 * DEFAULTS["v0"])),
        ("iidm_20_20_30", accel_iidm(30.0, 20.0, 20.0)),
        ("cah_25_20_15_m1", accel_cah(15.0, 25.0, 20.0, -1.0)),
        ("acc_25_20_15_m1", accel_acc(15.0, 25.0, 20.0, -1.0)),
    ]
    return out


# Sampled cases spanning every branch: (s, v, vl, al) -> acc, iidm, cah.
SAMPLES = [
    (30.0, 20.0, 20.0, 0.0),
    (15.0, 25.0, 20.0, -1.0),
    (8.0, 12.0, 14.0, 0.5),
    (60.0, 10.0, 25.0, 2.0),
    (5.0, 15.0, 5.0, -2.0),
    (100.0, 33.0, 30.0, 0.0),
    (12.0, 35.0, 36.0, -0.5),
    (40.0, 0.0, 0.0, 0.0),
    (25.0, 28.0, 22.0, -3.0),
    (3.0, 2.0, 0.0, -1.5),
    (200.0, 29.0, 10.0, 0.3),
    (18.0, 31.0, 20.0, 1.0),
]


def samples():
    return [(s, v, vl, al, accel_acc(s, v, vl, al), accel_iidm(s, v, vl), accel_cah(s, v, vl, al))
            for (s, v, vl, al) in SAMPLES]
