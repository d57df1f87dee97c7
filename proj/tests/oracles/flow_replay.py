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
"""Replays the Poisson arrival stream of a flow: 64-bit Mersenne Twister
seeded with the flow seed, uniform on the open interval (0,1) from the top
53 bits, exponential by inversion."""
import math


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & 0xFFFFFFFFFFFFFFFF
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & 0xFFFFFFFFFFFFFFFF
        self.idx = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.idx = 0

    def next(self):
        if self.idx >= 312:
            self._twist()
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & 0xFFFFFFFFFFFFFFFF


def arrivals(seed, rate, start, horizon):
    g = MT19937_64(seed)
    out = []
    t = start + (-math.log(((g.next() >> 11) + 0.5) * 2.0 ** -53) / rate)
    while t <= horizon:
        out.append(t)
        t += -math.log(((g.next() >> 11) + 0.5) * 2.0 ** -53) / rate
    return out


def self_check():
    # Reference value: the 10000th output of a default-seeded generator.
    g = MT19937_64(5489)
    for _ in range(9999):
        g.next()
    assert g.next() == 9981545732273789042


def cases():
    self_check()
    a = arrivals(7, 0.5, 0.0, 60.0)
    return {
        "flow_count_60s": len(a),
        "flow_first_arrival": a[0],
        "flow_last_arrival": a[-1],
    }
