# Copyright 2026 The cfleo Authors
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
"""Independent numpy evaluation of the reference values frozen into the C++ tests.

Run once; the printed numbers are pasted into tests/unit/*.cpp. Nothing here
imports the C++ library.
"""
import math

import numpy as np

C = 299_792_458.0


def angle_loss_db(theta, eta):
    hpbw = 2.0 * math.acos(0.5 ** (1.0 / eta))
    gain = math.cos(theta) ** eta * 32.0 * math.log(2.0) / (2.0 * hpbw**2)
    return -10.0 * math.log10(gain)


def fspl_db(d_km, f_ghz):
    return 20.0 * math.log10(4.0 * math.pi * d_km * 1e3 * f_ghz * 1e9 / C)


def noise_w(nsd_dbm_hz, bw_mhz, nf_db):
    return 10.0 ** ((nsd_dbm_hz + 10.0 * math.log10(bw_mhz * 1e6) + nf_db - 30.0) / 10.0)


def rate_terms(P, L, kappa, pilots, q, tau, noise, tau_dd, tau_c):
    beta = kappa * L / (kappa + 1.0)
    lam = L / (kappa + 1.0)
    M, K = L.shape
    gamma = np.zeros((M, K))
    for k in range(K):
        co = [j for j in range(K) if pilots[j] == pilots[k]]
        gamma[:, k] = sum(q[j] * tau * lam[:, j] for j in co) + noise
    W = beta + q * tau * lam**2 / gamma
    out = {}
    for k in range(K):
        num = np.sum(np.sqrt(P[:, k] * W[:, k])) ** 2
        interf = sum(np.sum(P[:, j] * L[:, k]) for j in range(K))
        cont = 0.0
        for j in range(K):
            if j != k and pilots[j] == pilots[k]:
                s = np.sum(np.sqrt(P[:, j] / W[:, j]) * lam[:, k] * lam[:, j] / gamma[:, j])
                cont += q[k] * q[j] * tau**2 * s**2
        selfc = np.sum(P[:, k] * beta[:, k] ** 2 / W[:, k])
        sinr = num / (interf + cont - selfc + noise)
        out[k] = dict(numerator=num, interference=interf, contamination=cont,
                      self_correction=selfc, sinr=sinr,
                      rate=tau_dd / tau_c * math.log2(1.0 + sinr))
    return out


def main():
    print("angle_loss(0, 20)       =", repr(angle_loss_db(0.0, 20.0)))
    for eta in (2.0, 10.0, 20.0):
        th = math.acos(0.5 ** (1.0 / eta))
        print(f"half-power delta eta={eta} =", repr(angle_loss_db(th, eta) - angle_loss_db(0.0, eta)))
    print("theta_3dB(20) deg       =", repr(math.degrees(math.acos(0.5 ** (1 / 20)))))
    print("550*tan(theta_3dB) km   =", repr(550 * math.tan(math.acos(0.5 ** (1 / 20)))))
    print("slant 550/550 km        =", repr(math.hypot(550.0, 550.0)))
    print("fspl(550 km, 30 GHz)    =", repr(fspl_db(550.0, 30.0)))
    print("noise W (20 MHz, 7 dB)  =", repr(noise_w(-174.0, 20.0, 7.0)),
          "dBW", repr(10 * math.log10(noise_w(-174.0, 20.0, 7.0))))

    # Reference 3-SAP / 4-UT / 2-pilot instance (mirrors reference_moment_instance()).
    L = np.array([[1.0, 0.6, 1.4, 0.8], [0.7, 1.5, 0.9, 1.2], [1.3, 0.9, 0.6, 1.8]])
    kappa = np.array([[1.0, 0.6, 1.5, 0.8], [0.5, 1.2, 0.7, 1.0], [0.9, 0.5, 1.1, 0.6]])
    P = np.array([[0.6, 0.3, 0.8, 0.4], [0.2, 0.9, 0.5, 0.7], [0.7, 0.4, 0.3, 1.0]])
    terms = rate_terms(P, L, kappa, [0, 1, 0, 1], np.ones(4), 2, 0.1, 270, 300)
    for k, t in terms.items():
        print(f"ut {k}: " + ", ".join(f"{n}={v!r}" for n, v in t.items()))


if __name__ == "__main__":
    main()
