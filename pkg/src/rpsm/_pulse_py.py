"""Pure-Python pulse-train propagation (fallback for the compiled ``_pulse``).

Both implementations share one contract; see ``rpsm.pulse`` for the meaning
of the arguments and returned values.
"""

import numpy as np


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x):
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    def value(self):
        return self.s + self.c


def propagate(forward, entry, filtered, exit_map, gain, n_rounds, floor, keep):
    fw = [[complex(x) for x in row] for row in np.asarray(forward)]
    ent = [complex(x) for x in np.asarray(entry)]
    ex = [[complex(x) for x in row] for row in np.asarray(exit_map)]
    gain = complex(gain)
    keep_gain = 1.0 - abs(gain) ** 2
    filtered = int(filtered)

    dark_h, dark_v, loss, ext, bright = [], [], [], [], []
    p_sum, loss_sum, ext_sum, v_sum = _Neumaier(), _Neumaier(), _Neumaier(), _Neumaier()

    vin = [1 + 0j, 0j, 0j, 0j]
    c = 0j
    rounds = 0
    for j in range(n_rounds):
        f_loss = 0.0
        e_loss = 0.0
        if j > 0:
            w = [e * c for e in ent]
            if filtered >= 0:
                f_loss = abs(w[filtered]) ** 2
                w[filtered] = 0j
            v = [
                ex[i][0] * w[0] + ex[i][1] * w[1] + ex[i][2] * w[2] + ex[i][3] * w[3]
                for i in range(4)
            ]
            e_loss = keep_gain * (
                abs(v[0]) ** 2 + abs(v[1]) ** 2 + abs(v[2]) ** 2 + abs(v[3]) ** 2
            )
            vin = [gain * x for x in v]
        out = [
            fw[i][0] * vin[0] + fw[i][1] * vin[1] + fw[i][2] * vin[2] + fw[i][3] * vin[3]
            for i in range(4)
        ]
        dh, dv = out[2], out[3]
        pv = abs(dv) ** 2
        pd = abs(dh) ** 2 + pv
        l_j = f_loss + abs(out[1]) ** 2
        c = out[0]
        p_sum.add(pd)
        loss_sum.add(l_j)
        ext_sum.add(e_loss)
        v_sum.add(pv)
        if keep:
            dark_h.append(dh)
            dark_v.append(dv)
            loss.append(l_j)
            ext.append(e_loss)
            bright.append(c)
        rounds = j + 1
        if abs(c) ** 2 < floor:
            break

    return (
        rounds,
        np.array(dark_h, dtype=np.complex128),
        np.array(dark_v, dtype=np.complex128),
        np.array(loss, dtype=np.float64),
        np.array(ext, dtype=np.float64),
        np.array(bright, dtype=np.complex128),
        p_sum.value(),
        loss_sum.value(),
        ext_sum.value(),
        v_sum.value(),
        abs(c) ** 2,
    )


def rounds_until(forward, entry, filtered, exit_map, gain, tol, max_rounds):
    fw = [[complex(x) for x in row] for row in np.asarray(forward)]
    ent = [complex(x) for x in np.asarray(entry)]
    ex = [[complex(x) for x in row] for row in np.asarray(exit_map)]
    gain = complex(gain)
    filtered = int(filtered)

    vin = [1 + 0j, 0j, 0j, 0j]
    c = 0j
    for j in range(max_rounds):
        if j > 0:
            w = [e * c for e in ent]
            if filtered >= 0:
                w[filtered] = 0j
            vin = [
                gain * (ex[i][0] * w[0] + ex[i][1] * w[1] + ex[i][2] * w[2] + ex[i][3] * w[3])
                for i in range(4)
            ]
        c = fw[0][0] * vin[0] + fw[0][1] * vin[1] + fw[0][2] * vin[2] + fw[0][3] * vin[3]
        if abs(c) ** 2 < tol:
            return j + 1
    return -1
