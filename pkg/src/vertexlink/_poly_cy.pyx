# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled arithmetic kernel.

Twin of :mod:`vertexlink._poly_py`; same polynomial representation
``(offset, coeffs)`` and the same entry points.  Coefficients stay Python
ints so arbitrary precision is preserved; only the loop machinery is
compiled.
"""

PZERO = (0, ())
PONE = (0, (1,))

RHO = (-4, (1, 0, 0, 0, 1, 0, 0, 0, 1))

RZERO = (PZERO, PZERO)
RONE = (PONE, PZERO)

cdef tuple _PZERO = PZERO
cdef tuple _RHO = RHO


cdef tuple _canon_list(Py_ssize_t offset, list buf):
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = len(buf)
    while hi > lo and buf[hi - 1] == 0:
        hi -= 1
    if hi == lo:
        return _PZERO
    while buf[lo] == 0:
        lo += 1
    return (offset + lo, tuple(buf[lo:hi]))


cpdef tuple padd(tuple a, tuple b):
    cdef tuple ac = <tuple> a[1]
    cdef tuple bc = <tuple> b[1]
    if len(ac) == 0:
        return b
    if len(bc) == 0:
        return a
    cdef Py_ssize_t ao = a[0]
    cdef Py_ssize_t bo = b[0]
    cdef Py_ssize_t lo = ao if ao < bo else bo
    cdef Py_ssize_t hi_a = ao + len(ac)
    cdef Py_ssize_t hi_b = bo + len(bc)
    cdef Py_ssize_t hi = hi_a if hi_a > hi_b else hi_b
    cdef list buf = [0] * (hi - lo)
    cdef Py_ssize_t i
    for i in range(len(ac)):
        buf[ao - lo + i] = ac[i]
    for i in range(len(bc)):
        buf[bo - lo + i] = buf[bo - lo + i] + bc[i]
    return _canon_list(lo, buf)


cpdef tuple pneg(tuple a):
    cdef tuple ac = <tuple> a[1]
    if len(ac) == 0:
        return a
    cdef list buf = [-c for c in ac]
    return (a[0], tuple(buf))


cpdef tuple psub(tuple a, tuple b):
    return padd(a, pneg(b))


cpdef tuple pmul(tuple a, tuple b):
    cdef tuple ac = <tuple> a[1]
    cdef tuple bc = <tuple> b[1]
    cdef Py_ssize_t la = len(ac)
    cdef Py_ssize_t lb = len(bc)
    if la == 0 or lb == 0:
        return _PZERO
    cdef Py_ssize_t off = <Py_ssize_t> a[0] + <Py_ssize_t> b[0]
    cdef list buf
    cdef Py_ssize_t i, j
    cdef object ci
    if la == 1:
        ci = ac[0]
        buf = [ci * c for c in bc]
        return (off, tuple(buf))
    if lb == 1:
        ci = bc[0]
        buf = [ci * c for c in ac]
        return (off, tuple(buf))
    buf = [0] * (la + lb - 1)
    for i in range(la):
        ci = ac[i]
        if ci == 0:
            continue
        for j in range(lb):
            buf[i + j] = buf[i + j] + ci * bc[j]
    return _canon_list(off, buf)


cpdef tuple radd(tuple x, tuple y):
    return (padd(<tuple> x[0], <tuple> y[0]), padd(<tuple> x[1], <tuple> y[1]))


cpdef tuple rmul(tuple x, tuple y):
    cdef tuple xr = <tuple> x[0]
    cdef tuple xi = <tuple> x[1]
    cdef tuple yr = <tuple> y[0]
    cdef tuple yi = <tuple> y[1]
    if len((<tuple> xi[1])) == 0 and len((<tuple> yi[1])) == 0:
        return (pmul(xr, yr), _PZERO)
    cdef tuple rat = padd(pmul(xr, yr), pmul(pmul(xi, yi), _RHO))
    cdef tuple rad = padd(pmul(xr, yi), pmul(xi, yr))
    return (rat, rad)


def spgemm(dict a, dict b):
    """Sparse matrix product over ring-element values; see the pure twin."""
    cdef dict rows_b = {}
    cdef tuple rc
    cdef object v, u, acc
    cdef list row
    for rc, v in b.items():
        r = rc[0]
        if r in rows_b:
            (<list> rows_b[r]).append((rc[1], v))
        else:
            rows_b[r] = [(rc[1], v)]
    cdef dict out = {}
    cdef tuple ur, ui, vr, vi, rat, rad, key, pair
    cdef bint ui_nz
    for rc, u in a.items():
        rowo = rows_b.get(rc[1])
        if rowo is None:
            continue
        row = <list> rowo
        r = rc[0]
        ur = <tuple> (<tuple> u)[0]
        ui = <tuple> (<tuple> u)[1]
        ui_nz = len(<tuple> ui[1]) > 0
        for item in row:
            c2 = (<tuple> item)[0]
            pair = <tuple> (<tuple> item)[1]
            vr = <tuple> pair[0]
            vi = <tuple> pair[1]
            if ui_nz or len(<tuple> vi[1]) > 0:
                rat = padd(pmul(ur, vr), pmul(pmul(ui, vi), _RHO))
                rad = padd(pmul(ur, vi), pmul(ui, vr))
            else:
                rat = pmul(ur, vr)
                rad = _PZERO
            key = (r, c2)
            acc = out.get(key)
            if acc is None:
                out[key] = (rat, rad)
            else:
                out[key] = (padd(<tuple> (<tuple> acc)[0], rat),
                            padd(<tuple> (<tuple> acc)[1], rad))
    cdef dict cleaned = {}
    for key, v in out.items():
        pair = <tuple> v
        if len(<tuple> (<tuple> pair[0])[1]) > 0 or len(<tuple> (<tuple> pair[1])[1]) > 0:
            cleaned[key] = pair
    return cleaned
