"""Extended-precision oracle for the CES golden values frozen into the C++ tests.

Independent of the C++ implementation: every quantity is evaluated directly
from the model formulas in mpmath at 50 digits. The steady-state root is
located by a dense grid scan followed by bisection.

Run: python3 tests/oracle/ces_oracle.py
"""
import mpmath as mp

mp.mp.dps = 50

CANON = dict(A1=mp.mpf('1.05'), A2=mp.mpf('0.20'), a1=mp.mpf('0.75'), a2=mp.mpf('0.45'),
             p1=mp.mpf('0.2'), p2=mp.mpf('-0.2'), dk=mp.mpf('0.06'), dh=mp.mpf('0.05'),
             eps=mp.mpf(2), rho=mp.mpf('0.06'))


def theta(p):
    return (p['a2'] * (1 - p['a1']) / (p['a1'] * (1 - p['a2']))) ** (1 / (p['p1'] - p['p2']))


def shares(w, p):
    th = theta(p)
    P1 = p['a1'] * (th * w) ** p['p1'] + 1 - p['a1']
    P2 = p['a2'] * th ** p['p2'] * w ** (p['p2'] * (1 - p['p1']) / (1 - p['p2'])) + 1 - p['a2']
    return P1, P2


def w_of(u, v, p):
    return (v * (1 - u) / (u * (1 - v))) ** ((1 - p['p2']) / (p['p1'] - p['p2']))


def P_ces(w, p):
    th = theta(p)
    P1, P2 = shares(w, p)
    return (p['a1'] * p['A1'] * (th * w) ** (p['p1'] - 1) * P1 ** (1 / p['p1'] - 1)
            - (1 - p['a2']) * p['A2'] * P2 ** (1 / p['p2'] - 1) - (p['dk'] - p['dh']))


def aux(u, v, p):
    th = theta(p)
    w = w_of(u, v, p)
    P1, P2 = shares(w, p)
    tau = w ** ((p['p1'] - p['p2']) / (1 - p['p2']))
    D = (p['A2'] * (1 - u) * P2 ** (1 / p['p2']) - p['A1'] * v / (th * w) * P1 ** (1 / p['p1'])
         + p['dk'] - p['dh'])
    P = P_ces(w, p)
    T = p['a1'] * (1 - p['a2']) * (th * w) ** p['p1'] * (tau - 1) / tau
    Q = P1 * P2
    R = (1 - p['p1']) * (1 - p['p2']) * T
    G1 = (p['p1'] - p['p2']) * u + 1 - p['p1']
    G2 = (p['p1'] - p['p2']) * v + 1 - p['p1']
    Peps = p['a1'] * (p['eps'] * v - 1) * (th * w) ** p['p1'] + p['eps'] * (1 - p['a1']) * v
    return dict(theta=th, w=w, tau=tau, P1=P1, P2=P2, D=D, P=P, Q=Q, R=R, T=T, G1=G1, G2=G2,
                Peps=Peps)


def reduced_rhs(x, p):
    z, q, u, v = x
    a = aux(u, v, p)
    eps = p['eps']
    zd = -(a['D'] + q) * z
    qd = (q - p['A1'] * a['Peps'] * a['P1'] ** (1 / p['p1'] - 1) / (eps * a['theta'] * a['w'])
          - (p['rho'] - (eps - 1) * p['dk']) / eps) * q
    ud = (a['D'] + q + a['G2'] * a['Q'] * a['P'] / a['R']) * u * (1 - u) / (u - v)
    vd = (a['D'] + q + a['G1'] * a['Q'] * a['P'] / a['R']) * v * (1 - v) / (u - v)
    return [zd, qd, ud, vd]


def steady_state(p, grid=10**6):
    # geometric grid scan on [1e-6, 1e6] for the sign change of the decreasing P
    lo, hi = mp.mpf('1e-6'), mp.mpf('1e6')
    ratio = (hi / lo) ** (mp.mpf(1) / grid)
    # coarse float scan, then refine the bracket in extended precision
    import math
    fl = {k: float(v) for k, v in p.items()}
    th = (fl['a2'] * (1 - fl['a1']) / (fl['a1'] * (1 - fl['a2']))) ** (1 / (fl['p1'] - fl['p2']))

    def Pf(w):
        P1 = fl['a1'] * (th * w) ** fl['p1'] + 1 - fl['a1']
        P2 = fl['a2'] * th ** fl['p2'] * w ** (fl['p2'] * (1 - fl['p1']) / (1 - fl['p2'])) + 1 - fl['a2']
        return (fl['a1'] * fl['A1'] * (th * w) ** (fl['p1'] - 1) * P1 ** (1 / fl['p1'] - 1)
                - (1 - fl['a2']) * fl['A2'] * P2 ** (1 / fl['p2'] - 1) - (fl['dk'] - fl['dh']))
    r = math.exp(math.log(1e12) / grid)
    w0 = 1e-6
    f0 = Pf(w0)
    for _ in range(grid):
        w1 = w0 * r
        f1 = Pf(w1)
        if f0 > 0 >= f1:
            break
        w0, f0 = w1, f1
    a, b = mp.mpf(w0), mp.mpf(w1)
    for _ in range(200):
        m = (a + b) / 2
        if P_ces(m, p) > 0:
            a = m
        else:
            b = m
    w = (a + b) / 2
    th = theta(p)
    P1, P2 = shares(w, p)
    eps = p['eps']
    r = (p['a1'] * p['A1'] * (th * w) ** (p['p1'] - 1) * P1 ** (1 / p['p1'] - 1) - p['rho'] - p['dk']) / eps
    u = 1 - (r + p['dh']) / (p['A2'] * P2 ** (1 / p['p2']))
    tau = w ** ((p['p1'] - p['p2']) / (1 - p['p2']))
    v = tau * u / (1 + (tau - 1) * u)
    Peps = p['a1'] * (eps * v - 1) * (th * w) ** p['p1'] + eps * (1 - p['a1']) * v
    q = (p['A1'] / (th * w) * Peps * P1 ** (1 / p['p1'] - 1) + p['rho'] - p['dk'] * (eps - 1)) / eps
    z = th * w * u / v
    return dict(w=w, r=r, u=u, v=v, q=q, z=z, transversality=-(p['rho'] + (eps - 1) * r))


def jacobian(f, x, h=mp.mpf('1e-20')):
    n = len(x)
    J = mp.matrix(n, n)
    for j in range(n):
        xp = list(x); xm = list(x)
        xp[j] += h; xm[j] -= h
        fp, fm = f(xp), f(xm)
        for i in range(n):
            J[i, j] = (fp[i] - fm[i]) / (2 * h)
    return J


def det_row_reduction(J):
    A = [[J[i, j] for j in range(J.cols)] for i in range(J.rows)]
    n = len(A)
    det = mp.mpf(1)
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(A[r][c]))
        if A[piv][c] == 0:
            return mp.mpf(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            for k in range(c, n):
                A[r][k] -= f * A[c][k]
    return det


def show(name, val):
    print(f"{name:28s} {mp.nstr(val, 20)}")


if __name__ == '__main__':
    p = CANON
    show('theta', theta(p))
    show('theta (3/11)^2.5', (mp.mpf(3) / 11) ** mp.mpf('2.5'))
    P1, P2 = shares(mp.mpf(2), p)
    show('P1(w=2)', P1)
    show('P2(w=2)', P2)
    a = aux(mp.mpf('0.6'), mp.mpf('0.4'), p)
    for k in ['w', 'tau', 'P1', 'P2', 'D', 'P', 'Q', 'R', 'T', 'G1', 'G2', 'Peps']:
        show(f'aux(0.6,0.4).{k}', a[k])
    ss = steady_state(p)
    for k, v in ss.items():
        show(f'ss.{k}', v)
    x = [ss['z'], ss['q'], ss['u'], ss['v']]
    show('|rhs| at ss', mp.norm(mp.matrix(reduced_rhs(x, p))))
    J = jacobian(lambda y: reduced_rhs(y, p), x)
    print(J)
    show('det J (row reduction)', det_row_reduction(J))
    ev = mp.eig(J)[0]
    print('eigenvalues', [mp.nstr(e, 12) for e in ev])
