"""Backtracking kernel for constrained weak colourings of a uniform hypergraph.

The search state lives entirely in caller-owned numpy arrays, so a run can be
paused after ``node_limit`` decisions and resumed by calling again. Domains
are colour bitmasks; block constraints are "at least ``bmin[b]`` distinct
colours on block ``b``"; ``target[c]`` caps the size of colour class ``c``.

``search_py`` is the plain-Python body; ``search`` is the numba-compiled one
(or the same Python function when numba is disabled).
"""

import numpy as np

from ._jit import njit

UNSAT, SAT, PAUSED = 0, 1, 2

# scal slots
_DEPTH, _NODES, _TLEN, _ALEN, _PHASE = 0, 1, 2, 3, 4


def search_py(blocks, pb_ptr, pb_idx, bmin, target, grp_first, tiekey, fixed,
              col, dom, cnt, nass, ndist, size, trail_pt, trail_old, astack,
              dec_pt, dec_rem, dec_tr, dec_as, queue, scal, node_limit):
    v = col.shape[0]
    nb = blocks.shape[0]
    k = blocks.shape[1]
    delta = target.shape[0]
    full = (np.int64(1) << delta) - 1

    depth = scal[_DEPTH]
    nodes = scal[_NODES]
    tlen = scal[_TLEN]
    alen = scal[_ALEN]
    phase = scal[_PHASE]

    pending = False  # a point is waiting in the queue
    qh = 0
    qt = 0

    if phase == 0:
        for p in range(v):
            col[p] = -1
            dom[p] = full
        for bi in range(nb):
            nass[bi] = 0
            ndist[bi] = 0
            for c in range(delta):
                cnt[bi, c] = 0
        for c in range(delta):
            size[c] = 0
        tlen = 0
        alen = 0
        depth = 0
        # colours with nothing left to fill, and blocks that can never be satisfied
        for c in range(delta):
            if target[c] <= 0:
                for p in range(v):
                    dom[p] &= ~(np.int64(1) << c)
        for bi in range(nb):
            if bmin[bi] > k or bmin[bi] > delta:
                scal[_PHASE] = 3
                return UNSAT
        for p in range(v):
            if dom[p] == 0:
                scal[_PHASE] = 3
                return UNSAT
            if fixed[p] >= 0:
                bit = np.int64(1) << fixed[p]
                if dom[p] & bit == 0:
                    scal[_PHASE] = 3
                    return UNSAT
                dom[p] = bit
                queue[qt] = p
                qt += 1
        pending = qt > 0
        phase = 1
        if not pending:
            phase = 2  # nothing to propagate: go straight to first decision

    elif phase == 3:
        return UNSAT

    while True:
        if phase == 2 or phase == 1 and pending:
            # propagate the queue (phase 1 with pending only happens at the root)
            conflict = False
            while qh < qt and not conflict:
                p = queue[qh]
                qh += 1
                if col[p] != -1:
                    continue
                d = dom[p]
                if d == 0:
                    conflict = True
                    break
                c = 0
                while (d >> c) & 1 == 0:
                    c += 1
                col[p] = c
                astack[alen] = p
                alen += 1
                size[c] += 1
                for t in range(pb_ptr[p], pb_ptr[p + 1]):
                    bi = pb_idx[t]
                    if cnt[bi, c] == 0:
                        ndist[bi] += 1
                    cnt[bi, c] += 1
                    nass[bi] += 1
                if size[c] > target[c]:
                    conflict = True
                    break
                if size[c] == target[c]:
                    bit = np.int64(1) << c
                    for q in range(v):
                        if col[q] == -1 and dom[q] & bit:
                            trail_pt[tlen] = q
                            trail_old[tlen] = dom[q]
                            tlen += 1
                            dom[q] = dom[q] & ~bit
                            if dom[q] == 0:
                                conflict = True
                                break
                            if dom[q] & (dom[q] - 1) == 0:
                                queue[qt] = q
                                qt += 1
                    if conflict:
                        break
                for t in range(pb_ptr[p], pb_ptr[p + 1]):
                    bi = pb_idx[t]
                    u = k - nass[bi]
                    slack = ndist[bi] + u - bmin[bi]
                    if slack < 0:
                        conflict = True
                        break
                    if slack == 0 and u > 0:
                        present = np.int64(0)
                        for cc in range(delta):
                            if cnt[bi, cc] > 0:
                                present |= np.int64(1) << cc
                        for j in range(k):
                            q = blocks[bi, j]
                            if col[q] == -1 and dom[q] & present:
                                trail_pt[tlen] = q
                                trail_old[tlen] = dom[q]
                                tlen += 1
                                dom[q] = dom[q] & ~present
                                if dom[q] == 0:
                                    conflict = True
                                    break
                                if dom[q] & (dom[q] - 1) == 0:
                                    queue[qt] = q
                                    qt += 1
                        if conflict:
                            break
            qh = 0
            qt = 0
            pending = False

            if conflict:
                if depth == 0:
                    scal[_DEPTH] = depth
                    scal[_NODES] = nodes
                    scal[_PHASE] = 3
                    return UNSAT
                phase = 1
                continue

            # choose the next point: smallest domain, then most unsatisfied blocks, then tiekey
            best = -1
            best_ds = 1 << 30
            best_open = -1
            for p in range(v):
                if col[p] != -1:
                    continue
                d = dom[p]
                ds = 0
                while d:
                    d &= d - 1
                    ds += 1
                if ds > best_ds:
                    continue
                opened = 0
                for t in range(pb_ptr[p], pb_ptr[p + 1]):
                    bi = pb_idx[t]
                    if ndist[bi] < bmin[bi]:
                        opened += 1
                if ds < best_ds or opened > best_open or (opened == best_open and tiekey[p] < tiekey[best]):
                    best = p
                    best_ds = ds
                    best_open = opened
            if best < 0:
                scal[_DEPTH] = depth
                scal[_NODES] = nodes
                scal[_TLEN] = tlen
                scal[_ALEN] = alen
                scal[_PHASE] = 1
                return SAT
            allowed = np.int64(0)
            for c in range(delta):
                if size[c] > 0:
                    allowed |= np.int64(1) << c
                elif grp_first[c] or size[c - 1] > 0:
                    allowed |= np.int64(1) << c
            dec_pt[depth] = best
            dec_rem[depth] = dom[best] & allowed
            dec_tr[depth] = tlen
            dec_as[depth] = alen
            depth += 1
            phase = 1
            continue

        # phase 1: take the next branch of the top decision
        if nodes >= node_limit:
            scal[_DEPTH] = depth
            scal[_NODES] = nodes
            scal[_TLEN] = tlen
            scal[_ALEN] = alen
            scal[_PHASE] = 1
            return PAUSED
        if depth == 0:
            scal[_PHASE] = 3
            scal[_NODES] = nodes
            return UNSAT
        top = depth - 1
        while alen > dec_as[top]:
            alen -= 1
            p = astack[alen]
            c = col[p]
            size[c] -= 1
            for t in range(pb_ptr[p], pb_ptr[p + 1]):
                bi = pb_idx[t]
                cnt[bi, c] -= 1
                if cnt[bi, c] == 0:
                    ndist[bi] -= 1
                nass[bi] -= 1
            col[p] = -1
        while tlen > dec_tr[top]:
            tlen -= 1
            dom[trail_pt[tlen]] = trail_old[tlen]
        rem = dec_rem[top]
        if rem == 0:
            depth -= 1
            continue
        bit = rem & -rem
        dec_rem[top] = rem ^ bit
        nodes += 1
        p = dec_pt[top]
        trail_pt[tlen] = p
        trail_old[tlen] = dom[p]
        tlen += 1
        dom[p] = bit
        queue[0] = p
        qh = 0
        qt = 1
        phase = 2


search = njit(search_py)


def point_blocks(blocks: np.ndarray, v: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR incidence: blocks through point p are ``idx[ptr[p]:ptr[p+1]]``."""
    flat = blocks.ravel()
    owners = np.repeat(np.arange(blocks.shape[0]), blocks.shape[1])
    order = np.argsort(flat, kind="stable")
    ptr = np.zeros(v + 1, dtype=np.int64)
    np.cumsum(np.bincount(flat, minlength=v), out=ptr[1:])
    return ptr, owners[order].astype(np.int64)


class SearchState:
    """Arrays for one resumable kernel run."""

    def __init__(self, blocks, v, bmin, target, grp_first, tiekey, fixed):
        self.blocks = np.ascontiguousarray(blocks, dtype=np.int64).reshape(-1, blocks.shape[1] if blocks.ndim == 2 else 3)
        nb = self.blocks.shape[0]
        delta = len(target)
        self.pb_ptr, self.pb_idx = point_blocks(self.blocks, v)
        self.bmin = np.asarray(bmin, dtype=np.int64)
        self.target = np.asarray(target, dtype=np.int64)
        self.grp_first = np.asarray(grp_first, dtype=np.bool_)
        self.tiekey = np.asarray(tiekey, dtype=np.int64)
        self.fixed = np.asarray(fixed, dtype=np.int64)
        self.col = np.full(v, -1, dtype=np.int64)
        self.dom = np.zeros(v, dtype=np.int64)
        self.cnt = np.zeros((nb, delta), dtype=np.int64)
        self.nass = np.zeros(nb, dtype=np.int64)
        self.ndist = np.zeros(nb, dtype=np.int64)
        self.size = np.zeros(delta, dtype=np.int64)
        trail = v * (delta + 1) + 1
        self.trail_pt = np.zeros(trail, dtype=np.int64)
        self.trail_old = np.zeros(trail, dtype=np.int64)
        self.astack = np.zeros(v + 1, dtype=np.int64)
        self.dec_pt = np.zeros(v + 1, dtype=np.int64)
        self.dec_rem = np.zeros(v + 1, dtype=np.int64)
        self.dec_tr = np.zeros(v + 1, dtype=np.int64)
        self.dec_as = np.zeros(v + 1, dtype=np.int64)
        self.queue = np.zeros(2 * v + 2, dtype=np.int64)
        self.scal = np.zeros(8, dtype=np.int64)

    @property
    def nodes(self) -> int:
        return int(self.scal[_NODES])

    def run(self, node_limit: int, kernel=None) -> int:
        kernel = search if kernel is None else kernel
        return int(kernel(self.blocks, self.pb_ptr, self.pb_idx, self.bmin, self.target, self.grp_first,
                          self.tiekey, self.fixed, self.col, self.dom, self.cnt, self.nass, self.ndist,
                          self.size, self.trail_pt, self.trail_old, self.astack, self.dec_pt, self.dec_rem,
                          self.dec_tr, self.dec_as, self.queue, self.scal, np.int64(node_limit)))



# -- resolution search -------------------------------------------------------
# Each block gets a class label in 0..r-1; blocks sharing a point need
# different labels, and every point sees every label exactly once.

_CDEPTH, _CNODES, _CTLEN, _CPHASE, _CSTAMP = 0, 1, 2, 3, 4


def cover_py(bpts, th_ptr, th_idx, r, pivot, dom, lab, trail_b, trail_d, trail_l,
             dst_p, dst_c, dst_j, dst_t, q_b, q_c, pend, stamp, touched, cntc, scal, node_limit):
    nb = bpts.shape[0]
    k = bpts.shape[1]
    v = th_ptr.shape[0] - 1
    full = (np.int64(1) << r) - 1
    depth = scal[_CDEPTH]
    nodes = scal[_CNODES]
    tlen = scal[_CTLEN]
    phase = scal[_CPHASE]
    st = scal[_CSTAMP]
    qt = 0

    if phase == 3:
        return UNSAT
    if phase == 0:
        for b in range(nb):
            dom[b] = full
            lab[b] = -1
            pend[b] = 0
        for p in range(v):
            stamp[p] = 0
        tlen = 0
        depth = 0
        # labels are interchangeable: pin the blocks through one point
        c = 0
        for t in range(th_ptr[pivot], th_ptr[pivot + 1]):
            b = th_idx[t]
            pend[b] = c + 1
            q_b[qt] = b
            q_c[qt] = c
            qt += 1
            c += 1
        phase = 4  # propagate, then choose

    while True:
        if phase == 4:
            conflict = False
            while qt > 0 and not conflict:
                qt -= 1
                b = q_b[qt]
                c = q_c[qt]
                pend[b] = 0
                if lab[b] == c:
                    continue
                bit = np.int64(1) << c
                if lab[b] != -1 or dom[b] & bit == 0:
                    conflict = True
                    break
                trail_b[tlen] = b
                trail_d[tlen] = dom[b]
                trail_l[tlen] = lab[b]
                tlen += 1
                dom[b] = bit
                lab[b] = c
                st += 1
                nt = 0
                for j in range(k):
                    p = bpts[b, j]
                    if stamp[p] != st:
                        stamp[p] = st
                        touched[nt] = p
                        nt += 1
                    for t in range(th_ptr[p], th_ptr[p + 1]):
                        b2 = th_idx[t]
                        if b2 == b or dom[b2] & bit == 0:
                            continue
                        if lab[b2] != -1:
                            conflict = True
                            break
                        trail_b[tlen] = b2
                        trail_d[tlen] = dom[b2]
                        trail_l[tlen] = -1
                        tlen += 1
                        d = dom[b2] & ~bit
                        dom[b2] = d
                        if d == 0:
                            conflict = True
                            break
                        if d & (d - 1) == 0:
                            c2 = 0
                            while (d >> c2) & 1 == 0:
                                c2 += 1
                            if pend[b2] == 0:
                                pend[b2] = c2 + 1
                                q_b[qt] = b2
                                q_c[qt] = c2
                                qt += 1
                            elif pend[b2] != c2 + 1:
                                conflict = True
                                break
                        for j2 in range(k):
                            p2 = bpts[b2, j2]
                            if stamp[p2] != st:
                                stamp[p2] = st
                                touched[nt] = p2
                                nt += 1
                    if conflict:
                        break
                if conflict:
                    break
                # a label with a single possible block at some point is forced
                for i in range(nt):
                    p = touched[i]
                    seen = np.int64(0)
                    once = np.int64(0)
                    for t in range(th_ptr[p], th_ptr[p + 1]):
                        d = dom[th_idx[t]]
                        once = (once & ~d) | (d & ~seen)
                        seen |= d
                    if seen != full:
                        conflict = True
                        break
                    while once:
                        c2 = 0
                        while (once >> c2) & 1 == 0:
                            c2 += 1
                        once &= ~(np.int64(1) << c2)
                        for t in range(th_ptr[p], th_ptr[p + 1]):
                            b2 = th_idx[t]
                            if (dom[b2] >> c2) & 1:
                                if lab[b2] == -1:
                                    if pend[b2] == 0:
                                        pend[b2] = c2 + 1
                                        q_b[qt] = b2
                                        q_c[qt] = c2
                                        qt += 1
                                    elif pend[b2] != c2 + 1:
                                        conflict = True
                                break
                        if conflict:
                            break
                    if conflict:
                        break
            while qt > 0:
                qt -= 1
                pend[q_b[qt]] = 0
            if conflict:
                if depth == 0:
                    scal[_CPHASE] = 3
                    scal[_CNODES] = nodes
                    return UNSAT
                phase = 1
            else:
                phase = 2

        if phase == 2:
            # branch on the (point, label) pair with the fewest candidate blocks
            best_n = nb + 1
            best_p = -1
            best_c = -1
            for p in range(v):
                for c in range(r):
                    cntc[c] = 0
                placed = np.int64(0)
                for t in range(th_ptr[p], th_ptr[p + 1]):
                    b = th_idx[t]
                    if lab[b] != -1:
                        placed |= np.int64(1) << lab[b]
                    else:
                        d = dom[b]
                        c = 0
                        while d:
                            if d & 1:
                                cntc[c] += 1
                            d >>= 1
                            c += 1
                for c in range(r):
                    if (placed >> c) & 1 == 0 and cntc[c] < best_n:
                        best_n = cntc[c]
                        best_p = p
                        best_c = c
                if best_n <= 1:
                    break
            if best_p < 0:
                scal[_CDEPTH] = depth
                scal[_CNODES] = nodes
                scal[_CTLEN] = tlen
                scal[_CPHASE] = 1
                scal[_CSTAMP] = st
                return SAT
            dst_p[depth] = best_p
            dst_c[depth] = best_c
            dst_j[depth] = th_ptr[best_p]
            dst_t[depth] = tlen
            depth += 1
            phase = 1

        # phase 1: next alternative of the top decision
        if nodes >= node_limit:
            scal[_CDEPTH] = depth
            scal[_CNODES] = nodes
            scal[_CTLEN] = tlen
            scal[_CPHASE] = 1
            scal[_CSTAMP] = st
            return PAUSED
        if depth == 0:
            scal[_CPHASE] = 3
            scal[_CNODES] = nodes
            return UNSAT
        top = depth - 1
        while tlen > dst_t[top]:
            tlen -= 1
            dom[trail_b[tlen]] = trail_d[tlen]
            lab[trail_b[tlen]] = trail_l[tlen]
        p = dst_p[top]
        c = dst_c[top]
        j = dst_j[top]
        end = th_ptr[p + 1]
        while j < end:
            b = th_idx[j]
            if lab[b] == -1 and (dom[b] >> c) & 1:
                break
            j += 1
        if j >= end:
            depth -= 1
            continue
        dst_j[top] = j + 1
        nodes += 1
        pend[th_idx[j]] = c + 1
        q_b[0] = th_idx[j]
        q_c[0] = c
        qt = 1
        phase = 4


cover = njit(cover_py)


class CoverState:
    """Arrays for one resumable resolution search."""

    def __init__(self, blocks, v: int, r: int, pivot: int):
        self.bpts = np.ascontiguousarray(blocks, dtype=np.int64)
        nb = self.bpts.shape[0]
        self.th_ptr, self.th_idx = point_blocks(self.bpts, v)
        self.r = np.int64(r)
        self.pivot = np.int64(pivot)
        self.dom = np.zeros(nb, dtype=np.int64)
        self.lab = np.full(nb, -1, dtype=np.int64)
        size = nb * (r + 1) + 1
        self.trail_b = np.zeros(size, dtype=np.int64)
        self.trail_d = np.zeros(size, dtype=np.int64)
        self.trail_l = np.zeros(size, dtype=np.int64)
        self.dst = [np.zeros(nb + 1, dtype=np.int64) for _ in range(4)]
        self.q_b = np.zeros(nb + 1, dtype=np.int64)
        self.q_c = np.zeros(nb + 1, dtype=np.int64)
        self.pend = np.zeros(nb, dtype=np.int64)
        self.stamp = np.zeros(v, dtype=np.int64)
        self.touched = np.zeros(v, dtype=np.int64)
        self.cntc = np.zeros(max(r, 1), dtype=np.int64)
        self.scal = np.zeros(8, dtype=np.int64)

    @property
    def nodes(self) -> int:
        return int(self.scal[_CNODES])

    def run(self, node_limit: int, kernel=None) -> int:
        kernel = cover if kernel is None else kernel
        return int(kernel(self.bpts, self.th_ptr, self.th_idx, self.r, self.pivot, self.dom, self.lab,
                          self.trail_b, self.trail_d, self.trail_l, *self.dst, self.q_b, self.q_c,
                          self.pend, self.stamp, self.touched, self.cntc, self.scal, np.int64(node_limit)))
