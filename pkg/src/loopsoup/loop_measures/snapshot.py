"""Binary soup snapshots (format "SOUPF1", little-endian, bit-exact
round trip).

Layout:
  magic   6 bytes  b"SOUPF1"
  u8      version (1)
  u8      measure kind (0 loop, 1 massive, 2 disk)
  f64     mass_bound (0 when absent)
  f64     lambda
  f64     delta
  f64     t_min
  u64     seed (2**64-1 when absent)
  f64 x2  domain Moebius parameter a (re, im); NaN,NaN for plain disk
  f64     domain Moebius theta (NaN for plain disk)
  u32     loop count
per loop:
  u8      representation (0 polyline, 1 disk)
  i8      mark
  f64     time length
  disk:     f64 x3 (center re, center im, radius)
  polyline: u32 point count, then packed f64 re/im pairs
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import InvalidQuery
from ..geometry import Domain, MoebiusMap, UNIT_DISK
from .loops import Loop, MarkedLoop, MeasureKind
from .soups import MarkedSoup

__all__ = ["write_soup", "read_soup"]

MAGIC = b"SOUPF1"
_KINDS = {"loop": 0, "massive": 1, "disk": 2}
_KINDS_INV = {v: k for k, v in _KINDS.items()}


def write_soup(soup: MarkedSoup, path) -> None:
    mo = soup.domain.moebius
    a = mo.a if mo else complex(np.nan, np.nan)
    th = mo.theta if mo else np.nan
    seed = soup.seed if soup.seed is not None else 2**64 - 1
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<BBdddQ", 1, _KINDS[soup.measure.kind],
                             soup.measure.mass_bound or 0.0, soup.lam,
                             soup.delta, seed))
        fh.write(struct.pack("<dddd", soup.t_min, a.real, a.imag, th))
        fh.write(struct.pack("<I", len(soup.loops)))
        for ml in soup.loops:
            lp = ml.loop
            if lp.representation == "disk":
                fh.write(struct.pack("<Bbd", 1, ml.mark, lp.time_length))
                fh.write(struct.pack("<ddd", lp.center.real, lp.center.imag,
                                     lp.radius))
            else:
                fh.write(struct.pack("<Bbd", 0, ml.mark, lp.time_length))
                fh.write(struct.pack("<I", len(lp.points)))
                buf = np.empty(2 * len(lp.points))
                buf[0::2] = lp.points.real
                buf[1::2] = lp.points.imag
                fh.write(buf.astype("<f8").tobytes())


def read_soup(path) -> MarkedSoup:
    with open(path, "rb") as fh:
        if fh.read(6) != MAGIC:
            raise InvalidQuery("not a SOUPF1 snapshot")
        version, kind, mbar, lam, delta, seed = struct.unpack(
            "<BBdddQ", fh.read(struct.calcsize("<BBdddQ")))
        if version != 1:
            raise InvalidQuery(f"unsupported snapshot version {version}")
        t_min, are, aim, th = struct.unpack("<dddd", fh.read(32))
        n = struct.unpack("<I", fh.read(4))[0]
        kind_name = _KINDS_INV[kind]
        measure = MeasureKind(kind_name,
                              mbar if kind_name == "massive" else None)
        domain = UNIT_DISK if np.isnan(th) else \
            Domain(MoebiusMap(complex(are, aim), th))
        loops = []
        for _ in range(n):
            rep, mark, t = struct.unpack("<Bbd", fh.read(struct.calcsize("<Bbd")))
            if rep == 1:
                cr, ci, r = struct.unpack("<ddd", fh.read(24))
                lp = Loop("disk", center=complex(cr, ci), radius=r,
                          time_length=t, diameter=2 * r)
            else:
                npts = struct.unpack("<I", fh.read(4))[0]
                buf = np.frombuffer(fh.read(16 * npts), dtype="<f8")
                lp = Loop("polyline", points=buf[0::2] + 1j * buf[1::2],
                          time_length=t)
                lp.diameter = 0.0  # placeholder, fixed below
                from .loops import polyline_diameter
                lp.diameter = polyline_diameter(lp.points)
            loops.append(MarkedLoop(lp, mark))
        return MarkedSoup(loops, lam, delta, measure, domain,
                          t_min, None if seed == 2**64 - 1 else seed)
