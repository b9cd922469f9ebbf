"""Plain-text map configs: strict parser, canonical writer, content hash.

Grammar (one directive per line, ``#`` starts a comment, blank lines are
ignored)::

    [base]
    l = 1               # base torus dimension
    M = 2               # l comma-separated diagonal entries, integers >= 2

    [nu]
    p = 1               # middle-fiber dimension, 1 or 2

    [nu.lambda]         # conformal factor, a scalar trig polynomial
    0 : 0.2, 0.0        # "k1,...,kl : cos_coeff, sin_coeff"

    [nu.theta]          # rotation angle in radians; only allowed for p = 2
    [nu.f.1]            # i-th component of the middle translation, 1-based

    [psi]
    d = 1               # inner-fiber dimension
    lambda_tilde = 0.05 # constant inner rate, below inf lambda

    [psi.g.1]           # i-th component of the inner translation

    [domain]
    E_radius = 0.5
    F_radius = 0.5

Omitted ``[nu.f.i]`` / ``[psi.g.i]`` sections mean the zero component.
Unknown sections or keys are rejected, naming the offender: silent typos in
numeric-experiment configs are how irreproducible results happen.
"""

import hashlib
import re

from .errors import SpecParseError
from .model import SolenoidSpec
from .trig import trig_poly

_SECTION_RE = re.compile(r"^\[([a-zA-Z0-9_.]+)\]$")
_SCALAR_KEYS = {
    "base": ("l", "M"),
    "nu": ("p",),
    "psi": ("d", "lambda_tilde"),
    "domain": ("E_radius", "F_radius"),
}


def _strip(line):
    return line.split("#", 1)[0].strip()


def _collect_sections(text):
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current in sections:
                raise SpecParseError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
            continue
        if current is None:
            raise SpecParseError(f"line {lineno}: directive before any section header")
        sections[current].append((lineno, line))
    return sections


def _parse_scalars(section, lines):
    allowed = _SCALAR_KEYS[section]
    values = {}
    for lineno, line in lines:
        if "=" not in line:
            raise SpecParseError(f"line {lineno}: expected 'key = value' in section [{section}]")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in allowed:
            raise SpecParseError(f"line {lineno}: unknown key '{key}' in section [{section}]")
        if key in values:
            raise SpecParseError(f"line {lineno}: duplicate key '{key}' in section [{section}]")
        values[key] = (lineno, val)
    return values


def _need(values, section, key):
    if key not in values:
        raise SpecParseError(f"missing key '{key}' in section [{section}]")
    return values[key]


def _parse_int(section, key, lineno, text):
    try:
        return int(text)
    except ValueError:
        raise SpecParseError(f"line {lineno}: key '{key}' in [{section}] needs an integer, got '{text}'") from None


def _parse_float(section, key, lineno, text):
    try:
        return float(text)
    except ValueError:
        raise SpecParseError(f"line {lineno}: key '{key}' in [{section}] needs a number, got '{text}'") from None


def _parse_trig(name, lines, dimension):
    terms = []
    for lineno, line in lines:
        if ":" not in line:
            raise SpecParseError(f"line {lineno}: expected 'k1,...,kl : cos, sin' in section [{name}]")
        freq_text, _, coeff_text = line.partition(":")
        freq_parts = [p.strip() for p in freq_text.split(",")]
        if len(freq_parts) != dimension:
            raise SpecParseError(f"line {lineno}: frequency needs {dimension} integer(s) in section [{name}]")
        try:
            freq = tuple(int(p) for p in freq_parts)
        except ValueError:
            raise SpecParseError(f"line {lineno}: bad frequency '{freq_text.strip()}' in section [{name}]") from None
        coeff_parts = [p.strip() for p in coeff_text.split(",")]
        if len(coeff_parts) != 2:
            raise SpecParseError(f"line {lineno}: expected two coefficients (cos, sin) in section [{name}]")
        try:
            c, s = (float(p) for p in coeff_parts)
        except ValueError:
            raise SpecParseError(f"line {lineno}: bad coefficient in section [{name}]") from None
        terms.append((freq, c, s))
    if len({t[0] for t in terms}) != len(terms):
        raise SpecParseError(f"section [{name}] repeats a frequency")
    return trig_poly(dimension, terms)


def parse_spec(text):
    """Parse config text into a validated SolenoidSpec."""
    sections = _collect_sections(text)
    for required in ("base", "nu", "psi", "domain"):
        if required not in sections:
            raise SpecParseError(f"missing section [{required}]")

    base = _parse_scalars("base", sections["base"])
    nu = _parse_scalars("nu", sections["nu"])
    psi = _parse_scalars("psi", sections["psi"])
    domain = _parse_scalars("domain", sections["domain"])

    l = _parse_int("base", "l", *_need(base, "base", "l"))
    if l < 1:
        raise SpecParseError("base dimension l must be >= 1")
    m_lineno, m_text = _need(base, "base", "M")
    m_parts = [p.strip() for p in m_text.split(",")]
    if len(m_parts) != l:
        raise SpecParseError(f"line {m_lineno}: M needs {l} comma-separated entries")
    M = tuple(_parse_int("base", "M", m_lineno, p) for p in m_parts)

    p_dim = _parse_int("nu", "p", *_need(nu, "nu", "p"))
    d_dim = _parse_int("psi", "d", *_need(psi, "psi", "d"))
    lambda_tilde = _parse_float("psi", "lambda_tilde", *_need(psi, "psi", "lambda_tilde"))
    e_radius = _parse_float("domain", "E_radius", *_need(domain, "domain", "E_radius"))
    f_radius = _parse_float("domain", "F_radius", *_need(domain, "domain", "F_radius"))

    known = {"base", "nu", "psi", "domain", "nu.lambda", "nu.theta"}
    known |= {f"nu.f.{i}" for i in range(1, p_dim + 1)}
    known |= {f"psi.g.{i}" for i in range(1, d_dim + 1)}
    for name in sections:
        if name not in known:
            raise SpecParseError(f"unknown section [{name}]")

    if "nu.lambda" not in sections:
        raise SpecParseError("missing section [nu.lambda]")
    lambda_field = _parse_trig("nu.lambda", sections["nu.lambda"], l)
    theta_field = None
    if "nu.theta" in sections:
        theta_field = _parse_trig("nu.theta", sections["nu.theta"], l)
    f = tuple(
        _parse_trig(f"nu.f.{i}", sections.get(f"nu.f.{i}", []), l) for i in range(1, p_dim + 1)
    )
    g = tuple(
        _parse_trig(f"psi.g.{i}", sections.get(f"psi.g.{i}", []), l) for i in range(1, d_dim + 1)
    )

    return SolenoidSpec(
        l=l,
        p=p_dim,
        d=d_dim,
        M=M,
        lambda_field=lambda_field,
        f=f,
        lambda_tilde=lambda_tilde,
        g=g,
        E_radius=e_radius,
        F_radius=f_radius,
        theta_field=theta_field,
    )


def load_spec(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_spec(handle.read())


def _format_trig(name, poly, lines):
    if poly is None or not poly.terms:
        return
    lines.append(f"[{name}]")
    for freq, c, s in sorted(poly.terms):
        freq_text = ",".join(str(k) for k in freq)
        lines.append(f"{freq_text} : {c!r}, {s!r}")
    lines.append("")


def serialize_spec(spec):
    """Canonical config text; parsing it back yields an identical spec."""
    lines = ["[base]", f"l = {spec.l}", "M = " + ",".join(str(m) for m in spec.M), ""]
    lines += ["[nu]", f"p = {spec.p}", ""]
    _format_trig("nu.lambda", spec.lambda_field, lines)
    _format_trig("nu.theta", spec.theta_field, lines)
    for i, comp in enumerate(spec.f, start=1):
        _format_trig(f"nu.f.{i}", comp, lines)
    lines += ["[psi]", f"d = {spec.d}", f"lambda_tilde = {spec.lambda_tilde!r}", ""]
    for i, comp in enumerate(spec.g, start=1):
        _format_trig(f"psi.g.{i}", comp, lines)
    lines += ["[domain]", f"E_radius = {spec.E_radius!r}", f"F_radius = {spec.F_radius!r}", ""]
    return "\n".join(lines)


def spec_hash(spec):
    """sha256 of the canonical serialization; stable across formatting noise."""
    return hashlib.sha256(serialize_spec(spec).encode("utf-8")).hexdigest()
