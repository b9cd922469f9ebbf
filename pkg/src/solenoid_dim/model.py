"""The solenoid family and its rate/hypothesis diagnostics.

The map on V = T^l x E x F is

    T(x, y, z) = (M x mod 1,  lam(x) R(theta(x)) y + f(x),  lt z + g(x))

with M a diagonal integer matrix (entries >= 2), lam a trig-polynomial
conformal factor with values in (0,1), R a rotation (p = 2 only, angle in
radians), and lt a constant inner rate below inf lam.  The middle-fiber
derivative is lam(x) times a rotation by construction, so conformality never
has to be verified numerically.

For p = 2 the fiber is handled as the complex plane: the derivative acts as
multiplication by lam(x) e^{i theta(x)}, which keeps every downstream
recursion a scalar one.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidInputError, InvalidSpecError
from .trig import TrigPolynomial, zero

DOMAIN_TOL = 1e-12


def _sup_norm_bound(components):
    """Upper bound for |(f_1,...,f_k)(x)| from per-component range bounds."""
    sq = 0.0
    for comp in components:
        lo, hi = comp.range_bound()
        sq += max(abs(lo), abs(hi)) ** 2
    return math.sqrt(sq)


@dataclass(frozen=True)
class SolenoidSpec:
    """Parameters of one map of the family; immutable and validated on build."""

    l: int
    p: int
    d: int
    M: tuple
    lambda_field: TrigPolynomial
    f: tuple
    lambda_tilde: float
    g: tuple
    E_radius: float
    F_radius: float
    theta_field: TrigPolynomial = None

    def __post_init__(self):
        if self.l < 1:
            raise InvalidSpecError("base dimension l must be >= 1")
        if self.p not in (1, 2):
            raise InvalidSpecError("middle-fiber dimension p must be 1 or 2")
        if self.d < 1:
            raise InvalidSpecError("inner-fiber dimension d must be >= 1")
        if len(self.M) != self.l or any(int(m) != m or m < 2 for m in self.M):
            raise InvalidSpecError("M must be l integer diagonal entries, all >= 2")
        object.__setattr__(self, "M", tuple(int(m) for m in self.M))
        for name, poly, arity in (
            ("lambda", (self.lambda_field,), 1),
            ("f", self.f, self.p),
            ("g", self.g, self.d),
        ):
            if len(poly) != arity:
                raise InvalidSpecError(f"{name} must have {arity} component(s)")
            for comp in poly:
                if comp.dimension != self.l:
                    raise InvalidSpecError(f"{name} component has dimension {comp.dimension}, expected {self.l}")
        if self.theta_field is not None:
            if self.p != 2:
                raise InvalidSpecError("theta is only meaningful for p = 2")
            if self.theta_field.dimension != self.l:
                raise InvalidSpecError("theta dimension mismatch")
        lo, hi = self.lambda_field.range_bound()
        if not (0.0 < lo and hi < 1.0):
            raise InvalidSpecError(f"contraction factor bound [{lo:.6g}, {hi:.6g}] must stay inside (0, 1)")
        if not (0.0 < self.lambda_tilde < lo):
            raise InvalidSpecError(
                f"inner rate {self.lambda_tilde:.6g} must lie in (0, {lo:.6g}) below the middle rate"
            )
        if self.E_radius <= 0 or self.F_radius <= 0:
            raise InvalidSpecError("fiber radii must be positive")
        if hi * self.E_radius + _sup_norm_bound(self.f) > self.E_radius + DOMAIN_TOL:
            raise InvalidSpecError("middle fiber is not forward invariant: sup(lam)*E + sup|f| > E")
        if self.lambda_tilde * self.F_radius + _sup_norm_bound(self.g) > self.F_radius + DOMAIN_TOL:
            raise InvalidSpecError("inner fiber is not forward invariant: lt*F + sup|g| > F")

    @property
    def degree(self):
        """Number of inverse branches of the base map."""
        n = 1
        for m in self.M:
            n *= m
        return n

    @property
    def diam_E(self):
        return 2.0 * self.E_radius

    @property
    def diam_F(self):
        return 2.0 * self.F_radius


@dataclass(frozen=True)
class RateBounds:
    """Rigorous rate envelope plus a grid-scan refinement for reporting."""

    lambda_bar: float
    lambda_low: float
    beta_bar: float
    beta_low: float
    degree: int
    scan_lambda_low: float = None
    scan_lambda_bar: float = None


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of every rate inequality the dimension theorem asks for.

    ``excluded_word_exponent`` is the floor of the admissible exponent used
    to discard cylinders covering near-overlaps; together with the window cap
    log(lam_bar)/(2 log(lam_low)) it forms ``admissible_exponent_window``
    (None when empty).  ``conformal_ok`` is guaranteed by construction for
    the supported family and is reported for completeness.
    """

    rates_ok: bool
    conformal_ok: bool
    strong_contraction_ok: bool
    near_conformal_ok: bool
    excluded_word_exponent: float
    admissible_exponent_window: tuple
    slacks: dict = field(default_factory=dict)


# -- fiber evaluation -------------------------------------------------------
#
# All helpers accept x of shape (..., l) and vectorize over the leading axes.


def base_map(spec, x):
    """The expanding base map M x mod 1."""
    x = np.asarray(x, dtype=float)
    return np.mod(x * np.asarray(spec.M, dtype=float), 1.0)


def contraction(spec, x):
    """Conformal factor lam(x)."""
    return spec.lambda_field.value(x)

def rotation_angle(spec, x):
    x = np.asarray(x, dtype=float)
    if spec.theta_field is None:
        return np.zeros(x.shape[:-1])
    return spec.theta_field.value(x)


def multiplier(spec, x):
    """Middle-fiber derivative as a scalar: lam(x) (p=1) or lam(x) e^{i theta}."""
    lam = contraction(spec, x)
    if spec.p == 1:
        return lam
    return lam * np.exp(1j * rotation_angle(spec, x))


def translation(spec, x):
    """f(x) as a scalar (p=1) or complex number (p=2)."""
    if spec.p == 1:
        return spec.f[0].value(x)
    return spec.f[0].value(x) + 1j * spec.f[1].value(x)


def multiplier_gradient(spec, x):
    """d/dx of the multiplier, shape (..., l); complex for p = 2."""
    grad_lam = spec.lambda_field.gradient(x)
    if spec.p == 1:
        return grad_lam
    lam = contraction(spec, x)
    if spec.theta_field is None:
        grad_theta = np.zeros_like(grad_lam)
        theta = np.zeros(lam.shape)
    else:
        grad_theta = spec.theta_field.gradient(x)
        theta = spec.theta_field.value(x)
    return (grad_lam + 1j * lam[..., None] * grad_theta) * np.exp(1j * theta)[..., None]


def translation_gradient(spec, x):
    """d/dx of f, shape (..., l); complex for p = 2."""
    if spec.p == 1:
        return spec.f[0].gradient(x)
    return spec.f[0].gradient(x) + 1j * spec.f[1].gradient(x)


def inner_translation(spec, x):
    """g(x), shape (..., d)."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape[:-1] + (spec.d,))
    for i, comp in enumerate(spec.g):
        out[..., i] = comp.value(x)
    return out


def fiber_to_scalar(spec, y):
    """Real fiber vector (..., p) -> scalar/complex working representation."""
    y = np.asarray(y, dtype=float)
    if spec.p == 1:
        return y[..., 0]
    return y[..., 0] + 1j * y[..., 1]


def fiber_to_vector(spec, w):
    """Inverse of :func:`fiber_to_scalar`."""
    w = np.asarray(w)
    if spec.p == 1:
        return np.real(w)[..., None]
    return np.stack([np.real(w), np.imag(w)], axis=-1)


def apply(spec, point):
    """One step of T at point = (x, y, z); raises DomainError outside V."""
    x, y, z = (np.asarray(c, dtype=float) for c in point)
    if x.shape != (spec.l,) or y.shape != (spec.p,) or z.shape != (spec.d,):
        raise InvalidInputError(
            f"point shapes {x.shape}/{y.shape}/{z.shape} do not match (l,p,d)=({spec.l},{spec.p},{spec.d})"
        )
    if np.linalg.norm(y) > spec.E_radius + DOMAIN_TOL:
        raise DomainError(f"middle-fiber point |y|={np.linalg.norm(y):.6g} outside ball of radius {spec.E_radius}")
    if np.linalg.norm(z) > spec.F_radius + DOMAIN_TOL:
        raise DomainError(f"inner-fiber point |z|={np.linalg.norm(z):.6g} outside ball of radius {spec.F_radius}")
    new_y = fiber_to_vector(spec, multiplier(spec, x) * fiber_to_scalar(spec, y) + translation(spec, x))
    new_z = spec.lambda_tilde * z + inner_translation(spec, x)
    return base_map(spec, x), new_y, new_z


# -- rate bounds and hypothesis checks --------------------------------------


def rate_bounds(spec, scan_samples=4096):
    """Rigorous sup/inf of lam plus base-map rates; scan values are diagnostics."""
    lo, hi = spec.lambda_field.range_bound()
    if not (0.0 < lo and hi < 1.0):
        raise InvalidSpecError(f"contraction bound [{lo:.6g}, {hi:.6g}] leaves (0, 1)")
    scan_lo, scan_hi = spec.lambda_field.scan_range(scan_samples)
    return RateBounds(
        lambda_bar=hi,
        lambda_low=lo,
        beta_bar=float(max(spec.M)),
        beta_low=float(min(spec.M)),
        degree=spec.degree,
        scan_lambda_low=scan_lo,
        scan_lambda_bar=scan_hi,
    )


def check_hypotheses(bounds, l, p):
    """Evaluate the strong-contraction and near-conformal-expansion inequalities.

    All logarithms are natural.  The returned slacks are "right side minus
    left side" for each inequality, so positive slack means the condition
    holds with that margin.
    """
    lam_bar, lam_low = bounds.lambda_bar, bounds.lambda_low
    beta_bar, beta_low, n = bounds.beta_bar, bounds.beta_low, bounds.degree
    if not (0.0 < lam_low <= lam_bar) or not (1.0 < beta_low <= beta_bar) or n < 2:
        raise InvalidSpecError("rate bounds are not those of an expanding-base contraction")
    if lam_bar >= 1.0:
        raise InvalidSpecError("lambda_bar >= 1 makes the contraction logs degenerate")
    if beta_low == lam_bar:
        raise InvalidSpecError("beta_low equal to lambda_bar degenerates the exponent in the contraction test")

    log_n = math.log(n)
    rates_ok = lam_bar < 1.0 and beta_low > 1.0

    first_rhs = n ** (-float(max(l, 2)))
    exponent = 2.0 * log_n / math.log(beta_low / lam_bar) - l
    second_rhs = (beta_bar**l * beta_low**exponent) ** (2.0 * math.log(lam_low) / log_n)
    strong_ok = (lam_bar < first_rhs) and (lam_bar < second_rhs)

    near_rhs = math.sqrt(n) * beta_low**p
    near_ok = beta_bar**l < near_rhs

    pinch = beta_low ** (-float(l)) * lam_bar**p * n * n
    if pinch == 1.0:
        raise InvalidSpecError("degenerate pinching product: its log vanishes in the exponent floor")
    log_pinch = math.log(pinch)
    mu0 = (
        (l * math.log(beta_bar) - p * math.log(beta_low)) / (2.0 * log_n)
        - (l * math.log(beta_bar)) / log_pinch
    ) / (0.5 - (2.0 * log_n) / (2.0 * log_pinch))
    window_cap = math.log(lam_bar) / (2.0 * math.log(lam_low))
    window = (mu0, window_cap) if mu0 < window_cap else None

    slacks = {
        "strong_contraction_vs_degree": first_rhs - lam_bar,
        "strong_contraction_vs_rates": second_rhs - lam_bar,
        "near_conformal_expansion": near_rhs - beta_bar**l,
        "pinching_product_below_one": 1.0 - pinch,
        "exponent_window_width": window_cap - mu0,
        "window_cap_below_half": 0.5 - window_cap,
    }
    return HypothesisReport(
        rates_ok=rates_ok,
        conformal_ok=True,
        strong_contraction_ok=strong_ok,
        near_conformal_ok=near_ok,
        excluded_word_exponent=mu0,
        admissible_exponent_window=window,
        slacks=slacks,
    )
