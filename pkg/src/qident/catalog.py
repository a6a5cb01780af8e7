"""Verifiable identity records: the built-in catalog and the text catalog format.

Catalog file grammar, one record per line::

    id=<key> form=<T1|T2|T2S> <param>=<value> ...

``<value>`` is an integer, a decimal (``-0.25``) or a rational ``p/q``.
T1 takes ``alpha a b c``; T2 and T2S take ``alpha beta gamma delta a b c d``.
Everything after ``#`` is a comment; blank lines are ignored.  Ids must be
unique within a file.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mpf

from .errors import InvalidParams, ParseError
from .hyper import T1Params, T2Params
from .numeric import parse_exact

__all__ = [
    "Form",
    "ClassicalTarget",
    "IdentityRecord",
    "builtin_catalog",
    "lookup",
    "pseudo_records",
    "parse_catalog",
    "serialize_catalog",
    "TEMPLATE_KEYS",
]


class Form(str, enum.Enum):
    TEMPLATE_T1 = "T1"
    TEMPLATE_T2 = "T2"
    TEMPLATE_T2S = "T2S"
    LITERAL = "LITERAL"
    GAUSS = "GAUSS"
    PHI65 = "PHI65"
    FUNCTION = "FUNCTION"

    @property
    def is_template(self) -> bool:
        return self in (Form.TEMPLATE_T1, Form.TEMPLATE_T2, Form.TEMPLATE_T2S)


TEMPLATE_KEYS = {
    Form.TEMPLATE_T1: ("alpha", "a", "b", "c"),
    Form.TEMPLATE_T2: ("alpha", "beta", "gamma", "delta", "a", "b", "c", "d"),
    Form.TEMPLATE_T2S: ("alpha", "beta", "gamma", "delta", "a", "b", "c", "d"),
}


@dataclass(frozen=True)
class ClassicalTarget:
    """ratio * sqrt(3)^[with_sqrt3] * pi^pi_power, evaluated with mpmath's pi."""

    ratio: Fraction
    pi_power: int
    with_sqrt3: bool = False
    source: str = ""

    def value(self) -> mpf:
        v = mpf(self.ratio.numerator) / self.ratio.denominator * mpmath.pi**self.pi_power
        if self.with_sqrt3:
            v *= mpmath.sqrt(3)
        return v

    def __str__(self):
        parts = [str(self.ratio)]
        if self.with_sqrt3:
            parts.append("sqrt(3)")
        if self.pi_power:
            parts.append("pi" if self.pi_power == 1 else f"pi^{self.pi_power}")
        return "*".join(parts)


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    form: Form
    params: tuple = ()
    description: str = ""
    literal_key: Optional[str] = None
    sibling: Optional[str] = None
    sibling_factor: Optional[str] = None
    rhs_variant: Optional[str] = None
    limit_target: Optional[ClassicalTarget] = None
    limit_scale: Fraction = Fraction(1)
    limit_qfactor: Optional[str] = None
    exploratory: bool = False

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    def template_params(self):
        d = self.param_dict
        if self.form is Form.TEMPLATE_T1:
            return T1Params(**d)
        if self.form in (Form.TEMPLATE_T2, Form.TEMPLATE_T2S):
            return T2Params(**d)
        raise TypeError(f"{self.id} is not a template record")

    def valid_for(self, q) -> bool:
        return 0 < q < 1


def _p(**kw):
    return tuple((k, Fraction(v)) for k, v in kw.items())


def _t1(alpha, a, b, c):
    return _p(alpha=alpha, a=a, b=b, c=c)


def _t2(greek, latin):
    al, be, ga, de = greek
    a, b, c, d = latin
    return _p(alpha=al, beta=be, gamma=ga, delta=de, a=a, b=b, c=c, d=d)


H = Fraction(1, 2)
T31_GREEK = (H, H, Fraction(1, 3), Fraction(2, 3))
T41_GREEK = (0, H, H, H)


def _target(ratio, pi_power, sqrt3=False, source=""):
    return ClassicalTarget(Fraction(ratio), pi_power, sqrt3, source)


def _build() -> tuple:
    R = IdentityRecord
    T1, T2, T2S, LIT = Form.TEMPLATE_T1, Form.TEMPLATE_T2, Form.TEMPLATE_T2S, Form.LITERAL
    recs = [
        R("T1_MAIN", T1, _t1(Fraction(1, 3), Fraction(1, 5), Fraction(-1, 10), Fraction(3, 2)),
          "first template, generic real parameters"),
        R("T2_MAIN", T2, _t2((Fraction(7, 10), Fraction(3, 10), Fraction(2, 5), Fraction(9, 20)),
                             (Fraction(1, 5), Fraction(1, 10), 0, Fraction(3, 10))),
          "second template, generic real parameters"),
        R("T2S_MAIN", T2S, _t2((Fraction(1, 4), H, Fraction(1, 3), Fraction(2, 5)),
                               (1, 0, H, Fraction(1, 5))),
          "shifted second template, generic real parameters"),
    ]
    cor_targets = {
        1: (_target(4, -1, source="sum (1/2)_n^2/(n!(n+1)!) = 4/pi"), "strip_cor_l1"),
        2: (_target(Fraction(16, 9), -1, source="sum (1/2)_n^2/(n!(n+2)!) = 16/(9 pi)"),
            "strip_cor_l2"),
    }
    for l in range(1, 5):
        target, qfac = cor_targets.get(l, (None, None))
        recs.append(R(f"T3_COR_L{l}", T1, _t1(H, 0, 0, l),
                      f"alpha=1/2, a=b=0, c={l}: series for 1/pi_q", rhs_variant="thm3",
                      limit_target=target, limit_qfactor=qfac))
    neg_targets = {
        0: (_target(16, -1, source="5 + sum (1/2)_n^2/(n+1)!^2 = 16/pi"), "strip_neg_l0"),
        1: (_target(Fraction(256, 9), -1, source="9 + 2 sum (1/2)_n^2/((n+1)!(n+2)!) = 256/(9 pi)"),
            "strip_neg_l1_template"),
    }
    for l in range(0, 4):
        target, qfac = neg_targets.get(l, (None, None))
        recs.append(R(f"T3_NEG_L{l}", T1, _t1(H, -1, -1, l),
                      f"alpha=1/2, a=b=-1, c={l}: series for 1/pi_q", rhs_variant="thm3",
                      limit_target=target, limit_qfactor=qfac))
    recs += [
        R("T3_COR_EX1", LIT, description="sum (1/2|q^2)_n^2/([n]![n+1]!) q^(2n) = (1+q)^2 q^(1/4)/pi_q",
          literal_key="cor_l1", sibling="T3_COR_L1", limit_target=cor_targets[1][0],
          limit_qfactor="strip_cor_l1"),
        R("T3_COR_EX2", LIT, description="sum (1/2|q^2)_n^2/([n]![n+2]!) q^(4n) = (1+q)^4 q^(1/4)/(pi_q (1+q+q^2)^2)",
          literal_key="cor_l2", sibling="T3_COR_L2", limit_target=cor_targets[2][0],
          limit_qfactor="strip_cor_l2"),
        R("T3_LIT_L0", LIT, description="q^2(1+q)^2 + q^4 + sum_(n>=1) ... q^(4n+4) = (1+q)^4 q^(9/4)/pi_q",
          literal_key="neg_l0", sibling="T3_NEG_L0", limit_target=neg_targets[0][0],
          limit_qfactor="strip_neg_l0"),
        R("T3_LIT_L1", LIT, description="q^2(1+q)^2(1+q^2) + q^6 + (1+q^2) sum_(n>=1) ... q^(6n+6)",
          literal_key="neg_l1", sibling="T3_NEG_L1", sibling_factor="one_plus_q2",
          limit_target=neg_targets[1][0], limit_qfactor="strip_neg_l1"),
        R("T31_MAIN", T2, _t2(T31_GREEK, (1, 1, 0, 1)),
          "(alpha,beta,gamma,delta)=(1/2,1/2,1/3,2/3), (a,b,c,d)=(1,1,0,1)", rhs_variant="thm31"),
        R("T31_EX1", T2, _t2(T31_GREEK, (1, 0, 0, 0)), "(a,b,c,d)=(1,0,0,0)", rhs_variant="thm31",
          limit_target=_target(Fraction(1, 6), -1, True, "sum ... = sqrt(3)/(6 pi)"),
          limit_scale=Fraction(1, 9)),
        R("T31_EX1_LIT", LIT, description="printed form of the (1,0,0,0) instance",
          literal_key="t31_ex1", sibling="T31_EX1",
          limit_target=_target(Fraction(1, 6), -1, True, "sum ... = sqrt(3)/(6 pi)"),
          limit_scale=Fraction(1, 9)),
        R("T31_A0001", T2, _t2(T31_GREEK, (0, 0, 0, 1)), "(a,b,c,d)=(0,0,0,1)", rhs_variant="thm31"),
        R("T31_EX2", LIT, description="printed head-minus-series form of the (0,0,0,1) instance",
          literal_key="t31_ex2", sibling="T31_A0001", sibling_factor="minus_one",
          limit_target=_target(Fraction(5, 3), -1, True, "1 - (5/18) sum ... = 5/(sqrt(3) pi)"),
          limit_scale=Fraction(5, 9)),
        R("T41_MAIN", T2S, _t2(T41_GREEK, (2, 1, 0, 1)),
          "(alpha,beta,gamma,delta)=(0,1/2,1/2,1/2), (a,b,c,d)=(2,1,0,1)", rhs_variant="thm41"),
        R("T41_A1000", T2S, _t2(T41_GREEK, (1, 0, 0, 0)), "(a,b,c,d)=(1,0,0,0)", rhs_variant="thm41",
          limit_target=_target(Fraction(1, 8), 2, source="sum 1/(2n+1)^2 = pi^2/8"),
          limit_scale=Fraction(1, 8)),
        R("T41_SUN", LIT, description="sum (1+q^(2n+1)) q^n/(1-q^(2n+1))^2 = pi_q^2/((1-q^2)^2 q^(1/2))",
          literal_key="pi2_ex1", sibling="T41_A1000", sibling_factor="inv_1mq2_pow2",
          limit_target=_target(Fraction(1, 8), 2, source="sum 1/(2n+1)^2 = pi^2/8"),
          limit_qfactor="odd_sq_pow2"),
        R("T41_EX2", T2S, _t2(T41_GREEK, (1, 1, 1, 0)), "(a,b,c,d)=(1,1,1,0)", rhs_variant="thm41",
          limit_target=_target(Fraction(3, 256), 2, source="sum 1/((2n-1)^2(2n+1)^2(2n+3)^2) = 3 pi^2/256"),
          limit_qfactor="inv_1pq_pow7"),
        R("T41_EX2_LIT", LIT, description="printed form of the (1,1,1,0) instance",
          literal_key="pi2_ex2", sibling="T41_EX2", sibling_factor="inv_1mq2_pow6",
          limit_target=_target(Fraction(3, 256), 2, source="sum 1/((2n-1)^2(2n+1)^2(2n+3)^2) = 3 pi^2/256"),
          limit_qfactor="odd_sq_pow6"),
        R("T41_A1111", T2S, _t2(T41_GREEK, (1, 1, 1, 1)), "(a,b,c,d)=(1,1,1,1)", rhs_variant="thm41"),
        R("T41_EX3", LIT, description="printed head-minus-series form of the (1,1,1,1) instance",
          literal_key="pi2_ex3", sibling="T41_A1111", sibling_factor="minus_inv_1mq2_pow8",
          limit_target=_target(Fraction(15, 4096), 2,
                               source="1/27 - sum 1/((2n-1)^3(2n+1)^2(2n+3)^3) = 15 pi^2/4096"),
          limit_qfactor="odd_sq_pow8"),
        R("GAUSS_CHK", Form.GAUSS, _p(a=Fraction(3, 5), b=Fraction(4, 5), c=2),
          "q-Gauss sum with a=q^(3/5), b=q^(4/5), c=q^2"),
        R("PHI65_CHK", Form.PHI65, _p(a=1, b=Fraction(3, 10), c=Fraction(2, 5), d=H),
          "very-well-poised 6phi5 sum with a=q, b=q^(3/10), c=q^(2/5), d=q^(1/2)"),
        R("T1_EXP_A13", T1, _t1(Fraction(1, 3), 0, 0, 1), "exploratory: alpha=1/3, a=b=0, c=1",
          exploratory=True),
        R("T1_EXP_A14", T1, _t1(Fraction(1, 4), 0, 0, 1), "exploratory: alpha=1/4, a=b=0, c=1",
          exploratory=True),
    ]
    return tuple(recs)


_BUILTIN = _build()
_PSEUDO = (
    IdentityRecord("PI_Q", Form.FUNCTION, description="pi_q",
                   limit_target=_target(1, 1, source="lim pi_q = pi")),
    IdentityRecord("SIN_Q", Form.FUNCTION, _p(x=Fraction(1, 3)), description="sin_q(pi/3)",
                   limit_target=_target(H, 0, True, "lim sin_q(pi x) = sin(pi x) at x = 1/3")),
)


def builtin_catalog() -> list:
    return list(_BUILTIN)


def pseudo_records() -> list:
    """Function-valued limit subjects that are not identities."""
    return list(_PSEUDO)


def lookup(identity_id: str, records=None) -> Optional[IdentityRecord]:
    pool = _BUILTIN + _PSEUDO if records is None else records
    for rec in pool:
        if rec.id == identity_id:
            return rec
    return None


# ---------------------------------------------------------------------------
# text format

_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NUM_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$|^[+-]?\d+\s*/\s*\d+$")


def _format_value(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_catalog(text: str) -> list:
    records = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = {}
        for token in line.split():
            if "=" not in token:
                raise ParseError(f"expected key=value, got {token!r}", lineno)
            key, value = token.split("=", 1)
            if key in fields:
                raise ParseError(f"duplicate key {key!r}", lineno)
            fields[key] = value
        rid = fields.pop("id", None)
        if rid is None or not _ID_RE.match(rid):
            raise ParseError("missing or malformed id", lineno)
        if rid in seen:
            raise ParseError(f"duplicate id {rid!r}", lineno)
        form_name = fields.pop("form", None)
        try:
            form = Form(form_name)
        except ValueError:
            form = None
        if form is None or not form.is_template:
            raise ParseError(f"form must be one of T1, T2, T2S, got {form_name!r}", lineno)
        wanted = TEMPLATE_KEYS[form]
        unknown = sorted(set(fields) - set(wanted))
        if unknown:
            raise ParseError(f"unknown parameter(s) {', '.join(unknown)} for form {form.value}", lineno)
        missing = [k for k in wanted if k not in fields]
        if missing:
            raise ParseError(f"missing parameter(s) {', '.join(missing)}", lineno)
        params = []
        for k in wanted:
            if not _NUM_RE.match(fields[k]):
                raise ParseError(f"{k}={fields[k]!r} is not a rational or decimal", lineno)
            try:
                params.append((k, parse_exact(fields[k])))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        record = IdentityRecord(rid, form, tuple(params))
        try:
            record.template_params()
        except InvalidParams as exc:
            raise InvalidParams(f"line {lineno}: {exc}") from None
        seen.add(rid)
        records.append(record)
    return records


def serialize_catalog(records) -> str:
    """Inverse of :func:`parse_catalog` for template records (other fields are dropped)."""
    lines = []
    for rec in records:
        if not rec.form.is_template:
            raise ValueError(f"{rec.id}: only template records have a text form")
        body = " ".join(f"{k}={_format_value(v)}" for k, v in rec.params)
        lines.append(f"id={rec.id} form={rec.form.value} {body}")
    return "\n".join(lines) + ("\n" if lines else "")
