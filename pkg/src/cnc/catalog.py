"""One small instance of every inference rule, for coverage checks."""

from __future__ import annotations

from .kernel.nd import NDDerivation, check_nd
from .syntax.parser import parse_context, parse_formula, parse_proof, parse_term
from .syntax.sequents import ProofTree

SC_INSTANCES: dict[str, str] = {
    "ax_C": "(ax_C (seq C [x:p] p))",
    "unitR": "(unitR (seq C [] I_c))",
    "unitL": "(unitL (seq C [u:I_c, x:p] p) (ax_C (seq C [x:p] p)))",
    "tenL": """(tenL (seq C [z:p * q] p * q)
                 (tenR (seq C [x:p, y:q] p * q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:q] q))))""",
    "tenR": "(tenR (seq C [x:p, y:q] p * q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:q] q)))",
    "impL": "(impL (seq C [f:p -o q, x:p] q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:q] q)))",
    "impR": "(impR (seq C [] p -o p) (ax_C (seq C [x:p] p)))",
    "Gr": "(Gr (seq C [x:G a] G a) (Gl (seq L [x:G a] a) (ax_L (seq L [y:a] a))))",
    "ex_C": """(ex_C (seq C [x:p, y:q] q * p)
                 (tenR (seq C [y:q, x:p] q * p) (ax_C (seq C [y:q] q)) (ax_C (seq C [x:p] p))))""",
    "cut": "(cut (seq C [x:p] p) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:p] p)))",
    "ax_L": "(ax_L (seq L [x:a] a))",
    "unitL1": "(unitL1 (seq L [u:I_c; x:a] a) (ax_L (seq L [x:a] a)))",
    "unitL2": "(unitL2 (seq L [u:I_l; x:a] a) (ax_L (seq L [x:a] a)))",
    "unitR_L": "(unitR_L (seq L [] I_l))",
    "ex_L": """(ex_L (seq L [x:p; y:q] F q |> F p)
                 (tenR_L (seq L [y:q; x:p] F q |> F p)
                   (Fr (seq L [y:q] F q) (ax_C (seq C [y:q] q)))
                   (Fr (seq L [x:p] F p) (ax_C (seq C [x:p] p)))))""",
    "tenL1": """(tenL1 (seq L [z:p * q] F(p * q))
                  (Fr (seq L [x:p; y:q] F(p * q))
                    (tenR (seq C [x:p, y:q] p * q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:q] q)))))""",
    "tenL2": """(tenL2 (seq L [z:a |> b] a |> b)
                  (tenR_L (seq L [x:a; y:b] a |> b) (ax_L (seq L [x:a] a)) (ax_L (seq L [y:b] b))))""",
    "tenR_L": "(tenR_L (seq L [x:a; y:b] a |> b) (ax_L (seq L [x:a] a)) (ax_L (seq L [y:b] b)))",
    "impL_mixed": """(impL_mixed (seq L [f:p -o q; x:p] F q)
                       (ax_C (seq C [x:p] p))
                       (Fr (seq L [y:q] F q) (ax_C (seq C [y:q] q))))""",
    "imprL": "(imprL (seq L [f:a ->> b; x:a] b) (ax_L (seq L [x:a] a)) (ax_L (seq L [y:b] b)))",
    "imprR": "(imprR (seq L [] a ->> a) (ax_L (seq L [x:a] a)))",
    "implL": "(implL (seq L [x:a; f:b <<- a] b) (ax_L (seq L [x:a] a)) (ax_L (seq L [y:b] b)))",
    "implR": "(implR (seq L [] a <<- a) (ax_L (seq L [x:a] a)))",
    "Fl": "(Fl (seq L [z:F p] F p) (Fr (seq L [x:p] F p) (ax_C (seq C [x:p] p))))",
    "Fr": "(Fr (seq L [x:p] F p) (ax_C (seq C [x:p] p)))",
    "Gl": "(Gl (seq L [x:G a] a) (ax_L (seq L [y:a] a)))",
    "cut1": "(cut1 (seq L [x:p] F p) (ax_C (seq C [x:p] p)) (Fr (seq L [y:p] F p) (ax_C (seq C [y:p] p))))",
    "cut2": "(cut2 (seq L [x:a] a) (ax_L (seq L [x:a] a)) (ax_L (seq L [y:a] a)))",
}

# zone, context, term, type
ND_INSTANCES: dict[str, tuple[str, str, str, str]] = {
    "id_C": ("C", "x:p", "x", "p"),
    "unitI_C": ("C", "", "triv", "I_c"),
    "unitE": ("C", "u:I_c, x:p", "let u : I_c be triv in x", "p"),
    "tenI": ("C", "x:p, y:q", "x * y", "p * q"),
    "tenE": ("C", "z:p * q", "let z : p * q be x * y in y * x", "q * p"),
    "impI": ("C", "", "lam x:p. x", "p -o p"),
    "impE": ("C", "f:p -o q, x:p", "f x", "q"),
    "GI": ("C", "x:G a", "G (derelict x)", "G a"),
    "beta_C": ("C", "x:p, y:q", "ex y, x with u, v in u * v", "q * p"),
    "cut": ("C", "x:p", "let x : p be y in y", "p"),
    "ex_C": ("C", "x:p, y:q", "y * x", "q * p"),
    "id_L": ("L", "x:a", "x", "a"),
    "unitI_L": ("L", "", "triv", "I_l"),
    "unitE1": ("L", "u:I_c ; x:a", "let u : I_c be triv in x", "a"),
    "unitE2": ("L", "u:I_l ; x:a", "let u : I_l be triv in x", "a"),
    "tenI_L": ("L", "x:a ; y:b", "x |> y", "a |> b"),
    "tenE1": ("L", "z:p * q", "let z : p * q be x * y in F (x * y)", "F(p * q)"),
    "tenE2": ("L", "z:a |> b", "let z : a |> b be x |> y in x |> y", "a |> b"),
    "imprI": ("L", "", "lam_r x:a. x", "a ->> a"),
    "imprE": ("L", "f:a ->> b ; x:a", "app_r f x", "b"),
    "implI": ("L", "", "lam_l x:a. x", "a <<- a"),
    "implE": ("L", "x:a ; f:b <<- a", "app_l f x", "b"),
    "FI": ("L", "x:p", "F x", "F p"),
    "FE": ("L", "z:F p", "let z : F p be F x in F x", "F p"),
    "GE": ("L", "x:G a", "derelict x", "a"),
    "beta_L": ("L", "x:p ; y:q", "ex y, x with u, v in F (u * v)", "F(q * p)"),
    "cut1": ("L", "x:p", "let x : p be y in F y", "F p"),
    "cut2": ("L", "x:a", "let x : a be y in y", "a"),
    "GE_let": ("L", "x:G a", "let x : G a be G y in y", "a"),
}


def sc_instance(rule: str) -> ProofTree:
    return parse_proof(SC_INSTANCES[rule])


def nd_instance(rule: str) -> NDDerivation:
    zone, ctx, term, typ = ND_INSTANCES[rule]
    return check_nd(parse_context(ctx, zone), parse_term(term), parse_formula(typ, zone))
