"""High degrees need more than binary64.

At N=6 the node error is of order dt^13 and drops under the binary64 rounding
floor on the standard grids.  The same code runs with mpmath numbers; here
with 40 significant digits.
"""
from aderdg import MPField, convergence_study

for label, kwargs in (("binary64", {}), ("40 digits", {"field": MPField(40)})):
    (rep,) = convergence_study("dahlquist", [6], **kwargs)
    o = rep.orders
    fmt = lambda x: "insufficient data" if x is None else f"{x:.2f}"
    print(f"{label:>9}: p_n_f {fmt(o['e_n_f'])}, p_l_L1 {fmt(o['e_l_L1'])}, "
          f"p_imp_L1 {fmt(o['e_imp_L1'])}  (theory 13, 7, 8)")
