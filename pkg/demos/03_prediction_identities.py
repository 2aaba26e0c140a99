"""The prediction formulas come in three equivalent shapes; this script shows
them agreeing exactly in rational arithmetic, then evaluates the heuristic
grid for the reference prime.

The headline quantity is the double divisor sum

    sum over m | n of  phi(m)/m^2 * ( sum over d | n/m of phi(d*m)/d )^2

which predicts the nontrivial count of h^h = a^a solutions.  It always equals
a product over the prime powers dividing n, and for squarefree n it collapses
to prod (q + 1 - 1/q).
"""

from fractions import Fraction

from dlcensus import (
    ConditionClass,
    Equation,
    factorize,
    ha_geneq_form,
    ha_squarefree_form,
    ha_sum_form,
    format_fraction,
    predict_matrix,
    prime_context,
)

print("n    sum form        prime-power product   squarefree product")
for n in (1, 2, 4, 6, 12, 30, 100056):
    f = factorize(n)
    sum_value = ha_sum_form(f)
    product_value = ha_geneq_form(f)
    square = ha_squarefree_form(f) if f.is_squarefree else None
    assert sum_value == product_value
    if square is not None:
        assert square == sum_value
    print(f"{n:<6} {str(sum_value):<18} {str(product_value):<20} "
          f"{square if square is not None else '(n not squarefree)'}")
print()

# Worked example at n = 6: three divisor terms versus (2+1-1/2)(3+1-1/3).
f6 = factorize(6)
print("n=6 expansion:", ha_sum_form(f6), "=",
      Fraction(25, 4), "+", Fraction(25, 36), "+", 2, "+", Fraction(2, 9))
print("squarefree product:", "(5/2)(11/3) =", ha_squarefree_form(f6))
print()

ctx = prime_context(100057)
print(f"prediction grid for the two-cycle census at p={ctx.p} "
      f"(phi(p-1) = {ctx.phi}):")
pm = predict_matrix(Equation.TC, ctx)
for row in ("ANY", "PR", "RP", "RPPR"):
    cells = []
    for col in ("ANY", "PR", "RP", "RPPR"):
        _, value = pm.cell(ConditionClass(row), ConditionClass(col))
        cells.append(format_fraction(value, 1))
    print(f"  {row:<5} {cells}")
