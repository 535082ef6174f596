"""Class numbers and divisibility families of imaginary quadratic fields."""

from ._qfields import (
    BudgetExceeded,
    DomainError,
    Rejection,
    class_number,
    exceptional_table_lookup,
    factorize,
    field_class_number,
    has_primitive_divisor,
    is_prime,
    kronecker,
    lehmer_number,
    lehmer_table,
    lrn_solve,
    pi_tuple,
    primitive_divisors,
    quadruple,
    quintuple,
    reduce_form,
    reduced_forms,
    run_cli,
    squarefree_decompose,
    theorem31_verify,
    verify_tuple,
)

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "Rejection",
    "class_number",
    "exceptional_table_lookup",
    "factorize",
    "field_class_number",
    "has_primitive_divisor",
    "is_prime",
    "kronecker",
    "lehmer_number",
    "lehmer_table",
    "lrn_solve",
    "pi_tuple",
    "primitive_divisors",
    "quadruple",
    "quintuple",
    "reduce_form",
    "reduced_forms",
    "run_cli",
    "squarefree_decompose",
    "theorem31_verify",
    "verify_tuple",
]
