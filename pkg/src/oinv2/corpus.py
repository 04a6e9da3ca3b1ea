"""Test sentences over at most two unary predicates (P, Q) and one binary (R)."""

MAX_GADGET = "exists x. (P(x) & forall y. (y <= x))"

ORDERED = [
    MAX_GADGET,
    "forall x. forall y. (x <= y | y <= x)",
    "forall x. exists y. (x <= y & P(y))",
    "exists x. forall y. (x <= y)",
    "forall x. (P(x) -> exists y. (x <= y & Q(y)))",
    "exists x. exists y. (x <= y & !(x = y))",
    "forall x. forall y. (R(x,y) -> x <= y)",
    "forall x. forall y. (x <= y & y <= x -> x = y)",
    "exists x. (P(x) & forall y. (x <= y))",
    "(exists x. (P(x) & forall y. (x <= y))) | exists x. (P(x) & forall y. (y <= x))",
    "(exists x. (P(x) & forall y. (x <= y))) <-> exists x. (P(x) & forall y. (y <= x))",
    "forall x. (P(x) -> forall y. (P(y) -> x <= y | y <= x))",
    "exists x. exists y. (P(x) & Q(y) & x <= y)",
    "exists x. exists y. (P(x) & P(y) & x <= y)",
    "exists x. forall y. (R(x,y) | y <= x)",
    "forall x. forall y. (x <= y -> P(x) -> P(y))",
    "forall x. (exists y. (x <= y & !(x = y)) | P(x))",
    "exists x. forall y. (x <= y & (P(x) <-> P(y)))",
    "forall x. forall y. (P(x) & !P(y) -> x <= y)",
    "exists x. exists y. (!(x = y) & x <= y & R(x,y))",
    "(forall x. exists y. (y <= x & Q(y))) -> exists x. Q(x)",
    "forall x. (P(x) -> exists y. (y <= x & !(x = y) & R(y,x)))",
]

ORDER_FREE = [
    "forall x. (P(x) <-> Q(x))",
    "forall x. exists y. R(x,y)",
    "exists x. (P(x) & Q(x))",
    "forall x. (P(x) | !P(x))",
    "forall x. P(x)",
    "(exists x. P(x)) -> (exists y. P(y))",
    "(exists x. forall y. x = y) | exists x. P(x)",
    "(forall x. forall y. (R(x,y) -> R(y,x))) | exists x. exists y. (R(x,y) & !R(y,x))",
    "(exists x. R(x,x)) | forall x. !R(x,x)",
    "forall x. exists y. (R(x,y) & !(x = y))",
    "forall x. forall y. (R(x,y) -> P(x) | Q(y))",
    "exists x. forall y. (x = y | R(x,y))",
]

CORPUS = ORDERED + ORDER_FREE
