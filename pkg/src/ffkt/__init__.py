"""Exact K-theory computations for the ring C*-algebra of F_q[T].

The package mechanizes, in exact arithmetic, the computation of the
Z/2-graded K-theory of the algebra generated by the additive and
multiplicative shifts of a polynomial ring over a finite field: finite
matrix models, the inductive limit over level embeddings, the crossed
product steps by multiplication operators, and the comparison with the
closed-form answer (reduced K_0 of the group algebra of the unit group,
tensored with an exterior algebra).

Modules, from the ground up:

  exactla    exact integer/rational/cyclotomic linear algebra
  ffield     finite fields F_q and their character groups
  funcfield  F_q[T], F_q(T), truncated Laurent series, factorization
  symcross   symbolic calculus in the crossed product over cylinder
             functions, used to verify all element-level identities
  finmodel   faithful finite matrix model and brute-force K_0 oracle
  abgrp      mixed abelian groups Z[1/q]^a + Z^b, colimits, (co)kernels
  pvengine   the graded K-group tower with a generator-symbol ledger
  kring      closed-form target and graded ring structure
  cli        batch command line interface
"""

__version__ = "0.1.0"
