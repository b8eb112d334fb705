"""Coarse subsets of groups: balleans, almost disjoint families and certificate-based refutation.

Submodules:

* ``ballean`` – finite balleans (metric, group, ⊕Z_2), expansion moduli, asymorphism checks;
* ``oracle`` – exhaustive bounded-bijection search used as ground truth;
* ``adfamily`` – almost disjoint family of subsets of ω from binary tree branches;
* ``fingen`` – interval unions in ℤ and the counting-argument refuter;
* ``locfin`` – coset-block families in ⊕_ω Z_2 and the four-condition refuter;
* ``classify`` / ``snf`` – group-level decision procedures and Smith normal form;
* ``taxonomy`` – thick/thin/large/small subsets on truncations;
* ``certificates`` – canonical JSON documents and re-validation;
* ``cli`` – command-line front end.
"""

__version__ = "0.1.0"
