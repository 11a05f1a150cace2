"""Charts, the geometry catalog and finite-difference tensor calculus."""
