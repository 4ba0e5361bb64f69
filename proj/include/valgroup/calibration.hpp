#pragma once

namespace valgroup::calibration {

// Empirically calibrated orientation facts, frozen here and guarded by
// regression tests. Do not flip these without re-running the calibration
// tests in tests/test_derivation.cpp and tests/test_laws.cpp.

// exp maps the BCH product to the reversed composition product:
//   exp(bch(u, w)) = compose(exp(w), exp(u)).
// Equivalently, exp is an isomorphism onto the inverse group of the
// composition group.
inline constexpr bool exp_reverses_products = true;

// The growth axiom holds for the composition group with the inverse-group
// conjugation f^-1 g f (not the direct f g f^-1): for positive f, g with
// f dominating g, compose(inverse(f), compose(g, f)) > g.
inline constexpr bool compgroup_ga_on_inverse = true;

// On contracting derivations the growth axiom holds with the direct BCH
// conjugation u * w * (-u): the leading correction is [[u, w]], whose sign
// agrees with u and w for positive dominating u.
inline constexpr bool derivations_ga_on_inverse = false;

} // namespace valgroup::calibration
